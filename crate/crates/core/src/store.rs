//! Moment records as CSV.
//!
//! Header `family,prime_index,p,S1,...,S{r_max}`, one row per record, every
//! value an exact decimal integer.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::trace::{MomentRecord, MAX_MOMENT};

fn csv_error(path: &Path, message: impl Into<String>) -> Error {
    Error::Csv {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

pub fn header(r_max: usize) -> Vec<String> {
    let mut cols = vec!["family".to_string(), "prime_index".into(), "p".into()];
    cols.extend((1..=r_max).map(|r| format!("S{r}")));
    cols
}

/// Serializes records with a header sized for `r_max`.
pub fn write_records<W: Write>(out: W, records: &[MomentRecord], r_max: usize) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.into());
    writer.write_record(header(r_max)).map_err(io)?;
    for rec in records {
        if rec.r_max() != r_max {
            return Err(Error::InvalidArgument(format!(
                "record for {} at p = {} has {} sums, expected {r_max}",
                rec.family,
                rec.p,
                rec.r_max()
            )));
        }
        let mut row = vec![rec.family.clone(), rec.prime_index.to_string(), rec.p.to_string()];
        row.extend(rec.sums().iter().map(i128::to_string));
        writer.write_record(&row).map_err(io)?;
    }
    writer.flush()?;
    Ok(())
}

/// Writes to a sibling temporary file, then renames over `path`.
pub fn write_atomic(path: &Path, records: &[MomentRecord], r_max: usize) -> Result<()> {
    let tmp = tmp_path(path);
    {
        let file = File::create(&tmp)?;
        let mut buf = BufWriter::new(file);
        write_records(&mut buf, records, r_max)?;
        buf.into_inner().map_err(|e| e.into_error())?.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

fn tmp_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".tmp");
    path.with_file_name(name)
}

/// Parses a complete CSV. Any malformed row is an error.
pub fn read_records(path: &Path) -> Result<Vec<MomentRecord>> {
    let text = fs::read_to_string(path)?;
    parse_records(&text, path)
}

/// Like [`read_records`], but tolerates an interrupted write: a final line
/// without its newline is dropped. A missing file reads as empty.
pub fn read_records_for_resume(path: &Path) -> Result<Vec<MomentRecord>> {
    let text = match fs::read_to_string(path) {
        Ok(text) => text,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(e.into()),
    };
    let complete = match text.rfind('\n') {
        Some(i) => &text[..=i],
        None => "",
    };
    parse_records(complete, path)
}

/// Parses CSV text; `origin` only labels errors.
pub fn parse_records(text: &str, origin: &Path) -> Result<Vec<MomentRecord>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| csv_error(origin, e.to_string()))?
        .clone();
    let r_max = headers.len().saturating_sub(3);
    let expected = header(r_max);
    if r_max == 0 || r_max > MAX_MOMENT || headers.iter().ne(expected.iter().map(String::as_str)) {
        return Err(csv_error(
            origin,
            format!(
                "header must be `family,prime_index,p,S1[,S2...]` with at most S{MAX_MOMENT}, found `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }

    let mut records = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| csv_error(origin, e.to_string()))?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let field = |i: usize| row.get(i).unwrap_or("");
        let bad = |col: &str, value: &str| {
            csv_error(origin, format!("line {line}: column {col}: `{value}` is not an integer"))
        };
        let prime_index = field(1).parse().map_err(|_| bad("prime_index", field(1)))?;
        let p = field(2).parse().map_err(|_| bad("p", field(2)))?;
        let mut sums = Vec::with_capacity(r_max);
        for r in 1..=r_max {
            let v = field(r + 2);
            sums.push(v.parse::<i128>().map_err(|_| bad(&format!("S{r}"), v))?);
        }
        records.push(MomentRecord::new(field(0), prime_index, p, sums));
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<MomentRecord> {
        vec![
            MomentRecord::new("a", 3, 5, vec![0, 20, 0]),
            MomentRecord::new("a", 4, 7, vec![-14, 42, i128::MAX]),
            MomentRecord::new("b,quoted", 3, 5, vec![1, 2, -45_000_000_000_000_000_000]),
        ]
    }

    #[test]
    fn header_layout() {
        assert_eq!(header(7).join(","), "family,prime_index,p,S1,S2,S3,S4,S5,S6,S7");
    }

    #[test]
    fn round_trip() {
        let mut buf = Vec::new();
        write_records(&mut buf, &sample(), 3).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("family,prime_index,p,S1,S2,S3\na,3,5,0,20,0\n"));
        assert!(text.ends_with('\n'));
        assert_eq!(parse_records(&text, Path::new("x.csv")).unwrap(), sample());
    }

    #[test]
    fn mismatched_width_rejected() {
        let mut buf = Vec::new();
        assert!(write_records(&mut buf, &sample(), 2).is_err());
    }

    #[test]
    fn missing_column_rejected() {
        let text = "family,prime_index,S1\na,3,0\n";
        assert!(matches!(parse_records(text, Path::new("x.csv")), Err(Error::Csv { .. })));
        let text = "family,prime_index,p,S1\na,3,5\n";
        assert!(parse_records(text, Path::new("x.csv")).is_err());
        let text = "family,prime_index,p,S1\na,3,5,1.5\n";
        assert!(parse_records(text, Path::new("x.csv")).is_err());
    }

    #[test]
    fn resume_drops_partial_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        write_atomic(&path, &sample(), 3).unwrap();
        let full = fs::read_to_string(&path).unwrap();
        fs::write(&path, &full[..full.len() - 30]).unwrap();
        assert!(read_records(&path).is_err());
        assert_eq!(read_records_for_resume(&path).unwrap(), sample()[..2]);
        assert!(read_records_for_resume(&dir.path().join("absent.csv")).unwrap().is_empty());
    }

    #[test]
    fn atomic_write_leaves_no_temp_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        write_atomic(&path, &sample(), 3).unwrap();
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
        assert_eq!(read_records(&path).unwrap(), sample());
    }
}
