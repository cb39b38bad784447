//! Batch orchestration: computing moment CSVs and rendering reports.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::bias::{
    block_stats, catalan_check, histogram, nagao_rank_estimate, odd_coefficient_series,
    residual_series, HalfExponent,
};
use crate::config::parse_family_file;
use crate::corpus;
use crate::discovery::modulus;
use crate::error::{Error, Result};
use crate::family::CurveFamily;
use crate::modular::PrimeList;
use crate::store;
use crate::trace::{moment_sums, MomentRecord, DEFAULT_MOMENT, MAX_MOMENT};

pub const MOMENTS_FILE: &str = "moments.csv";
pub const REPORT_FILE: &str = "report.txt";
/// Block size reported alongside the configured one.
pub const FINE_BLOCK: usize = 10;
pub const HISTOGRAM_BINS: usize = 10;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    /// `None` selects the built-in corpus.
    pub families: Option<PathBuf>,
    /// First prime index, 1-based (`p_3 = 5`).
    pub start: usize,
    /// Last prime index, inclusive.
    pub end: usize,
    pub r_max: usize,
    pub block_size: usize,
    pub modulus: (u32, u32, u32),
    /// Normalization of the second moment for families without a closed form.
    pub exponent: HalfExponent,
    pub out_dir: PathBuf,
    /// `None` lets rayon pick.
    pub threads: Option<usize>,
    pub resume: bool,
    /// Records computed between checkpoint writes.
    pub checkpoint_every: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            families: None,
            start: 3,
            end: 102,
            r_max: DEFAULT_MOMENT,
            block_size: 50,
            modulus: (2, 0, 0),
            exponent: HalfExponent::from_halves(3),
            out_dir: PathBuf::from("out"),
            threads: None,
            resume: false,
            checkpoint_every: 256,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.start < 3 {
            return fail(format!("start index must be at least 3, got {}", self.start));
        }
        if self.end < self.start {
            return fail(format!("end index {} is before start index {}", self.end, self.start));
        }
        if !(1..=MAX_MOMENT).contains(&self.r_max) {
            return fail(format!("rmax must be in 1..={MAX_MOMENT}, got {}", self.r_max));
        }
        if self.block_size == 0 {
            return fail("block size must be positive".into());
        }
        let (e, f, g) = self.modulus;
        modulus(e, f, g).map_err(|e| Error::Config(e.to_string()))?;
        if !matches!(self.exponent.halves(), 2 | 3) {
            return fail(format!("exponent must be 1 or 3/2, got {}", self.exponent));
        }
        if self.threads == Some(0) {
            return fail("thread count must be positive".into());
        }
        if self.checkpoint_every == 0 {
            return fail("checkpoint interval must be positive".into());
        }
        Ok(())
    }

    pub fn load_families(&self) -> Result<Vec<CurveFamily>> {
        match &self.families {
            Some(path) => parse_family_file(path),
            None => Ok(corpus::corpus()),
        }
    }

    pub fn moments_path(&self) -> PathBuf {
        self.out_dir.join(MOMENTS_FILE)
    }

    pub fn thread_pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads.unwrap_or(0))
            .build()
            .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
    }
}

fn sort_records(records: &mut [MomentRecord], families: &[CurveFamily]) {
    let order: HashMap<&str, usize> = families.iter().enumerate().map(|(i, f)| (f.name(), i)).collect();
    records.sort_by_key(|r| (order.get(r.family.as_str()).copied().unwrap_or(usize::MAX), r.prime_index));
}

/// Computes `S_1..=S_{r_max}` for every family and prime index in range and
/// writes them to `out_dir/moments.csv`.
///
/// The file is rewritten atomically after each batch, so an interrupted run
/// can be resumed. Rows are ordered by family, then prime index, whatever
/// the worker count.
pub fn run_moments(config: &RunConfig, families: &[CurveFamily]) -> Result<PathBuf> {
    run_moments_with_progress(config, families, |_, _| {})
}

/// [`run_moments`], calling `progress(done, total)` after each batch.
pub fn run_moments_with_progress(
    config: &RunConfig,
    families: &[CurveFamily],
    mut progress: impl FnMut(usize, usize),
) -> Result<PathBuf> {
    config.validate()?;
    fs::create_dir_all(&config.out_dir)?;
    let path = config.moments_path();
    let primes = PrimeList::first(config.end);

    let mut records: Vec<MomentRecord> = if config.resume {
        store::read_records_for_resume(&path)?
    } else {
        Vec::new()
    };
    if let Some(rec) = records.iter().find(|r| r.r_max() != config.r_max) {
        return Err(Error::Config(format!(
            "{} holds S1..S{}, but rmax is {}",
            path.display(),
            rec.r_max(),
            config.r_max
        )));
    }
    let done: HashSet<(String, usize)> = records.iter().map(|r| (r.family.clone(), r.prime_index)).collect();

    let jobs: Vec<(&CurveFamily, usize, u64)> = families
        .iter()
        .flat_map(|fam| primes.range(config.start, config.end).map(move |(i, p)| (fam, i, p)))
        .filter(|(fam, i, _)| !done.contains(&(fam.name().to_string(), *i)))
        .collect();

    let pool = config.thread_pool()?;
    let total = jobs.len();
    progress(0, total);
    let mut finished = 0;
    for batch in jobs.chunks(config.checkpoint_every) {
        let computed: Result<Vec<MomentRecord>> = pool.install(|| {
            batch
                .par_iter()
                .map(|&(fam, i, p)| moment_sums(fam, i, p, config.r_max))
                .collect()
        });
        records.extend(computed?);
        sort_records(&mut records, families);
        store::write_atomic(&path, &records, config.r_max)?;
        finished += batch.len();
        progress(finished, total);
    }
    if total == 0 {
        sort_records(&mut records, families);
        store::write_atomic(&path, &records, config.r_max)?;
    }
    Ok(path)
}

/// Rendered report and the histogram files written beside it.
#[derive(Clone, Debug)]
pub struct Report {
    pub text: String,
    pub histograms: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

/// Groups records by family name, keeping the order of first appearance.
pub fn group_by_family(records: &[MomentRecord]) -> Vec<(String, Vec<MomentRecord>)> {
    let mut order = Vec::new();
    let mut groups: HashMap<&str, Vec<MomentRecord>> = HashMap::new();
    for rec in records {
        let entry = groups.entry(rec.family.as_str()).or_default();
        if entry.is_empty() {
            order.push(rec.family.clone());
        }
        entry.push(rec.clone());
    }
    order
        .into_iter()
        .map(|name| {
            let mut recs = groups.remove(name.as_str()).unwrap_or_default();
            recs.sort_by_key(|r| r.prime_index);
            (name, recs)
        })
        .collect()
}

fn prime_gaps(records: &[MomentRecord]) -> Vec<(usize, usize)> {
    records
        .windows(2)
        .filter(|w| w[1].prime_index > w[0].prime_index + 1)
        .map(|w| (w[0].prime_index + 1, w[1].prime_index - 1))
        .collect()
}

fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

/// Reads a moments CSV and writes `report.txt` plus one SVG histogram of
/// block means per family, even moment and block size into `out_dir`.
///
/// `families` supplies templates and expected ranks; records of families
/// not listed are reported without either.
pub fn run_report(csv_path: &Path, config: &RunConfig, families: &[CurveFamily]) -> Result<Report> {
    config.validate()?;
    let records = store::read_records(csv_path)?;
    if records.is_empty() {
        return Err(Error::Csv {
            path: csv_path.to_path_buf(),
            message: "no moment records".into(),
        });
    }
    fs::create_dir_all(&config.out_dir)?;
    let by_name: BTreeMap<&str, &CurveFamily> = families.iter().map(|f| (f.name(), f)).collect();

    let mut text = String::new();
    let mut histograms = Vec::new();
    let mut warnings = Vec::new();
    let mut block_sizes = vec![config.block_size];
    if config.block_size != FINE_BLOCK {
        block_sizes.push(FINE_BLOCK);
    }

    for (name, recs) in group_by_family(&records) {
        let family = by_name.get(name.as_str()).copied();
        let template = family.and_then(CurveFamily::template);
        let r_max = recs[0].r_max();
        let (first, last) = (&recs[0], &recs[recs.len() - 1]);

        let _ = writeln!(text, "== {name} ==");
        if let Some(t) = template {
            let _ = writeln!(text, "template: {t}");
        }
        let _ = writeln!(
            text,
            "primes: {} (index {}..{}, p {}..{})",
            recs.len(),
            first.prime_index,
            last.prime_index,
            first.p,
            last.p
        );
        for (lo, hi) in prime_gaps(&recs) {
            let w = format!("{name}: prime indices {lo}..{hi} are missing");
            let _ = writeln!(text, "warning: {w}");
            warnings.push(w);
        }

        for r in [2usize, 4, 6].into_iter().filter(|&r| r <= r_max) {
            let exponent = match r {
                2 if template.is_some() => HalfExponent::whole(1),
                2 => config.exponent,
                _ => HalfExponent::from_halves(r as u32 + 1),
            };
            let series = residual_series(&recs, r, exponent)?;
            let _ = writeln!(
                text,
                "S{r}: residual / p^{exponent}: grand mean {:.6}",
                series.mean()
            );
            for &block in &block_sizes {
                let report = block_stats(&series, block)?;
                let _ = writeln!(
                    text,
                    "  blocks of {block}: {} blocks, {} positive, {} negative, {} zero, two-sided p-value {:.4}",
                    report.blocks.len(),
                    report.n_positive,
                    report.n_negative,
                    report.n_zero(),
                    report.binomial_p_value
                );
                let h = histogram(&report, HISTOGRAM_BINS)?;
                let title = format!("{name}: S{r} block means, {block} primes per block");
                let svg_path = config.out_dir.join(format!("{}-m{r}-b{block}.svg", file_stem(&name)));
                fs::write(&svg_path, crate::svg::emit_histogram_svg(&h, &title))?;
                histograms.push(svg_path);
            }
        }

        for r in (1..=r_max).step_by(2) {
            let series = odd_coefficient_series(&recs, r)?;
            let _ = writeln!(
                text,
                "S{r} / p^{}: mean {:.6}",
                series.exponent,
                series.mean()
            );
        }
        if let Some(rank) = family.and_then(CurveFamily::expected_rank) {
            for k in (1..=3u32).filter(|&k| 2 * (k as usize) < r_max) {
                let c = catalan_check(&recs, k, rank)?;
                let ratio = c.ratio.map_or_else(|| "n/a".to_string(), |x| format!("{x:.4}"));
                let _ = writeln!(
                    text,
                    "catalan k={k} (rank {rank}): observed {:.6}, predicted {:.1}, ratio {ratio}",
                    c.observed_mean, c.predicted
                );
            }
        }
        let nagao = nagao_rank_estimate(&recs, last.p)?;
        let _ = writeln!(
            text,
            "rank estimate at x = {}: {nagao:.4} (same sum without the sign flip: {:.4})",
            last.p,
            0.0 - nagao
        );
        if let Some(rank) = family.and_then(CurveFamily::expected_rank) {
            let _ = writeln!(text, "expected rank: {rank}");
        }
        text.push('\n');
    }

    fs::write(config.out_dir.join(REPORT_FILE), &text)?;
    Ok(Report {
        text,
        histograms,
        warnings,
    })
}
