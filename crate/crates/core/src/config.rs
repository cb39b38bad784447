//! Family definition files.
//!
//! A TOML document holding any number of `[[family]]` tables:
//!
//! ```toml
//! [[family]]
//! name = "rank2"
//! a1 = ["1"]
//! a2 = ["0", "1"]
//! a3 = ["-19"]
//! a4 = ["-1", "-1"]
//! a6 = []
//! expected_rank = 2
//! ```
//!
//! Coefficients are decimal strings in ascending powers of `t`, so values
//! wider than 64 bits survive unchanged. A missing `a_i` is the zero
//! polynomial.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use serde::Deserialize;
use toml::Spanned;

use crate::error::{Error, Result};
use crate::family::CurveFamily;
use crate::poly::IntPolynomial;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    #[serde(default)]
    family: Vec<RawFamily>,
}

type Coefficients = Spanned<Vec<Spanned<String>>>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFamily {
    name: Spanned<String>,
    a1: Option<Coefficients>,
    a2: Option<Coefficients>,
    a3: Option<Coefficients>,
    a4: Option<Coefficients>,
    a6: Option<Coefficients>,
    expected_rank: Option<u32>,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

pub fn parse_family_file(path: &Path) -> Result<Vec<CurveFamily>> {
    let text = std::fs::read_to_string(path)?;
    parse_families(&text, path)
}

/// Parses family definitions; `origin` only labels error messages.
pub fn parse_families(text: &str, origin: &Path) -> Result<Vec<CurveFamily>> {
    let parse_error = |offset: usize, message: String| Error::Parse {
        path: origin.to_path_buf(),
        line: line_of(text, offset),
        message,
    };
    let doc: Document = toml::from_str(text).map_err(|e| {
        let offset = e.span().map(|s| s.start).unwrap_or(0);
        parse_error(offset, e.message().to_string())
    })?;

    let mut seen = HashSet::new();
    let mut families = Vec::with_capacity(doc.family.len());
    for raw in doc.family {
        let name = raw.name.get_ref().clone();
        if !seen.insert(name.clone()) {
            return Err(Error::DuplicateFamily(name));
        }
        let mut polys: [IntPolynomial; 5] = Default::default();
        let fields = [("a1", &raw.a1), ("a2", &raw.a2), ("a3", &raw.a3), ("a4", &raw.a4), ("a6", &raw.a6)];
        for (slot, (field, coeffs)) in polys.iter_mut().zip(fields) {
            let Some(coeffs) = coeffs else { continue };
            let mut values = Vec::with_capacity(coeffs.get_ref().len());
            for c in coeffs.get_ref() {
                let value = c.get_ref().trim().parse::<BigInt>().map_err(|_| {
                    parse_error(
                        c.span().start,
                        format!("family `{name}`, field {field}: `{}` is not a decimal integer", c.get_ref()),
                    )
                })?;
                values.push(value);
            }
            *slot = IntPolynomial::new(values);
        }
        let family = CurveFamily::new(name, polys, raw.expected_rank)
            .map_err(|e| parse_error(raw.name.span().start, e.to_string()))?;
        families.push(family);
    }
    Ok(families)
}

/// Renders families in the format read by [`parse_families`].
pub fn families_to_toml(families: &[CurveFamily]) -> String {
    let mut out = String::new();
    for (i, fam) in families.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str("[[family]]\n");
        let _ = writeln!(out, "name = {:?}", fam.name());
        for (field, poly) in ["a1", "a2", "a3", "a4", "a6"].iter().zip(fam.coefficients()) {
            let coeffs: Vec<String> = poly.coeffs().iter().map(|c| format!("\"{c}\"")).collect();
            let _ = writeln!(out, "{field} = [{}]", coeffs.join(", "));
        }
        if let Some(rank) = fam.expected_rank() {
            let _ = writeln!(out, "expected_rank = {rank}");
        }
    }
    out
}
