//! Search for per-congruence-class formulas `S_2(p) = p^2 + a p + b`.
//!
//! Primes are split by their residue modulo `2^e 3^f 5^g`. In each class a
//! line is fitted through two primes with exact rational arithmetic and
//! checked against every remaining prime of the class.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::trace::MomentRecord;

/// Classes with fewer primes than this are not fitted.
pub const MIN_CLASS_PRIMES: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FitMode {
    /// Skip the first prime of each class, fit through the next two and
    /// check the rest.
    Reference,
    /// Drop every prime with index below `min_prime_index`, fit through the
    /// first two survivors and check all the others.
    Robust { min_prime_index: usize },
}

impl Default for FitMode {
    fn default() -> Self {
        FitMode::Robust { min_prime_index: 11 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FitStatus {
    Verified,
    Falsified,
    InsufficientPrimes,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaFit {
    pub modulus: u64,
    pub residue_class: u64,
    pub a: Ratio<i128>,
    pub b: Ratio<i128>,
    pub n_primes_checked: usize,
    pub status: FitStatus,
}

impl FormulaFit {
    pub fn verified(&self) -> bool {
        self.status == FitStatus::Verified
    }
}

impl fmt::Display for FormulaFit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p = {} mod {}: ", self.residue_class, self.modulus)?;
        match self.status {
            FitStatus::Verified => write!(
                f,
                "S2 = p^2 + ({}) p + ({})  [{} primes checked]",
                self.a, self.b, self.n_primes_checked
            ),
            FitStatus::Falsified => write!(f, "no formula"),
            FitStatus::InsufficientPrimes => write!(f, "not enough primes"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    AllClassesVerified,
    SomeFalsified,
    Inconclusive,
}

pub fn modulus(e: u32, f: u32, g: u32) -> Result<u64> {
    if e > 4 || f > 3 || g > 1 {
        return Err(Error::InvalidArgument(format!(
            "modulus exponents ({e}, {f}, {g}) exceed (4, 3, 1)"
        )));
    }
    Ok(2u64.pow(e) * 3u64.pow(f) * 5u64.pow(g))
}

pub fn discover(records: &[MomentRecord], e: u32, f: u32, g: u32, mode: FitMode) -> Result<Vec<FormulaFit>> {
    let modulus = modulus(e, f, g)?;
    let mut sorted: Vec<&MomentRecord> = records.iter().collect();
    sorted.sort_by_key(|r| r.p);
    sorted.dedup_by_key(|r| r.p);

    let mut classes: BTreeMap<u64, Vec<(i128, i128)>> = BTreeMap::new();
    for rec in sorted {
        let s2 = rec.sum(2).ok_or_else(|| {
            Error::InvalidArgument(format!("record for p = {} lacks S2", rec.p))
        })?;
        if let FitMode::Robust { min_prime_index } = mode {
            if rec.prime_index < min_prime_index {
                continue;
            }
        }
        let p = rec.p as i128;
        classes
            .entry(rec.p % modulus)
            .or_default()
            .push((p, s2 - p * p));
    }

    Ok(classes
        .into_iter()
        .map(|(residue_class, points)| fit_class(modulus, residue_class, &points, mode))
        .collect())
}

fn fit_class(modulus: u64, residue_class: u64, points: &[(i128, i128)], mode: FitMode) -> FormulaFit {
    let zero = Ratio::from_integer(0);
    if points.len() < MIN_CLASS_PRIMES {
        return FormulaFit {
            modulus,
            residue_class,
            a: zero,
            b: zero,
            n_primes_checked: 0,
            status: FitStatus::InsufficientPrimes,
        };
    }
    let (fit_at, rest) = match mode {
        FitMode::Reference => (1, &points[3..]),
        FitMode::Robust { .. } => (0, &points[2..]),
    };
    let (p1, y1) = points[fit_at];
    let (p2, y2) = points[fit_at + 1];
    let a = Ratio::new(y2 - y1, p2 - p1);
    let b = Ratio::from_integer(y1) - a * p1;
    let mut checked = 0;
    let mut status = FitStatus::Verified;
    for &(p, y) in rest {
        checked += 1;
        if Ratio::from_integer(y) != a * p + b {
            status = FitStatus::Falsified;
            break;
        }
    }
    FormulaFit {
        modulus,
        residue_class,
        a,
        b,
        n_primes_checked: checked,
        status,
    }
}

pub fn summarize(fits: &[FormulaFit]) -> Verdict {
    if fits.iter().any(|f| f.status == FitStatus::Falsified) {
        Verdict::SomeFalsified
    } else if fits.iter().any(FormulaFit::verified) {
        Verdict::AllClassesVerified
    } else {
        Verdict::Inconclusive
    }
}
