//! Proven first and second moments for the three template shapes.

use crate::error::{Error, Result};
use crate::family::{CurveFamily, Template};
use crate::modular::{check_odd_prime, legendre_symbol, LegendreTable};
use crate::trace::MomentRecord;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormPrediction {
    pub p: u64,
    pub s1: i128,
    pub s2: i128,
    /// Predictions carry no contract when this is false.
    pub valid: bool,
    pub validity_reason: String,
}

fn chi(a: i128, p: u64) -> i128 {
    legendre_symbol(a, p).expect("p checked by caller") as i128
}

/// `y^2 = 4x^3 + ax^2 + bx + c + dt`. The constant `c` does not enter.
pub fn linear_template_predict(a: i64, b: i64, d: i64, p: u64) -> Result<ClosedFormPrediction> {
    if d == 0 {
        return Err(Error::InvalidArgument("d = 0 is not a one-parameter family".into()));
    }
    check_odd_prime(p)?;
    let threshold = 3u64.max(4 * d.unsigned_abs());
    let pp = p as i128;
    let disc = a as i128 * a as i128 - 12 * b as i128;
    let chi48 = chi(-48, p);
    // The discriminant-zero branch applies whenever p | a^2 - 12b.
    let s2 = if disc % pp != 0 {
        pp * pp - pp - pp * chi48 - pp * chi(disc, p)
    } else {
        pp * pp - pp + pp * (pp - 1) * chi48
    };
    Ok(ClosedFormPrediction {
        p,
        s1: 0,
        s2,
        valid: p > threshold,
        validity_reason: format!("requires p > max(3, 4|d|) = {threshold}"),
    })
}

/// `y^2 = 4x^3 + (4m+1)x^2 + ntx`
pub fn twisted_template_predict(m: i64, n: i64, p: u64) -> Result<ClosedFormPrediction> {
    if n == 0 {
        return Err(Error::InvalidArgument("n = 0 is not a one-parameter family".into()));
    }
    check_odd_prime(p)?;
    let threshold = 3u64.max(4 * m.unsigned_abs()).max(4 * n.unsigned_abs());
    let pp = p as i128;
    let s2 = if p % 4 == 1 { pp * pp - 3 * pp } else { pp * pp - pp };
    Ok(ClosedFormPrediction {
        p,
        s1: 0,
        s2,
        valid: p > threshold,
        validity_reason: format!("requires p > max(3, 4|m|, 4|n|) = {threshold}"),
    })
}

/// `y^2 = x^3 - t^2 x + t^4`
pub fn quartic_template_predict(p: u64) -> Result<ClosedFormPrediction> {
    if p <= 3 {
        return Err(Error::InvalidArgument(format!("quartic template needs p > 3, got {p}")));
    }
    check_odd_prime(p)?;
    let pp = p as i128;
    let cubic = cubic_char_sum(p)? as i128;
    let s2 = pp * pp - pp - pp * chi(-3, p) - pp * chi(12, p) - cubic * cubic;
    Ok(ClosedFormPrediction {
        p,
        s1: -2 * pp,
        s2,
        valid: true,
        validity_reason: "requires p > 3".into(),
    })
}

/// `sum_{x mod p} (x^3 - x / p)`, which vanishes for `p = 3 mod 4`.
pub fn cubic_char_sum(p: u64) -> Result<i64> {
    if p <= 3 {
        return Err(Error::InvalidArgument(format!("cubic character sum needs p > 3, got {p}")));
    }
    let table = LegendreTable::new(p)?;
    Ok((0..p)
        .map(|x| table.get((x * x % p * x + p - x) % p) as i64)
        .sum())
}

pub fn predict(template: Template, p: u64) -> Result<ClosedFormPrediction> {
    match template {
        Template::Linear { a, b, d, .. } => linear_template_predict(a, b, d, p),
        Template::TwistedLinear { m, n } => twisted_template_predict(m, n, p),
        Template::Quartic => quartic_template_predict(p),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeCheck {
    pub prime_index: usize,
    pub p: u64,
    pub s1: i128,
    pub s2: i128,
    pub prediction: ClosedFormPrediction,
}

impl PrimeCheck {
    /// Invalid primes pass vacuously.
    pub fn passed(&self) -> bool {
        !self.prediction.valid || (self.s1 == self.prediction.s1 && self.s2 == self.prediction.s2)
    }
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub family: String,
    pub template: Template,
    pub checks: Vec<PrimeCheck>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(PrimeCheck::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PrimeCheck> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn checked(&self) -> usize {
        self.checks.iter().filter(|c| c.prediction.valid).count()
    }
}

/// Compares computed `S_1, S_2` with the template prediction at each prime.
pub fn verify_family(family: &CurveFamily, records: &[MomentRecord]) -> Result<VerificationReport> {
    let template = family
        .template()
        .ok_or_else(|| Error::NoTemplate(family.name().to_string()))?;
    let mut checks = Vec::with_capacity(records.len());
    for rec in records {
        let (Some(s1), Some(s2)) = (rec.sum(1), rec.sum(2)) else {
            return Err(Error::InvalidArgument(format!(
                "record for p = {} lacks S1 or S2",
                rec.p
            )));
        };
        let prediction = match template {
            Template::Quartic if rec.p <= 3 => continue,
            _ => predict(template, rec.p)?,
        };
        checks.push(PrimeCheck {
            prime_index: rec.prime_index,
            p: rec.p,
            s1,
            s2,
            prediction,
        });
    }
    Ok(VerificationReport {
        family: family.name().to_string(),
        template,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::trace::moment_sums;

    #[test]
    fn linear_examples() {
        // chi_29(-3) by Euler's criterion: 26^14 mod 29
        let chi_m3 = if crate::modular::pow_mod(26, 14, 29) == 1 { 1 } else { -1 };
        let pred = linear_template_predict(1, -4, 4, 29).unwrap();
        assert_eq!(pred.s2, 29 * 29 - 2 * 29 - 29 * chi_m3);
        assert!(pred.valid);
        assert_eq!(pred.s1, 0);

        // a^2 - 12b = 0
        let pred = linear_template_predict(6, 3, 1, 7).unwrap();
        assert_eq!(pred.s2, 84);
        assert!(linear_template_predict(1, 1, 0, 7).is_err());
    }

    #[test]
    fn twisted_examples() {
        assert_eq!(twisted_template_predict(0, 4, 17).unwrap().s2, 238);
        assert_eq!(twisted_template_predict(0, 4, 19).unwrap().s2, 342);
        assert!(!twisted_template_predict(0, 4, 13).unwrap().valid);
        assert!(twisted_template_predict(0, 0, 17).is_err());
    }

    #[test]
    fn twisted_depends_only_on_p_mod_4() {
        for p in [29u64, 31, 37, 43, 101] {
            let base = twisted_template_predict(0, 4, p).unwrap().s2;
            for (m, n) in [(1, 1), (-2, 4), (5, -3)] {
                assert_eq!(twisted_template_predict(m, n, p).unwrap().s2, base);
            }
        }
    }

    #[test]
    fn quartic_examples() {
        let pred = quartic_template_predict(7).unwrap();
        assert_eq!((pred.s1, pred.s2), (-14, 42));
        assert_eq!(cubic_char_sum(7).unwrap(), 0);
        assert_eq!(cubic_char_sum(11).unwrap(), 0);
        // x = 0..4: x^3 - x = 0, 0, 6, 24, 60 = 0, 0, 1, 4, 0 mod 5
        assert_eq!(cubic_char_sum(5).unwrap(), 2);
        let c13: i64 = (0..13i128)
            .map(|x| legendre_symbol(x * x * x - x, 13).unwrap() as i64)
            .sum();
        assert_eq!(cubic_char_sum(13).unwrap(), c13);
        assert!(quartic_template_predict(3).is_err());
        assert!(cubic_char_sum(3).is_err());
    }

    #[test]
    fn chi_minus_48_equals_chi_minus_3() {
        for &p in crate::modular::PrimeList::up_to(2000).as_slice().iter().skip(2) {
            assert_eq!(chi(-48, p), chi(-3, p));
        }
    }

    #[test]
    fn verify_rejects_non_template() {
        let generic = &corpus::generic_families()[0];
        assert!(matches!(verify_family(generic, &[]), Err(Error::NoTemplate(_))));
    }

    #[test]
    fn verify_small_run() {
        let primes = crate::modular::PrimeList::first(46);
        for fam in corpus::corpus().iter().filter(|f| f.template().is_some()) {
            let records: Vec<_> = primes
                .range(3, 46)
                .map(|(i, p)| moment_sums(fam, i, p, 2).unwrap())
                .collect();
            let report = verify_family(fam, &records).unwrap();
            assert!(report.all_passed(), "{}: {:?}", fam.name(), report.failures().next());
            assert!(report.checked() > 30);
        }
    }
}
