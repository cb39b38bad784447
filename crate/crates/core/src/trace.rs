//! Frobenius traces `a_t(p)` over every fiber of a family and their exact
//! power sums.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::family::{CurveFamily, Fiber};
use crate::modular::LegendreTable;

pub const MAX_MOMENT: usize = 8;
pub const DEFAULT_MOMENT: usize = 7;

/// Exact power sums `S_r = sum_{t mod p} a_t(p)^r` for `r = 1..=r_max`.
///
/// These are stored without the `1/p` averaging factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentRecord {
    pub family: String,
    pub prime_index: usize,
    pub p: u64,
    sums: Vec<i128>,
}

impl MomentRecord {
    pub fn new(family: impl Into<String>, prime_index: usize, p: u64, sums: Vec<i128>) -> Self {
        Self {
            family: family.into(),
            prime_index,
            p,
            sums,
        }
    }

    /// `S_r`, if it was computed.
    pub fn sum(&self, r: usize) -> Option<i128> {
        r.checked_sub(1).and_then(|i| self.sums.get(i).copied())
    }

    pub fn sums(&self) -> &[i128] {
        &self.sums
    }

    pub fn r_max(&self) -> usize {
        self.sums.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymSumRecord {
    pub p: u64,
    pub k: usize,
    pub value: f64,
}

/// `a = -sum_x (x^3 + Ax + B / p)`.
///
/// The cubic is stepped through its finite differences, so the loop body
/// is three modular additions and a table lookup.
#[inline]
pub fn trace_of_fiber(fiber: &Fiber, table: &LegendreTable) -> i64 {
    debug_assert_eq!(fiber.p, table.p());
    let p = fiber.p;
    let chi = table.as_slice();
    let add = |x: u64, y: u64| {
        let s = x + y;
        if s >= p {
            s - p
        } else {
            s
        }
    };
    let six = 6 % p;
    // f(0) = B, f(1) - f(0) = 1 + A, second difference 6x + 6, third 6
    let mut value = fiber.b;
    let mut d1 = add(1 % p, fiber.a);
    let mut d2 = six;
    let mut sum = 0i64;
    for _ in 0..p {
        sum += chi[value as usize] as i64;
        value = add(value, d1);
        d1 = add(d1, d2);
        d2 = add(d2, six);
    }
    -sum
}

pub fn trace_at(family: &CurveFamily, t: i128, table: &LegendreTable) -> Result<i64> {
    let fiber = family.fiber_at(t, table.p())?;
    Ok(trace_of_fiber(&fiber, table))
}

/// Counts affine solutions of `y^2 = x^3 + Ax + B (mod p)` by a double loop.
pub fn point_count_oracle(fiber: &Fiber) -> u64 {
    let p = fiber.p as u128;
    let (a, b) = (fiber.a as u128, fiber.b as u128);
    let mut count = 0;
    for x in 0..p {
        let rhs = (x * x % p * x + a * x + b) % p;
        for y in 0..p {
            if y * y % p == rhs {
                count += 1;
            }
        }
    }
    count
}

/// Every `a_t(p)` for `t = 0..p`, in order of `t`.
pub fn traces(family: &CurveFamily, table: &LegendreTable) -> Result<Vec<i64>> {
    let reduced = family.reduce_mod(table.p())?;
    Ok((0..table.p())
        .into_par_iter()
        .map(|t| trace_of_fiber(&reduced.fiber(t), table))
        .collect())
}

/// Exact `S_1..=S_{r_max}` at one prime.
pub fn moment_sums(
    family: &CurveFamily,
    prime_index: usize,
    p: u64,
    r_max: usize,
) -> Result<MomentRecord> {
    if !(1..=MAX_MOMENT).contains(&r_max) {
        return Err(Error::MomentOrder(r_max));
    }
    let table = LegendreTable::new(p)?;
    let traces = traces(family, &table)?;
    let mut sums = vec![0i128; r_max];
    for a in traces {
        let a = a as i128;
        let mut power = 1i128;
        for s in sums.iter_mut() {
            power *= a;
            *s += power;
        }
    }
    Ok(MomentRecord::new(family.name(), prime_index, p, sums))
}

/// `U_k(x)` by the three-term recurrence.
pub fn chebyshev_u(k: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if k == 0 {
        return prev;
    }
    for _ in 1..k {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `sum_t sym_k(theta_t(p))` where `a_t(p) = 2 sqrt(p) cos theta_t(p)`.
///
/// Floating point diagnostic. The cosine is clamped into `[-1, 1]`.
pub fn sym_sum(family: &CurveFamily, p: u64, k: usize) -> Result<SymSumRecord> {
    let table = LegendreTable::new(p)?;
    Ok(sym_sum_of_traces(&traces(family, &table)?, p, k))
}

pub fn sym_sum_of_traces(traces: &[i64], p: u64, k: usize) -> SymSumRecord {
    let scale = 2.0 * (p as f64).sqrt();
    let value = traces
        .iter()
        .map(|&a| chebyshev_u(k, (a as f64 / scale).clamp(-1.0, 1.0)))
        .sum();
    SymSumRecord { p, k, value }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn trace_of_cusp_is_zero() {
        let table = LegendreTable::new(5).unwrap();
        let fiber = Fiber { p: 5, t: 0, a: 0, b: 0 };
        assert_eq!(trace_of_fiber(&fiber, &table), 0);
    }

    #[test]
    fn point_count_examples() {
        assert_eq!(point_count_oracle(&Fiber { p: 5, t: 0, a: 0, b: 0 }), 5);
        assert_eq!(point_count_oracle(&Fiber { p: 3, t: 0, a: 0, b: 0 }), 3);
    }

    #[test]
    fn trace_matches_direct_legendre_sum() {
        for p in [3u64, 5, 7, 11, 101] {
            let table = LegendreTable::new(p).unwrap();
            for a in 0..p.min(13) {
                for b in 0..p.min(13) {
                    let fiber = Fiber { p, t: 0, a, b };
                    let direct: i64 = (0..p)
                        .map(|x| table.get((x * x % p * x + a * x + b) % p) as i64)
                        .sum();
                    assert_eq!(trace_of_fiber(&fiber, &table), -direct);
                }
            }
        }
    }

    #[test]
    fn linear_family_at_five() {
        let fam = &corpus::linear_template_families()[0];
        let table = LegendreTable::new(5).unwrap();
        let fiber = fam.fiber_at(0, 5).unwrap();
        let a = trace_at(fam, 0, &table).unwrap();
        assert_eq!(a, 5 - point_count_oracle(&fiber) as i64);
    }

    #[test]
    fn moment_examples() {
        let lin = &corpus::linear_template_families()[0];
        assert_eq!(moment_sums(lin, 4, 7, 2).unwrap().sum(1), Some(0));
        assert_eq!(moment_sums(lin, 3, 5, 2).unwrap().sum(2), Some(20));
        let quartic = corpus::quartic_template_family();
        assert_eq!(moment_sums(&quartic, 4, 7, 1).unwrap().sum(1), Some(-14));
    }

    #[test]
    fn moment_order_is_bounded() {
        let lin = &corpus::linear_template_families()[0];
        assert!(matches!(moment_sums(lin, 3, 5, 9), Err(Error::MomentOrder(9))));
        assert!(moment_sums(lin, 3, 5, 0).is_err());
        assert!(moment_sums(lin, 1, 2, 2).is_err());
    }

    #[test]
    fn chebyshev_matches_trig_form() {
        for k in 0..9 {
            for &theta in &[0.3f64, 1.1, 2.5] {
                let expected = ((k as f64 + 1.0) * theta).sin() / theta.sin();
                assert!((chebyshev_u(k, theta.cos()) - expected).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn sym_examples() {
        let lin = &corpus::linear_template_families()[0];
        let p = 101;
        let s1 = moment_sums(lin, 26, p, 1).unwrap().sum(1).unwrap() as f64;
        let sym1 = sym_sum(lin, p, 1).unwrap();
        assert!((sym1.value - s1 / (p as f64).sqrt()).abs() < 1e-9);
        let zeros = vec![0i64; 13];
        assert_eq!(sym_sum_of_traces(&zeros, 13, 2).value, -13.0);
        let sym4 = sym_sum(lin, p, 4).unwrap();
        assert!(sym4.value.abs() <= 5.0 * p as f64);
    }
}
