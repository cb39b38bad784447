//! Normalized residuals of moment sums, block sign statistics, histograms,
//! the rank estimate from first moments, and the odd-moment Catalan checks.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::trace::MomentRecord;

/// An exponent that is a multiple of 1/2, stored as a count of halves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfExponent(u32);

impl HalfExponent {
    pub fn from_halves(halves: u32) -> Self {
        Self(halves)
    }

    pub fn whole(n: u32) -> Self {
        Self(2 * n)
    }

    pub fn halves(self) -> u32 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// `p^self` as a float, using an exact integer power and at most one
    /// square root.
    pub fn pow(self, p: u64) -> f64 {
        let base = (p as f64).powi((self.0 / 2) as i32);
        if self.0 % 2 == 1 {
            base * (p as f64).sqrt()
        } else {
            base
        }
    }
}

impl fmt::Display for HalfExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl std::str::FromStr for HalfExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("exponent `{s}` is not n or n/2"));
        match s.split_once('/') {
            None => s.trim().parse::<u32>().map(Self::whole).map_err(|_| bad()),
            Some((num, "2")) => num.trim().parse::<u32>().map(Self).map_err(|_| bad()),
            Some(_) => Err(bad()),
        }
    }
}

/// Which lower-order term the even-moment residual is divided by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Normalization {
    /// `p^(e_r - 1)`: p for the second moment
    Integral,
    /// `p^(e_r - 1/2)`: p^(3/2) for the second moment
    #[default]
    HalfIntegral,
}

/// Main term `M_r p^(e_r)` of an even moment sum: `p^2, 2p^3, 5p^4`.
pub fn main_term(r: usize) -> Option<(i128, u32)> {
    match r {
        2 => Some((1, 2)),
        4 => Some((2, 3)),
        6 => Some((5, 4)),
        _ => None,
    }
}

impl Normalization {
    pub fn exponent(self, r: usize) -> Option<HalfExponent> {
        let (_, e) = main_term(r)?;
        Some(match self {
            Normalization::Integral => HalfExponent::whole(e - 1),
            Normalization::HalfIntegral => HalfExponent::from_halves(2 * e - 1),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualSeries {
    pub family: String,
    pub r: usize,
    pub exponent: HalfExponent,
    /// `(p, value)` sorted by `p`
    pub points: Vec<(u64, f64)>,
}

impl ResidualSeries {
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|&(_, v)| v)
    }

    pub fn mean(&self) -> f64 {
        mean(self.values())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Cumulative means after each point.
    pub fn running_means(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.values()
            .enumerate()
            .map(|(i, v)| {
                acc += v;
                acc / (i + 1) as f64
            })
            .collect()
    }

    pub fn restrict(&self, keep: impl Fn(u64) -> bool) -> Self {
        Self {
            points: self.points.iter().copied().filter(|&(p, _)| keep(p)).collect(),
            ..self.clone()
        }
    }
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

fn sorted_by_prime(records: &[MomentRecord]) -> Vec<&MomentRecord> {
    let mut sorted: Vec<_> = records.iter().collect();
    sorted.sort_by_key(|r| r.p);
    sorted.dedup_by_key(|r| r.p);
    sorted
}

fn family_name(records: &[MomentRecord]) -> String {
    records.first().map(|r| r.family.clone()).unwrap_or_default()
}

fn required_sum(rec: &MomentRecord, r: usize) -> Result<i128> {
    rec.sum(r).ok_or_else(|| {
        Error::InvalidArgument(format!("record for p = {} lacks S{r}", rec.p))
    })
}

/// `(S_r - M_r p^(e_r)) / p^exponent` for even `r`.
///
/// The numerator is formed exactly before the single float division.
pub fn residual_series(
    records: &[MomentRecord],
    r: usize,
    exponent: HalfExponent,
) -> Result<ResidualSeries> {
    let Some((coeff, e)) = main_term(r) else {
        return Err(Error::InvalidArgument(format!(
            "residual series needs r in {{2, 4, 6}}, got {r}"
        )));
    };
    if exponent.halves() != 2 * e - 2 && exponent.halves() != 2 * e - 1 {
        return Err(Error::InvalidArgument(format!(
            "exponent {exponent} is not {} or {}/2 for r = {r}",
            e - 1,
            2 * e - 1
        )));
    }
    let mut points = Vec::with_capacity(records.len());
    for rec in sorted_by_prime(records) {
        let numerator = required_sum(rec, r)? - coeff * (rec.p as i128).pow(e);
        points.push((rec.p, numerator as f64 / exponent.pow(rec.p)));
    }
    Ok(ResidualSeries {
        family: family_name(records),
        r,
        exponent,
        points,
    })
}

/// `S_r / p^((r+1)/2)` for odd `r`.
pub fn odd_coefficient_series(records: &[MomentRecord], r: usize) -> Result<ResidualSeries> {
    if r % 2 == 0 || r > crate::trace::MAX_MOMENT {
        return Err(Error::InvalidArgument(format!(
            "odd coefficient series needs an odd moment order, got {r}"
        )));
    }
    let exponent = HalfExponent::whole((r as u32).div_ceil(2));
    let mut points = Vec::with_capacity(records.len());
    for rec in sorted_by_prime(records) {
        points.push((rec.p, required_sum(rec, r)? as f64 / exponent.pow(rec.p)));
    }
    Ok(ResidualSeries {
        family: family_name(records),
        r,
        exponent,
        points,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    pub start_index: usize,
    pub len: usize,
    pub mean: f64,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockReport {
    pub block_size: usize,
    pub blocks: Vec<Block>,
    pub n_positive: usize,
    pub n_negative: usize,
    /// Mean of all points, not of the block means.
    pub grand_mean: f64,
    pub binomial_p_value: f64,
}

impl BlockReport {
    pub fn n_zero(&self) -> usize {
        self.blocks.len() - self.n_positive - self.n_negative
    }

    pub fn means(&self) -> impl Iterator<Item = f64> + '_ {
        self.blocks.iter().map(|b| b.mean)
    }
}

/// Consecutive disjoint blocks of `block_size` points; the last may be short.
pub fn block_stats(series: &ResidualSeries, block_size: usize) -> Result<BlockReport> {
    if block_size == 0 {
        return Err(Error::InvalidArgument("block size must be positive".into()));
    }
    if series.is_empty() {
        return Err(Error::InvalidArgument("cannot block an empty series".into()));
    }
    let values: Vec<f64> = series.values().collect();
    let blocks: Vec<Block> = values
        .chunks(block_size)
        .enumerate()
        .map(|(i, chunk)| {
            let m = mean(chunk.iter().copied());
            Block {
                start_index: i * block_size,
                len: chunk.len(),
                mean: m,
                sign: if m > 0.0 {
                    1
                } else if m < 0.0 {
                    -1
                } else {
                    0
                },
            }
        })
        .collect();
    let n_positive = blocks.iter().filter(|b| b.sign > 0).count();
    let n_negative = blocks.iter().filter(|b| b.sign < 0).count();
    Ok(BlockReport {
        block_size,
        n_positive,
        n_negative,
        grand_mean: mean(values.iter().copied()),
        binomial_p_value: binomial_two_sided(n_positive as u64, (n_positive + n_negative) as u64),
        blocks,
    })
}

/// Exact two-sided sign test: `min(1, 2 min(P[X <= k], P[X >= k]))` for
/// `X ~ Binomial(n, 1/2)`. Returns 1 when there are no trials.
pub fn binomial_two_sided(k: u64, n: u64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let k = k.min(n);
    let tail_k = k.min(n - k);
    // P[X <= tail_k] = sum_{i <= tail_k} C(n, i) / 2^n
    let mut coeff = BigUint::one();
    let mut tail = BigUint::zero();
    for i in 0..=tail_k {
        if i > 0 {
            coeff = coeff * (n - i + 1) / i;
        }
        tail += &coeff;
    }
    let doubled = tail << 1usize;
    ratio_to_f64(&doubled, n).min(1.0)
}

/// `num / 2^shift` as a float without overflowing the intermediate.
fn ratio_to_f64(num: &BigUint, shift: u64) -> f64 {
    let bits = num.bits();
    let drop = bits.saturating_sub(64);
    let top = (num >> drop).to_f64().unwrap_or(f64::INFINITY);
    let exp = drop as i64 - shift as i64;
    top * 2f64.powi(exp.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<usize>,
}

impl Histogram {
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// Equal-width bins over the block means; the last bin is closed.
///
/// When every mean is equal, one bin of unit width centred on it.
pub fn histogram(report: &BlockReport, n_bins: usize) -> Result<Histogram> {
    histogram_of(report.means(), n_bins)
}

pub fn histogram_of(values: impl Iterator<Item = f64>, n_bins: usize) -> Result<Histogram> {
    if n_bins == 0 {
        return Err(Error::InvalidArgument("histogram needs at least one bin".into()));
    }
    let values: Vec<f64> = values.collect();
    if values.is_empty() {
        return Err(Error::InvalidArgument("histogram of no values".into()));
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        return Ok(Histogram {
            bin_edges: vec![lo - 0.5, lo + 0.5],
            counts: vec![values.len()],
        });
    }
    let width = (hi - lo) / n_bins as f64;
    let mut bin_edges: Vec<f64> = (0..n_bins).map(|i| lo + width * i as f64).collect();
    bin_edges.push(hi);
    let mut counts = vec![0; n_bins];
    for v in values {
        let bin = (((v - lo) / width) as usize).min(n_bins - 1);
        counts[bin] += 1;
    }
    Ok(Histogram { bin_edges, counts })
}

/// Log-weighted first-moment average over primes `p <= x`:
/// `(1/x) sum_{p <= x} (-S_1(p) / p) log p`.
///
/// `S_1(p) / p` is the averaged first moment, so a family whose sums are
/// `-r p` converges (slowly) to `r`.
pub fn nagao_rank_estimate(records: &[MomentRecord], x: u64) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::InvalidArgument("rank estimate needs at least one record".into()));
    }
    if x == 0 {
        return Err(Error::InvalidArgument("rank estimate cutoff must be positive".into()));
    }
    let mut total = 0.0;
    for rec in sorted_by_prime(records).into_iter().filter(|r| r.p <= x) {
        let s1 = required_sum(rec, 1)?;
        if s1 != 0 {
            total += (-s1 as f64 / rec.p as f64) * (rec.p as f64).ln();
        }
    }
    Ok(total / x as f64)
}

/// `C_n = binom(2n, n) / (n + 1)`: 1, 2, 5, 14, 42, ...
pub fn catalan(n: u32) -> u64 {
    let mut c = 1u64;
    for i in 0..n as u64 {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CatalanCheck {
    pub k: u32,
    pub observed_mean: f64,
    pub predicted: f64,
    /// `observed / predicted`, absent when the prediction is 0.
    pub ratio: Option<f64>,
}

/// Mean of `S_{2k+1} / p^(k+1)` against `-C_{k+1} * rank`.
pub fn catalan_check(records: &[MomentRecord], k: u32, rank: u32) -> Result<CatalanCheck> {
    if !(1..=3).contains(&k) {
        return Err(Error::InvalidArgument(format!("catalan check needs k in 1..=3, got {k}")));
    }
    let series = odd_coefficient_series(records, 2 * k as usize + 1)?;
    let observed_mean = series.mean();
    let predicted = 0.0 - catalan(k + 1) as f64 * rank as f64;
    Ok(CatalanCheck {
        k,
        observed_mean,
        predicted,
        ratio: (predicted != 0.0).then(|| observed_mean / predicted),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(values: &[f64]) -> ResidualSeries {
        ResidualSeries {
            family: "x".into(),
            r: 2,
            exponent: HalfExponent::whole(1),
            points: values.iter().enumerate().map(|(i, &v)| (i as u64, v)).collect(),
        }
    }

    fn record(p: u64, sums: Vec<i128>) -> MomentRecord {
        MomentRecord::new("x", 0, p, sums)
    }

    #[test]
    fn exponent_parsing() {
        assert_eq!("1".parse::<HalfExponent>().unwrap(), HalfExponent::whole(1));
        assert_eq!("3/2".parse::<HalfExponent>().unwrap(), HalfExponent::from_halves(3));
        assert!("3/4".parse::<HalfExponent>().is_err());
        assert_eq!(HalfExponent::from_halves(5).to_string(), "5/2");
        assert!((HalfExponent::from_halves(3).pow(4) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn normalization_exponents() {
        assert_eq!(Normalization::Integral.exponent(2), Some(HalfExponent::whole(1)));
        assert_eq!(Normalization::HalfIntegral.exponent(4), Some(HalfExponent::from_halves(5)));
        assert_eq!(Normalization::HalfIntegral.exponent(6), Some(HalfExponent::from_halves(7)));
        assert_eq!(Normalization::Integral.exponent(3), None);
    }

    #[test]
    fn residuals_are_exact_before_division() {
        let recs = vec![record(13, vec![0, 13 * 13 - 39]), record(11, vec![0, 121 - 11])];
        let s = residual_series(&recs, 2, HalfExponent::whole(1)).unwrap();
        assert_eq!(s.points, vec![(11, -1.0), (13, -3.0)]);
        assert!(residual_series(&recs, 3, HalfExponent::whole(1)).is_err());
        assert!(residual_series(&recs, 2, HalfExponent::whole(2)).is_err());
        assert!(odd_coefficient_series(&recs, 2).is_err());
    }

    #[test]
    fn constant_negative_series() {
        let s = series(&[-1.0; 1000]);
        let report = block_stats(&s, 50).unwrap();
        assert_eq!(report.blocks.len(), 20);
        assert_eq!(report.n_negative, 20);
        assert_eq!(report.n_positive, 0);
        assert!(block_stats(&s, 0).is_err());
    }

    #[test]
    fn alternating_series_has_no_trials() {
        let values: Vec<f64> = (0..10).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let report = block_stats(&series(&values), 2).unwrap();
        assert_eq!(report.n_zero(), 5);
        assert_eq!(report.binomial_p_value, 1.0);
    }

    #[test]
    fn short_final_block() {
        let report = block_stats(&series(&[1.0, 2.0, 3.0, 4.0, 5.0]), 2).unwrap();
        assert_eq!(report.blocks.len(), 3);
        assert_eq!(report.blocks[2].len, 1);
        assert_eq!(report.blocks[2].start_index, 4);
        assert_eq!(report.grand_mean, 3.0);
    }

    #[test]
    fn binomial_values() {
        // 2 * sum_{i <= 37} C(100, i) / 2^100
        let p = binomial_two_sided(63, 100);
        assert!((p - 0.012).abs() < 0.002, "{p}");
        assert_eq!(binomial_two_sided(50, 100), 1.0);
        assert_eq!(binomial_two_sided(0, 0), 1.0);
        assert!((binomial_two_sided(0, 3) - 0.25).abs() < 1e-15);
        assert_eq!(binomial_two_sided(1000, 2000), 1.0);
        assert!(binomial_two_sided(900, 2000) < 1e-5);
        assert!((binomial_two_sided(37, 100) - p).abs() < 1e-15);
    }

    #[test]
    fn histogram_examples() {
        let degenerate = histogram_of([-1.0, -1.0, -1.0].into_iter(), 5).unwrap();
        assert_eq!(degenerate.counts, vec![3]);
        let split = histogram_of([-2.0, -1.0, 0.0, 1.0].into_iter(), 2).unwrap();
        assert_eq!(split.counts, vec![2, 2]);
        assert_eq!(split.bin_edges, vec![-2.0, -0.5, 1.0]);
        assert!(histogram_of([1.0].into_iter(), 0).is_err());
    }

    #[test]
    fn nagao_examples() {
        assert!(nagao_rank_estimate(&[], 10).is_err());
        assert_eq!(nagao_rank_estimate(&[record(5, vec![0])], 5).unwrap(), 0.0);
        let recs: Vec<_> = [5u64, 7, 11, 13].iter().map(|&p| record(p, vec![-2 * p as i128])).collect();
        let expected: f64 = [5f64, 7.0, 11.0, 13.0].iter().map(|p| 2.0 * p.ln()).sum::<f64>() / 13.0;
        assert!((nagao_rank_estimate(&recs, 13).unwrap() - expected).abs() < 1e-12);
        // records above the cutoff are ignored
        assert!((nagao_rank_estimate(&recs, 12).unwrap() - (expected * 13.0 - 2.0 * 13f64.ln()) / 12.0).abs() < 1e-12);
    }

    #[test]
    fn catalan_values() {
        assert_eq!(catalan(1), 1);
        assert_eq!((catalan(2), catalan(3), catalan(4)), (2, 5, 14));
        for n in 1..=7u64 {
            assert_eq!(catalan(n as u32 + 1) * (n + 2), catalan(n as u32) * 2 * (2 * n + 1));
        }
    }

    #[test]
    fn catalan_check_reports() {
        let recs: Vec<_> = [5u64, 7, 11].iter().map(|&p| {
            let p = p as i128;
            record(p as u64, vec![0, 0, -4 * p * p, 0, -10 * p * p * p])
        }).collect();
        let k1 = catalan_check(&recs, 1, 2).unwrap();
        assert_eq!(k1.predicted, -4.0);
        assert!((k1.ratio.unwrap() - 1.0).abs() < 1e-12);
        let k2 = catalan_check(&recs, 2, 0).unwrap();
        assert_eq!(k2.predicted, 0.0);
        assert_eq!(k2.ratio, None);
        assert!((k2.observed_mean + 10.0).abs() < 1e-12);
        assert!(catalan_check(&recs, 3, 1).is_err());
    }
}
