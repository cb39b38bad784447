use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::modular::reduce;

/// Polynomial in `t` with arbitrary-precision integer coefficients.
///
/// `coeffs[k]` multiplies `t^k`. Trailing zeros are always stripped, so the
/// zero polynomial has no coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut poly = Self { coeffs };
        poly.normalize();
        poly
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::new(vec![c.into()])
    }

    /// `t`
    pub fn t() -> Self {
        Self::from_i64s(&[0, 1])
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// The value of a constant polynomial as `i64`.
    pub fn as_constant_i64(&self) -> Option<i64> {
        match self.coeffs.as_slice() {
            [] => Some(0),
            [c] => c.to_i64(),
            _ => None,
        }
    }

    pub fn eval(&self, t: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * t + c)
    }

    /// Coefficients reduced into `[0, p)`.
    pub fn reduce_mod(&self, p: u64) -> ReducedPolynomial {
        let modulus = BigInt::from(p);
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.mod_floor(&modulus).to_u64().expect("residue fits in u64"))
            .collect();
        ReducedPolynomial { p, coeffs }
    }

    pub fn scale(&self, k: impl Into<BigInt>) -> Self {
        let k = k.into();
        Self::new(self.coeffs.iter().map(|c| c * &k).collect())
    }

    /// Divides every coefficient by `k`, or `None` if some division is inexact.
    pub fn exact_div(&self, k: &BigInt) -> Option<Self> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(k);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(Self::new(out))
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(1), |acc, _| &acc * self)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{mag}t")?,
                (_, true) => write!(f, "t^{k}")?,
                (_, false) => write!(f, "{mag}t^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;

    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;

    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;

    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// A polynomial whose coefficients have been reduced modulo `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedPolynomial {
    p: u64,
    coeffs: Vec<u64>,
}

impl ReducedPolynomial {
    /// Horner evaluation at `t mod p`.
    #[inline]
    pub fn eval(&self, t: u64) -> u64 {
        let p = self.p as u128;
        let t = t as u128 % p;
        self.coeffs
            .iter()
            .rev()
            .fold(0u128, |acc, &c| (acc * t + c as u128) % p) as u64
    }

    pub fn eval_signed(&self, t: i128) -> u64 {
        self.eval(reduce(t, self.p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_trailing_zeros() {
        let p = IntPolynomial::from_i64s(&[1, 2, 0, 0]);
        assert_eq!(p.coeffs().len(), 2);
        assert!(IntPolynomial::from_i64s(&[0, 0]).is_zero());
        assert_eq!(IntPolynomial::zero().degree(), None);
    }

    #[test]
    fn arithmetic() {
        let a = IntPolynomial::from_i64s(&[1, 1]);
        let b = IntPolynomial::from_i64s(&[-1, 1]);
        assert_eq!(&a * &b, IntPolynomial::from_i64s(&[-1, 0, 1]));
        assert_eq!(&a - &a, IntPolynomial::zero());
        assert_eq!(a.pow(2), IntPolynomial::from_i64s(&[1, 2, 1]));
        assert_eq!(a.scale(6).exact_div(&BigInt::from(3)), Some(a.scale(2)));
        assert_eq!(a.exact_div(&BigInt::from(2)), None);
    }

    #[test]
    fn evaluation_mod_p_reduces_big_coefficients() {
        let big: BigInt = "811365140824616222208".parse().unwrap();
        let poly = IntPolynomial::new(vec![big.clone(), BigInt::from(-3)]);
        for p in [5u64, 7, 1223] {
            let r = poly.reduce_mod(p);
            for t in 0..20i64 {
                let exact = poly.eval(&BigInt::from(t)).mod_floor(&BigInt::from(p));
                assert_eq!(BigInt::from(r.eval(t as u64 % p)), exact);
            }
        }
    }

    #[test]
    fn display() {
        assert_eq!(IntPolynomial::from_i64s(&[-1, -1]).to_string(), "-t - 1");
        assert_eq!(IntPolynomial::from_i64s(&[0, 0, 4]).to_string(), "4t^2");
        assert_eq!(IntPolynomial::zero().to_string(), "0");
    }
}
