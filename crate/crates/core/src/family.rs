//! One-parameter families `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`
//! with coefficients in `Z[t]`, their standard invariants, and reduction of
//! individual fibers to short Weierstrass form modulo `p`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::modular::{check_odd_prime, inv_mod, mul_mod, reduce};
use crate::poly::{IntPolynomial, ReducedPolynomial};

/// Number of consecutive integer values of `t` probed by the generic checks.
const PROBE_POINTS: i64 = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveFamily {
    name: String,
    a1: IntPolynomial,
    a2: IntPolynomial,
    a3: IntPolynomial,
    a4: IntPolynomial,
    a6: IntPolynomial,
    expected_rank: Option<u32>,
}

/// `b2, b4, b6, b8, c4, c6` as polynomials in `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariants {
    pub b2: IntPolynomial,
    pub b4: IntPolynomial,
    pub b6: IntPolynomial,
    pub b8: IntPolynomial,
    pub c4: IntPolynomial,
    pub c6: IntPolynomial,
}

/// The medium form `y^2 = 4x^3 + b2 x^2 + 2 b4 x + b6`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MediumForm {
    pub quadratic: IntPolynomial,
    pub linear: IntPolynomial,
    pub constant: IntPolynomial,
}

/// The fiber at `t`, reduced to `y^2 = x^3 + Ax + B (mod p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fiber {
    pub p: u64,
    pub t: u64,
    pub a: u64,
    pub b: u64,
}

/// The three shapes with proven first and second moments.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Template {
    /// `y^2 = 4x^3 + a x^2 + b x + c + d t`
    Linear { a: i64, b: i64, c: i64, d: i64 },
    /// `y^2 = 4x^3 + (4m + 1) x^2 + n t x`
    TwistedLinear { m: i64, n: i64 },
    /// `y^2 = x^3 - t^2 x + t^4`
    Quartic,
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Template::Linear { a, b, c, d } => {
                write!(f, "y^2 = 4x^3 + ({a})x^2 + ({b})x + ({c}) + ({d})t")
            }
            Template::TwistedLinear { m, n } => {
                write!(f, "y^2 = 4x^3 + ({})x^2 + ({n})tx", 4 * m + 1)
            }
            Template::Quartic => write!(f, "y^2 = x^3 - t^2 x + t^4"),
        }
    }
}

impl CurveFamily {
    /// Builds a family and rejects it if the discriminant vanishes at every
    /// probed `t = 0..10`.
    pub fn new(
        name: impl Into<String>,
        [a1, a2, a3, a4, a6]: [IntPolynomial; 5],
        expected_rank: Option<u32>,
    ) -> Result<Self> {
        let family = Self::new_unchecked(name, [a1, a2, a3, a4, a6], expected_rank);
        let disc = family.invariants().discriminant();
        let generic = (0..PROBE_POINTS).any(|t| !disc.eval(&BigInt::from(t)).is_zero());
        if !generic {
            return Err(Error::SingularFamily { name: family.name });
        }
        Ok(family)
    }

    /// Builds a family without the nonsingularity check.
    pub fn new_unchecked(
        name: impl Into<String>,
        [a1, a2, a3, a4, a6]: [IntPolynomial; 5],
        expected_rank: Option<u32>,
    ) -> Self {
        Self {
            name: name.into(),
            a1,
            a2,
            a3,
            a4,
            a6,
            expected_rank,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn expected_rank(&self) -> Option<u32> {
        self.expected_rank
    }

    /// `[a1, a2, a3, a4, a6]`
    pub fn coefficients(&self) -> [&IntPolynomial; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
    }

    pub fn invariants(&self) -> Invariants {
        compute_invariants(self)
    }

    pub fn medium_form(&self) -> MediumForm {
        let inv = self.invariants();
        MediumForm {
            quadratic: inv.b2,
            linear: inv.b4.scale(2),
            constant: inv.b6,
        }
    }

    /// Short-form coefficient polynomials `(-27 c4, -54 c6)`.
    pub fn short_form(&self) -> (IntPolynomial, IntPolynomial) {
        let inv = self.invariants();
        (inv.c4.scale(-27), inv.c6.scale(-54))
    }

    /// Reduces the short-form coefficients modulo `p` once so that fibers
    /// can be produced with machine arithmetic.
    pub fn reduce_mod(&self, p: u64) -> Result<ReducedFamily> {
        check_odd_prime(p)?;
        let (a, b) = self.short_form();
        Ok(ReducedFamily {
            p,
            a: a.reduce_mod(p),
            b: b.reduce_mod(p),
        })
    }

    pub fn fiber_at(&self, t: i128, p: u64) -> Result<Fiber> {
        Ok(self.reduce_mod(p)?.fiber(reduce(t, p)))
    }

    pub fn template(&self) -> Option<Template> {
        match_template(self)
    }

    /// Whether `j(t)` is non-constant, judged on `t = 0..10`.
    ///
    /// Compares `c4^3 / Delta` at pairs of points after cross-multiplying,
    /// so it stays in integers. Fibers with `Delta(t) = 0` are skipped.
    pub fn j_is_nonconstant(&self) -> bool {
        let inv = self.invariants();
        let disc = inv.discriminant();
        let samples: Vec<(BigInt, BigInt)> = (0..PROBE_POINTS)
            .map(BigInt::from)
            .map(|t| (inv.c4.eval(&t).pow(3), disc.eval(&t)))
            .filter(|(_, d)| !d.is_zero())
            .collect();
        samples
            .iter()
            .enumerate()
            .any(|(i, (c, d))| samples[i + 1..].iter().any(|(c2, d2)| c * d2 != c2 * d))
    }
}

impl fmt::Display for CurveFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: [a1, a2, a3, a4, a6] = [{}, {}, {}, {}, {}]",
            self.name, self.a1, self.a2, self.a3, self.a4, self.a6
        )
    }
}

pub fn compute_invariants(family: &CurveFamily) -> Invariants {
    let [a1, a2, a3, a4, a6] = family.coefficients();
    let b2 = &(a1 * a1) + &a2.scale(4);
    let b4 = &a4.scale(2) + &(a1 * a3);
    let b6 = &(a3 * a3) + &a6.scale(4);
    let b8 = &(&(&(&(a1 * a1) * a6) + &(&a2.scale(4) * a6)) - &(&(a1 * a3) * a4))
        + &(&(&(a2 * a3) * a3) - &(a4 * a4));
    let c4 = &(&b2 * &b2) - &b4.scale(24);
    let c6 = &(&(-&b2.pow(3)) + &(&b2 * &b4).scale(36)) - &b6.scale(216);
    Invariants {
        b2,
        b4,
        b6,
        b8,
        c4,
        c6,
    }
}

impl Invariants {
    /// `Delta = -b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6`
    pub fn discriminant(&self) -> IntPolynomial {
        let (b2, b4, b6, b8) = (&self.b2, &self.b4, &self.b6, &self.b8);
        let terms = [
            -&(&(b2 * b2) * b8),
            b4.pow(3).scale(-8),
            (b6 * b6).scale(-27),
            (&(b2 * b4) * b6).scale(9),
        ];
        terms
            .iter()
            .fold(IntPolynomial::zero(), |acc, term| &acc + term)
    }
}

/// A family's short-form coefficients reduced modulo one prime.
#[derive(Clone, Debug)]
pub struct ReducedFamily {
    p: u64,
    a: ReducedPolynomial,
    b: ReducedPolynomial,
}

impl ReducedFamily {
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn fiber(&self, t: u64) -> Fiber {
        let t = t % self.p;
        Fiber {
            p: self.p,
            t,
            a: self.a.eval(t),
            b: self.b.eval(t),
        }
    }
}

impl Fiber {
    /// `4A^3 + 27B^2 mod p`
    fn cubic_discriminant(&self) -> u64 {
        let p = self.p;
        let a3 = mul_mod(mul_mod(self.a, self.a, p), self.a, p);
        let b2 = mul_mod(self.b, self.b, p);
        (mul_mod(4 % p, a3, p) + mul_mod(27 % p, b2, p)) % p
    }

    /// `-16 (4A^3 + 27B^2) mod p`
    pub fn discriminant(&self) -> u64 {
        let p = self.p;
        let d = mul_mod(16 % p, self.cubic_discriminant(), p);
        (p - d) % p
    }

    pub fn is_singular(&self) -> bool {
        self.discriminant() == 0
    }

    /// `6912 A^3 / (4A^3 + 27B^2) mod p`, or `None` for a singular fiber.
    pub fn j_invariant(&self) -> Option<u64> {
        let p = self.p;
        let denom = inv_mod(self.cubic_discriminant(), p)?;
        let a3 = mul_mod(mul_mod(self.a, self.a, p), self.a, p);
        Some(mul_mod(mul_mod(6912 % p, a3, p), denom, p))
    }
}

pub fn match_template(family: &CurveFamily) -> Option<Template> {
    let [a1, a2, a3, a4, a6] = family.coefficients();
    let minus_t2 = IntPolynomial::from_i64s(&[0, 0, -1]);
    let t4 = IntPolynomial::from_i64s(&[0, 0, 0, 0, 1]);
    if a1.is_zero() && a2.is_zero() && a3.is_zero() && *a4 == minus_t2 && *a6 == t4 {
        return Some(Template::Quartic);
    }

    let medium = family.medium_form();
    let a = medium.quadratic.as_constant_i64()?;

    if let Some(b) = medium.linear.as_constant_i64() {
        if medium.constant.degree() == Some(1) {
            let c = medium.constant.coeff(0).to_i64()?;
            let d = medium.constant.coeff(1).to_i64()?;
            return Some(Template::Linear { a, b, c, d });
        }
    }

    if medium.constant.is_zero()
        && medium.linear.degree() == Some(1)
        && medium.linear.coeff(0).is_zero()
        && (a - 1).rem_euclid(4) == 0
    {
        let n = medium.linear.coeff(1).to_i64()?;
        return Some(Template::TwistedLinear { m: (a - 1) / 4, n });
    }
    None
}

impl Template {
    /// Medium form reconstructed from the template parameters.
    pub fn medium_form(&self) -> MediumForm {
        match *self {
            Template::Linear { a, b, c, d } => MediumForm {
                quadratic: IntPolynomial::constant(a),
                linear: IntPolynomial::constant(b),
                constant: IntPolynomial::from_i64s(&[c, d]),
            },
            Template::TwistedLinear { m, n } => MediumForm {
                quadratic: IntPolynomial::constant(4 * m + 1),
                linear: IntPolynomial::from_i64s(&[0, n]),
                constant: IntPolynomial::zero(),
            },
            Template::Quartic => MediumForm {
                quadratic: IntPolynomial::zero(),
                linear: IntPolynomial::from_i64s(&[0, 0, -4]),
                constant: IntPolynomial::from_i64s(&[0, 0, 0, 0, 4]),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    fn family(c: [&[i64]; 5]) -> CurveFamily {
        CurveFamily::new_unchecked("test", c.map(poly), None)
    }

    #[test]
    fn invariants_of_linear_family() {
        let inv = family([&[1], &[], &[], &[-1], &[0, 1]]).invariants();
        assert_eq!(inv.b2, poly(&[1]));
        assert_eq!(inv.b4, poly(&[-2]));
        assert_eq!(inv.b6, poly(&[0, 4]));
        assert_eq!(inv.c4, poly(&[49]));
        assert_eq!(inv.c6, poly(&[-73, -864]));

        let inv = family([&[], &[1], &[1], &[1], &[0, 1]]).invariants();
        assert_eq!(inv.b2, poly(&[4]));
        assert_eq!(inv.b4, poly(&[2]));
        assert_eq!(inv.b6, poly(&[1, 4]));
    }

    #[test]
    fn zero_family_has_zero_invariants() {
        let inv = family([&[], &[], &[], &[], &[]]).invariants();
        for p in [&inv.b2, &inv.b4, &inv.b6, &inv.b8, &inv.c4, &inv.c6] {
            assert!(p.is_zero());
        }
        assert!(CurveFamily::new("zero", [(); 5].map(|_| IntPolynomial::zero()), None).is_err());
    }

    #[test]
    fn medium_forms() {
        let m = family([&[1], &[], &[], &[-1], &[0, 1]]).medium_form();
        assert_eq!((m.quadratic, m.linear, m.constant), (poly(&[1]), poly(&[-4]), poly(&[0, 4])));
        let m = family([&[1], &[-2], &[], &[0, 1], &[]]).medium_form();
        assert_eq!((m.quadratic, m.linear, m.constant), (poly(&[-7]), poly(&[0, 4]), poly(&[])));
        let m = family([&[], &[], &[], &[], &[]]).medium_form();
        assert!(m.quadratic.is_zero() && m.linear.is_zero() && m.constant.is_zero());
    }

    #[test]
    fn fiber_examples() {
        let f = family([&[1], &[], &[], &[-1], &[0, 1]]).fiber_at(0, 5).unwrap();
        assert_eq!((f.a, f.b), (2, 2));
        let f = family([&[], &[], &[], &[], &[]]).fiber_at(3, 7).unwrap();
        assert_eq!((f.a, f.b), (0, 0));
        let big = corpus::rank_six_family();
        let f = big.fiber_at(0, 7).unwrap();
        assert!(f.a < 7 && f.b < 7);
        // negative t wraps around
        let fam = family([&[1], &[], &[], &[-1], &[0, 1]]);
        assert_eq!(fam.fiber_at(-1, 11).unwrap(), fam.fiber_at(10, 11).unwrap());
    }

    #[test]
    fn discriminant_examples() {
        let fib = |a, b| Fiber { p: 5, t: 0, a, b };
        assert_eq!(fib(0, 0).discriminant(), 0);
        // -16 * (32 + 108) = -2240 = 0 mod 5
        assert_eq!(fib(2, 2).discriminant(), 0);
        assert_eq!(fib(1, 0).discriminant(), 1);
    }

    #[test]
    fn j_invariant_examples() {
        let fib = |a, b| Fiber { p: 7, t: 0, a, b };
        assert_eq!(fib(0, 1).j_invariant(), Some(0));
        assert_eq!(fib(1, 0).j_invariant(), Some(6));
        assert_eq!(fib(0, 0).j_invariant(), None);
    }

    #[test]
    fn template_matching() {
        assert_eq!(
            family([&[1], &[], &[], &[-1], &[0, 1]]).template(),
            Some(Template::Linear { a: 1, b: -4, c: 0, d: 4 })
        );
        assert_eq!(
            family([&[1], &[], &[], &[0, 1], &[]]).template(),
            Some(Template::TwistedLinear { m: 0, n: 4 })
        );
        assert_eq!(
            family([&[], &[], &[], &[0, 0, -1], &[0, 0, 0, 0, 1]]).template(),
            Some(Template::Quartic)
        );
        assert_eq!(family([&[1], &[0, 1], &[-19], &[-1, -1], &[]]).template(), None);
    }

    #[test]
    fn template_reconstructs_medium_form() {
        for fam in corpus::corpus() {
            if let Some(template) = fam.template() {
                assert_eq!(template.medium_form(), fam.medium_form(), "{}", fam.name());
            }
        }
    }

    #[test]
    fn corpus_families_have_nonconstant_j() {
        for fam in corpus::corpus().iter().chain([&corpus::rank_six_family()]) {
            assert!(fam.j_is_nonconstant(), "{}", fam.name());
        }
    }

    #[test]
    fn b8_identity_holds() {
        for fam in corpus::corpus() {
            let inv = fam.invariants();
            let lhs = inv.b8.scale(4);
            let rhs = &(&inv.b2 * &inv.b6) - &(&inv.b4 * &inv.b4);
            assert_eq!(lhs, rhs, "{}", fam.name());
        }
    }
}
