//! Built-in families: the closed-form template families and a handful of
//! generic families of known rank used as test subjects.

use num_bigint::BigInt;

use crate::family::CurveFamily;
use crate::poly::IntPolynomial;

fn build(name: &str, coeffs: [&[i64]; 5], rank: u32) -> CurveFamily {
    CurveFamily::new(name, coeffs.map(IntPolynomial::from_i64s), Some(rank))
        .expect("built-in families are nonsingular")
}

/// The nine specializations of `y^2 = 4x^3 + ax^2 + bx + c + dt`.
pub fn linear_template_families() -> Vec<CurveFamily> {
    [
        ("lin-1-0-0-m1-t", [&[1][..], &[], &[], &[-1], &[0, 1]]),
        ("lin-1-0-m2-1-t", [&[1][..], &[], &[-2], &[1], &[0, 1]]),
        ("lin-1-0-1-m1-t", [&[1][..], &[], &[1], &[-1], &[0, 1]]),
        ("lin-1-1-m1-1-t", [&[1][..], &[1], &[-1], &[1], &[0, 1]]),
        ("lin-1-1-m3-1-t", [&[1][..], &[1], &[-3], &[1], &[0, 1]]),
        ("lin-1-0-m3-1-t", [&[1][..], &[], &[-3], &[1], &[0, 1]]),
        ("lin-1-1-m2-1-t", [&[1][..], &[1], &[-2], &[1], &[0, 1]]),
        ("lin-0-1-1-1-t", [&[][..], &[1], &[1], &[1], &[0, 1]]),
        ("lin-0-1-3-1-t", [&[][..], &[1], &[3], &[1], &[0, 1]]),
    ]
    .into_iter()
    .map(|(name, c)| build(name, c, 0))
    .collect()
}

/// The three specializations of `y^2 = 4x^3 + (4m+1)x^2 + ntx`.
pub fn twisted_template_families() -> Vec<CurveFamily> {
    [
        ("tw-1-0-0-t-0", [&[1][..], &[], &[], &[0, 1], &[]]),
        ("tw-1-m2-0-t-0", [&[1][..], &[-2], &[], &[0, 1], &[]]),
        ("tw-1-1-0-t-0", [&[1][..], &[1], &[], &[0, 1], &[]]),
    ]
    .into_iter()
    .map(|(name, c)| build(name, c, 0))
    .collect()
}

/// `y^2 = x^3 - t^2 x + t^4`
pub fn quartic_template_family() -> CurveFamily {
    build("quartic", [&[], &[], &[], &[0, 0, -1], &[0, 0, 0, 0, 1]], 2)
}

/// Generic families without a closed-form second moment, with their ranks.
pub fn generic_families() -> Vec<CurveFamily> {
    vec![
        build("rank1-1-t-m1-mt1-0", [&[1], &[0, 1], &[-1], &[-1, -1], &[]], 1),
        build("rank2-1-t-m19-mt1-0", [&[1], &[0, 1], &[-19], &[-1, -1], &[]], 2),
        build("rank3-0-5-0-m16t2-64t2", [&[], &[5], &[], &[0, 0, -16], &[0, 0, 64]], 3),
    ]
}

/// Every template family followed by the generic families.
pub fn corpus() -> Vec<CurveFamily> {
    let mut all = linear_template_families();
    all.extend(twisted_template_families());
    all.push(quartic_template_family());
    all.extend(generic_families());
    all
}

/// The rank 6 family with 21-digit coefficients.
pub fn rank_six_family() -> CurveFamily {
    let n = |s: &str| s.parse::<BigInt>().expect("literal");
    // t^2 + 2t - 8916100448256000000 + 1
    let q = IntPolynomial::new(vec![n("-8916100448255999999"), n("2"), n("1")]);
    let a2 = IntPolynomial::new(vec![n("811365140824616222208"), n("33320222208")]);
    let a4 = &IntPolynomial::new(vec![n("-26497490347321493520384"), n("-3206349619200")]) * &q;
    let a6 = &IntPolynomial::new(vec![n("343107594345448813363200"), n("4299816960000")]) * &(&q * &q);
    CurveFamily::new(
        "rank6",
        [IntPolynomial::zero(), a2, IntPolynomial::zero(), a4, a6],
        Some(6),
    )
    .expect("nonsingular")
}

/// Looks up a built-in family by name, including the rank 6 family.
pub fn by_name(name: &str) -> Option<CurveFamily> {
    corpus()
        .into_iter()
        .chain([rank_six_family()])
        .find(|f| f.name() == name)
}
