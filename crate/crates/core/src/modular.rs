//! Primes, modular arithmetic and quadratic characters.
//!
//! Everything here works on machine words. Callers reduce big integers
//! modulo `p` before handing them over.

use crate::error::{Error, Result};

/// Witnesses that make Miller-Rabin deterministic for every `u64`.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo the prime `p`, or `None` when `p | a`.
pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        None
    } else {
        Some(pow_mod(a, p - 2, p))
    }
}

/// Least nonnegative residue of a signed integer.
#[inline]
pub fn reduce(a: i128, p: u64) -> u64 {
    a.rem_euclid(p as i128) as u64
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &MR_BASES {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn check_odd_prime(p: u64) -> Result<()> {
    if p < 3 || p % 2 == 0 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    Ok(())
}

/// An increasing run of consecutive primes starting at 2.
///
/// Indexing is 1-based to match the usual `Prime[n]` convention:
/// `nth(1) == Some(2)`, `nth(3) == Some(5)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeList {
    primes: Vec<u64>,
}

impl PrimeList {
    /// The first `count` primes.
    pub fn first(count: usize) -> Self {
        if count == 0 {
            return Self { primes: Vec::new() };
        }
        let mut bound = nth_prime_upper_bound(count);
        loop {
            let mut primes = sieve(bound);
            if primes.len() >= count {
                primes.truncate(count);
                return Self { primes };
            }
            bound *= 2;
        }
    }

    /// Every prime `<= bound`.
    pub fn up_to(bound: u64) -> Self {
        Self {
            primes: sieve(bound),
        }
    }

    pub fn nth(&self, index: usize) -> Option<u64> {
        index.checked_sub(1).and_then(|i| self.primes.get(i).copied())
    }

    /// 1-based index of `p`, if it is in the list.
    pub fn index_of(&self, p: u64) -> Option<usize> {
        self.primes.binary_search(&p).ok().map(|i| i + 1)
    }

    /// `(index, prime)` pairs for indices `start..=end`.
    pub fn range(&self, start: usize, end: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        (start.max(1)..=end.min(self.primes.len())).map(move |i| (i, self.primes[i - 1]))
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn last(&self) -> Option<u64> {
        self.primes.last().copied()
    }
}

// Rosser's bound p_n < n(ln n + ln ln n) for n >= 6.
fn nth_prime_upper_bound(n: usize) -> u64 {
    if n < 6 {
        return 15;
    }
    let n = n as f64;
    (n * (n.ln() + n.ln().ln())).ceil() as u64 + 3
}

/// Odd-only sieve of Eratosthenes.
fn sieve(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let mut primes = vec![2];
    // slot i stands for 2i + 1
    let slots = ((bound - 1) / 2 + 1) as usize;
    let mut composite = vec![false; slots];
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= bound as usize {
        if !composite[i] {
            let step = 2 * i + 1;
            let mut j = (step * step - 1) / 2;
            while j < slots {
                composite[j] = true;
                j += step;
            }
        }
        i += 1;
    }
    primes.extend(
        (1..slots)
            .filter(|&i| !composite[i])
            .map(|i| 2 * i as u64 + 1),
    );
    primes
}

/// The Legendre symbol `(a / p)` for an odd prime `p`.
///
/// `a` may be negative or larger than `p`; it is reduced first.
pub fn legendre_symbol(a: i128, p: u64) -> Result<i8> {
    check_odd_prime(p)?;
    Ok(euler_criterion(reduce(a, p), p))
}

#[inline]
fn euler_criterion(a: u64, p: u64) -> i8 {
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Lookup table of the quadratic character modulo `p`.
#[derive(Clone, Debug)]
pub struct LegendreTable {
    p: u64,
    chi: Vec<i8>,
}

impl LegendreTable {
    /// Marks `x^2 mod p` for `x = 1..=(p-1)/2`; every other nonzero entry
    /// is a non-residue.
    pub fn new(p: u64) -> Result<Self> {
        check_odd_prime(p)?;
        let mut chi = vec![-1i8; p as usize];
        chi[0] = 0;
        // (x+1)^2 = x^2 + 2x + 1, kept reduced without multiplications
        let mut square = 0u64;
        let mut step = 1u64;
        for _ in 1..=(p - 1) / 2 {
            square += step;
            if square >= p {
                square -= p;
            }
            chi[square as usize] = 1;
            step += 2;
            if step >= p {
                step -= p;
            }
        }
        Ok(Self { p, chi })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    /// `chi(a)` for a residue `0 <= a < p`.
    #[inline]
    pub fn get(&self, a: u64) -> i8 {
        self.chi[a as usize]
    }

    /// `chi(a)` for an arbitrary integer.
    #[inline]
    pub fn symbol(&self, a: i128) -> i8 {
        self.chi[reduce(a, self.p) as usize]
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.chi
    }
}

/// `sum_{x mod p} (ax + b / p)` in closed form.
pub fn linear_legendre_sum(a: i128, b: i128, p: u64) -> Result<i64> {
    check_odd_prime(p)?;
    if reduce(a, p) == 0 {
        Ok(p as i64 * euler_criterion(reduce(b, p), p) as i64)
    } else {
        Ok(0)
    }
}

/// `sum_{t mod p} (at^2 + bt + c / p)` in closed form.
///
/// Falls back to the linear sum when `p | a`.
pub fn quadratic_legendre_sum(a: i128, b: i128, c: i128, p: u64) -> Result<i64> {
    check_odd_prime(p)?;
    let ar = reduce(a, p);
    if ar == 0 {
        return linear_legendre_sum(b, c, p);
    }
    let chi_a = euler_criterion(ar, p) as i64;
    let (br, cr) = (reduce(b, p), reduce(c, p));
    let disc = (mul_mod(br, br, p) + p - mul_mod(4 % p, mul_mod(ar, cr, p), p)) % p;
    if disc == 0 {
        Ok((p as i64 - 1) * chi_a)
    } else {
        Ok(-chi_a)
    }
}
