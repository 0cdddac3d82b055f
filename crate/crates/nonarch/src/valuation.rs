//! Exact rationals, p-adic valuations, places and the product formula.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// The universal coefficient type. `BigRational` keeps itself reduced with a
/// positive denominator, so it already satisfies the invariants we need.
pub type Rational = BigRational;

/// Default bound on numerator and denominator for [`product_formula_check`].
pub const DEFAULT_FACTOR_GUARD: u64 = 1_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValuationError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} exceeds the trial-division guard {1}")]
    FactorGuardExceeded(BigInt, u64),
}

/// Shorthand for an integer rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `n / d`.
pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// A rational number or `+∞`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtRational {
    Finite(Rational),
    Infinity,
}

impl ExtRational {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtRational::Finite(r) => Some(r),
            ExtRational::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtRational::Infinity)
    }

    pub fn min(self, other: ExtRational) -> ExtRational {
        if self <= other {
            self
        } else {
            other
        }
    }
}

impl From<Rational> for ExtRational {
    fn from(r: Rational) -> Self {
        ExtRational::Finite(r)
    }
}

impl From<i64> for ExtRational {
    fn from(n: i64) -> Self {
        ExtRational::Finite(int(n))
    }
}

impl PartialOrd for ExtRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRational::Infinity, ExtRational::Infinity) => Ordering::Equal,
            (ExtRational::Infinity, _) => Ordering::Greater,
            (_, ExtRational::Infinity) => Ordering::Less,
            (ExtRational::Finite(a), ExtRational::Finite(b)) => a.cmp(b),
        }
    }
}

impl Add for ExtRational {
    type Output = ExtRational;
    fn add(self, rhs: ExtRational) -> ExtRational {
        match (self, rhs) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => ExtRational::Finite(a + b),
            _ => ExtRational::Infinity,
        }
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Finite(r) => write!(f, "{r}"),
            ExtRational::Infinity => write!(f, "inf"),
        }
    }
}

/// A prime in the 64-bit range, checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Prime, ValuationError> {
        if is_prime_u64(p) {
            Ok(Prime(p))
        } else {
            Err(ValuationError::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }

    /// `p^k` as a big integer.
    pub fn pow(self, k: u32) -> BigInt {
        num_traits::pow(self.to_bigint(), k as usize)
    }

    /// `p^k` as a rational, for any sign of `k`.
    pub fn rational_pow(self, k: i64) -> Rational {
        let base = Rational::from_integer(self.pow(k.unsigned_abs() as u32));
        if k >= 0 {
            base
        } else {
            base.recip()
        }
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Place {
    Trivial,
    Padic(Prime),
    RealArchimedean,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Trivial => write!(f, "0"),
            Place::Padic(p) => write!(f, "{p}"),
            Place::RealArchimedean => write!(f, "inf"),
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
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

/// Deterministic Miller-Rabin; the first twelve primes as witnesses cover all of `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Strips the factors of `p` from a nonzero integer, returning the count and the cofactor.
pub(crate) fn split_prime_power(n: &BigInt, p: Prime) -> (u64, BigInt) {
    debug_assert!(!n.is_zero());
    let pb = p.to_bigint();
    let mut count = 0;
    let mut rest = n.clone();
    loop {
        let (q, r) = rest.div_rem(&pb);
        if !r.is_zero() {
            return (count, rest);
        }
        rest = q;
        count += 1;
    }
}

/// Valuation of a nonzero integer.
pub fn vp_bigint(n: &BigInt, p: Prime) -> Option<u64> {
    if n.is_zero() {
        None
    } else {
        Some(split_prime_power(n, p).0)
    }
}

/// Valuation as a plain integer, `None` standing for `+∞`.
pub fn vp_int(a: &Rational, p: Prime) -> Option<i64> {
    if a.is_zero() {
        return None;
    }
    let num = split_prime_power(a.numer(), p).0 as i64;
    let den = split_prime_power(a.denom(), p).0 as i64;
    Some(num - den)
}

pub fn vp(a: &Rational, p: Prime) -> ExtRational {
    match vp_int(a, p) {
        Some(v) => ExtRational::from(v),
        None => ExtRational::Infinity,
    }
}

pub fn abs_at_place(a: &Rational, place: Place) -> Rational {
    match place {
        Place::Trivial => {
            if a.is_zero() {
                Rational::zero()
            } else {
                Rational::one()
            }
        }
        Place::Padic(p) => match vp_int(a, p) {
            None => Rational::zero(),
            Some(v) => p.rational_pow(-v),
        },
        Place::RealArchimedean => a.abs(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductFormula {
    pub holds: bool,
    /// The archimedean entry first, then the primes in increasing order.
    pub breakdown: Vec<(Place, Rational)>,
}

fn trial_factor_primes(n: &BigInt, out: &mut Vec<u64>) {
    let mut rest = n.abs().to_u64().expect("guarded");
    let mut d = 2u64;
    while d * d <= rest {
        if rest.is_multiple_of(d) {
            out.push(d);
            while rest.is_multiple_of(d) {
                rest /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        out.push(rest);
    }
}

/// Checks `|a|_∞ · ∏_p |a|_p = |a|_0` with the default guard.
pub fn product_formula_check(a: &Rational) -> Result<ProductFormula, ValuationError> {
    product_formula_check_with_guard(a, DEFAULT_FACTOR_GUARD)
}

/// Numerator and denominator must not exceed `guard` in absolute value; the
/// primes are then found by trial division up to `sqrt(guard)`.
pub fn product_formula_check_with_guard(
    a: &Rational,
    guard: u64,
) -> Result<ProductFormula, ValuationError> {
    for part in [a.numer(), a.denom()] {
        if part.abs() > BigInt::from(guard) {
            return Err(ValuationError::FactorGuardExceeded(part.abs(), guard));
        }
    }
    if a.is_zero() {
        return Ok(ProductFormula {
            holds: true,
            breakdown: vec![(Place::RealArchimedean, Rational::zero())],
        });
    }
    let mut primes = Vec::new();
    trial_factor_primes(a.numer(), &mut primes);
    trial_factor_primes(a.denom(), &mut primes);
    primes.sort_unstable();
    primes.dedup();

    let mut breakdown = vec![(Place::RealArchimedean, abs_at_place(a, Place::RealArchimedean))];
    for q in primes {
        let place = Place::Padic(Prime::new(q)?);
        breakdown.push((place, abs_at_place(a, place)));
    }
    let product = breakdown
        .iter()
        .fold(Rational::one(), |acc, (_, m)| acc * m);
    Ok(ProductFormula {
        holds: product == abs_at_place(a, Place::Trivial),
        breakdown,
    })
}

/// Base-`p` digits of `n`, least significant first.
pub fn base_p_digits(n: &BigUint, p: Prime) -> Vec<u64> {
    let mut digits = Vec::new();
    let pb = BigUint::from(p.get());
    let mut rest = n.clone();
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(&pb);
        digits.push(r.to_u64().expect("digit below p"));
        rest = q;
    }
    digits
}

pub fn digit_sum_base_p(n: u64, p: Prime) -> u64 {
    let mut rest = n;
    let mut sum = 0;
    while rest > 0 {
        sum += rest % p.get();
        rest /= p.get();
    }
    sum
}

/// Legendre's closed form `(n - σ_p(n)) / (p - 1)`.
pub fn vp_factorial(n: u64, p: Prime) -> u64 {
    (n - digit_sum_base_p(n, p)) / (p.get() - 1)
}

/// Integer division rounding towards `-∞` for rationals.
pub fn floor(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

pub fn ceil(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}
