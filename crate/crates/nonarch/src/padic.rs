//! Fixed-precision elements of `Q_p` in the relative-precision model.
//!
//! A nonzero value is `p^valuation · unit` with the unit known modulo
//! `p^precision`. Cancellation can leave a value that is zero at the tracked
//! precision without being known to vanish; that state is kept apart from an
//! exact zero.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::valuation::{split_prime_power, Prime, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadicError {
    #[error("operands live over different primes ({0} and {1})")]
    PrimeMismatch(Prime, Prime),
    #[error("division by exact zero")]
    DivisionByZero,
    #[error("divisor is indistinguishable from zero at absolute precision {0}")]
    DivisionByPrecisionZero(i64),
    #[error("value has negative valuation {0}")]
    NegativeValuation(i64),
    #[error("requested {requested} digits but only {available} are known")]
    InsufficientPrecision { requested: i64, available: i64 },
    #[error("precision must be positive")]
    ZeroPrecision,
    #[error("{0} is not a nonzero residue mod {1}")]
    NotAUnitResidue(BigInt, Prime),
    #[error("lifting failed: {0}")]
    Lift(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum State {
    ExactZero,
    /// Congruent to zero modulo `p^abs`, nothing more is known.
    PrecisionZero { abs: i64 },
    Unit { valuation: i64, unit: BigInt, precision: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Padic {
    p: Prime,
    state: State,
}

/// `n mod m` in `[0, m)`.
pub(crate) fn modulo(n: &BigInt, m: &BigInt) -> BigInt {
    n.mod_floor(m)
}

pub(crate) fn inverse_mod(n: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    modulo(n, m).modinv(m)
}

impl Padic {
    pub fn zero(p: Prime) -> Padic {
        Padic { p, state: State::ExactZero }
    }

    pub fn zero_to_precision(p: Prime, abs: i64) -> Padic {
        Padic { p, state: State::PrecisionZero { abs } }
    }

    pub fn one(p: Prime, precision: u32) -> Padic {
        Padic::from_unit_parts(p, 0, BigInt::one(), precision).expect("1 is a unit")
    }

    /// Builds `p^valuation · unit`; the unit is reduced modulo `p^precision`.
    pub fn from_unit_parts(
        p: Prime,
        valuation: i64,
        unit: BigInt,
        precision: u32,
    ) -> Result<Padic, PadicError> {
        if precision == 0 {
            return Err(PadicError::ZeroPrecision);
        }
        let unit = modulo(&unit, &p.pow(precision));
        if (&unit % p.to_bigint()).is_zero() {
            return Err(PadicError::NotAUnitResidue(unit, p));
        }
        Ok(Padic { p, state: State::Unit { valuation, unit, precision } })
    }

    /// The rational `a` to relative precision `precision`.
    pub fn from_rational(a: &Rational, p: Prime, precision: u32) -> Result<Padic, PadicError> {
        if precision == 0 {
            return Err(PadicError::ZeroPrecision);
        }
        if a.is_zero() {
            return Ok(Padic::zero(p));
        }
        let (vn, num) = split_prime_power(a.numer(), p);
        let (vd, den) = split_prime_power(a.denom(), p);
        let modulus = p.pow(precision);
        let inv = inverse_mod(&den, &modulus).expect("cofactor is prime to p");
        let unit = modulo(&(num * inv), &modulus);
        Ok(Padic {
            p,
            state: State::Unit { valuation: vn as i64 - vd as i64, unit, precision },
        })
    }

    pub fn from_integer(n: i64, p: Prime, precision: u32) -> Result<Padic, PadicError> {
        Padic::from_rational(&Rational::from_integer(BigInt::from(n)), p, precision)
    }

    /// The value known modulo `p^abs` whose representative is `a`.
    pub fn approximating(a: &Rational, p: Prime, abs: i64) -> Padic {
        if a.is_zero() {
            return Padic::zero_to_precision(p, abs);
        }
        let (vn, _) = split_prime_power(a.numer(), p);
        let (vd, _) = split_prime_power(a.denom(), p);
        let v = vn as i64 - vd as i64;
        if v >= abs {
            return Padic::zero_to_precision(p, abs);
        }
        Padic::from_rational(a, p, (abs - v) as u32).expect("positive precision")
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    /// `None` for both kinds of zero.
    pub fn valuation(&self) -> Option<i64> {
        match &self.state {
            State::Unit { valuation, .. } => Some(*valuation),
            _ => None,
        }
    }

    pub fn unit(&self) -> Option<&BigInt> {
        match &self.state {
            State::Unit { unit, .. } => Some(unit),
            _ => None,
        }
    }

    pub fn relative_precision(&self) -> Option<u32> {
        match &self.state {
            State::Unit { precision, .. } => Some(*precision),
            _ => None,
        }
    }

    /// `None` means exact (infinite absolute precision).
    pub fn absolute_precision(&self) -> Option<i64> {
        match &self.state {
            State::ExactZero => None,
            State::PrecisionZero { abs } => Some(*abs),
            State::Unit { valuation, precision, .. } => Some(valuation + *precision as i64),
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.state, State::ExactZero)
    }

    pub fn is_zero_to_precision(&self) -> bool {
        matches!(self.state, State::PrecisionZero { .. })
    }

    pub fn is_zero(&self) -> bool {
        !matches!(self.state, State::Unit { .. })
    }

    /// Lower bound for the valuation: exact for nonzero values, the absolute
    /// precision for a zero at precision, `None` for an exact zero.
    pub fn valuation_lower_bound(&self) -> Option<i64> {
        match &self.state {
            State::ExactZero => None,
            State::PrecisionZero { abs } => Some(*abs),
            State::Unit { valuation, .. } => Some(*valuation),
        }
    }

    /// The canonical rational representative `p^valuation · unit`.
    pub fn to_rational(&self) -> Rational {
        match &self.state {
            State::Unit { valuation, unit, .. } => {
                Rational::from_integer(unit.clone()) * self.p.rational_pow(*valuation)
            }
            _ => Rational::zero(),
        }
    }

    fn check_prime(&self, other: &Padic) -> Result<(), PadicError> {
        if self.p != other.p {
            Err(PadicError::PrimeMismatch(self.p, other.p))
        } else {
            Ok(())
        }
    }

    pub fn neg(&self) -> Padic {
        match &self.state {
            State::Unit { valuation, unit, precision } => Padic {
                p: self.p,
                state: State::Unit {
                    valuation: *valuation,
                    unit: modulo(&-unit, &self.p.pow(*precision)),
                    precision: *precision,
                },
            },
            _ => self.clone(),
        }
    }

    pub fn add(&self, other: &Padic) -> Result<Padic, PadicError> {
        self.check_prime(other)?;
        let p = self.p;
        let abs = match (self.absolute_precision(), other.absolute_precision()) {
            (None, _) => return Ok(other.clone()),
            (_, None) => return Ok(self.clone()),
            (Some(a), Some(b)) => a.min(b),
        };
        let terms: Vec<(i64, &BigInt)> = [self, other]
            .iter()
            .filter_map(|x| match &x.state {
                State::Unit { valuation, unit, .. } if *valuation < abs => Some((*valuation, unit)),
                _ => None,
            })
            .collect();
        let Some(low) = terms.iter().map(|(v, _)| *v).min() else {
            return Ok(Padic::zero_to_precision(p, abs));
        };
        let width = (abs - low) as u32;
        let modulus = p.pow(width);
        let sum = terms
            .iter()
            .fold(BigInt::zero(), |acc, (v, u)| acc + *u * p.pow((v - low) as u32));
        let sum = modulo(&sum, &modulus);
        if sum.is_zero() {
            return Ok(Padic::zero_to_precision(p, abs));
        }
        let (shift, unit) = split_prime_power(&sum, p);
        Ok(Padic {
            p,
            state: State::Unit {
                valuation: low + shift as i64,
                unit,
                precision: width - shift as u32,
            },
        })
    }

    pub fn sub(&self, other: &Padic) -> Result<Padic, PadicError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Padic) -> Result<Padic, PadicError> {
        self.check_prime(other)?;
        let p = self.p;
        let state = match (&self.state, &other.state) {
            (State::ExactZero, _) | (_, State::ExactZero) => State::ExactZero,
            (State::PrecisionZero { abs: a }, State::PrecisionZero { abs: b }) => {
                State::PrecisionZero { abs: a + b }
            }
            (State::PrecisionZero { abs }, State::Unit { valuation, .. })
            | (State::Unit { valuation, .. }, State::PrecisionZero { abs }) => {
                State::PrecisionZero { abs: abs + valuation }
            }
            (
                State::Unit { valuation: va, unit: ua, precision: na },
                State::Unit { valuation: vb, unit: ub, precision: nb },
            ) => {
                let precision = (*na).min(*nb);
                State::Unit {
                    valuation: va + vb,
                    unit: modulo(&(ua * ub), &p.pow(precision)),
                    precision,
                }
            }
        };
        Ok(Padic { p, state })
    }

    pub fn inv(&self) -> Result<Padic, PadicError> {
        match &self.state {
            State::ExactZero => Err(PadicError::DivisionByZero),
            State::PrecisionZero { abs } => Err(PadicError::DivisionByPrecisionZero(*abs)),
            State::Unit { valuation, unit, precision } => {
                let modulus = self.p.pow(*precision);
                let inv = inverse_mod(unit, &modulus).expect("units are invertible");
                Ok(Padic {
                    p: self.p,
                    state: State::Unit { valuation: -valuation, unit: inv, precision: *precision },
                })
            }
        }
    }

    pub fn div(&self, other: &Padic) -> Result<Padic, PadicError> {
        self.check_prime(other)?;
        self.mul(&other.inv()?)
    }

    /// `self^exp` by repeated multiplication.
    pub fn pow(&self, exp: u32) -> Padic {
        if exp == 0 {
            return Padic::one(self.p, self.relative_precision().unwrap_or(1));
        }
        let mut acc = self.clone();
        for _ in 1..exp {
            acc = acc.mul(self).expect("same prime");
        }
        acc
    }

    /// The value modulo `p^k` as an integer in `[0, p^k)`.
    pub fn residue(&self, k: u32) -> Result<BigInt, PadicError> {
        if let Some(v) = self.valuation() {
            if v < 0 {
                return Err(PadicError::NegativeValuation(v));
            }
        }
        if let Some(abs) = self.absolute_precision() {
            if abs < k as i64 {
                return Err(PadicError::InsufficientPrecision { requested: k as i64, available: abs });
            }
        }
        let modulus = self.p.pow(k);
        Ok(match &self.state {
            State::Unit { valuation, unit, .. } => {
                modulo(&(unit * self.p.pow(*valuation as u32)), &modulus)
            }
            _ => BigInt::zero(),
        })
    }

    /// Base-`p` digits `d_0 .. d_{k-1}` with canonical representatives in `{0, .., p-1}`.
    pub fn digits(&self, k: u32) -> Result<Vec<u64>, PadicError> {
        let mut rest = self.residue(k)?.to_biguint().expect("residue is nonnegative");
        let p = BigUint::from(self.p.get());
        let mut out = Vec::with_capacity(k as usize);
        for _ in 0..k {
            let (q, r) = rest.div_rem(&p);
            out.push(r.to_u64().expect("digit below p"));
            rest = q;
        }
        Ok(out)
    }

    /// Whether the two values agree modulo `p^k`, using only known digits.
    pub fn agrees_mod(&self, other: &Padic, k: i64) -> bool {
        match self.sub(other) {
            Ok(d) => d.valuation_lower_bound().is_none_or(|v| v >= k),
            Err(_) => false,
        }
    }
}

impl fmt::Display for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.p;
        match (&self.state, self.absolute_precision()) {
            (State::ExactZero, _) => write!(f, "0"),
            (_, Some(abs)) if abs >= 0 && self.valuation().is_none_or(|v| v >= 0) => {
                let r = self.residue(abs as u32).map_err(|_| fmt::Error)?;
                write!(f, "{} mod {}", r, p.pow(abs as u32))
            }
            (_, Some(abs)) => write!(f, "{} + O({p}^{abs})", self.to_rational()),
            (_, None) => unreachable!("only exact zero has infinite precision"),
        }
    }
}

/// A square root of a residue modulo an odd prime by Tonelli–Shanks, or `None`
/// for a non-residue.
pub(crate) fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    use crate::valuation::pow_mod;
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mul = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut probe = t;
        while probe != 1 {
            probe = mul(probe, probe);
            i += 1;
        }
        let mut b = c;
        for _ in 0..(m - i - 1) {
            b = mul(b, b);
        }
        m = i;
        c = mul(b, b);
        t = mul(t, c);
        r = mul(r, b);
    }
    Some(r)
}

fn lift_error(e: crate::hensel::HenselError) -> PadicError {
    PadicError::Lift(e.to_string())
}

/// The Teichmüller representative of `u mod p`: the root of `T^(p-1) - 1`
/// congruent to `u`, found by Hensel lifting.
pub fn teichmuller(u: &BigInt, p: Prime, precision: u32) -> Result<Padic, PadicError> {
    use crate::hensel::{simple_root_lift, PadicPolynomial};
    if precision == 0 {
        return Err(PadicError::ZeroPrecision);
    }
    let residue = modulo(u, &p.to_bigint());
    if residue.is_zero() {
        return Err(PadicError::NotAUnitResidue(u.clone(), p));
    }
    let degree = (p.get() - 1) as usize;
    let mut coeffs = vec![Rational::zero(); degree + 1];
    coeffs[0] = -Rational::one();
    coeffs[degree] += Rational::one();
    let target = precision as i64;
    let phi = PadicPolynomial::from_ratpoly(p, &crate::poly::RatPoly::new(coeffs), target)
        .map_err(lift_error)?;
    simple_root_lift(&phi, &residue, target).map_err(lift_error)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SquareRoot {
    Root(Padic),
    NoRoot,
}

/// A square root in `Q_p`. For odd `p` the returned branch reduces to the
/// smaller of the two residue roots; for `p = 2` it is the root `≡ 1 mod 4`
/// of the unit part, known to one digit less than the input.
pub fn padic_sqrt(x: &Padic) -> Result<SquareRoot, PadicError> {
    use crate::hensel::{newton_lift, simple_root_lift, PadicPolynomial};
    let p = x.p;
    let (valuation, unit, precision) = match &x.state {
        State::ExactZero => return Ok(SquareRoot::Root(Padic::zero(p))),
        State::PrecisionZero { abs } => {
            return Ok(SquareRoot::Root(Padic::zero_to_precision(p, abs.div_euclid(2) + abs.rem_euclid(2))))
        }
        State::Unit { valuation, unit, precision } => (*valuation, unit.clone(), *precision),
    };
    if valuation % 2 != 0 {
        return Ok(SquareRoot::NoRoot);
    }
    let half = valuation / 2;
    let phi = PadicPolynomial::from_ratpoly(
        p,
        &crate::poly::RatPoly::new(vec![-Rational::from_integer(unit.clone()), Rational::zero(), Rational::one()]),
        precision as i64,
    )
    .map_err(lift_error)?;
    if p.get() == 2 {
        let low = modulo(&unit, &BigInt::from(8)).to_u64().expect("small");
        if precision >= 2 && low % 4 == 3 {
            return Ok(SquareRoot::NoRoot);
        }
        if precision < 3 {
            return Err(PadicError::InsufficientPrecision { requested: 3, available: precision as i64 });
        }
        if low != 1 {
            return Ok(SquareRoot::NoRoot);
        }
        let start = Padic::one(p, precision);
        let root = newton_lift(&phi, &start, precision as i64 - 1).map_err(lift_error)?.root;
        let root_unit = root.unit().expect("unit root").clone();
        return Padic::from_unit_parts(p, half, root_unit, precision - 1).map(SquareRoot::Root);
    }
    let pu = p.get();
    let residue = modulo(&unit, &p.to_bigint()).to_u64().expect("below p");
    let Some(r) = sqrt_mod_prime(residue, pu) else {
        return Ok(SquareRoot::NoRoot);
    };
    let branch = r.min(pu - r);
    let root = simple_root_lift(&phi, &BigInt::from(branch), precision as i64).map_err(lift_error)?;
    let root_unit = root.unit().expect("unit root").clone();
    Padic::from_unit_parts(p, half, root_unit, precision).map(SquareRoot::Root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valuation::{frac, int};

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn from_rational_examples() {
        assert!(Padic::from_rational(&int(0), p(7), 10).unwrap().is_exact_zero());

        let third = Padic::from_rational(&frac(1, 3), p(2), 4).unwrap();
        assert_eq!(third.valuation(), Some(0));
        assert_eq!(third.unit(), Some(&BigInt::from(11)));

        let fifty = Padic::from_rational(&int(50), p(5), 3).unwrap();
        assert_eq!(fifty.valuation(), Some(2));
        assert_eq!(fifty.unit(), Some(&BigInt::from(2)));
    }

    #[test]
    fn ring_op_examples() {
        let three = Padic::from_integer(3, p(3), 5).unwrap();
        let nine = three.mul(&three).unwrap();
        assert_eq!(nine.valuation(), Some(2));
        assert_eq!(nine.unit(), Some(&BigInt::one()));

        let one = Padic::from_integer(1, p(5), 4).unwrap();
        let minus_one = Padic::from_integer(-1, p(5), 4).unwrap();
        let sum = one.add(&minus_one).unwrap();
        assert!(sum.is_zero_to_precision());
        assert!(!sum.is_exact_zero());
        assert_eq!(sum.absolute_precision(), Some(4));

        let q = Padic::from_integer(1, p(2), 4)
            .unwrap()
            .div(&Padic::from_integer(3, p(2), 4).unwrap())
            .unwrap();
        assert_eq!(q, Padic::from_rational(&frac(1, 3), p(2), 4).unwrap());
    }

    #[test]
    fn cancellation_lowers_precision() {
        let x = Padic::from_integer(1, p(5), 6).unwrap();
        let y = Padic::from_integer(26, p(5), 6).unwrap();
        let d = y.sub(&x).unwrap();
        assert_eq!(d.valuation(), Some(2));
        assert_eq!(d.relative_precision(), Some(4));
        assert_eq!(d.absolute_precision(), Some(6));
    }

    #[test]
    fn division_by_zero_kinds() {
        let x = Padic::from_integer(3, p(5), 4).unwrap();
        assert_eq!(x.div(&Padic::zero(p(5))), Err(PadicError::DivisionByZero));
        assert_eq!(
            x.div(&Padic::zero_to_precision(p(5), 3)),
            Err(PadicError::DivisionByPrecisionZero(3))
        );
        assert!(matches!(
            x.add(&Padic::zero(p(7))),
            Err(PadicError::PrimeMismatch(_, _))
        ));
    }

    #[test]
    fn digit_examples() {
        assert_eq!(Padic::from_integer(11, p(2), 8).unwrap().digits(4).unwrap(), vec![1, 1, 0, 1]);
        assert_eq!(Padic::zero(p(3)).digits(3).unwrap(), vec![0, 0, 0]);
        assert_eq!(Padic::from_integer(-1, p(5), 4).unwrap().digits(4).unwrap(), vec![4, 4, 4, 4]);
        assert!(matches!(
            Padic::from_rational(&frac(1, 5), p(5), 4).unwrap().digits(2),
            Err(PadicError::NegativeValuation(-1))
        ));
        assert!(matches!(
            Padic::from_integer(7, p(5), 2).unwrap().digits(3),
            Err(PadicError::InsufficientPrecision { .. })
        ));
    }

    #[test]
    fn approximating_truncates() {
        let x = Padic::approximating(&int(57 + 125 * 3), p(5), 3);
        assert_eq!(x.residue(3).unwrap(), BigInt::from(57));
        assert!(Padic::approximating(&int(250), p(5), 3).is_zero_to_precision());
        let tiny = Padic::approximating(&frac(7, 25), p(5), 1);
        assert_eq!(tiny.valuation(), Some(-2));
        assert_eq!(tiny.relative_precision(), Some(3));
    }

    #[test]
    fn display_forms() {
        let x = Padic::from_integer(57, p(5), 3).unwrap();
        assert_eq!(x.to_string(), "57 mod 125");
        let y = Padic::from_rational(&frac(1, 5), p(5), 2).unwrap();
        assert_eq!(y.to_string(), "1/5 + O(5^1)");
        assert_eq!(Padic::zero(p(5)).to_string(), "0");
    }

    #[test]
    fn tonelli_shanks() {
        for &q in &[3u64, 5, 7, 13, 17, 41, 97] {
            for a in 1..q {
                let brute = (1..q).find(|x| x * x % q == a);
                match sqrt_mod_prime(a, q) {
                    Some(r) => assert_eq!(r * r % q, a),
                    None => assert!(brute.is_none()),
                }
            }
        }
    }

    fn teich_by_powering(u: u64, q: Prime, n: u32) -> BigInt {
        // u^(p^(n-1)) mod p^n is the Teichmüller representative
        let modulus = q.pow(n);
        let exp = q.pow(n - 1);
        BigInt::from(u).modpow(&exp, &modulus)
    }

    #[test]
    fn teichmuller_examples() {
        let t = teichmuller(&BigInt::from(2), p(5), 3).unwrap();
        assert_eq!(t.residue(3).unwrap(), BigInt::from(57));
        assert_eq!(t.to_string(), "57 mod 125");
        // oracle: brute force x ≡ 2 mod 5 with x^4 ≡ 1 mod 125
        let brute: Vec<u64> = (0..125u64).filter(|x| x % 5 == 2 && x.pow(4) % 125 == 1).collect();
        assert_eq!(brute, vec![57]);
        for q in [2u64, 3, 7, 11] {
            let one = teichmuller(&BigInt::from(1), p(q), 6).unwrap();
            assert_eq!(one.residue(6).unwrap(), BigInt::one());
            if q > 2 {
                let minus = teichmuller(&BigInt::from(q - 1), p(q), 6).unwrap();
                assert_eq!(minus.residue(6).unwrap(), p(q).pow(6) - 1);
            }
        }
        assert!(matches!(
            teichmuller(&BigInt::from(10), p(5), 3),
            Err(PadicError::NotAUnitResidue(..))
        ));
    }

    #[test]
    fn sqrt_examples() {
        let two = Padic::from_integer(2, p(7), 3).unwrap();
        let SquareRoot::Root(r) = padic_sqrt(&two).unwrap() else { panic!("2 is a 7-adic square") };
        assert_eq!(r.residue(3).unwrap(), BigInt::from(108));
        assert_eq!(108 * 108 % 343, 2);

        let m1 = Padic::from_integer(-1, p(2), 10).unwrap();
        assert_eq!(padic_sqrt(&m1).unwrap(), SquareRoot::NoRoot);

        let m1 = Padic::from_integer(-1, p(5), 2).unwrap();
        let SquareRoot::Root(r) = padic_sqrt(&m1).unwrap() else { panic!("-1 is a 5-adic square") };
        assert_eq!(r.residue(2).unwrap(), BigInt::from(7));

        let seventeen = Padic::from_integer(17 * 4, p(2), 10).unwrap();
        let SquareRoot::Root(r) = padic_sqrt(&seventeen).unwrap() else { panic!("68 is a 2-adic square") };
        assert_eq!(r.valuation(), Some(1));
        assert_eq!(r.relative_precision(), Some(9));
        assert!(r.mul(&r).unwrap().agrees_mod(&seventeen, 10));

        assert_eq!(padic_sqrt(&Padic::from_integer(5, p(2), 10).unwrap()).unwrap(), SquareRoot::NoRoot);
        assert_eq!(padic_sqrt(&Padic::from_integer(3, p(7), 4).unwrap()).unwrap(), SquareRoot::NoRoot);
        assert_eq!(padic_sqrt(&Padic::from_integer(7, p(7), 4).unwrap()).unwrap(), SquareRoot::NoRoot);
        assert!(matches!(
            padic_sqrt(&Padic::from_integer(1, p(2), 2).unwrap()),
            Err(PadicError::InsufficientPrecision { .. })
        ));
        assert_eq!(padic_sqrt(&Padic::zero(p(3))).unwrap(), SquareRoot::Root(Padic::zero(p(3))));
    }

    use proptest::prelude::*;

    fn small_prime() -> impl Strategy<Value = u64> {
        prop::sample::select(vec![2u64, 3, 5, 7, 11, 13])
    }

    fn coprime_rational(q: u64) -> impl Strategy<Value = Rational> {
        (-500i64..500, 1i64..60).prop_map(move |(n, d)| {
            let d = if d % q as i64 == 0 { d + 1 } else { d };
            frac(n, d)
        })
    }

    proptest! {
        #[test]
        fn from_rational_is_a_ring_map(
            (q, a, b) in small_prime().prop_flat_map(|q| (Just(q), coprime_rational(q), coprime_rational(q))),
            k in 1u32..12,
        ) {
            let q = p(q);
            let to = |x: &Rational| Padic::approximating(x, q, k as i64);
            prop_assert!(to(&a).add(&to(&b)).unwrap().agrees_mod(&to(&(&a + &b)), k as i64));
            prop_assert!(to(&a).sub(&to(&b)).unwrap().agrees_mod(&to(&(&a - &b)), k as i64));
            prop_assert!(to(&a).mul(&to(&b)).unwrap().agrees_mod(&to(&(&a * &b)), k as i64));
        }

        #[test]
        fn valuation_laws(q in small_prime(), a in -2000i64..2000, b in -2000i64..2000, k in 1u32..8) {
            prop_assume!(a != 0 && b != 0);
            let q = p(q);
            let x = Padic::from_integer(a, q, k).unwrap();
            let y = Padic::from_integer(b, q, k).unwrap();
            let (vx, vy) = (x.valuation().unwrap(), y.valuation().unwrap());
            prop_assert_eq!(x.mul(&y).unwrap().valuation(), Some(vx + vy));
            let sum = x.add(&y).unwrap();
            prop_assert!(sum.valuation_lower_bound().is_none_or(|v| v >= vx.min(vy)));
            if vx != vy {
                prop_assert_eq!(sum.valuation(), Some(vx.min(vy)));
            }
        }

        #[test]
        fn digits_round_trip(q in small_prime(), a in 0i64..100_000, k in 1u32..10) {
            let q = p(q);
            let x = Padic::from_integer(a, q, 20).unwrap_or_else(|_| Padic::zero(q));
            let x = if a == 0 { Padic::zero(q) } else { x };
            let digits = x.digits(k).unwrap();
            let back = digits.iter().rev().fold(BigInt::zero(), |acc, &d| acc * q.to_bigint() + d);
            prop_assert_eq!(back, modulo(&BigInt::from(a), &q.pow(k)));
        }

        #[test]
        fn teichmuller_is_multiplicative_and_matches_powering(
            (q, u, w) in prop::sample::select(vec![3u64, 5, 7, 11, 13])
                .prop_flat_map(|q| (Just(q), 1..q, 1..q)),
            n in 1u32..10,
        ) {
            let q = p(q);
            let tu = teichmuller(&BigInt::from(u), q, n).unwrap();
            let tw = teichmuller(&BigInt::from(w), q, n).unwrap();
            let tuw = teichmuller(&BigInt::from(u * w % q.get()), q, n).unwrap();
            prop_assert!(tu.mul(&tw).unwrap().agrees_mod(&tuw, n as i64));
            prop_assert_eq!(tu.residue(n).unwrap(), teich_by_powering(u, q, n));
        }

        #[test]
        fn sqrt_squares_back_and_matches_brute_force(q in small_prime(), a in 1i64..2000, n in 3u32..9) {
            let q = p(q);
            let x = Padic::from_integer(a, q, n).unwrap();
            let v = x.valuation().unwrap();
            match padic_sqrt(&x).unwrap() {
                SquareRoot::Root(r) => {
                    let abs = v + r.relative_precision().unwrap() as i64;
                    prop_assert!(r.mul(&r).unwrap().agrees_mod(&x, abs));
                }
                SquareRoot::NoRoot => {
                    // oracle: the unit part is not a square mod p^3 (mod 8 for p = 2),
                    // or the valuation is odd
                    let unit = x.unit().unwrap().clone();
                    let m = if q.get() == 2 { BigInt::from(8) } else { q.pow(3) };
                    let unit_mod = modulo(&unit, &m);
                    let m64 = m.to_u64().unwrap();
                    let square = (0..m64)
                        .filter(|y| y % q.get() != 0)
                        .any(|y| BigInt::from(y * y % m64) == unit_mod);
                    prop_assert!(v % 2 != 0 || !square);
                }
            }
        }
    }
}
