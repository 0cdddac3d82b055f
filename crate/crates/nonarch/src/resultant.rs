//! Sylvester resultants and discriminants over several coefficient domains.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{bareiss_determinant, padic_determinant, residue_determinant, LinalgError};
use crate::padic::{modulo, Padic};
use crate::valuation::{Prime, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResultantError {
    #[error("polynomial has a nonzero coefficient of degree {degree} above its formal degree {bound}")]
    DegreeBound { degree: usize, bound: usize },
    #[error("the discriminant needs a formal degree of at least 1")]
    ZeroFormalDegree,
    #[error("coefficient does not belong to the domain: {0}")]
    ForeignElement(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// An exact commutative coefficient ring with its own determinant strategy.
pub trait CoeffDomain {
    type Elem: Clone + fmt::Debug + PartialEq;

    fn zero(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn check(&self, a: &Self::Elem) -> Result<(), ResultantError>;
    fn determinant(&self, m: Vec<Vec<Self::Elem>>) -> Result<Self::Elem, ResultantError>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Integers;

#[derive(Debug, Clone, Copy, Default)]
pub struct Rationals;

/// `Z/p^k`, elements kept in `[0, p^k)`.
#[derive(Debug, Clone)]
pub struct ResidueRing {
    p: Prime,
    k: u32,
    modulus: BigInt,
}

impl ResidueRing {
    pub fn new(p: Prime, k: u32) -> ResidueRing {
        ResidueRing { p, k, modulus: p.pow(k) }
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn reduce(&self, n: &BigInt) -> BigInt {
        modulo(n, &self.modulus)
    }
}

/// `Q_p` at a default relative precision used for integer constants.
#[derive(Debug, Clone, Copy)]
pub struct PadicField {
    pub p: Prime,
    pub precision: u32,
}

impl CoeffDomain for Integers {
    type Elem = BigInt;
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn from_i64(&self, n: i64) -> BigInt {
        BigInt::from(n)
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn check(&self, _: &BigInt) -> Result<(), ResultantError> {
        Ok(())
    }
    fn determinant(&self, m: Vec<Vec<BigInt>>) -> Result<BigInt, ResultantError> {
        Ok(bareiss_determinant(
            m,
            BigInt::zero(),
            BigInt::one(),
            |a, b| a - b,
            |a, b| a * b,
            |a, b| a / b,
            |a| -a,
        ))
    }
}

impl CoeffDomain for Rationals {
    type Elem = Rational;
    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn from_i64(&self, n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn check(&self, _: &Rational) -> Result<(), ResultantError> {
        Ok(())
    }
    fn determinant(&self, m: Vec<Vec<Rational>>) -> Result<Rational, ResultantError> {
        Ok(bareiss_determinant(
            m,
            Rational::zero(),
            Rational::one(),
            |a, b| a - b,
            |a, b| a * b,
            |a, b| a / b,
            |a| -a,
        ))
    }
}

impl CoeffDomain for ResidueRing {
    type Elem = BigInt;
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn from_i64(&self, n: i64) -> BigInt {
        self.reduce(&BigInt::from(n))
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.reduce(&(a + b))
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.reduce(&(a * b))
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn check(&self, a: &BigInt) -> Result<(), ResultantError> {
        if a < &BigInt::zero() || a >= &self.modulus {
            Err(ResultantError::ForeignElement(format!("{a} is not reduced mod {}", self.modulus)))
        } else {
            Ok(())
        }
    }
    fn determinant(&self, m: Vec<Vec<BigInt>>) -> Result<BigInt, ResultantError> {
        Ok(residue_determinant(m, self.p, self.k))
    }
}

impl CoeffDomain for PadicField {
    type Elem = Padic;
    fn zero(&self) -> Padic {
        Padic::zero(self.p)
    }
    fn from_i64(&self, n: i64) -> Padic {
        Padic::from_integer(n, self.p, self.precision).expect("positive precision")
    }
    fn add(&self, a: &Padic, b: &Padic) -> Padic {
        a.add(b).expect("checked prime")
    }
    fn mul(&self, a: &Padic, b: &Padic) -> Padic {
        a.mul(b).expect("checked prime")
    }
    fn is_zero(&self, a: &Padic) -> bool {
        a.is_zero()
    }
    fn check(&self, a: &Padic) -> Result<(), ResultantError> {
        if a.prime() != self.p {
            Err(ResultantError::ForeignElement(format!("{a} lives over {}", a.prime())))
        } else {
            Ok(())
        }
    }
    fn determinant(&self, m: Vec<Vec<Padic>>) -> Result<Padic, ResultantError> {
        Ok(padic_determinant(m, self.p, self.precision)?)
    }
}

fn check_poly<D: CoeffDomain>(
    domain: &D,
    poly: &[D::Elem],
    bound: usize,
) -> Result<(), ResultantError> {
    for (degree, c) in poly.iter().enumerate() {
        domain.check(c)?;
        if degree > bound && !domain.is_zero(c) {
            return Err(ResultantError::DegreeBound { degree, bound });
        }
    }
    Ok(())
}

/// The Sylvester matrix: `q_deg` rows carrying `P` from its formal leading
/// coefficient down, then `p_deg` rows carrying `Q`, each row shifted one
/// column to the right of the previous one.
pub fn sylvester_matrix<D: CoeffDomain>(
    domain: &D,
    p: &[D::Elem],
    q: &[D::Elem],
    p_deg: usize,
    q_deg: usize,
) -> Vec<Vec<D::Elem>> {
    let n = p_deg + q_deg;
    let coeff = |poly: &[D::Elem], i: usize| poly.get(i).cloned().unwrap_or_else(|| domain.zero());
    let mut rows = Vec::with_capacity(n);
    for shift in 0..q_deg {
        let mut row = vec![domain.zero(); n];
        for j in 0..=p_deg {
            row[shift + j] = coeff(p, p_deg - j);
        }
        rows.push(row);
    }
    for shift in 0..p_deg {
        let mut row = vec![domain.zero(); n];
        for j in 0..=q_deg {
            row[shift + j] = coeff(q, q_deg - j);
        }
        rows.push(row);
    }
    rows
}

/// `Res_{p_deg, q_deg}(P, Q)`; coefficient slices are in increasing degree.
pub fn resultant<D: CoeffDomain>(
    domain: &D,
    p: &[D::Elem],
    q: &[D::Elem],
    p_deg: usize,
    q_deg: usize,
) -> Result<D::Elem, ResultantError> {
    check_poly(domain, p, p_deg)?;
    check_poly(domain, q, q_deg)?;
    domain.determinant(sylvester_matrix(domain, p, q, p_deg, q_deg))
}

/// `Res_{d, d-1}(φ, φ')`. With this row order the value equals `∏ φ'(a_j)`
/// over the roots of a monic `φ`, i.e. `(-1)^(d(d-1)/2) ∏_{i<j} (a_j - a_i)^2`.
pub fn discriminant<D: CoeffDomain>(
    domain: &D,
    phi: &[D::Elem],
    d: usize,
) -> Result<D::Elem, ResultantError> {
    if d == 0 {
        return Err(ResultantError::ZeroFormalDegree);
    }
    check_poly(domain, phi, d)?;
    let derivative: Vec<D::Elem> = phi
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| domain.mul(&domain.from_i64(i as i64), c))
        .collect();
    resultant(domain, phi, &derivative, d, d - 1)
}
