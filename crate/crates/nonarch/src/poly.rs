//! Dense univariate polynomials over exact rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::valuation::Rational;

/// Coefficients in increasing degree; trailing zeros are stripped, so the zero
/// polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> RatPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> RatPoly {
        RatPoly::new(coeffs.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect())
    }

    pub fn zero() -> RatPoly {
        RatPoly::default()
    }

    pub fn one() -> RatPoly {
        RatPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> RatPoly {
        RatPoly::new(vec![c])
    }

    /// `c · T^n`.
    pub fn monomial(c: Rational, n: usize) -> RatPoly {
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[n] = c;
        RatPoly::new(coeffs)
    }

    /// The monic polynomial with the given roots.
    pub fn from_roots(roots: &[Rational]) -> RatPoly {
        roots.iter().fold(RatPoly::one(), |acc, r| {
            &acc * &RatPoly::new(vec![-r.clone(), Rational::one()])
        })
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `T^n`, zero past the degree.
    pub fn coeff(&self, n: usize) -> Rational {
        self.coeffs.get(n).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, n: u32) -> RatPoly {
        (0..n).fold(RatPoly::one(), |acc, _| &acc * self)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &RatPoly) -> (RatPoly, RatPoly) {
        let d = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().expect("nonzero").clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return (RatPoly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - d];
        for k in (0..quot.len()).rev() {
            let q = &rem[k + d] / &lead;
            if !q.is_zero() {
                for (i, c) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] -= &q * c;
                }
            }
            quot[k] = q;
        }
        rem.truncate(d);
        (RatPoly::new(quot), RatPoly::new(rem))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        match a.leading().cloned() {
            Some(lead) => a.scale(&lead.recip()),
            None => a,
        }
    }

    /// `φ(T + a)`.
    pub fn shift(&self, a: &Rational) -> RatPoly {
        let step = RatPoly::new(vec![a.clone(), Rational::one()]);
        self.coeffs
            .iter()
            .rev()
            .fold(RatPoly::zero(), |acc, c| &(&acc * &step) + &RatPoly::constant(c.clone()))
    }

    /// `φ(c · T)`.
    pub fn dilate(&self, c: &Rational) -> RatPoly {
        let mut power = Rational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for coeff in &self.coeffs {
            out.push(coeff * &power);
            power *= c;
        }
        RatPoly::new(out)
    }

    /// Coefficients below `T^n`.
    pub fn truncate(&self, n: usize) -> RatPoly {
        RatPoly::new(self.coeffs.iter().take(n).cloned().collect())
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// Writes `Σ c_i var^i` from the top degree down, e.g. `T^2 - 6*T + 5`.
pub(crate) fn write_terms(
    f: &mut fmt::Formatter<'_>,
    coeffs: &[Rational],
    var: &str,
) -> fmt::Result {
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
        if first {
            if sign == "-" {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {sign} ")?;
        }
        first = false;
        let show_coeff = !mag.is_one() || i == 0;
        if show_coeff {
            if mag.is_integer() {
                write!(f, "{mag}")?;
            } else {
                write!(f, "({mag})")?;
            }
        }
        if i > 0 {
            if show_coeff {
                write!(f, "*")?;
            }
            write!(f, "{var}")?;
            if i > 1 {
                write!(f, "^{i}")?;
            }
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.coeffs, "T")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valuation::{frac, int};

    #[test]
    fn arithmetic_and_display() {
        let p = RatPoly::from_ints(&[5, -6, 1]);
        assert_eq!(p.to_string(), "T^2 - 6*T + 5");
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.eval(&int(5)), int(0));
        assert_eq!(p.derivative(), RatPoly::from_ints(&[-6, 2]));
        assert_eq!(&RatPoly::from_ints(&[-1, 1]) * &RatPoly::from_ints(&[-5, 1]), p);
        assert_eq!(RatPoly::new(vec![frac(-1, 2), int(0)]).to_string(), "-(1/2)");
    }

    #[test]
    fn division_and_gcd() {
        let a = RatPoly::from_roots(&[int(1), int(2), int(3)]);
        let b = RatPoly::from_roots(&[int(2), int(5)]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree() < b.degree());
        assert_eq!(a.gcd(&b), RatPoly::from_roots(&[int(2)]));
        assert_eq!(a.gcd(&RatPoly::from_ints(&[7])), RatPoly::one());
    }

    #[test]
    fn shift_and_dilate() {
        let p = RatPoly::from_ints(&[0, 0, 1]);
        assert_eq!(p.shift(&int(1)), RatPoly::from_ints(&[1, 2, 1]));
        assert_eq!(p.dilate(&int(3)), RatPoly::from_ints(&[0, 0, 9]));
    }
}
