//! Sparse multivariate polynomials over exact rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::valuation::Rational;

/// Exponent tuple to nonzero coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> MultiPoly {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> MultiPoly {
        MultiPoly::from_terms(nvars, [(vec![0; nvars], c)])
    }

    /// The `i`-th indeterminate.
    pub fn variable(nvars: usize, i: usize) -> MultiPoly {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        MultiPoly::from_terms(nvars, [(exps, Rational::one())])
    }

    /// Sums repeated exponents and drops zero coefficients.
    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, Rational)>,
    ) -> MultiPoly {
        let mut out = MultiPoly::zero(nvars);
        for (exps, c) in terms {
            assert_eq!(exps.len(), nvars, "exponent tuple of the wrong length");
            out.add_term(exps, c);
        }
        out
    }

    fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    /// Exponent tuples of the nonzero terms, sorted.
    pub fn support(&self) -> Vec<Vec<u32>> {
        self.terms.keys().cloned().collect()
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        MultiPoly::from_terms(self.nvars, self.terms.iter().map(|(e, x)| (e.clone(), x * c)))
    }

    pub fn pow(&self, n: u32) -> MultiPoly {
        (0..n).fold(MultiPoly::constant(self.nvars, Rational::one()), |acc, _| &acc * self)
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars);
        self.terms.iter().fold(Rational::zero(), |acc, (exps, c)| {
            let mono = exps
                .iter()
                .zip(point)
                .fold(c.clone(), |m, (&e, x)| m * num_traits::pow(x.clone(), e as usize));
            acc + mono
        })
    }

    pub fn partial(&self, var: usize) -> MultiPoly {
        MultiPoly::from_terms(
            self.nvars,
            self.terms.iter().filter(|(e, _)| e[var] > 0).map(|(e, c)| {
                let mut d = e.clone();
                d[var] -= 1;
                (d, c * Rational::from_integer(BigInt::from(e[var])))
            }),
        )
    }

    /// Writes the polynomial with the given variable names.
    pub fn display_with<'a>(&'a self, names: &'a [&'a str]) -> impl fmt::Display + 'a {
        Named { poly: self, names }
    }
}

struct Named<'a> {
    poly: &'a MultiPoly,
    names: &'a [&'a str],
}

impl fmt::Display for Named<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut ordered: Vec<(&Vec<u32>, &Rational)> = self.poly.terms.iter().collect();
        ordered.sort_by(|(a, _), (b, _)| {
            let (da, db) = (a.iter().sum::<u32>(), b.iter().sum::<u32>());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (k, (exps, c)) in ordered.into_iter().enumerate() {
            let mag = c.abs();
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            }
            let mut factors: Vec<String> = Vec::new();
            let is_const = exps.iter().all(|&e| e == 0);
            if !mag.is_one() || is_const {
                factors.push(if mag.is_integer() { mag.to_string() } else { format!("({mag})") });
            }
            for (i, &e) in exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.names[i].to_string()),
                    _ => factors.push(format!("{}^{e}", self.names[i])),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let owned: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        let names: Vec<&str> = owned.iter().map(String::as_str).collect();
        fmt::Display::fmt(&Named { poly: self, names: &names }, f)
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &(-rhs)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = MultiPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let exps = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exps, ca * cb);
            }
        }
        out
    }
}
