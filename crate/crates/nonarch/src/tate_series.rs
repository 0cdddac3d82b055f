//! Truncated restricted power series on the closed ball of radius `p^(-s)`.
//!
//! A series is stored as `c_0, ..., c_M` and stands for any series agreeing
//! with it modulo `T^(M+1)`. Operations are exact on the stored coefficients;
//! where the result depends on the unknown tail, the doc comment says which
//! coefficients can be trusted.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::hensel::{lift_factor_pair, HenselError};
use crate::newton_polygon::NewtonPolygon;
use crate::poly::RatPoly;
use crate::valuation::{ceil, int, vp_int, ExtRational, Prime, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("operands live over different primes ({0} and {1})")]
    PrimeMismatch(Prime, Prime),
    #[error("radius exponents differ ({0} and {1})")]
    RadiusMismatch(Rational, Rational),
    #[error("series is not a unit on the ball")]
    NotAUnit,
    #[error("shift {0} lies outside the ball")]
    RadiusViolation(Rational),
    #[error("inner series does not map the ball into the outer series' ball")]
    ConvergenceViolation,
    #[error("leading coefficient of the divisor does not dominate its Gauss norm")]
    DominanceFails,
    #[error("declared degree {declared} differs from the divisor's degree {actual:?}")]
    DegreeMismatch { declared: usize, actual: Option<usize> },
    #[error("zero series")]
    ZeroSeries,
    #[error("constant term must be nonzero")]
    ZeroConstantTerm,
    #[error(transparent)]
    Hensel(#[from] HenselError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    p: Prime,
    coeffs: Vec<Rational>,
    radius: Rational,
}

/// `w_s(φ) = min_n (v(c_n) + n s)` with the last index attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussNorm {
    pub w: ExtRational,
    pub argmin_last: Option<usize>,
}

fn weighted(c: &Rational, n: usize, s: &Rational, p: Prime) -> Option<Rational> {
    vp_int(c, p).map(|v| int(v) + int(n as i64) * s)
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

impl TruncatedSeries {
    /// Keeps `c_0..c_order`, padding with zeros.
    pub fn new(p: Prime, mut coeffs: Vec<Rational>, order: usize, radius: Rational) -> TruncatedSeries {
        coeffs.resize(order + 1, Rational::zero());
        TruncatedSeries { p, coeffs, radius }
    }

    pub fn from_poly(p: Prime, poly: &RatPoly, order: usize, radius: Rational) -> TruncatedSeries {
        TruncatedSeries::new(p, poly.coeffs().to_vec(), order, radius)
    }

    /// `Σ_{n≤M} T^n / n!`.
    pub fn exp(p: Prime, order: usize, radius: Rational) -> TruncatedSeries {
        let mut fact = BigInt::one();
        let coeffs = (0..=order)
            .map(|n| {
                if n > 0 {
                    fact *= BigInt::from(n);
                }
                Rational::new(BigInt::one(), fact.clone())
            })
            .collect();
        TruncatedSeries::new(p, coeffs, order, radius)
    }

    /// `log(1 + T) = Σ_{n≥1} (-1)^(n+1) T^n / n`.
    pub fn log1p(p: Prime, order: usize, radius: Rational) -> TruncatedSeries {
        let coeffs = (0..=order)
            .map(|n| match n {
                0 => Rational::zero(),
                _ if n % 2 == 1 => Rational::new(BigInt::one(), BigInt::from(n)),
                _ => Rational::new(-BigInt::one(), BigInt::from(n)),
            })
            .collect();
        TruncatedSeries::new(p, coeffs, order, radius)
    }

    /// `log(1 + T) / T = Σ_{n≥0} (-1)^n T^n / (n + 1)`.
    pub fn log1p_over_t(p: Prime, order: usize, radius: Rational) -> TruncatedSeries {
        let coeffs = (0..=order)
            .map(|n| {
                let sign = if n % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                Rational::new(sign, BigInt::from(n + 1))
            })
            .collect();
        TruncatedSeries::new(p, coeffs, order, radius)
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// The exponent `s` of the radius `p^(-s)`.
    pub fn radius_exponent(&self) -> &Rational {
        &self.radius
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Rational {
        self.coeffs.get(n).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn to_poly(&self) -> RatPoly {
        RatPoly::new(self.coeffs.clone())
    }

    /// `(n, v(c_n))` over the nonzero stored coefficients.
    pub fn points(&self) -> Vec<(i64, Rational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter_map(|(n, c)| vp_int(c, self.p).map(|v| (n as i64, int(v))))
            .collect()
    }

    pub fn with_radius(&self, radius: Rational) -> TruncatedSeries {
        TruncatedSeries { radius, ..self.clone() }
    }

    pub fn gauss_norm_v(&self) -> GaussNorm {
        let mut best: Option<(Rational, usize)> = None;
        for (n, c) in self.coeffs.iter().enumerate() {
            if let Some(w) = weighted(c, n, &self.radius, self.p) {
                if best.as_ref().is_none_or(|(b, _)| w <= *b) {
                    best = Some((w, n));
                }
            }
        }
        match best {
            Some((w, n)) => GaussNorm { w: w.into(), argmin_last: Some(n) },
            None => GaussNorm { w: ExtRational::Infinity, argmin_last: None },
        }
    }

    fn compatible(&self, other: &TruncatedSeries) -> Result<(), SeriesError> {
        if self.p != other.p {
            return Err(SeriesError::PrimeMismatch(self.p, other.p));
        }
        if self.radius != other.radius {
            return Err(SeriesError::RadiusMismatch(self.radius.clone(), other.radius.clone()));
        }
        Ok(())
    }

    pub fn add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
        self.compatible(other)?;
        let m = self.order().min(other.order());
        let coeffs = (0..=m).map(|n| &self.coeffs[n] + &other.coeffs[n]).collect();
        Ok(TruncatedSeries::new(self.p, coeffs, m, self.radius.clone()))
    }

    pub fn neg(&self) -> TruncatedSeries {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|c| -c).collect(), ..self.clone() }
    }

    pub fn sub(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
        self.compatible(other)?;
        let m = self.order().min(other.order());
        let mut coeffs = vec![Rational::zero(); m + 1];
        for (i, a) in self.coeffs.iter().take(m + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(m + 1 - i).enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Ok(TruncatedSeries::new(self.p, coeffs, m, self.radius.clone()))
    }

    /// A series is a unit on the ball when its constant term strictly
    /// dominates every other term.
    pub fn is_unit(&self) -> bool {
        let Some(v0) = vp_int(&self.coeffs[0], self.p) else { return false };
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .all(|(n, c)| weighted(c, n, &self.radius, self.p).is_none_or(|w| w > int(v0)))
    }

    /// Inverse by the geometric series in `1 - φ/c_0`; exact modulo `T^(M+1)`.
    pub fn invert(&self) -> Result<TruncatedSeries, SeriesError> {
        if !self.is_unit() {
            return Err(SeriesError::NotAUnit);
        }
        let c0 = self.coeffs[0].clone();
        let m = self.order();
        let one = TruncatedSeries::new(self.p, vec![Rational::one()], m, self.radius.clone());
        let scaled = TruncatedSeries::new(
            self.p,
            self.coeffs.iter().map(|c| c / &c0).collect(),
            m,
            self.radius.clone(),
        );
        let u = one.sub(&scaled)?;
        let mut sum = one.clone();
        let mut power = one;
        // u has no constant term, so u^(M+1) vanishes modulo T^(M+1)
        for _ in 0..m {
            power = power.mul(&u)?;
            sum = sum.add(&power)?;
        }
        Ok(TruncatedSeries {
            coeffs: sum.coeffs.iter().map(|c| c / &c0).collect(),
            ..sum
        })
    }

    /// `φ(a + T)` from the stored coefficients; `v(a) ≥ s` keeps `a` in the
    /// ball. Coefficient `n` omits the tail contributions `c_k`, `k > M`.
    pub fn taylor_shift(&self, a: &Rational) -> Result<TruncatedSeries, SeriesError> {
        if vp_int(a, self.p).is_some_and(|v| int(v) < self.radius) {
            return Err(SeriesError::RadiusViolation(a.clone()));
        }
        let m = self.order();
        let powers: Vec<Rational> = std::iter::successors(Some(Rational::one()), |x| Some(x * a))
            .take(m + 1)
            .collect();
        let coeffs = (0..=m)
            .map(|n| {
                (n..=m).fold(Rational::zero(), |acc, k| {
                    acc + &self.coeffs[k] * Rational::from_integer(binomial(k, n)) * &powers[k - n]
                })
            })
            .collect();
        Ok(TruncatedSeries::new(self.p, coeffs, m, self.radius.clone()))
    }

    /// `φ(ψ(T))` by Horner over the stored coefficients of `φ`, on `ψ`'s ball.
    /// Requires `w_t(ψ) ≥ s`: `ψ` maps its ball into `φ`'s.
    pub fn compose(&self, inner: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
        if self.p != inner.p {
            return Err(SeriesError::PrimeMismatch(self.p, inner.p));
        }
        let fits = match inner.gauss_norm_v().w {
            ExtRational::Infinity => true,
            ExtRational::Finite(w) => w >= self.radius,
        };
        if !fits {
            return Err(SeriesError::ConvergenceViolation);
        }
        let m = self.order().min(inner.order());
        let inner = TruncatedSeries::new(inner.p, inner.coeffs.clone(), m, inner.radius.clone());
        let mut acc = TruncatedSeries::new(self.p, Vec::new(), m, inner.radius.clone());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&inner)?;
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// `φ = P ψ + ρ` with `deg ρ < d`, for `P` whose degree-`d` term attains
    /// its Gauss norm. Each round divides the part above `T^d` by the leading
    /// term and pushes the correction through the lower terms of `P`, which
    /// lowers the degree, so the truncation is divided exactly.
    pub fn divide_by_poly(
        &self,
        divisor: &RatPoly,
        d: usize,
    ) -> Result<(TruncatedSeries, RatPoly), SeriesError> {
        if divisor.degree() != Some(d) {
            return Err(SeriesError::DegreeMismatch { declared: d, actual: divisor.degree() });
        }
        let as_series = TruncatedSeries::from_poly(self.p, divisor, d, self.radius.clone());
        let lead = divisor.leading().expect("nonzero").clone();
        if as_series.gauss_norm_v().w != weighted(&lead, d, &self.radius, self.p).expect("nonzero").into() {
            return Err(SeriesError::DominanceFails);
        }
        let lower = divisor.truncate(d);
        let mut rest = self.to_poly();
        let mut quotient = RatPoly::zero();
        let mut remainder = RatPoly::zero();
        while !rest.is_zero() {
            let high = RatPoly::new(rest.coeffs().iter().skip(d).map(|c| c / &lead).collect());
            remainder = &remainder + &rest.truncate(d);
            quotient = &quotient + &high;
            rest = -&(&high * &lower);
        }
        let m = self.order();
        Ok((TruncatedSeries::from_poly(self.p, &quotient, m, self.radius.clone()), remainder))
    }
}

/// Result of Weierstrass preparation `φ ≈ ψ P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preparation {
    /// Monic of degree `N`, the last index attaining the Gauss norm.
    pub poly: RatPoly,
    /// A unit on the ball; coefficients up to `M - N` are meaningful.
    pub unit: TruncatedSeries,
    /// `w_s(φ_M - P ψ)`.
    pub residual: ExtRational,
}

/// Weierstrass preparation of the truncation: split `φ_M` into a monic
/// degree-`N` factor holding the zeros in the ball and a unit, by Newton
/// iteration from the split of the coefficient list at `N`. Iteration stops
/// once `w_s(φ_M - P ψ) ≥ budget`.
pub fn weierstrass_prepare(phi: &TruncatedSeries, budget: i64) -> Result<Preparation, SeriesError> {
    let norm = phi.gauss_norm_v();
    let n = norm.argmin_last.ok_or(SeriesError::ZeroSeries)?;
    let p = phi.p;
    let s = phi.radius.clone();
    let poly = phi.to_poly();
    let top = poly.degree().expect("nonzero");
    let m = phi.order();
    let done = |monic: RatPoly, unit: RatPoly| {
        let residual = &poly - &(&monic * &unit);
        let residual = TruncatedSeries::from_poly(p, &residual, m, s.clone()).gauss_norm_v().w;
        Preparation { poly: monic, unit: TruncatedSeries::from_poly(p, &unit, m - n, s.clone()), residual }
    };
    if n == 0 {
        return Ok(done(RatPoly::one(), poly.clone()));
    }
    let pivot = poly.coeff(n);
    let monic0 = RatPoly::new((0..=n).map(|k| poly.coeff(k) / &pivot).collect());
    if top == n {
        return Ok(done(monic0, RatPoly::constant(pivot)));
    }
    let unit0 = RatPoly::new((n..=top).map(|k| poly.coeff(k)).collect());
    let spread = ceil(&(s.abs() * int(m as i64))).to_i64().expect("small");
    let stop = budget + spread;
    let (monic, unit, _) = lift_factor_pair(&poly, &monic0, &unit0, p, stop, stop + spread + 2)?;
    Ok(done(monic, unit))
}

/// Upper bound for the number of zeros in the ball: the last index attaining
/// the Gauss norm.
pub fn strassmann_bound(phi: &TruncatedSeries) -> Result<usize, SeriesError> {
    phi.gauss_norm_v().argmin_last.ok_or(SeriesError::ZeroSeries)
}

/// Polygon of the stored coefficients. Past the last slope that further
/// coefficients cannot undercut it may differ from the series' polygon.
pub fn series_polygon(phi: &TruncatedSeries) -> Result<NewtonPolygon, SeriesError> {
    if phi.is_zero() {
        return Err(SeriesError::ZeroSeries);
    }
    if phi.coeffs[0].is_zero() {
        return Err(SeriesError::ZeroConstantTerm);
    }
    Ok(NewtonPolygon::from_points(&phi.points()).expect("nonzero"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassicalSeries {
    Exp,
    Log,
}

/// Closed-form polygons of `exp(T)` and `log(1 + T)` over all of `R_+`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolygonOracle {
    pub kind: ClassicalSeries,
    pub p: Prime,
}

pub fn exp_log_polygon_oracle(kind: ClassicalSeries, p: Prime) -> PolygonOracle {
    PolygonOracle { kind, p }
}

impl PolygonOracle {
    /// `exp`: `-t/(p-1)` for `t ≥ 0`. `log`: `-m` at `t = p^m`, affine in
    /// between, `+∞` below 1.
    pub fn eval(&self, t: &Rational) -> ExtRational {
        let p1 = int(self.p.get() as i64 - 1);
        match self.kind {
            ClassicalSeries::Exp if t.is_negative() => ExtRational::Infinity,
            ClassicalSeries::Exp => (-(t / p1)).into(),
            ClassicalSeries::Log => {
                if *t < Rational::one() {
                    return ExtRational::Infinity;
                }
                let mut m = 0i64;
                let mut pm = Rational::one();
                let pr = int(self.p.get() as i64);
                while &pm * &pr <= *t {
                    pm *= &pr;
                    m += 1;
                }
                (int(-m) - (t - &pm) / (&pm * p1)).into()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valuation::frac;
    use proptest::prelude::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn series(coeffs: &[i64], q: u64, s: Rational) -> TruncatedSeries {
        let c: Vec<Rational> = coeffs.iter().map(|&x| int(x)).collect();
        let m = c.len() - 1;
        TruncatedSeries::new(p(q), c, m, s)
    }

    #[test]
    fn gauss_norm_examples() {
        let g = series(&[2, 4, 1], 2, int(0)).gauss_norm_v();
        assert_eq!(g, GaussNorm { w: int(0).into(), argmin_last: Some(2) });
        let zero = series(&[0, 0], 2, int(0)).gauss_norm_v();
        assert_eq!(zero.w, ExtRational::Infinity);
        let e = TruncatedSeries::exp(p(2), 30, int(0)).gauss_norm_v();
        assert_eq!(e, GaussNorm { w: int(-26).into(), argmin_last: Some(30) });
    }

    #[test]
    fn ring_examples() {
        let a = series(&[1, 1, 0], 3, int(0));
        let b = series(&[1, -1, 0], 3, int(0));
        assert_eq!(a.mul(&b).unwrap(), series(&[1, 0, -1], 3, int(0)));
        assert!(a.add(&a.neg()).unwrap().is_zero());
        assert!(matches!(a.add(&a.with_radius(int(1))), Err(SeriesError::RadiusMismatch(..))));
    }

    #[test]
    fn units_and_inverse() {
        let u = series(&[1, 2, 4], 2, int(0));
        assert!(u.is_unit());
        assert_eq!(u.invert().unwrap(), series(&[1, -2, 0], 2, int(0)));
        assert_eq!(series(&[1], 2, int(0)).invert().unwrap(), series(&[1], 2, int(0)));
        let t1 = series(&[1, 1], 2, int(0));
        assert!(!t1.is_unit());
        assert!(t1.with_radius(int(1)).is_unit());
        assert_eq!(t1.invert(), Err(SeriesError::NotAUnit));
    }

    #[test]
    fn shift_examples() {
        let sq = series(&[0, 0, 1], 3, int(0));
        assert_eq!(sq.taylor_shift(&int(1)).unwrap(), series(&[1, 2, 1], 3, int(0)));
        let cube = series(&[0, 0, 0, 1], 3, int(0));
        assert_eq!(cube.taylor_shift(&int(-1)).unwrap(), series(&[-1, 3, -3, 1], 3, int(0)));
        assert!(matches!(
            cube.with_radius(int(1)).taylor_shift(&int(1)),
            Err(SeriesError::RadiusViolation(_))
        ));
    }

    #[test]
    fn compose_examples() {
        let q = p(3);
        let geometric = TruncatedSeries::new(q, vec![int(1); 8], 7, int(0));
        let pt = TruncatedSeries::new(q, vec![int(0), int(3)], 7, int(0));
        let expected: Vec<Rational> = (0..8).map(|n| Rational::from_integer(q.pow(n))).collect();
        assert_eq!(geometric.compose(&pt).unwrap(), TruncatedSeries::new(q, expected, 7, int(0)));

        let t = TruncatedSeries::new(q, vec![int(0), int(1)], 7, int(0));
        assert_eq!(geometric.compose(&t).unwrap(), geometric);

        let sq = series(&[0, 0, 1], 3, int(0));
        let one_plus_t = series(&[1, 1, 0], 3, int(0));
        assert_eq!(sq.compose(&one_plus_t).unwrap(), sq.taylor_shift(&int(1)).unwrap());

        let big = TruncatedSeries::new(q, vec![frac(1, 3), int(1)], 7, int(0));
        assert_eq!(geometric.compose(&big), Err(SeriesError::ConvergenceViolation));
    }

    #[test]
    fn division_examples() {
        let phi = series(&[1, 1, 0, 1], 5, int(0));
        let (psi, rho) = phi.divide_by_poly(&RatPoly::from_ints(&[0, 0, 1]), 2).unwrap();
        assert_eq!(psi.to_poly(), RatPoly::from_ints(&[0, 1]));
        assert_eq!(rho, RatPoly::from_ints(&[1, 1]));

        let (psi, rho) = phi.divide_by_poly(&RatPoly::one(), 0).unwrap();
        assert_eq!(psi, phi);
        assert!(rho.is_zero());

        let q = p(5);
        let e = TruncatedSeries::exp(q, 10, int(0));
        let divisor = RatPoly::from_ints(&[-5, 1]);
        let (psi, rho) = e.divide_by_poly(&divisor, 1).unwrap();
        assert_eq!(&(&divisor * &psi.to_poly()) + &rho, e.to_poly());
        let w = |x: &RatPoly| TruncatedSeries::from_poly(q, x, 10, int(0)).gauss_norm_v().w;
        let wphi = e.gauss_norm_v().w;
        assert!(w(&rho) >= wphi);
        assert!(w(&divisor) + psi.gauss_norm_v().w >= wphi);

        assert_eq!(
            phi.divide_by_poly(&RatPoly::from_ints(&[1, 5]), 1),
            Err(SeriesError::DominanceFails)
        );
    }

    #[test]
    fn weierstrass_examples() {
        let q = p(5);
        let phi = series(&[5, 1, 5, 5], 5, int(0));
        let prep = weierstrass_prepare(&phi, 6).unwrap();
        assert_eq!(prep.poly.degree(), Some(1));
        assert!(prep.poly.is_monic());
        // oracle: fixed point of T = -5(1 + T^2 + T^3) mod 25
        let mut alpha = 0i64;
        for _ in 0..4 {
            alpha = (-5 * (1 + alpha * alpha + alpha.pow(3))).rem_euclid(25);
        }
        assert_eq!(alpha, 20);
        assert!(vp_int(&(prep.poly.coeff(0) + int(alpha)), q).is_none_or(|v| v >= 2));
        assert!(prep.unit.is_unit());
        assert!(prep.residual >= int(6).into());

        let monic = series(&[3, 1, 1], 5, int(0));
        let prep = weierstrass_prepare(&monic, 6).unwrap();
        assert_eq!(prep.poly, RatPoly::from_ints(&[3, 1, 1]));
        assert_eq!(prep.unit.to_poly(), RatPoly::one());

        let unit = series(&[1, 5, 25], 5, int(0));
        let prep = weierstrass_prepare(&unit, 6).unwrap();
        assert_eq!(prep.poly, RatPoly::one());
        assert_eq!(prep.unit, unit);
    }

    #[test]
    fn weierstrass_on_exp_ball() {
        // exp has no zeros: on s = 1 the prepared polynomial is 1
        let e = TruncatedSeries::exp(p(5), 30, int(1));
        assert_eq!(weierstrass_prepare(&e, 10).unwrap().poly, RatPoly::one());
        // log(1+T) on s = 1: one zero, at T = 0
        let l = TruncatedSeries::log1p(p(5), 30, int(1));
        let prep = weierstrass_prepare(&l, 10).unwrap();
        assert_eq!(prep.poly, RatPoly::from_ints(&[0, 1]));
    }

    #[test]
    fn strassmann_examples() {
        assert_eq!(strassmann_bound(&TruncatedSeries::log1p(p(5), 30, int(1))).unwrap(), 1);
        assert_eq!(strassmann_bound(&TruncatedSeries::exp(p(5), 30, int(1))).unwrap(), 0);
        assert_eq!(strassmann_bound(&series(&[0, 0, 1], 7, int(0))).unwrap(), 2);
        assert_eq!(strassmann_bound(&series(&[0], 7, int(0))), Err(SeriesError::ZeroSeries));
    }

    #[test]
    fn oracle_examples() {
        let exp2 = exp_log_polygon_oracle(ClassicalSeries::Exp, p(2));
        assert_eq!(exp2.eval(&int(16)), int(-16).into());
        let log5 = exp_log_polygon_oracle(ClassicalSeries::Log, p(5));
        assert_eq!(log5.eval(&int(25)), int(-2).into());
        assert_eq!(log5.eval(&int(1)), int(0).into());
        assert_eq!(log5.eval(&int(15)), frac(-3, 2).into());
        assert_eq!(log5.eval(&frac(1, 2)), ExtRational::Infinity);
    }

    #[test]
    fn series_polygon_examples() {
        let e = series_polygon(&TruncatedSeries::exp(p(2), 30, int(0))).unwrap();
        let xs: Vec<i64> = e.vertices().iter().map(|v| v.0).collect();
        assert_eq!(xs, vec![0, 16, 24, 28, 30]);
        let l = series_polygon(&TruncatedSeries::log1p_over_t(p(5), 24, int(0))).unwrap();
        assert_eq!(l.vertices().to_vec(), vec![(0, int(0)), (4, int(-1)), (24, int(-2))]);
        let lin = series_polygon(&series(&[1, 1], 5, int(0))).unwrap();
        assert_eq!(lin.vertices().to_vec(), vec![(0, int(0)), (1, int(0))]);
        assert_eq!(
            series_polygon(&TruncatedSeries::log1p(p(5), 5, int(0))),
            Err(SeriesError::ZeroConstantTerm)
        );
    }

    #[test]
    fn truncated_polygons_against_oracles() {
        for q in [2u64, 3, 5] {
            for k in 1..4u32 {
                let m = q.pow(k) as usize;
                let log = TruncatedSeries::log1p(p(q), m, int(0));
                let ng = NewtonPolygon::from_points(&log.points()).unwrap();
                let oracle = exp_log_polygon_oracle(ClassicalSeries::Log, p(q));
                for t in 1..=m as i64 {
                    assert_eq!(ng.value_at(&int(t)), oracle.eval(&int(t)));
                }
            }
            let e = TruncatedSeries::exp(p(q), 40, int(0));
            let ng = series_polygon(&e).unwrap();
            let oracle = exp_log_polygon_oracle(ClassicalSeries::Exp, p(q));
            assert_eq!(ng.value_at(&int(0)), oracle.eval(&int(0)));
            for t in 0..=40 {
                assert!(ng.value_at(&int(t)) >= oracle.eval(&int(t)));
            }
        }
    }

    fn small_series(len: usize) -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(prop_oneof![Just(0i64), -300i64..300], len)
    }

    fn radius() -> impl Strategy<Value = Rational> {
        (-2i64..4, 1i64..4).prop_map(|(n, d)| frac(n, d))
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative_and_ultrametric(
            q in prop::sample::select(vec![2u64, 3, 5]),
            a in small_series(6),
            b in small_series(6),
            s in radius(),
        ) {
            // the full product, so no coefficients are lost to truncation
            let x = series(&a, q, s.clone());
            let y = series(&b, q, s.clone());
            let prod = TruncatedSeries::from_poly(p(q), &(&x.to_poly() * &y.to_poly()), 10, s.clone());
            prop_assert_eq!(prod.gauss_norm_v().w, x.gauss_norm_v().w + y.gauss_norm_v().w);
            let sum = x.add(&y).unwrap().gauss_norm_v().w;
            prop_assert!(sum >= x.gauss_norm_v().w.min(y.gauss_norm_v().w));
        }

        #[test]
        fn norm_is_monotone_in_radius(
            q in prop::sample::select(vec![2u64, 3, 5]),
            a in small_series(6),
            s in radius(),
            step in 1i64..5,
        ) {
            prop_assume!(a.iter().any(|&x| x != 0));
            let x = series(&a, q, s.clone());
            let first = a.iter().position(|&c| c != 0).unwrap() as i64;
            let bigger = &s + frac(step, 2);
            let lhs = x.with_radius(bigger.clone()).gauss_norm_v().w;
            prop_assert!(lhs >= x.gauss_norm_v().w + ExtRational::from((bigger - s) * int(first)));
        }

        #[test]
        fn shift_round_trip(q in prop::sample::select(vec![2u64, 3, 5]), a in small_series(6), shift in -50i64..50) {
            let x = series(&a, q, int(0));
            let t = int(shift);
            let back = x.taylor_shift(&t).unwrap().taylor_shift(&-t).unwrap();
            prop_assert_eq!(back, x);
        }

        #[test]
        fn inverse_is_inverse(q in prop::sample::select(vec![2u64, 3, 5]), a in small_series(6)) {
            let mut a = a;
            a[0] = 1;
            let qi = q as i64;
            for c in a.iter_mut().skip(1) {
                *c *= qi;
            }
            let x = series(&a, q, int(0));
            let inv = x.invert().unwrap();
            prop_assert_eq!(x.mul(&inv).unwrap(), series(&[1, 0, 0, 0, 0, 0], q, int(0)));
        }

        #[test]
        fn division_matches_euclid_and_bounds(
            q in prop::sample::select(vec![2u64, 3, 5]),
            a in small_series(8),
            lower in prop::collection::vec(-20i64..20, 0..4),
        ) {
            // divisor with unit leading coefficient and p-divisible lower terms
            let qi = q as i64;
            let mut dcoeffs: Vec<i64> = lower.iter().map(|c| c * qi).collect();
            dcoeffs.push(1);
            let d = dcoeffs.len() - 1;
            let divisor = RatPoly::from_ints(&dcoeffs);
            let x = series(&a, q, int(0));
            let (psi, rho) = x.divide_by_poly(&divisor, d).unwrap();
            let (eq, er) = x.to_poly().div_rem(&divisor);
            prop_assert_eq!(psi.to_poly(), eq);
            prop_assert_eq!(&rho, &er);
            let w = |y: &RatPoly| TruncatedSeries::from_poly(p(q), y, 8, int(0)).gauss_norm_v().w;
            prop_assert!(w(&rho) >= x.gauss_norm_v().w);
            prop_assert!(w(&divisor) + psi.gauss_norm_v().w >= x.gauss_norm_v().w);
        }

        #[test]
        fn strassmann_counts_roots_in_ball(
            q in prop::sample::select(vec![2u64, 3, 5]),
            roots in prop::collection::vec((0u32..4, 1i64..30), 1..6),
            s in 0i64..4,
        ) {
            // oracle: the number of explicit roots with valuation at least s
            let q = p(q);
            let rs: Vec<Rational> = roots
                .iter()
                .map(|&(e, u)| {
                    let u = if u % q.get() as i64 == 0 { u + 1 } else { u };
                    Rational::from_integer(q.pow(e)) * int(u)
                })
                .collect();
            let poly = RatPoly::from_roots(&rs);
            let phi = TruncatedSeries::from_poly(q, &poly, rs.len(), int(s));
            let inside = roots.iter().filter(|&&(e, _)| e as i64 >= s).count();
            prop_assert_eq!(strassmann_bound(&phi).unwrap(), inside);
            let prep = weierstrass_prepare(&phi, 8).unwrap();
            prop_assert_eq!(prep.poly.degree(), Some(inside));
            prop_assert!(prep.residual >= int(8).into());
            prop_assert!(prep.unit.is_unit());
        }
    }
}
