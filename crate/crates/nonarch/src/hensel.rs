//! Newton's method over `Q_p`: roots of one polynomial, square polynomial
//! systems, and lifting of coprime factorizations.
//!
//! Iterates are exact rationals truncated to a fixed absolute precision after
//! every step, so the residuals `Φ(a_n)` are computed without rounding. Only
//! the correction solve runs in precision-tracked `Padic` arithmetic.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{bareiss_determinant, padic_solve, LinalgError};
use crate::multipoly::MultiPoly;
use crate::padic::{Padic, PadicError};
use crate::poly::{write_terms, RatPoly};
use crate::resultant::{resultant, Rationals, ResultantError};
use crate::valuation::{vp_int, Prime, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HenselError {
    #[error("operands live over different primes ({0} and {1})")]
    PrimeMismatch(Prime, Prime),
    #[error("{0} is not p-integral")]
    NotIntegral(String),
    #[error("leading coefficient vanishes at stored precision")]
    ZeroLeadingCoefficient,
    #[error(
        "Hensel condition fails: v(value) = {value_valuation}, v(derivative) = {}",
        fmt_opt(.derivative_valuation)
    )]
    HenselConditionFailed { value_valuation: i64, derivative_valuation: Option<i64> },
    #[error("inputs are known to p^{available} but p^{needed} is required")]
    InsufficientPrecision { needed: i64, available: i64 },
    #[error("target precision must be positive")]
    NonPositiveTarget,
    #[error("{0} is not a root of the reduction mod p")]
    NotAResidueRoot(BigInt),
    #[error("{0} is a multiple root of the reduction mod p")]
    ResidueRootNotSimple(BigInt),
    #[error("system is not square: {equations} equations in {variables} unknowns")]
    NotSquare { equations: usize, variables: usize },
    #[error("Jacobian determinant vanishes at the starting point")]
    SingularJacobian,
    #[error("degree mismatch: deg φ = {phi}, deg ψ + deg η = {sum}")]
    DegreeMismatch { phi: usize, sum: usize },
    #[error("leading coefficient of φ differs from the product of the factors' leading coefficients")]
    LeadingCoefficientMismatch,
    #[error("resultant of the factors vanishes")]
    ResultantVanishes,
    #[error(
        "resultant bound violated: v(φ - ψη) = {residual_valuation}, v(Res) = {resultant_valuation}"
    )]
    ResultantBoundViolated { residual_valuation: i64, resultant_valuation: i64 },
    #[error("no convergence after {0} iterations")]
    NoConvergence(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Resultant(#[from] ResultantError),
}

fn fmt_opt(v: &Option<i64>) -> String {
    v.map_or_else(|| "inf".to_string(), |v| v.to_string())
}

/// A polynomial whose coefficients are elements of `Q_p` at tracked precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicPolynomial {
    p: Prime,
    coeffs: Vec<Padic>,
}

impl PadicPolynomial {
    /// Trailing zero coefficients are dropped; what remains on top must be
    /// nonzero at its stored precision.
    pub fn new(p: Prime, mut coeffs: Vec<Padic>) -> Result<PadicPolynomial, HenselError> {
        if let Some(c) = coeffs.iter().find(|c| c.prime() != p) {
            return Err(HenselError::PrimeMismatch(p, c.prime()));
        }
        while coeffs.last().is_some_and(Padic::is_exact_zero) {
            coeffs.pop();
        }
        if coeffs.last().is_some_and(Padic::is_zero) {
            return Err(HenselError::ZeroLeadingCoefficient);
        }
        Ok(PadicPolynomial { p, coeffs })
    }

    /// Every coefficient known modulo `p^abs`; zero coefficients stay exact.
    pub fn from_ratpoly(p: Prime, poly: &RatPoly, abs: i64) -> Result<PadicPolynomial, HenselError> {
        let coeffs = poly
            .coeffs()
            .iter()
            .map(|c| if c.is_zero() { Padic::zero(p) } else { Padic::approximating(c, p, abs) })
            .collect();
        PadicPolynomial::new(p, coeffs)
    }

    pub fn from_ints(p: Prime, coeffs: &[i64], abs: i64) -> Result<PadicPolynomial, HenselError> {
        PadicPolynomial::from_ratpoly(p, &RatPoly::from_ints(coeffs), abs)
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn coeffs(&self) -> &[Padic] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Padic> {
        self.coeffs.last()
    }

    /// Minimum absolute precision over the coefficients, `None` if all are exact.
    pub fn absolute_precision(&self) -> Option<i64> {
        self.coeffs.iter().filter_map(Padic::absolute_precision).min()
    }

    /// Minimum valuation lower bound of the coefficients.
    pub fn valuation_floor(&self) -> Option<i64> {
        self.coeffs.iter().filter_map(Padic::valuation_lower_bound).min()
    }

    /// Canonical rational representatives of the coefficients.
    pub fn to_ratpoly(&self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(Padic::to_rational).collect())
    }

    pub fn eval(&self, x: &Padic) -> Result<Padic, HenselError> {
        let mut acc = Padic::zero(self.p);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x)?.add(c)?;
        }
        Ok(acc)
    }

    pub fn mul(&self, other: &PadicPolynomial) -> Result<PadicPolynomial, HenselError> {
        if self.p != other.p {
            return Err(HenselError::PrimeMismatch(self.p, other.p));
        }
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return PadicPolynomial::new(self.p, Vec::new());
        }
        let mut out = vec![Padic::zero(self.p); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b)?)?;
            }
        }
        PadicPolynomial::new(self.p, out)
    }

    /// True when every coefficient of `self - other` vanishes modulo `p^k`.
    pub fn agrees_mod(&self, other: &RatPoly, k: i64) -> bool {
        let n = self.coeffs.len().max(other.coeffs().len());
        (0..n).all(|i| {
            let mine = self.coeffs.get(i).map(Padic::to_rational).unwrap_or_else(Rational::zero);
            vp_int(&(mine - other.coeff(i)), self.p).is_none_or(|v| v >= k)
        })
    }
}

impl fmt::Display for PadicPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.to_ratpoly().coeffs(), "T")?;
        if let Some(abs) = self.absolute_precision() {
            write!(f, " + O({}^{abs})", self.p)?;
        }
        Ok(())
    }
}

/// A square system of polynomial equations with p-integral coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPadicSystem {
    p: Prime,
    polys: Vec<MultiPoly>,
}

impl MultiPadicSystem {
    pub fn new(p: Prime, polys: Vec<MultiPoly>) -> Result<MultiPadicSystem, HenselError> {
        let n = polys.len();
        if let Some(f) = polys.iter().find(|f| f.nvars() != n) {
            return Err(HenselError::NotSquare { equations: n, variables: f.nvars() });
        }
        for f in &polys {
            for (_, c) in f.terms() {
                if vp_int(c, p).is_some_and(|v| v < 0) {
                    return Err(HenselError::NotIntegral(c.to_string()));
                }
            }
        }
        Ok(MultiPadicSystem { p, polys })
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn dimension(&self) -> usize {
        self.polys.len()
    }

    pub fn polys(&self) -> &[MultiPoly] {
        &self.polys
    }
}

/// A polynomial map `Q^n → Q^n` together with its Jacobian.
pub(crate) trait NewtonMap {
    fn eval(&self, x: &[Rational]) -> Vec<Rational>;
    fn jacobian(&self, x: &[Rational]) -> Vec<Vec<Rational>>;
}

pub(crate) struct EngineConfig {
    pub p: Prime,
    /// Stop once every residual has at least this valuation.
    pub stop: i64,
    /// Absolute precision the iterates are truncated to.
    pub truncation: i64,
    pub max_iterations: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct EngineRun {
    pub point: Vec<Rational>,
    pub iterates: Vec<Vec<Rational>>,
    pub residual_valuations: Vec<Option<i64>>,
}

impl EngineRun {
    pub fn iterations(&self) -> usize {
        self.iterates.len() - 1
    }
}

pub(crate) fn min_valuation(values: &[Rational], p: Prime) -> Option<i64> {
    values.iter().filter_map(|x| vp_int(x, p)).min()
}

pub(crate) fn truncate_rational(x: &Rational, p: Prime, abs: i64) -> Rational {
    Padic::approximating(x, p, abs).to_rational()
}

/// Solves `J δ = F` and returns `δ` to absolute precision `abs`, raising the
/// working relative precision until the solve delivers it.
fn solve_to_precision(
    jac: &[Vec<Rational>],
    rhs: &[Rational],
    p: Prime,
    abs: i64,
) -> Result<Vec<Rational>, HenselError> {
    let floor = jac
        .iter()
        .flatten()
        .chain(rhs)
        .filter_map(|x| vp_int(x, p))
        .min()
        .unwrap_or(0);
    let mut rel = (abs - floor).max(1) + 8;
    for _ in 0..12 {
        let prec = u32::try_from(rel).map_err(|_| HenselError::NoConvergence(0))?;
        let to = |x: &Rational| Padic::from_rational(x, p, prec);
        let m = jac
            .iter()
            .map(|row| row.iter().map(to).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let b = rhs.iter().map(to).collect::<Result<Vec<_>, _>>()?;
        match padic_solve(m, b, p) {
            Ok(delta) => {
                if delta.iter().all(|d| d.absolute_precision().is_none_or(|a| a >= abs)) {
                    return Ok(delta.iter().map(Padic::to_rational).collect());
                }
            }
            // a pivot may vanish only because of cancellation at low precision
            Err(LinalgError::Singular) => {}
            Err(e) => return Err(e.into()),
        }
        rel *= 2;
    }
    Err(LinalgError::Singular.into())
}

pub(crate) fn run_newton(
    map: &dyn NewtonMap,
    start: &[Rational],
    cfg: &EngineConfig,
) -> Result<EngineRun, HenselError> {
    let mut x = start.to_vec();
    let mut iterates = vec![x.clone()];
    let mut residual_valuations = Vec::new();
    loop {
        let f = map.eval(&x);
        let v = min_valuation(&f, cfg.p);
        residual_valuations.push(v);
        if v.is_none_or(|v| v >= cfg.stop) {
            return Ok(EngineRun { point: x, iterates, residual_valuations });
        }
        if iterates.len() > cfg.max_iterations {
            return Err(HenselError::NoConvergence(cfg.max_iterations));
        }
        let delta = solve_to_precision(&map.jacobian(&x), &f, cfg.p, cfg.truncation)?;
        x = x
            .iter()
            .zip(&delta)
            .map(|(xi, di)| truncate_rational(&(xi - di), cfg.p, cfg.truncation))
            .collect();
        iterates.push(x.clone());
    }
}

/// Upper bound on the Newton steps needed to reach `target` with quadratic
/// convergence, plus slack for the first step.
fn iteration_cap(target: i64) -> usize {
    let mut cap = 2;
    let mut reach = 1i64;
    while reach < target.max(1) {
        reach *= 2;
        cap += 1;
    }
    cap + 4
}

struct Univariate {
    poly: RatPoly,
    derivative: RatPoly,
}

impl NewtonMap for Univariate {
    fn eval(&self, x: &[Rational]) -> Vec<Rational> {
        vec![self.poly.eval(&x[0])]
    }
    fn jacobian(&self, x: &[Rational]) -> Vec<Vec<Rational>> {
        vec![vec![self.derivative.eval(&x[0])]]
    }
}

/// Result of a univariate lift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootLift {
    pub root: Padic,
    pub iterations: usize,
    /// `v(φ(a_n))` for every iterate, `None` once it is an exact root.
    pub residual_valuations: Vec<Option<i64>>,
    /// The exact rational iterates `a_0, a_1, ...`.
    pub iterates: Vec<Rational>,
    /// `v(φ'(a_0))`.
    pub derivative_valuation: i64,
}

fn check_integral_poly(phi: &PadicPolynomial) -> Result<(), HenselError> {
    if phi.valuation_floor().is_some_and(|v| v < 0) {
        return Err(HenselError::NotIntegral(phi.to_string()));
    }
    Ok(())
}

fn check_target(target: i64) -> Result<(), HenselError> {
    if target < 1 {
        Err(HenselError::NonPositiveTarget)
    } else {
        Ok(())
    }
}

fn check_precision(available: Option<i64>, needed: i64) -> Result<(), HenselError> {
    match available {
        Some(available) if available < needed => {
            Err(HenselError::InsufficientPrecision { needed, available })
        }
        _ => Ok(()),
    }
}

/// Newton iteration from `a` to a root of `φ` known modulo `p^target`.
///
/// Requires `v(φ(a)) > 2 v(φ'(a))`, except for linear `φ` where the single
/// exact step only needs the root to be integral.
pub fn newton_lift(phi: &PadicPolynomial, a: &Padic, target: i64) -> Result<RootLift, HenselError> {
    let p = phi.prime();
    if a.prime() != p {
        return Err(HenselError::PrimeMismatch(p, a.prime()));
    }
    check_target(target)?;
    check_integral_poly(phi)?;
    if a.valuation_lower_bound().is_some_and(|v| v < 0) {
        return Err(HenselError::NotIntegral(a.to_string()));
    }
    let poly = phi.to_ratpoly();
    let derivative = poly.derivative();
    let start = a.to_rational();
    let value = poly.eval(&start);
    let deriv_v = vp_int(&derivative.eval(&start), p);
    let Some(value_v) = vp_int(&value, p) else {
        let e = deriv_v.unwrap_or(0);
        check_precision(phi.absolute_precision(), target + e)?;
        return Ok(RootLift {
            root: Padic::approximating(&start, p, target),
            iterations: 0,
            residual_valuations: vec![None],
            iterates: vec![start],
            derivative_valuation: e,
        });
    };
    let linear = poly.degree() == Some(1);
    let condition = match deriv_v {
        Some(e) if linear => value_v >= e,
        Some(e) => value_v > 2 * e,
        None => false,
    };
    if !condition {
        return Err(HenselError::HenselConditionFailed {
            value_valuation: value_v,
            derivative_valuation: deriv_v,
        });
    }
    let e = deriv_v.expect("condition holds");
    check_precision(phi.absolute_precision(), target + e)?;
    let cfg = EngineConfig {
        p,
        stop: target + e,
        truncation: target + e + 1,
        max_iterations: iteration_cap(target),
    };
    let run = run_newton(&Univariate { poly, derivative }, &[start], &cfg)?;
    Ok(RootLift {
        root: Padic::approximating(&run.point[0], p, target),
        iterations: run.iterations(),
        residual_valuations: run.residual_valuations.clone(),
        iterates: run.iterates.into_iter().map(|x| x[0].clone()).collect(),
        derivative_valuation: e,
    })
}

/// The root of `φ` reducing to the simple residue root `a0`.
pub fn simple_root_lift(
    phi: &PadicPolynomial,
    a0: &BigInt,
    target: i64,
) -> Result<Padic, HenselError> {
    let p = phi.prime();
    check_target(target)?;
    check_integral_poly(phi)?;
    check_precision(phi.absolute_precision(), 1)?;
    let poly = phi.to_ratpoly();
    let start = Rational::from_integer(a0.clone());
    if vp_int(&poly.eval(&start), p).is_some_and(|v| v < 1) {
        return Err(HenselError::NotAResidueRoot(a0.clone()));
    }
    if vp_int(&poly.derivative().eval(&start), p).is_none_or(|v| v > 0) {
        return Err(HenselError::ResidueRootNotSimple(a0.clone()));
    }
    let a = Padic::approximating(&start, p, target.max(1));
    Ok(newton_lift(phi, &a, target)?.root)
}

struct System {
    polys: Vec<MultiPoly>,
    partials: Vec<Vec<MultiPoly>>,
}

impl NewtonMap for System {
    fn eval(&self, x: &[Rational]) -> Vec<Rational> {
        self.polys.iter().map(|f| f.eval(x)).collect()
    }
    fn jacobian(&self, x: &[Rational]) -> Vec<Vec<Rational>> {
        self.partials.iter().map(|row| row.iter().map(|d| d.eval(x)).collect()).collect()
    }
}

pub(crate) fn rational_determinant(m: Vec<Vec<Rational>>) -> Rational {
    bareiss_determinant(
        m,
        Rational::zero(),
        Rational::one(),
        |a, b| a - b,
        |a, b| a * b,
        |a, b| a / b,
        |a| -a,
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemLift {
    pub root: Vec<Padic>,
    pub iterations: usize,
    pub residual_valuations: Vec<Option<i64>>,
    /// `v(det DΦ(a_0))`.
    pub jacobian_valuation: i64,
}

/// Multivariate Newton from `a` under `min v(Φ(a)) > 2 v(det DΦ(a))`.
pub fn newton_system(
    system: &MultiPadicSystem,
    a: &[Rational],
    target: i64,
) -> Result<SystemLift, HenselError> {
    let p = system.prime();
    let n = system.dimension();
    check_target(target)?;
    if a.len() != n {
        return Err(HenselError::NotSquare { equations: n, variables: a.len() });
    }
    if let Some(x) = a.iter().find(|x| vp_int(x, p).is_some_and(|v| v < 0)) {
        return Err(HenselError::NotIntegral(x.to_string()));
    }
    let map = System {
        polys: system.polys.clone(),
        partials: system.polys.iter().map(|f| (0..n).map(|i| f.partial(i)).collect()).collect(),
    };
    let det = rational_determinant(map.jacobian(a));
    let jac_v = vp_int(&det, p);
    let value_v = min_valuation(&map.eval(a), p);
    let finish = |point: &[Rational]| point.iter().map(|x| Padic::approximating(x, p, target)).collect();
    let Some(value_v) = value_v else {
        return Ok(SystemLift {
            root: finish(a),
            iterations: 0,
            residual_valuations: vec![None],
            jacobian_valuation: jac_v.unwrap_or(0),
        });
    };
    let Some(e) = jac_v else {
        return Err(HenselError::SingularJacobian);
    };
    if value_v <= 2 * e {
        return Err(HenselError::HenselConditionFailed {
            value_valuation: value_v,
            derivative_valuation: Some(e),
        });
    }
    let cfg = EngineConfig {
        p,
        stop: target + e,
        truncation: target + e + 1,
        max_iterations: iteration_cap(target),
    };
    let run = run_newton(&map, a, &cfg)?;
    Ok(SystemLift {
        root: finish(&run.point),
        iterations: run.iterations(),
        residual_valuations: run.residual_valuations,
        jacobian_valuation: e,
    })
}

/// Newton on the non-leading coefficients of `(ψ, η)` for the map
/// `(ψ, η) ↦ ψη - φ`; the leading coefficients stay fixed.
pub(crate) struct FactorMap {
    pub phi: RatPoly,
    pub psi_lead: Rational,
    pub eta_lead: Rational,
    pub psi_deg: usize,
    pub eta_deg: usize,
}

impl FactorMap {
    pub fn unpack(&self, x: &[Rational]) -> (RatPoly, RatPoly) {
        let (u, w) = x.split_at(self.psi_deg);
        let mut psi = u.to_vec();
        psi.push(self.psi_lead.clone());
        let mut eta = w.to_vec();
        eta.push(self.eta_lead.clone());
        (RatPoly::new(psi), RatPoly::new(eta))
    }

    pub fn pack(psi: &RatPoly, eta: &RatPoly, psi_deg: usize, eta_deg: usize) -> Vec<Rational> {
        (0..psi_deg).map(|i| psi.coeff(i)).chain((0..eta_deg).map(|j| eta.coeff(j))).collect()
    }

    fn dim(&self) -> usize {
        self.psi_deg + self.eta_deg
    }
}

impl NewtonMap for FactorMap {
    fn eval(&self, x: &[Rational]) -> Vec<Rational> {
        let (psi, eta) = self.unpack(x);
        let r = &(&psi * &eta) - &self.phi;
        (0..self.dim()).map(|i| r.coeff(i)).collect()
    }

    fn jacobian(&self, x: &[Rational]) -> Vec<Vec<Rational>> {
        let (psi, eta) = self.unpack(x);
        let n = self.dim();
        let mut jac = vec![vec![Rational::zero(); n]; n];
        for i in 0..self.psi_deg {
            for (k, c) in eta.coeffs().iter().enumerate() {
                if i + k < n {
                    jac[i + k][i] = c.clone();
                }
            }
        }
        for j in 0..self.eta_deg {
            for (k, c) in psi.coeffs().iter().enumerate() {
                if j + k < n {
                    jac[j + k][self.psi_deg + j] = c.clone();
                }
            }
        }
        jac
    }
}

/// Exact-rational factor lifting with caller-chosen stop and truncation
/// levels; no Hensel condition is checked here.
pub(crate) fn lift_factor_pair(
    phi: &RatPoly,
    psi0: &RatPoly,
    eta0: &RatPoly,
    p: Prime,
    stop: i64,
    truncation: i64,
) -> Result<(RatPoly, RatPoly, EngineRun), HenselError> {
    let (psi_deg, eta_deg) = (
        psi0.degree().ok_or(HenselError::ZeroLeadingCoefficient)?,
        eta0.degree().ok_or(HenselError::ZeroLeadingCoefficient)?,
    );
    let map = FactorMap {
        phi: phi.clone(),
        psi_lead: psi0.leading().expect("nonzero").clone(),
        eta_lead: eta0.leading().expect("nonzero").clone(),
        psi_deg,
        eta_deg,
    };
    let start = FactorMap::pack(psi0, eta0, psi_deg, eta_deg);
    let cfg = EngineConfig { p, stop, truncation, max_iterations: 64 };
    let run = run_newton(&map, &start, &cfg)?;
    let (psi, eta) = map.unpack(&run.point);
    Ok((psi, eta, run))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorLift {
    pub psi: PadicPolynomial,
    pub eta: PadicPolynomial,
    pub iterations: usize,
    /// `v(Res(ψ0, η0))`.
    pub resultant_valuation: i64,
}

/// Lifts `φ ≈ ψ0 η0` to a factorization modulo `p^target`, provided
/// `v(φ - ψ0 η0) > 2 v(Res(ψ0, η0))`.
pub fn lift_factorization(
    phi: &PadicPolynomial,
    psi0: &PadicPolynomial,
    eta0: &PadicPolynomial,
    target: i64,
) -> Result<FactorLift, HenselError> {
    let p = phi.prime();
    for other in [psi0, eta0] {
        if other.prime() != p {
            return Err(HenselError::PrimeMismatch(p, other.prime()));
        }
    }
    check_target(target)?;
    for poly in [phi, psi0, eta0] {
        check_integral_poly(poly)?;
    }
    let (Some(d), Some(a), Some(b)) = (phi.degree(), psi0.degree(), eta0.degree()) else {
        return Err(HenselError::ZeroLeadingCoefficient);
    };
    if d != a + b {
        return Err(HenselError::DegreeMismatch { phi: d, sum: a + b });
    }
    let (psi_r, eta_r) = (psi0.to_ratpoly(), eta0.to_ratpoly());
    let lead = psi_r.leading().expect("nonzero") * eta_r.leading().expect("nonzero");
    let phi_lead = phi.leading().expect("nonzero");
    // φ's leading coefficient is only known to its precision; adopt the product.
    let lead_gap = vp_int(&(phi_lead.to_rational() - &lead), p);
    if lead_gap.is_some_and(|v| phi_lead.absolute_precision().is_none_or(|abs| v < abs)) {
        return Err(HenselError::LeadingCoefficientMismatch);
    }
    let mut phi_coeffs = phi.to_ratpoly().coeffs().to_vec();
    phi_coeffs[d] = lead;
    let phi_r = RatPoly::new(phi_coeffs);

    let res = resultant(&Rationals, psi_r.coeffs(), eta_r.coeffs(), a, b)?;
    let e = vp_int(&res, p).ok_or(HenselError::ResultantVanishes)?;
    let wrap = |poly: &RatPoly, lead: &Padic| -> Result<PadicPolynomial, HenselError> {
        let mut coeffs: Vec<Padic> = poly.coeffs()[..poly.coeffs().len() - 1]
            .iter()
            .map(|c| Padic::approximating(c, p, target))
            .collect();
        coeffs.push(lead.clone());
        PadicPolynomial::new(p, coeffs)
    };
    let residual = &phi_r - &(&psi_r * &eta_r);
    let Some(residual_v) = min_valuation(residual.coeffs(), p) else {
        return Ok(FactorLift {
            psi: wrap(&psi_r, psi0.leading().expect("nonzero"))?,
            eta: wrap(&eta_r, eta0.leading().expect("nonzero"))?,
            iterations: 0,
            resultant_valuation: e,
        });
    };
    if residual_v <= 2 * e {
        return Err(HenselError::ResultantBoundViolated {
            residual_valuation: residual_v,
            resultant_valuation: e,
        });
    }
    check_precision(phi.absolute_precision(), target + e)?;
    let (psi, eta, run) = lift_factor_pair(&phi_r, &psi_r, &eta_r, p, target + e, target + e + 1)?;
    Ok(FactorLift {
        psi: wrap(&psi, psi0.leading().expect("nonzero"))?,
        eta: wrap(&eta, eta0.leading().expect("nonzero"))?,
        iterations: run.iterations(),
        resultant_valuation: e,
    })
}
