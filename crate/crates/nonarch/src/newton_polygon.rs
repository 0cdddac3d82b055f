//! Newton polygons of polynomials: lower hulls, root valuations,
//! irreducibility certificates, slope factorization and tropical duality.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::hensel::{lift_factor_pair, HenselError, PadicPolynomial};
use crate::poly::RatPoly;
use crate::valuation::{ceil, int, vp_factorial, vp_int, ExtRational, Place, Prime, Rational, ValuationError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolygonError {
    #[error("the zero polynomial has no Newton polygon")]
    ZeroPolynomial,
    #[error("an archimedean place has no Newton polygon")]
    ArchimedeanPlace,
    #[error("a p-adic place is required")]
    NotPadic,
    #[error("polynomial must be monic")]
    NotMonic,
    #[error("constant term must be nonzero")]
    ZeroConstantTerm,
    #[error("declared degree {declared} differs from the polynomial's degree {actual}")]
    DegreeMismatch { declared: usize, actual: usize },
    #[error("n must be positive")]
    ZeroDegree,
    #[error("prime divisor {0} of n is missing from the list")]
    MissingPrime(u64),
    #[error("factor product does not reproduce the input to the requested precision")]
    ProductCheckFailed,
    #[error(transparent)]
    Valuation(#[from] ValuationError),
    #[error(transparent)]
    Hensel(#[from] HenselError),
}

/// A polynomial together with the place whose valuation builds its polygon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuedPoly {
    poly: RatPoly,
    place: Place,
}

impl ValuedPoly {
    pub fn new(poly: RatPoly, place: Place) -> Result<ValuedPoly, PolygonError> {
        if poly.is_zero() {
            return Err(PolygonError::ZeroPolynomial);
        }
        if place == Place::RealArchimedean {
            return Err(PolygonError::ArchimedeanPlace);
        }
        Ok(ValuedPoly { poly, place })
    }

    pub fn padic(poly: RatPoly, p: Prime) -> Result<ValuedPoly, PolygonError> {
        ValuedPoly::new(poly, Place::Padic(p))
    }

    pub fn poly(&self) -> &RatPoly {
        &self.poly
    }

    pub fn place(&self) -> Place {
        self.place
    }

    pub fn prime(&self) -> Option<Prime> {
        match self.place {
            Place::Padic(p) => Some(p),
            _ => None,
        }
    }

    fn value(&self, c: &Rational) -> Option<Rational> {
        match self.place {
            Place::Padic(p) => vp_int(c, p).map(int),
            _ => (!c.is_zero()).then(Rational::zero),
        }
    }

    /// `(m, v(c_m))` for every nonzero coefficient.
    pub fn points(&self) -> Vec<(i64, Rational)> {
        self.poly
            .coeffs()
            .iter()
            .enumerate()
            .filter_map(|(m, c)| self.value(c).map(|v| (m as i64, v)))
            .collect()
    }

    /// Order of vanishing at `T = 0`.
    pub fn ord(&self) -> usize {
        self.poly.coeffs().iter().take_while(|c| c.is_zero()).count()
    }
}

/// A segment of a Newton polygon between consecutive vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub start: (i64, Rational),
    pub end: (i64, Rational),
    pub slope: Rational,
    pub length: i64,
}

/// Lower convex hull of finitely many points with distinct abscissae.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    vertices: Vec<(i64, Rational)>,
}

fn slope_between(a: &(i64, Rational), b: &(i64, Rational)) -> Rational {
    (&b.1 - &a.1) / int(b.0 - a.0)
}

impl NewtonPolygon {
    /// Monotone chain over the points sorted by abscissa; for repeated
    /// abscissae only the lowest point matters.
    pub fn from_points(points: &[(i64, Rational)]) -> Option<NewtonPolygon> {
        let mut sorted = points.to_vec();
        sorted.sort();
        sorted.dedup_by(|b, a| a.0 == b.0);
        let mut hull: Vec<(i64, Rational)> = Vec::with_capacity(sorted.len());
        for pt in sorted {
            while hull.len() >= 2 {
                let n = hull.len();
                if slope_between(&hull[n - 2], &hull[n - 1]) >= slope_between(&hull[n - 1], &pt) {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(pt);
        }
        (!hull.is_empty()).then_some(NewtonPolygon { vertices: hull })
    }

    pub fn vertices(&self) -> &[(i64, Rational)] {
        &self.vertices
    }

    pub fn segments(&self) -> Vec<Segment> {
        self.vertices
            .windows(2)
            .map(|w| Segment {
                start: w[0].clone(),
                end: w[1].clone(),
                slope: slope_between(&w[0], &w[1]),
                length: w[1].0 - w[0].0,
            })
            .collect()
    }

    pub fn slopes(&self) -> Vec<Rational> {
        self.segments().into_iter().map(|s| s.slope).collect()
    }

    pub fn start(&self) -> i64 {
        self.vertices[0].0
    }

    pub fn end(&self) -> i64 {
        self.vertices[self.vertices.len() - 1].0
    }

    /// The piecewise-affine hull value at `t`, `+∞` outside `[m_0, m_k]`.
    pub fn value_at(&self, t: &Rational) -> ExtRational {
        if *t < int(self.start()) || *t > int(self.end()) {
            return ExtRational::Infinity;
        }
        if self.vertices.len() == 1 {
            return self.vertices[0].1.clone().into();
        }
        let seg = self
            .segments()
            .into_iter()
            .find(|s| *t <= int(s.end.0))
            .expect("t lies in range");
        (&seg.start.1 + &seg.slope * (t - int(seg.start.0))).into()
    }
}

/// Newton polygon of a nonzero polynomial. Vertices keep the original
/// indices, so a polynomial divisible by `T^k` has its first vertex at `k`.
pub fn polygon(phi: &ValuedPoly) -> NewtonPolygon {
    NewtonPolygon::from_points(&phi.points()).expect("nonzero polynomial has points")
}

/// Root valuations with multiplicity: a segment of slope `λ` and length `ℓ`
/// gives `ℓ` roots of valuation `-λ`. Roots at zero come first as `+∞`.
pub fn root_valuations(phi: &ValuedPoly) -> Vec<(ExtRational, usize)> {
    let mut out = Vec::new();
    let ord = phi.ord();
    if ord > 0 {
        out.push((ExtRational::Infinity, ord));
    }
    for seg in polygon(phi).segments() {
        out.push(((-seg.slope).into(), seg.length as usize));
    }
    out
}

/// Outcome of the single-slope irreducibility test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// One segment of slope `-r/d` in lowest terms with `d = deg φ`.
    Irreducible { r: i64, d: usize },
    Inconclusive,
}

pub fn pure_slope_irreducible(phi: &ValuedPoly) -> Result<Certificate, PolygonError> {
    if !phi.poly.is_monic() {
        return Err(PolygonError::NotMonic);
    }
    if phi.ord() > 0 {
        return Err(PolygonError::ZeroConstantTerm);
    }
    let segs = polygon(phi).segments();
    let d = phi.poly.degree().expect("nonzero");
    if segs.len() != 1 {
        return Ok(Certificate::Inconclusive);
    }
    let neg = -&segs[0].slope;
    let (r, den) = (neg.numer(), neg.denom());
    if den.to_usize() == Some(d) && r.gcd(den).is_one() {
        Ok(Certificate::Irreducible { r: r.to_i64().expect("small numerator"), d })
    } else {
        Ok(Certificate::Inconclusive)
    }
}

/// Monic, every lower coefficient divisible by `p`, constant term not by
/// `p^2`. Non-monic inputs and the trivial place answer `false`.
pub fn eisenstein_check(phi: &ValuedPoly) -> bool {
    let Some(p) = phi.prime() else { return false };
    let coeffs = phi.poly.coeffs();
    if !phi.poly.is_monic() || coeffs.len() < 2 {
        return false;
    }
    let lower_ok = coeffs[..coeffs.len() - 1].iter().all(|c| vp_int(c, p).is_none_or(|v| v >= 1));
    lower_ok && vp_int(&coeffs[0], p) == Some(1)
}

/// Valuation of a root of the monic irreducible `minpoly` of degree `d`:
/// `v(c_0) / d`. Irreducibility is the caller's responsibility.
pub fn extension_valuation(minpoly: &ValuedPoly, d: usize) -> Result<ExtRational, PolygonError> {
    let actual = minpoly.poly.degree().expect("nonzero");
    if d != actual || d == 0 {
        return Err(PolygonError::DegreeMismatch { declared: d, actual });
    }
    if !minpoly.poly.is_monic() {
        return Err(PolygonError::NotMonic);
    }
    Ok(match minpoly.value(&minpoly.poly.coeff(0)) {
        Some(v) => (v / int(d as i64)).into(),
        None => ExtRational::Infinity,
    })
}

/// One factor of a slope factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeFactor {
    pub factor: PadicPolynomial,
    pub slope: Rational,
    pub length: usize,
}

/// Splits a monic polynomial at the first interior vertex `n` of its
/// polygon into the part carrying the segments left of `n` (the small roots)
/// and the rest. Relative to the Gauss valuation whose supporting line
/// touches the polygon only at `n`, the starting factors reduce to `T^n` and
/// a constant, which are coprime; so the weighted resultant is a unit and the
/// Hensel condition reduces to the strict gap at `n`, which always holds.
fn split_off_first_slope(
    phi: &RatPoly,
    p: Prime,
    stop: i64,
) -> Result<(RatPoly, Option<RatPoly>), PolygonError> {
    let valued = ValuedPoly::padic(phi.clone(), p)?;
    let hull = polygon(&valued);
    let segs = hull.segments();
    if segs.len() <= 1 {
        return Ok((phi.clone(), None));
    }
    let n = segs[0].end.0 as usize;
    let d = phi.degree().expect("nonzero");
    let pivot = phi.coeff(n);
    let small = RatPoly::new((0..=n).map(|m| phi.coeff(m) / &pivot).collect());
    let large = RatPoly::new((n..=d).map(|m| phi.coeff(m)).collect());
    let tilt = (&segs[0].slope + &segs[1].slope) / int(2);
    let spread = ceil(&(tilt.abs() * int(d as i64))).to_i64().expect("small");
    let truncation = stop + spread + 2;
    let (small, large, _) = lift_factor_pair(phi, &small, &large, p, stop, truncation)?;
    Ok((small, Some(large)))
}

/// Factors a monic `φ` with nonzero constant term into pieces with one slope
/// each, in increasing slope order, with `∏ P_i ≡ φ mod p^target`.
pub fn slope_factorization(phi: &ValuedPoly, target: i64) -> Result<Vec<SlopeFactor>, PolygonError> {
    let p = phi.prime().ok_or(PolygonError::NotPadic)?;
    if !phi.poly.is_monic() {
        return Err(PolygonError::NotMonic);
    }
    if phi.ord() > 0 {
        return Err(PolygonError::ZeroConstantTerm);
    }
    let d = phi.poly.degree().expect("nonzero") as i64;
    let values: Vec<Rational> = phi.points().into_iter().map(|(_, v)| v).collect();
    let floor = values.iter().min().expect("nonzero");
    let spread = values.iter().max().expect("nonzero") - floor;
    // factors must be stored finely enough to keep their constant terms visible
    let visible = ceil(&spread).to_i64().expect("small") + 1;
    let mut pad = d + 2 + ceil(&floor.abs()).to_i64().expect("small");
    for _ in 0..4 {
        let stop = target.max(visible) + pad;
        let mut pieces = Vec::new();
        let mut rest = phi.poly.clone();
        loop {
            let (piece, remainder) = split_off_first_slope(&rest, p, stop)?;
            pieces.push(piece);
            match remainder {
                Some(r) => rest = r,
                None => break,
            }
        }
        let factors = pieces
            .iter()
            .map(|f| PadicPolynomial::from_ratpoly(p, f, stop))
            .collect::<Result<Vec<_>, _>>()?;
        let product = factors.iter().fold(RatPoly::one(), |acc, f| &acc * &f.to_ratpoly());
        if product_agrees(&product, &phi.poly, p, target) {
            return factors
                .into_iter()
                .zip(pieces)
                .map(|(factor, piece)| {
                    let segs = polygon(&ValuedPoly::padic(piece, p)?).segments();
                    if segs.len() != 1 {
                        return Err(PolygonError::ProductCheckFailed);
                    }
                    let seg = segs.into_iter().next().expect("one segment");
                    Ok(SlopeFactor { factor, slope: seg.slope, length: seg.length as usize })
                })
                .collect();
        }
        pad *= 2;
    }
    Err(PolygonError::ProductCheckFailed)
}

fn product_agrees(a: &RatPoly, b: &RatPoly, p: Prime, target: i64) -> bool {
    (a - b).coeffs().iter().all(|c| vp_int(c, p).is_none_or(|v| v >= target))
}

/// `τ(x) = max_m (m·x - v(c_m))`.
pub fn tropical_eval(phi: &ValuedPoly, x: &Rational) -> Rational {
    phi.points()
        .into_iter()
        .map(|(m, v)| int(m) * x - v)
        .max()
        .expect("nonzero polynomial")
}

/// The Legendre transform of `τ`, which is the polygon's value at `t`.
pub fn legendre_dual(ng: &NewtonPolygon, t: &Rational) -> ExtRational {
    ng.value_at(t)
}

/// The degree bound for one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColemanPrime {
    pub prime: Prime,
    pub polygon: NewtonPolygon,
    /// Every slope has the form `-(p^k - 1) / (p^k (p - 1))`.
    pub closed_form_slopes: bool,
    /// The smallest slope denominator, a power of `p`.
    pub degree_divisor: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColemanBound {
    pub bound: u64,
    pub per_prime: Vec<ColemanPrime>,
}

/// Polygon of `Σ_{k≤n} T^k / k!` at `p`.
pub fn truncated_exp_polygon(n: u64, p: Prime) -> NewtonPolygon {
    let points: Vec<(i64, Rational)> =
        (0..=n).map(|m| (m as i64, -int(vp_factorial(m, p) as i64))).collect();
    NewtonPolygon::from_points(&points).expect("nonempty")
}

fn closed_form_slope(denominator: &num_bigint::BigInt, p: Prime) -> Option<Rational> {
    let mut k = 0u32;
    let mut q = denominator.clone();
    let pb = p.to_bigint();
    while (&q % &pb).is_zero() {
        q /= &pb;
        k += 1;
    }
    if !q.is_one() || k == 0 {
        return None;
    }
    let pk = Rational::from_integer(p.pow(k));
    Some(-(&pk - Rational::one()) / (pk * int(p.get() as i64 - 1)))
}

/// Every rational factor of the truncated exponential of degree `n` has
/// degree divisible by the returned bound: at each `p` the local irreducible
/// factors have degrees divisible by the slope denominators.
pub fn coleman_degree_bound(n: u64, primes: &[u64]) -> Result<ColemanBound, PolygonError> {
    if n == 0 {
        return Err(PolygonError::ZeroDegree);
    }
    let primes = primes.iter().map(|&q| Prime::new(q)).collect::<Result<Vec<_>, _>>()?;
    let mut rest = n;
    for p in &primes {
        while rest.is_multiple_of(p.get()) {
            rest /= p.get();
        }
    }
    if rest > 1 {
        let missing = (2..=rest).find(|q| rest.is_multiple_of(*q)).expect("rest > 1");
        return Err(PolygonError::MissingPrime(missing));
    }
    let mut bound = 1u64;
    let mut per_prime = Vec::new();
    for p in primes {
        let ng = truncated_exp_polygon(n, p);
        let slopes = ng.slopes();
        let closed_form_slopes = slopes
            .iter()
            .all(|s| closed_form_slope(s.denom(), p).as_ref() == Some(s));
        let degree_divisor = slopes
            .iter()
            .map(|s| s.denom().to_u64().expect("small"))
            .min()
            .unwrap_or(1);
        // the degree divisor is a power of p, so gcd with n picks its p-part
        bound *= degree_divisor.gcd(&n);
        per_prime.push(ColemanPrime { prime: p, polygon: ng, closed_form_slopes, degree_divisor });
    }
    Ok(ColemanBound { bound, per_prime })
}
