//! Supports and Newton polytopes of multivariate polynomials, Gauss norms,
//! tropical evaluation, and a Minkowski-decomposability search for planar
//! polytopes.

use std::cmp::Ordering;

use num_integer::Integer;
use num_traits::Zero;
use thiserror::Error;

use crate::multipoly::MultiPoly;
use crate::valuation::{int, vp_int, ExtRational, Place, Rational};

/// Default bound on the number of primitive edges searched by
/// [`indecomposable_hint`].
pub const DEFAULT_EDGE_GUARD: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("the zero polynomial has no Newton polytope")]
    ZeroPolynomial,
    #[error("planar polytopes need 2 variables, got {0}")]
    NotBivariate(usize),
    #[error("expected a point with {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("an archimedean place has no Gauss norm")]
    ArchimedeanPlace,
}

pub type LatticePoint = (i64, i64);

fn sub(a: LatticePoint, b: LatticePoint) -> LatticePoint {
    (a.0 - b.0, a.1 - b.1)
}

fn add(a: LatticePoint, b: LatticePoint) -> LatticePoint {
    (a.0 + b.0, a.1 + b.1)
}

fn cross(a: LatticePoint, b: LatticePoint) -> i64 {
    a.0 * b.1 - a.1 * b.0
}

/// Convex lattice polygon, counterclockwise from its lowest (then leftmost)
/// vertex, with no three consecutive vertices collinear. A point or a segment
/// is kept as a 1- or 2-vertex chain.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticePolygon {
    vertices: Vec<LatticePoint>,
}

impl LatticePolygon {
    /// Convex hull by the monotone chain; `None` for no points.
    pub fn hull(points: &[LatticePoint]) -> Option<LatticePolygon> {
        let mut pts = points.to_vec();
        pts.sort_unstable();
        pts.dedup();
        if pts.len() <= 2 {
            return (!pts.is_empty()).then(|| LatticePolygon::normalized(pts));
        }
        let mut lower: Vec<LatticePoint> = Vec::new();
        for &p in &pts {
            while lower.len() >= 2 && cross(sub(lower[lower.len() - 1], lower[lower.len() - 2]), sub(p, lower[lower.len() - 1])) <= 0 {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<LatticePoint> = Vec::new();
        for &p in pts.iter().rev() {
            while upper.len() >= 2 && cross(sub(upper[upper.len() - 1], upper[upper.len() - 2]), sub(p, upper[upper.len() - 1])) <= 0 {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        Some(LatticePolygon::normalized(lower))
    }

    fn normalized(mut vertices: Vec<LatticePoint>) -> LatticePolygon {
        let start = (0..vertices.len())
            .min_by_key(|&i| (vertices[i].1, vertices[i].0))
            .expect("nonempty");
        vertices.rotate_left(start);
        LatticePolygon { vertices }
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    /// Edge vectors in counterclockwise order; a segment has two opposite edges.
    pub fn edges(&self) -> Vec<LatticePoint> {
        let n = self.vertices.len();
        if n < 2 {
            return Vec::new();
        }
        (0..n).map(|i| sub(self.vertices[(i + 1) % n], self.vertices[i])).collect()
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        match self.vertices.len() {
            1 => self.vertices[0] == p,
            2 => {
                let (a, b) = (self.vertices[0], self.vertices[1]);
                cross(sub(b, a), sub(p, a)) == 0
                    && (p.0 - a.0) * (p.0 - b.0) <= 0
                    && (p.1 - a.1) * (p.1 - b.1) <= 0
            }
            _ => self.edges().iter().zip(&self.vertices).all(|(&e, &v)| cross(e, sub(p, v)) >= 0),
        }
    }
}

/// Half-plane index and cross-product order: angles in `[0, 2π)`.
fn angle_order(a: LatticePoint, b: LatticePoint) -> Ordering {
    let half = |v: LatticePoint| if v.1 > 0 || (v.1 == 0 && v.0 > 0) { 0 } else { 1 };
    half(a).cmp(&half(b)).then_with(|| 0.cmp(&cross(a, b)))
}

/// Exponent tuples with nonzero coefficient, sorted.
pub fn support(phi: &MultiPoly) -> Vec<Vec<u32>> {
    phi.support()
}

fn planar_support(phi: &MultiPoly) -> Result<Vec<LatticePoint>, PolytopeError> {
    if phi.nvars() != 2 {
        return Err(PolytopeError::NotBivariate(phi.nvars()));
    }
    if phi.is_zero() {
        return Err(PolytopeError::ZeroPolynomial);
    }
    Ok(phi.support().into_iter().map(|e| (e[0] as i64, e[1] as i64)).collect())
}

pub fn polytope2(phi: &MultiPoly) -> Result<LatticePolygon, PolytopeError> {
    Ok(LatticePolygon::hull(&planar_support(phi)?).expect("nonzero polynomial"))
}

/// Sum of two convex polygons by merging their edge sequences by angle.
pub fn minkowski_sum(a: &LatticePolygon, b: &LatticePolygon) -> LatticePolygon {
    let mut edges = a.edges();
    edges.extend(b.edges());
    edges.sort_by(|&x, &y| angle_order(x, y));
    let mut at = add(a.vertices[0], b.vertices[0]);
    let mut pts = vec![at];
    for e in edges {
        at = add(at, e);
        pts.push(at);
    }
    LatticePolygon::hull(&pts).expect("nonempty")
}

fn check_place(place: Place) -> Result<(), PolytopeError> {
    if place == Place::RealArchimedean {
        Err(PolytopeError::ArchimedeanPlace)
    } else {
        Ok(())
    }
}

fn coefficient_value(c: &Rational, place: Place) -> Rational {
    match place {
        Place::Padic(p) => int(vp_int(c, p).expect("nonzero coefficient")),
        _ => Rational::zero(),
    }
}

fn dot(exps: &[u32], x: &[Rational]) -> Rational {
    exps.iter().zip(x).fold(Rational::zero(), |acc, (&e, xi)| acc + int(e as i64) * xi)
}

fn check_dimension(phi: &MultiPoly, x: &[Rational]) -> Result<(), PolytopeError> {
    if x.len() != phi.nvars() {
        return Err(PolytopeError::DimensionMismatch { expected: phi.nvars(), got: x.len() });
    }
    Ok(())
}

/// `min_m (v(a_m) + m·s)`, `+∞` for the zero polynomial.
pub fn gauss_norm_multi(phi: &MultiPoly, place: Place, s: &[Rational]) -> Result<ExtRational, PolytopeError> {
    check_place(place)?;
    check_dimension(phi, s)?;
    Ok(phi
        .terms()
        .map(|(e, c)| ExtRational::from(coefficient_value(c, place) + dot(e, s)))
        .min()
        .unwrap_or(ExtRational::Infinity))
}

/// Value of `max_m (m·x - v(a_m))` and the terms attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalValue {
    pub value: Rational,
    pub active: Vec<Vec<u32>>,
}

impl TropicalValue {
    /// A unique maximizing term means the polynomial has no zero with these
    /// valuation coordinates.
    pub fn unique(&self) -> bool {
        self.active.len() == 1
    }
}

pub fn tropical_eval_multi(phi: &MultiPoly, place: Place, x: &[Rational]) -> Result<TropicalValue, PolytopeError> {
    check_place(place)?;
    check_dimension(phi, x)?;
    if phi.is_zero() {
        return Err(PolytopeError::ZeroPolynomial);
    }
    let scored: Vec<(Vec<u32>, Rational)> = phi
        .terms()
        .map(|(e, c)| (e.clone(), dot(e, x) - coefficient_value(c, place)))
        .collect();
    let value = scored.iter().map(|(_, v)| v.clone()).max().expect("nonzero");
    let active = scored.into_iter().filter(|(_, v)| *v == value).map(|(e, _)| e).collect();
    Ok(TropicalValue { value, active })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecompositionHint {
    Indecomposable,
    /// `P = first + second` with neither summand a point.
    Decomposable(LatticePolygon, LatticePolygon),
    Unknown,
}

/// Searches the sub-multisets of the primitive edge vectors for a proper
/// nonempty one summing to zero; such a set traces a summand, and the
/// complement traces the other. Gives up past `guard` primitive edges.
pub fn indecomposable_hint(poly: &LatticePolygon, guard: usize) -> DecompositionHint {
    if poly.vertices.len() < 2 {
        return DecompositionHint::Unknown;
    }
    let edges: Vec<(LatticePoint, u64)> = poly
        .edges()
        .into_iter()
        .map(|(x, y)| {
            let g = x.unsigned_abs().gcd(&y.unsigned_abs());
            ((x / g as i64, y / g as i64), g)
        })
        .collect();
    let total: u64 = edges.iter().map(|&(_, g)| g).sum();
    if total as usize > guard {
        return DecompositionHint::Unknown;
    }
    let mut counts = vec![0u64; edges.len()];
    loop {
        // odometer over 0..=g_i per edge
        let mut i = 0;
        while i < counts.len() && counts[i] == edges[i].1 {
            counts[i] = 0;
            i += 1;
        }
        if i == counts.len() {
            return DecompositionHint::Indecomposable;
        }
        counts[i] += 1;
        let chosen: u64 = counts.iter().sum();
        if chosen == total {
            continue;
        }
        let sum = edges
            .iter()
            .zip(&counts)
            .fold((0, 0), |acc, (&(e, _), &k)| add(acc, (e.0 * k as i64, e.1 * k as i64)));
        if sum == (0, 0) {
            let trace = |start: LatticePoint, take: &dyn Fn(usize) -> u64| {
                let mut at = start;
                let mut pts = vec![at];
                for (j, &(e, _)) in edges.iter().enumerate() {
                    let k = take(j) as i64;
                    at = add(at, (e.0 * k, e.1 * k));
                    pts.push(at);
                }
                LatticePolygon::hull(&pts).expect("nonempty")
            };
            let first = trace(poly.vertices[0], &|j| counts[j]);
            let second = trace((0, 0), &|j| edges[j].1 - counts[j]);
            return DecompositionHint::Decomposable(first, second);
        }
    }
}

/// `y^6 - 5 x y^5 + (x^3/a) y^4 - 7 a^2 x^2 y^2 + 6 a^3 x^3 + b^2 x^4`, with
/// exponent tuples ordered `(y, x)`.
pub fn newtons_example(a: &Rational, b: &Rational) -> MultiPoly {
    let term = |ey: u32, ex: u32, c: Rational| (vec![ey, ex], c);
    MultiPoly::from_terms(
        2,
        [
            term(6, 0, int(1)),
            term(5, 1, int(-5)),
            term(4, 3, a.recip()),
            term(2, 2, int(-7) * a * a),
            term(0, 3, int(6) * a * a * a),
            term(0, 4, b * b),
        ],
    )
}
