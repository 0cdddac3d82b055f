//! Exact non-archimedean analysis over `Q` and `Q_p`.
//!
//! Valuations are additive throughout: `|x| = p^(-v(x))`, a Newton polygon is
//! the lower convex hull of the points `(m, v(c_m))`, and a radius `p^(-s)` is
//! carried as its exponent `s`. No floating point is used.

pub mod hensel;
pub mod linalg;
pub mod multipoly;
pub mod newton_polygon;
pub mod newton_polytope;
pub mod padic;
pub mod poly;
pub mod resultant;
pub mod tate_series;
pub mod valuation;
