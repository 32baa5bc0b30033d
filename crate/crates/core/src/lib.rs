//! Mean value and Wachspress coordinates on convex polygons.
//!
//! The crate covers polygon quality metrics ([`geometry`]), coordinate
//! evaluation with analytic gradients ([`coords`]), polygon quadrature and
//! interpolation error norms ([`interp`]), and a small polygonal finite
//! element solver for Poisson problems on meshes of degenerate octagons
//! ([`fem`]). [`sampling`] and [`audit`] generate random well-shaped
//! polygons and check the coordinate properties on them.

pub mod audit;
pub mod coords;
pub mod fem;
pub mod geometry;
pub mod interp;
pub mod point;
pub mod sampling;

pub use coords::{BasisEval, CoordinateKind, CoordsError};
pub use interp::InterpError;
pub use geometry::{GeometricConstants, GeometryError, Polygon, PointGeometry};
pub use point::Vec2;
