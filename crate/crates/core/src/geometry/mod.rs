//! Convex polygon representation, quality metrics and the geometric
//! constants that control mean value coordinate gradients.
//!
//! Vertices are indexed from zero. Edge `i` joins vertex `i` to vertex
//! `i + 1` (cyclically), so vertex `i` is shared by edges `i - 1` and `i`.

mod metrics;
pub(crate) mod point_geometry;
mod transform;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::point::Vec2;

pub use metrics::{
    aspect_ratio, compute_hstar, diameter, HSTAR_SHRINK, geometric_constants, inradius, interior_angles,
    min_vertex_separation, GeometricConstants,
};
pub use point_geometry::{ball_edge_intersections, point_geometry, PointGeometry};
pub use transform::{normalize_to_unit_diameter, Similarity};

/// Relative tolerance for orientation, convexity and degeneracy tests.
pub const GEOM_REL_TOL: f64 = 1e-12;
/// Relative distance to the boundary below which a point is not "strictly interior".
pub const EVAL_REL_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("a polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertex coordinates must be finite")]
    NonFinite,
    #[error("edge {edge} is degenerate (length {length:e})")]
    DegenerateEdge { edge: usize, length: f64 },
    #[error("polygon is not convex at vertex {vertex}")]
    NonConvex { vertex: usize },
    #[error("polygon has zero area")]
    ZeroArea,
    #[error("point ({x}, {y}) is within {distance:e} of the boundary")]
    PointTooCloseToBoundary { x: f64, y: f64, distance: f64 },
    #[error("point ({x}, {y}) lies outside the polygon")]
    OutsidePolygon { x: f64, y: f64 },
}

/// A validated convex polygon with counterclockwise vertex order.
///
/// Interior angles equal to pi are accepted, so a square with mid-side nodes
/// is a valid eight-vertex polygon.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<Vec2>,
    diameter: f64,
    area: f64,
    reversed: bool,
}

impl Polygon {
    /// Validates `vertices` as a convex polygon.
    ///
    /// Clockwise input is reversed rather than rejected; check
    /// [`Polygon::was_reversed`] to find out whether that happened.
    pub fn new(vertices: Vec<Vec2>) -> Result<Self, GeometryError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeometryError::TooFewVertices(n));
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let diameter = metrics::vertex_diameter(&vertices);
        let eps = GEOM_REL_TOL * diameter;
        for i in 0..n {
            let length = vertices[i].distance(vertices[(i + 1) % n]);
            if length <= eps {
                return Err(GeometryError::DegenerateEdge { edge: i, length });
            }
        }

        let mut vertices = vertices;
        let twice_area = shoelace(&vertices);
        if twice_area.abs() <= eps * diameter {
            return Err(GeometryError::ZeroArea);
        }
        let reversed = twice_area < 0.0;
        if reversed {
            vertices.reverse();
        }

        // Turning angles must all be non-negative and sum to one full turn;
        // the second condition rejects self-overlapping star shapes.
        let mut turning = 0.0;
        for i in 0..n {
            let prev = vertices[(i + n - 1) % n];
            let cur = vertices[i];
            let next = vertices[(i + 1) % n];
            let e0 = cur - prev;
            let e1 = next - cur;
            let cross = e0.cross(e1);
            if cross < -eps * diameter {
                let vertex = if reversed { n - 1 - i } else { i };
                return Err(GeometryError::NonConvex { vertex });
            }
            turning += cross.atan2(e0.dot(e1));
        }
        if (turning - std::f64::consts::TAU).abs() > 1e-6 {
            return Err(GeometryError::NonConvex { vertex: 0 });
        }

        Ok(Polygon {
            vertices,
            diameter,
            area: 0.5 * twice_area.abs(),
            reversed,
        })
    }

    pub fn from_points<P: Into<Vec2>>(points: impl IntoIterator<Item = P>) -> Result<Self, GeometryError> {
        Polygon::new(points.into_iter().map(Into::into).collect())
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Vertex `i`, taken cyclically.
    #[inline]
    pub fn vertex(&self, i: usize) -> Vec2 {
        self.vertices[i % self.vertices.len()]
    }

    /// Endpoints of edge `i`.
    #[inline]
    pub fn edge(&self, i: usize) -> (Vec2, Vec2) {
        (self.vertex(i), self.vertex(i + 1))
    }

    pub fn edge_length(&self, i: usize) -> f64 {
        let (a, b) = self.edge(i);
        a.distance(b)
    }

    pub fn min_edge_length(&self) -> f64 {
        (0..self.len()).map(|i| self.edge_length(i)).fold(f64::INFINITY, f64::min)
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    /// True if the input was clockwise and had to be reversed.
    pub fn was_reversed(&self) -> bool {
        self.reversed
    }

    pub fn geom_tolerance(&self) -> f64 {
        GEOM_REL_TOL * self.diameter
    }

    /// Distance below which points count as on the boundary.
    pub fn eval_tolerance(&self) -> f64 {
        EVAL_REL_TOL * self.diameter
    }

    /// Mean of the vertices.
    pub fn vertex_centroid(&self) -> Vec2 {
        self.vertices.iter().copied().sum::<Vec2>() / self.len() as f64
    }

    /// Unit inward normal of edge `i`.
    pub fn inward_normal(&self, i: usize) -> Vec2 {
        let (a, b) = self.edge(i);
        let e = b - a;
        e.perp() / e.norm()
    }

    /// Signed distance from `x` to the line of edge `i`, positive on the inside.
    pub fn edge_line_distance(&self, i: usize, x: Vec2) -> f64 {
        self.inward_normal(i).dot(x - self.vertex(i))
    }

    /// Signed distance to the boundary: positive inside, negative outside.
    ///
    /// Exact inside; outside it is a lower bound in magnitude, which is all
    /// containment tests need.
    pub fn boundary_distance(&self, x: Vec2) -> f64 {
        (0..self.len())
            .map(|i| self.edge_line_distance(i, x))
            .fold(f64::INFINITY, f64::min)
    }

    /// Index of the edge nearest to `x` together with the edge parameter of
    /// the projection of `x`, clamped to `[0, 1]`.
    pub fn nearest_edge(&self, x: Vec2) -> (usize, f64) {
        let mut best = (0, 0.0, f64::INFINITY);
        for i in 0..self.len() {
            let (a, b) = self.edge(i);
            let e = b - a;
            let s = ((x - a).dot(e) / e.norm_squared()).clamp(0.0, 1.0);
            let d = x.distance(a + e * s);
            if d < best.2 {
                best = (i, s, d);
            }
        }
        (best.0, best.1)
    }

    /// Axis-aligned bounding box as `(min, max)`.
    pub fn bounding_box(&self) -> (Vec2, Vec2) {
        let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in &self.vertices {
            lo = Vec2::new(lo.x.min(v.x), lo.y.min(v.y));
            hi = Vec2::new(hi.x.max(v.x), hi.y.max(v.y));
        }
        (lo, hi)
    }

    /// Applies `f` to every vertex and revalidates.
    pub fn map_vertices(&self, f: impl Fn(Vec2) -> Vec2) -> Result<Polygon, GeometryError> {
        Polygon::new(self.vertices.iter().map(|&v| f(v)).collect())
    }

    /// Regular `n`-gon with circumradius `radius` centred at `center`.
    pub fn regular(n: usize, radius: f64, center: Vec2) -> Result<Polygon, GeometryError> {
        Polygon::new(
            (0..n)
                .map(|k| {
                    let t = std::f64::consts::TAU * k as f64 / n as f64;
                    center + Vec2::new(t.cos(), t.sin()) * radius
                })
                .collect(),
        )
    }

    /// Axis-aligned square `[x0, x0 + side] x [y0, y0 + side]` with a node at
    /// the midpoint of every side, starting at the lower-left corner.
    pub fn degenerate_octagon(x0: f64, y0: f64, side: f64) -> Polygon {
        let h = 0.5 * side;
        let pts = [
            (0.0, 0.0),
            (h, 0.0),
            (side, 0.0),
            (side, h),
            (side, side),
            (h, side),
            (0.0, side),
            (0.0, h),
        ];
        Polygon::new(pts.iter().map(|&(x, y)| Vec2::new(x0 + x, y0 + y)).collect())
            .expect("axis-aligned octagon is valid")
    }

    /// The pentagon `(-1,1), (-1,-1), (1,-1), (1,1), (0, apex)`.
    pub fn pentagon(apex: f64) -> Result<Polygon, GeometryError> {
        Polygon::from_points([(-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (0.0, apex)])
    }
}

fn shoelace(vertices: &[Vec2]) -> f64 {
    let n = vertices.len();
    (0..n).map(|i| vertices[i].cross(vertices[(i + 1) % n])).sum()
}

/// On-disk polygon description: `{"vertices": [[x, y], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonFile {
    pub vertices: Vec<[f64; 2]>,
}

impl PolygonFile {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_polygon(&self) -> Result<Polygon, GeometryError> {
        Polygon::new(self.vertices.iter().map(|&v| v.into()).collect())
    }
}

impl From<&Polygon> for PolygonFile {
    fn from(p: &Polygon) -> Self {
        PolygonFile {
            vertices: p.vertices().iter().map(|&v| v.into()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square_is_valid() {
        let p = Polygon::from_points([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]).unwrap();
        assert_eq!(p.len(), 4);
        assert!(!p.was_reversed());
        assert!((p.area() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn octagon_with_straight_angles_is_valid() {
        let p = Polygon::degenerate_octagon(0.0, 0.0, 1.0);
        assert_eq!(p.len(), 8);
    }

    #[test]
    fn reflex_vertex_is_rejected() {
        let err = Polygon::from_points([(0.0, 0.0), (1.0, 0.0), (0.5, -0.5), (1.0, 1.0)]).unwrap_err();
        assert!(matches!(err, GeometryError::NonConvex { .. }), "{err:?}");
    }

    #[test]
    fn clockwise_input_is_reversed() {
        let p = Polygon::from_points([(0.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, 0.0)]).unwrap();
        assert!(p.was_reversed());
        assert_eq!(p.vertex(0), Vec2::new(1.0, 0.0));
        assert!(p.edge_line_distance(0, Vec2::new(0.5, 0.5)) > 0.0);
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(
            Polygon::from_points([(0.0, 0.0), (1.0, 0.0)]).unwrap_err(),
            GeometryError::TooFewVertices(2)
        );
        assert!(matches!(
            Polygon::from_points([(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 1.0)]).unwrap_err(),
            GeometryError::DegenerateEdge { edge: 1, .. }
        ));
        assert_eq!(
            Polygon::from_points([(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]).unwrap_err(),
            GeometryError::ZeroArea
        );
        assert_eq!(
            Polygon::from_points([(0.0, 0.0), (f64::NAN, 0.0), (0.0, 1.0)]).unwrap_err(),
            GeometryError::NonFinite
        );
    }

    #[test]
    fn pentagram_is_not_convex() {
        let pts: Vec<Vec2> = (0..5)
            .map(|k| {
                let t = std::f64::consts::TAU * (2 * k) as f64 / 5.0;
                Vec2::new(t.cos(), t.sin())
            })
            .collect();
        assert!(matches!(Polygon::new(pts), Err(GeometryError::NonConvex { .. })));
    }

    #[test]
    fn polygon_file_round_trip() {
        let text = r#"{"vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]}"#;
        let p = PolygonFile::from_json(text).unwrap().to_polygon().unwrap();
        assert_eq!(p.vertex(2), Vec2::new(1.0, 1.0));
        let back = serde_json::to_string(&PolygonFile::from(&p)).unwrap();
        assert_eq!(back, r#"{"vertices":[[0.0,0.0],[1.0,0.0],[1.0,1.0],[0.0,1.0]]}"#);
        assert!(PolygonFile::from_json(r#"{"vertices": [], "extra": 1}"#).is_err());
    }

    #[test]
    fn boundary_distance_sign() {
        let p = Polygon::from_points([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]).unwrap();
        assert!((p.boundary_distance(Vec2::new(0.5, 0.25)) - 0.25).abs() < 1e-15);
        assert!(p.boundary_distance(Vec2::new(1.5, 0.5)) < 0.0);
        assert_eq!(p.nearest_edge(Vec2::new(0.25, 0.01)), (0, 0.25));
    }
}
