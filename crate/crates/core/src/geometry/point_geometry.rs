use super::{GeometryError, Polygon};
use crate::point::{point_segment_distance, Vec2};

/// Distances, subtended angles and half-angle tangents seen from a point.
///
/// `alpha[i]` is the angle at `x` subtended by edge `i`, from vertex `i` to
/// vertex `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointGeometry {
    pub x: Vec2,
    /// `v_i - x`
    pub to_vertex: Vec<Vec2>,
    pub r: Vec<f64>,
    pub alpha: Vec<f64>,
    /// `tan(alpha_i / 2)`
    pub t: Vec<f64>,
}

impl PointGeometry {
    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    /// Gradient of `r_i` with respect to `x`: the unit vector from `v_i` to `x`.
    pub fn grad_r(&self, i: usize) -> Vec2 {
        -self.to_vertex[i] / self.r[i]
    }

    /// Gradient of `alpha_i` with respect to `x`.
    ///
    /// `alpha_i` is the polar angle of `v_{i+1} - x` minus that of `v_i - x`,
    /// and each polar angle contributes a term of magnitude `1 / r`.
    pub fn grad_alpha(&self, i: usize) -> Vec2 {
        let n = self.len();
        let j = (i + 1) % n;
        polar_angle_gradient(self.to_vertex[j], self.r[j]) - polar_angle_gradient(self.to_vertex[i], self.r[i])
    }

    /// Gradient of `t_i = tan(alpha_i / 2)`.
    pub fn grad_t(&self, i: usize) -> Vec2 {
        self.grad_alpha(i) * (0.5 * (1.0 + self.t[i] * self.t[i]))
    }
}

/// Gradient with respect to `x` of the polar angle of `d = v - x`.
#[inline]
fn polar_angle_gradient(d: Vec2, r: f64) -> Vec2 {
    Vec2::new(d.y, -d.x) / (r * r)
}

/// `tan(alpha / 2)` from `sin(alpha)` and `cos(alpha)` scaled by a common
/// positive factor, choosing the well-conditioned half-angle formula.
#[inline]
pub(crate) fn half_angle_tangent(sin: f64, cos: f64, scale: f64) -> f64 {
    if cos > 0.0 {
        // alpha < pi/2
        sin / (scale + cos)
    } else {
        (scale - cos) / sin
    }
}

pub(crate) fn point_geometry_unchecked(p: &Polygon, x: Vec2) -> PointGeometry {
    let n = p.len();
    let to_vertex: Vec<Vec2> = p.vertices().iter().map(|&v| v - x).collect();
    let r: Vec<f64> = to_vertex.iter().map(|d| d.norm()).collect();
    let mut alpha = Vec::with_capacity(n);
    let mut t = Vec::with_capacity(n);
    for i in 0..n {
        let j = (i + 1) % n;
        let sin = to_vertex[i].cross(to_vertex[j]);
        let cos = to_vertex[i].dot(to_vertex[j]);
        alpha.push(sin.atan2(cos));
        t.push(half_angle_tangent(sin, cos, r[i] * r[j]));
    }
    PointGeometry { x, to_vertex, r, alpha, t }
}

/// Per-vertex geometry at a strictly interior point.
pub fn point_geometry(p: &Polygon, x: Vec2) -> Result<PointGeometry, GeometryError> {
    let d = p.boundary_distance(x);
    if d < -p.eval_tolerance() {
        return Err(GeometryError::OutsidePolygon { x: x.x, y: x.y });
    }
    if d <= p.eval_tolerance() {
        return Err(GeometryError::PointTooCloseToBoundary { x: x.x, y: x.y, distance: d.max(0.0) });
    }
    Ok(point_geometry_unchecked(p, x))
}

/// Indices of the closed edges whose distance to `x` is less than `h`.
pub fn ball_edge_intersections(p: &Polygon, x: Vec2, h: f64) -> Vec<usize> {
    (0..p.len())
        .filter(|&i| {
            let (a, b) = p.edge(i);
            point_segment_distance(x, a, b) < h
        })
        .collect()
}
