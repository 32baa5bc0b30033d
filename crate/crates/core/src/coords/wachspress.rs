use std::f64::consts::PI;

use super::{edge_linear, BasisEval, CoordinateKind, CoordsError};
use crate::geometry::{interior_angles, point_geometry, GeometryError, Polygon};
use crate::point::Vec2;

/// Interior angles within this of pi make a corner triangle vanish.
const STRAIGHT_ANGLE_TOL: f64 = 1e-9;

fn check_strictly_convex(p: &Polygon) -> Result<(), CoordsError> {
    match interior_angles(p).iter().position(|&b| b > PI - STRAIGHT_ANGLE_TOL) {
        Some(vertex) => Err(CoordsError::CollinearVertices { vertex }),
        None => Ok(()),
    }
}

/// Signed area of the triangle `(a, b, c)`.
#[inline]
fn tri_area(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    0.5 * (b - a).cross(c - a)
}

struct Terms {
    /// `A(x, v_i, v_{i+1})`
    edge_area: Vec<f64>,
    /// `A(v_{i-1}, v_i, v_{i+1})`
    corner_area: Vec<f64>,
}

fn terms(p: &Polygon, x: Vec2) -> Terms {
    let n = p.len();
    Terms {
        edge_area: (0..n).map(|i| tri_area(x, p.vertex(i), p.vertex(i + 1))).collect(),
        corner_area: (0..n)
            .map(|i| tri_area(p.vertex(i + n - 1), p.vertex(i), p.vertex(i + 1)))
            .collect(),
    }
}

/// Wachspress coordinate values at `x`.
///
/// The weight of vertex `i` is `A(v_{i-1}, v_i, v_{i+1}) / (A(x, v_{i-1}, v_i) A(x, v_i, v_{i+1}))`.
pub fn wachspress_values(p: &Polygon, x: Vec2) -> Result<BasisEval, CoordsError> {
    check_strictly_convex(p)?;
    let n = p.len();
    let d = p.boundary_distance(x);
    if d < -p.eval_tolerance() {
        return Err(GeometryError::OutsidePolygon { x: x.x, y: x.y }.into());
    }
    if d <= p.eval_tolerance() {
        let (edge, s) = p.nearest_edge(x);
        return Ok(BasisEval {
            kind: CoordinateKind::Wachspress,
            lambda: edge_linear(n, edge, s),
            grad_lambda: None,
            weights: None,
        });
    }
    let t = terms(p, x);
    let weights: Vec<f64> = (0..n)
        .map(|i| t.corner_area[i] / (t.edge_area[(i + n - 1) % n] * t.edge_area[i]))
        .collect();
    let total: f64 = weights.iter().sum();
    Ok(BasisEval {
        kind: CoordinateKind::Wachspress,
        lambda: weights.iter().map(|w| w / total).collect(),
        grad_lambda: None,
        weights: None,
    })
}

/// Wachspress values and analytic gradients at a strictly interior `x`.
///
/// Weights are multiplied by the smallest edge area `A_m`, which cancels
/// the factor that vanishes as `x` approaches edge `m` and keeps every term
/// of the quotient rule bounded.
pub fn wachspress_gradients(p: &Polygon, x: Vec2) -> Result<BasisEval, CoordsError> {
    check_strictly_convex(p)?;
    point_geometry(p, x)?;
    let n = p.len();
    let t = terms(p, x);
    let a = &t.edge_area;
    // A(x, a, b) is affine in x with gradient perp(b - a) / 2.
    let grad_area: Vec<Vec2> = (0..n).map(|i| (p.vertex(i + 1) - p.vertex(i)).perp() * 0.5).collect();
    let m = (0..n).fold(0, |best, j| if a[j] < a[best] { j } else { best });
    let mut scaled = Vec::with_capacity(n);
    let mut grad_w = Vec::with_capacity(n);
    for i in 0..n {
        let im = (i + n - 1) % n;
        let c = t.corner_area[i];
        let (w, g) = if i == m {
            let w = c / a[im];
            (w, -grad_area[im] * (w / a[im]))
        } else if im == m {
            let w = c / a[i];
            (w, -grad_area[i] * (w / a[i]))
        } else {
            let q = c / (a[im] * a[i]);
            let w = q * a[m];
            (w, grad_area[m] * q - (grad_area[im] / a[im] + grad_area[i] / a[i]) * w)
        };
        scaled.push(w);
        grad_w.push(g);
    }
    let total: f64 = scaled.iter().sum();
    let grad_total: Vec2 = grad_w.iter().copied().sum();
    let lambda: Vec<f64> = scaled.iter().map(|w| w / total).collect();
    let grad_lambda = (0..n).map(|i| (grad_w[i] - grad_total * lambda[i]) / total).collect();
    Ok(BasisEval {
        kind: CoordinateKind::Wachspress,
        lambda,
        grad_lambda: Some(grad_lambda),
        weights: None,
    })
}
