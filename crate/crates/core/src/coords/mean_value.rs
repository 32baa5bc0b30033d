use std::f64::consts::PI;

use super::{edge_linear, edge_parameter, BasisEval, CoordinateKind, CoordsError};
use crate::geometry::point_geometry::point_geometry_unchecked;
use crate::geometry::{point_geometry, GeometryError, Polygon, PointGeometry};
use crate::point::Vec2;

/// Subtended angles closer than this to pi switch value evaluation to the
/// edge-linear limit, where the weight of the edge's endpoints overflows.
pub const NEAR_STRAIGHT_ANGLE: f64 = 1e-9;

/// Mean value weights `w_i = (t_{i-1} + t_i) / r_i`.
pub fn mvc_weights(pg: &PointGeometry) -> Vec<f64> {
    let n = pg.len();
    (0..n).map(|i| (pg.t[(i + n - 1) % n] + pg.t[i]) / pg.r[i]).collect()
}

/// Mean value coordinate values at `x`.
///
/// Points within the evaluation tolerance of the boundary get the
/// edge-linear values of the nearest edge.
pub fn mvc_values(p: &Polygon, x: Vec2) -> Result<BasisEval, CoordsError> {
    let n = p.len();
    let d = p.boundary_distance(x);
    if d < -p.eval_tolerance() {
        return Err(GeometryError::OutsidePolygon { x: x.x, y: x.y }.into());
    }
    if d <= p.eval_tolerance() {
        let (edge, s) = p.nearest_edge(x);
        return Ok(boundary_eval(n, edge, s));
    }
    let pg = point_geometry_unchecked(p, x);
    if let Some(edge) = (0..n).find(|&i| pg.alpha[i] > PI - NEAR_STRAIGHT_ANGLE) {
        return Ok(boundary_eval(n, edge, edge_parameter(p, edge, x)));
    }
    let weights = mvc_weights(&pg);
    let total: f64 = weights.iter().sum();
    Ok(BasisEval {
        kind: CoordinateKind::MeanValue,
        lambda: weights.iter().map(|w| w / total).collect(),
        grad_lambda: None,
        weights: Some(weights),
    })
}

fn boundary_eval(n: usize, edge: usize, s: f64) -> BasisEval {
    BasisEval {
        kind: CoordinateKind::MeanValue,
        lambda: edge_linear(n, edge, s),
        grad_lambda: None,
        weights: None,
    }
}

/// Mean value coordinates and their analytic gradients at a strictly
/// interior `x`.
///
/// With `W = sum_j w_j`:
/// `grad w_k = (grad t_{k-1} + grad t_k) / r_k - (t_{k-1} + t_k) grad r_k / r_k^2`
/// and `grad lambda_i = (grad w_i - lambda_i grad W) / W`.
pub fn mvc_gradients(p: &Polygon, x: Vec2) -> Result<BasisEval, CoordsError> {
    let pg = point_geometry(p, x)?;
    Ok(mvc_gradients_from(&pg))
}

/// Near edge `m` the tangent `t_m` grows like the inverse distance and the
/// quotient rule cancels terms of that size. Dividing every weight by the
/// largest tangent `t_m` keeps all terms bounded: with `s = 1 / t_m`, the
/// scaled tangents are `tau_j = s t_j` and `tau_m = 1`.
pub(crate) fn mvc_gradients_from(pg: &PointGeometry) -> BasisEval {
    let n = pg.len();
    let m = (0..n).fold(0, |best, j| if pg.t[j] > pg.t[best] { j } else { best });
    let s = 1.0 / pg.t[m];
    let grad_s = pg.grad_alpha(m) * (-0.5 * (1.0 + s * s));
    let tau: Vec<f64> = (0..n).map(|j| if j == m { 1.0 } else { s * pg.t[j] }).collect();
    let grad_tau: Vec<Vec2> = (0..n)
        .map(|j| {
            if j == m {
                Vec2::ZERO
            } else {
                pg.grad_alpha(j) * (0.5 * s * (1.0 + pg.t[j] * pg.t[j])) + grad_s * pg.t[j]
            }
        })
        .collect();

    let mut scaled = Vec::with_capacity(n);
    let mut grad_w = Vec::with_capacity(n);
    for k in 0..n {
        let km = (k + n - 1) % n;
        let tsum = tau[km] + tau[k];
        let r = pg.r[k];
        scaled.push(tsum / r);
        grad_w.push((grad_tau[km] + grad_tau[k]) / r - pg.grad_r(k) * (tsum / (r * r)));
    }
    let total: f64 = scaled.iter().sum();
    let grad_total: Vec2 = grad_w.iter().copied().sum();
    let lambda: Vec<f64> = scaled.iter().map(|w| w / total).collect();
    let grad_lambda = (0..n)
        .map(|i| (grad_w[i] - grad_total * lambda[i]) / total)
        .collect();
    BasisEval {
        kind: CoordinateKind::MeanValue,
        lambda,
        grad_lambda: Some(grad_lambda),
        weights: Some(mvc_weights(pg)),
    }
}
