use super::{values, CoordinateKind, CoordsError};
use crate::geometry::Polygon;
use crate::point::Vec2;

/// Central-difference gradients of the chosen coordinates.
///
/// Only coordinate values are evaluated, so this is independent of the
/// analytic gradient code. `x` must be farther than `step` from the boundary.
pub fn fd_gradient(p: &Polygon, x: Vec2, kind: CoordinateKind, step: f64) -> Result<Vec<Vec2>, CoordsError> {
    let margin = p.boundary_distance(x);
    if !(step > 0.0) || margin <= step {
        return Err(CoordsError::StepTooLarge { step, margin });
    }
    let eval = |dx: f64, dy: f64| values(p, x + Vec2::new(dx, dy), kind).map(|e| e.lambda);
    let xp = eval(step, 0.0)?;
    let xm = eval(-step, 0.0)?;
    let yp = eval(0.0, step)?;
    let ym = eval(0.0, -step)?;
    let inv = 0.5 / step;
    Ok((0..p.len())
        .map(|i| Vec2::new((xp[i] - xm[i]) * inv, (yp[i] - ym[i]) * inv))
        .collect())
}
