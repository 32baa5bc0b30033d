use rayon::prelude::*;
use serde::Serialize;

use super::{gradients, CoordinateKind, CoordsError};
use crate::geometry::Polygon;
use crate::point::Vec2;

/// Largest gradient norms found on a grid of interior points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradientScan {
    pub kind: CoordinateKind,
    pub grid_n: usize,
    pub margin: f64,
    /// Number of grid points that were evaluated.
    pub points: usize,
    /// `max |grad lambda_i|` for each vertex.
    pub per_vertex: Vec<f64>,
    pub overall: f64,
    /// Grid point where `overall` was attained.
    pub argmax: Vec2,
}

/// Cell centres of a `grid_n x grid_n` grid over the bounding box of `p`.
/// Row-major, `y` outermost.
pub fn grid_points(p: &Polygon, grid_n: usize) -> Vec<Vec2> {
    let (lo, hi) = p.bounding_box();
    let at = |k: usize, a: f64, b: f64| a + (b - a) * (k as f64 + 0.5) / grid_n as f64;
    (0..grid_n)
        .flat_map(|j| (0..grid_n).map(move |i| Vec2::new(at(i, lo.x, hi.x), at(j, lo.y, hi.y))))
        .collect()
}

/// The points of [`grid_points`] at least `margin` from the boundary.
pub fn scan_grid(p: &Polygon, grid_n: usize, margin: f64) -> Vec<Vec2> {
    grid_points(p, grid_n).into_iter().filter(|&x| p.boundary_distance(x) >= margin).collect()
}

/// Scans gradient norms of the chosen coordinates over [`scan_grid`].
///
/// Rows are processed in parallel; the reduction is a maximum, so the result
/// does not depend on how rows are scheduled.
pub fn sup_gradient_scan(
    p: &Polygon,
    kind: CoordinateKind,
    grid_n: usize,
    margin: f64,
) -> Result<GradientScan, CoordsError> {
    if grid_n < 8 {
        return Err(CoordsError::InvalidScan(format!("grid_n must be at least 8, got {grid_n}")));
    }
    if !(margin >= p.eval_tolerance()) {
        return Err(CoordsError::InvalidScan(format!(
            "margin {margin:e} is below the evaluation tolerance {:e}",
            p.eval_tolerance()
        )));
    }
    let n = p.len();
    let pts = scan_grid(p, grid_n, margin);

    #[derive(Clone)]
    struct Acc {
        per_vertex: Vec<f64>,
        overall: f64,
        argmax: Vec2,
        // Index of the argmax point; ties resolve to the smallest index.
        at: usize,
    }
    let empty = || Acc { per_vertex: vec![0.0; n], overall: 0.0, argmax: Vec2::ZERO, at: usize::MAX };
    let merge = |mut a: Acc, b: Acc| {
        for (x, y) in a.per_vertex.iter_mut().zip(&b.per_vertex) {
            *x = x.max(*y);
        }
        if b.overall > a.overall || (b.overall == a.overall && b.at < a.at) {
            a.overall = b.overall;
            a.argmax = b.argmax;
            a.at = b.at;
        }
        a
    };

    let acc = pts
        .par_iter()
        .enumerate()
        .map(|(k, &x)| -> Result<Acc, CoordsError> {
            let e = gradients(p, x, kind)?;
            let norms: Vec<f64> = e.gradients().iter().map(|g| g.norm()).collect();
            let overall = norms.iter().copied().fold(0.0, f64::max);
            Ok(Acc { per_vertex: norms, overall, argmax: x, at: k })
        })
        .try_reduce(empty, |a, b| Ok(merge(a, b)))?;

    Ok(GradientScan {
        kind,
        grid_n,
        margin,
        points: pts.len(),
        per_vertex: acc.per_vertex,
        overall: acc.overall,
        argmax: acc.argmax,
    })
}
