//! Generalized barycentric coordinates on convex polygons.
//!
//! Two constructions are provided: mean value coordinates, which tolerate
//! interior angles up to and including pi, and Wachspress coordinates, which
//! need a strictly convex polygon. Both come with analytic gradients.

mod fd;
mod mean_value;
mod scan;
mod wachspress;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{GeometryError, Polygon};
use crate::point::Vec2;

pub use fd::fd_gradient;
pub use mean_value::{mvc_gradients, mvc_values, mvc_weights, NEAR_STRAIGHT_ANGLE};
pub use scan::{grid_points, scan_grid, sup_gradient_scan, GradientScan};
pub use wachspress::{wachspress_gradients, wachspress_values};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoordinateKind {
    #[serde(rename = "mvc")]
    MeanValue,
    Wachspress,
}

impl CoordinateKind {
    pub const ALL: [CoordinateKind; 2] = [CoordinateKind::MeanValue, CoordinateKind::Wachspress];

    pub fn name(self) -> &'static str {
        match self {
            CoordinateKind::MeanValue => "mvc",
            CoordinateKind::Wachspress => "wachspress",
        }
    }
}

impl fmt::Display for CoordinateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CoordinateKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "mvc" | "mean-value" | "meanvalue" => Ok(CoordinateKind::MeanValue),
            "wachspress" | "wp" => Ok(CoordinateKind::Wachspress),
            other => Err(format!("unknown coordinate kind `{other}` (expected mvc or wachspress)")),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoordsError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("vertex {vertex} has an interior angle of pi; Wachspress coordinates are undefined")]
    CollinearVertices { vertex: usize },
    #[error("finite-difference step {step:e} is not positive or exceeds the boundary margin {margin:e}")]
    StepTooLarge { step: f64, margin: f64 },
    #[error("invalid scan parameters: {0}")]
    InvalidScan(String),
}

/// Coordinate values, and optionally gradients, at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisEval {
    pub kind: CoordinateKind,
    pub lambda: Vec<f64>,
    pub grad_lambda: Option<Vec<Vec2>>,
    /// Unnormalized mean value weights; absent for Wachspress and for
    /// boundary evaluations.
    pub weights: Option<Vec<f64>>,
}

impl BasisEval {
    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }

    pub fn gradients(&self) -> &[Vec2] {
        self.grad_lambda.as_deref().unwrap_or(&[])
    }

    /// Interpolates vertex data: `sum_i values[i] * lambda_i`.
    pub fn interpolate(&self, values: &[f64]) -> f64 {
        self.lambda.iter().zip(values).map(|(l, u)| l * u).sum()
    }

    /// Gradient of the interpolant of vertex data.
    pub fn interpolate_gradient(&self, values: &[f64]) -> Vec2 {
        self.gradients().iter().zip(values).map(|(g, &u)| *g * u).sum()
    }
}

/// Edge-linear values for a point on (or numerically on) edge `edge`.
pub(crate) fn edge_linear(n: usize, edge: usize, s: f64) -> Vec<f64> {
    let mut lambda = vec![0.0; n];
    lambda[edge] = 1.0 - s;
    lambda[(edge + 1) % n] += s;
    lambda
}

/// Edge parameter of the projection of `x` onto edge `edge`, in `[0, 1]`.
pub(crate) fn edge_parameter(p: &Polygon, edge: usize, x: Vec2) -> f64 {
    let (a, b) = p.edge(edge);
    let e = b - a;
    ((x - a).dot(e) / e.norm_squared()).clamp(0.0, 1.0)
}

/// Values of the chosen coordinates at `x`, which may lie on the boundary.
pub fn values(p: &Polygon, x: Vec2, kind: CoordinateKind) -> Result<BasisEval, CoordsError> {
    match kind {
        CoordinateKind::MeanValue => mvc_values(p, x),
        CoordinateKind::Wachspress => wachspress_values(p, x),
    }
}

/// Values and gradients of the chosen coordinates at a strictly interior `x`.
pub fn gradients(p: &Polygon, x: Vec2, kind: CoordinateKind) -> Result<BasisEval, CoordsError> {
    match kind {
        CoordinateKind::MeanValue => mvc_gradients(p, x),
        CoordinateKind::Wachspress => wachspress_gradients(p, x),
    }
}

/// Areal coordinates of `x` in a triangle and their (constant) gradients.
///
/// Used as the reference that both constructions must reduce to on
/// triangles.
pub fn areal_coordinates(tri: [Vec2; 3], x: Vec2) -> ([f64; 3], [Vec2; 3]) {
    let twice = (tri[1] - tri[0]).cross(tri[2] - tri[0]);
    let mut lambda = [0.0; 3];
    let mut grad = [Vec2::ZERO; 3];
    for i in 0..3 {
        let a = tri[(i + 1) % 3];
        let b = tri[(i + 2) % 3];
        lambda[i] = (a - x).cross(b - x) / twice;
        grad[i] = (b - a).perp() / twice;
    }
    (lambda, grad)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gradient_identities_hold_next_to_an_edge() {
        let p = Polygon::pentagon(1.3).unwrap();
        for &d in &[1e-4, 1e-6, 2e-8, 3e-9] {
            let x = Vec2::new(0.37, -1.0 + d);
            for kind in CoordinateKind::ALL {
                let e = gradients(&p, x, kind).unwrap();
                let g = e.gradients();
                assert!(g.iter().copied().sum::<Vec2>().norm() < 1e-13, "{kind} at {d}");
                let mut m = [0.0; 4];
                for (v, gi) in p.vertices().iter().zip(g) {
                    m[0] += v.x * gi.x;
                    m[1] += v.x * gi.y;
                    m[2] += v.y * gi.x;
                    m[3] += v.y * gi.y;
                }
                let dev = [m[0] - 1.0, m[1], m[2], m[3] - 1.0].iter().fold(0.0f64, |a, v| a.max(v.abs()));
                assert!(dev < 1e-12, "{kind} at {d}: {dev:e}");
            }
        }
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("mvc".parse::<CoordinateKind>().unwrap(), CoordinateKind::MeanValue);
        assert_eq!("Wachspress".parse::<CoordinateKind>().unwrap(), CoordinateKind::Wachspress);
        assert!("sibson".parse::<CoordinateKind>().is_err());
        assert_eq!(CoordinateKind::Wachspress.to_string(), "wachspress");
    }

    #[test]
    fn areal_reference() {
        let tri = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)];
        let (l, g) = areal_coordinates(tri, Vec2::new(0.25, 0.25));
        assert_eq!(l, [0.5, 0.25, 0.25]);
        assert_eq!(g[0], Vec2::new(-1.0, -1.0));
        assert_eq!(g[1], Vec2::new(1.0, 0.0));
        assert_eq!(g[2], Vec2::new(0.0, 1.0));
    }
}
