//! Polygon quadrature, the mean value interpolation operator, and Sobolev
//! norms of interpolation errors.

mod field;
mod quadrature;

use serde::Serialize;
use thiserror::Error;

use crate::coords::{mvc_gradients, mvc_values, CoordsError};
use crate::geometry::Polygon;
use crate::point::Vec2;

pub use field::{Hessian, ScalarField, TestField};
pub use quadrature::{
    fan_quadrature, fan_triangles, gauss_legendre, QuadratureRule, TriangleRule, MAX_SUBDIVISION, SUPPORTED_DEGREES,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InterpError {
    #[error("no triangle rule of degree {0} (supported: 2, 5, 8, 10)")]
    UnsupportedDegree(usize),
    #[error("subdivision level {0} exceeds the supported maximum")]
    UnsupportedSubdivision(usize),
    #[error("expected {expected} nodal values, got {got}")]
    NodalCount { expected: usize, got: usize },
    #[error("H2 seminorm {0:e} is too small to normalize by")]
    DegenerateDenominator(f64),
    #[error(transparent)]
    Coords(#[from] CoordsError),
}

/// Degree and subdivision level of a fan quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuadratureSettings {
    pub degree: usize,
    pub subdivision: usize,
}

impl QuadratureSettings {
    /// Used for stiffness and load assembly.
    pub const ASSEMBLY: QuadratureSettings = QuadratureSettings { degree: 8, subdivision: 1 };
    /// Used for error norms.
    pub const NORMS: QuadratureSettings = QuadratureSettings { degree: 10, subdivision: 2 };

    pub fn rule(&self, p: &Polygon) -> Result<QuadratureRule, InterpError> {
        fan_quadrature(p, self.degree, self.subdivision)
    }
}

/// `sum_i u(v_i) lambda_i(x)` with mean value coordinates.
pub fn interpolate(p: &Polygon, nodal_values: &[f64], x: Vec2) -> Result<f64, InterpError> {
    check_nodal(p, nodal_values)?;
    Ok(mvc_values(p, x)?.interpolate(nodal_values))
}

fn check_nodal(p: &Polygon, nodal_values: &[f64]) -> Result<(), InterpError> {
    if nodal_values.len() != p.len() {
        return Err(InterpError::NodalCount { expected: p.len(), got: nodal_values.len() });
    }
    Ok(())
}

/// Vertex values of `u`.
pub fn nodal_values<F: ScalarField + ?Sized>(p: &Polygon, u: &F) -> Vec<f64> {
    p.vertices().iter().map(|&v| u.value(v)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorNorms {
    pub l2: f64,
    /// L2 norm of the gradient error.
    pub h1_semi: f64,
}

impl ErrorNorms {
    pub fn h1_full(&self) -> f64 {
        self.l2.hypot(self.h1_semi)
    }
}

/// `||u - Iu||_{L2}` and `|u - Iu|_{H1}` over `p`.
pub fn error_norms<F: ScalarField + ?Sized>(
    p: &Polygon,
    u: &F,
    rule: &QuadratureRule,
) -> Result<ErrorNorms, InterpError> {
    let nodal = nodal_values(p, u);
    let mut l2_terms = Vec::with_capacity(rule.points.len());
    let mut h1_terms = Vec::with_capacity(rule.points.len());
    for &(x, w) in &rule.points {
        let e = mvc_gradients(p, x)?;
        let err = u.value(x) - e.interpolate(&nodal);
        let gerr = u.gradient(x) - e.interpolate_gradient(&nodal);
        l2_terms.push(w * err * err);
        h1_terms.push(w * gerr.norm_squared());
    }
    Ok(ErrorNorms {
        l2: crate::point::pairwise_sum(&l2_terms).sqrt(),
        h1_semi: crate::point::pairwise_sum(&h1_terms).sqrt(),
    })
}

/// `|u|_{H2}` from the field's analytic Hessian.
pub fn h2_seminorm<F: ScalarField + ?Sized>(u: &F, rule: &QuadratureRule) -> f64 {
    rule.integrate(|x| u.hessian(x).seminorm_density()).sqrt()
}

/// `|u - Iu|_{H1} / (diam * |u|_{H2})`.
///
/// Uses the H1 seminorm, which makes the ratio exactly invariant under
/// uniform scaling of the polygon together with the field.
pub fn estimate_ratio<F: ScalarField + ?Sized>(
    p: &Polygon,
    u: &F,
    rule: &QuadratureRule,
) -> Result<f64, InterpError> {
    let h2 = h2_seminorm(u, rule);
    if h2 < 1e-14 {
        return Err(InterpError::DegenerateDenominator(h2));
    }
    Ok(error_norms(p, u, rule)?.h1_semi / (p.diameter() * h2))
}
