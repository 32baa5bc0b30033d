use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::assembly::assemble;
use super::mesh::{build_mesh, Mesh};
use super::sparse::{pcg, SolveReport};
use super::{FemError, FemSettings};
use crate::coords::mvc_gradients;
use crate::interp::{ErrorNorms, ScalarField};
use crate::point::pairwise_sum;

/// Errors below this are treated as exact and get no convergence rate.
pub const RATE_ERROR_FLOOR: f64 = 1e-9;

/// `||u - u_h||_{L2}` and `|u - u_h|_{H1}` of the finite element function
/// with nodal coefficients `coeffs`.
pub fn solution_errors<F: ScalarField + ?Sized>(
    mesh: &Mesh,
    coeffs: &[f64],
    u: &F,
    settings: &FemSettings,
) -> Result<ErrorNorms, FemError> {
    if coeffs.len() != mesh.nodes.len() {
        return Err(FemError::CoefficientCount { expected: mesh.nodes.len(), got: coeffs.len() });
    }
    let per_element: Vec<(f64, f64)> = (0..mesh.elements.len())
        .into_par_iter()
        .map(|e| {
            let poly = mesh.element_polygon(e)?;
            let rule = settings.norms.rule(&poly)?;
            let local: Vec<f64> = mesh.elements[e].iter().map(|&k| coeffs[k]).collect();
            let mut l2 = Vec::with_capacity(rule.points.len());
            let mut h1 = Vec::with_capacity(rule.points.len());
            for &(x, w) in &rule.points {
                let basis = mvc_gradients(&poly, x)?;
                let err = u.value(x) - basis.interpolate(&local);
                let gerr = u.gradient(x) - basis.interpolate_gradient(&local);
                l2.push(w * err * err);
                h1.push(w * gerr.norm_squared());
            }
            Ok((pairwise_sum(&l2), pairwise_sum(&h1)))
        })
        .collect::<Result<_, FemError>>()?;
    let l2: Vec<f64> = per_element.iter().map(|p| p.0).collect();
    let h1: Vec<f64> = per_element.iter().map(|p| p.1).collect();
    Ok(ErrorNorms { l2: pairwise_sum(&l2).sqrt(), h1_semi: pairwise_sum(&h1).sqrt() })
}

/// Result of solving on one mesh.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelResult {
    pub n: usize,
    pub h: f64,
    pub l2_error: f64,
    pub h1_error: f64,
    pub dofs: usize,
    pub iterations: usize,
    pub relative_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub field: String,
    pub levels: Vec<LevelResult>,
    /// `log(e_k / e_{k+1}) / log(h_k / h_{k+1})`; `None` when either error is
    /// at roundoff level.
    pub l2_rates: Vec<Option<f64>>,
    pub h1_rates: Vec<Option<f64>>,
}

/// Assembles, solves and measures the error on the `n x n` mesh.
pub fn solve_level<F: ScalarField + ?Sized>(
    n: usize,
    u: &F,
    settings: &FemSettings,
) -> Result<(Mesh, Vec<f64>, SolveReport), FemError> {
    let mesh = build_mesh(n)?;
    let system = assemble(&mesh, u, settings.assembly)?;
    let report = pcg(&system.matrix, &system.rhs, settings.solver_tol, settings.max_iter)?;
    let coeffs = system.expand(&report.solution);
    Ok((mesh, coeffs, report))
}

fn rate(e0: f64, e1: f64, h0: f64, h1: f64) -> Option<f64> {
    (e0 > RATE_ERROR_FLOOR && e1 > RATE_ERROR_FLOOR).then(|| (e0 / e1).ln() / (h0 / h1).ln())
}

pub fn convergence_study<F: ScalarField + ?Sized>(
    levels: &[usize],
    u: &F,
    name: &str,
    settings: &FemSettings,
) -> Result<ConvergenceReport, FemError> {
    if levels.is_empty() || levels.windows(2).any(|w| w[1] <= w[0]) {
        return Err(FemError::InvalidLevels(levels.to_vec()));
    }
    let mut results = Vec::with_capacity(levels.len());
    for &n in levels {
        let (mesh, coeffs, solve) = solve_level(n, u, settings)?;
        let errors = solution_errors(&mesh, &coeffs, u, settings)?;
        results.push(LevelResult {
            n,
            h: 1.0 / n as f64,
            l2_error: errors.l2,
            h1_error: errors.h1_semi,
            dofs: solve.solution.len(),
            iterations: solve.iterations,
            relative_residual: solve.relative_residual,
        });
    }
    let pairs = || results.windows(2);
    let l2_rates = pairs().map(|w| rate(w[0].l2_error, w[1].l2_error, w[0].h, w[1].h)).collect();
    let h1_rates = pairs().map(|w| rate(w[0].h1_error, w[1].h1_error, w[0].h, w[1].h)).collect();
    Ok(ConvergenceReport { field: name.to_string(), levels: results, l2_rates, h1_rates })
}

fn rate_cell(levels_rate: Option<&Option<f64>>) -> String {
    match levels_rate {
        Some(Some(r)) => format!("{r:.2}"),
        Some(None) => "-".into(),
        None => String::new(),
    }
}

impl ConvergenceReport {
    /// `n,h,l2_error,l2_rate,h1_error,h1_rate`, with empty rates on the
    /// first row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,h,l2_error,l2_rate,h1_error,h1_rate\n");
        for (k, l) in self.levels.iter().enumerate() {
            let prev = k.checked_sub(1);
            let l2r = prev.map(|p| &self.l2_rates[p]);
            let h1r = prev.map(|p| &self.h1_rates[p]);
            let num = |r: Option<&Option<f64>>| match r {
                Some(Some(r)) => format!("{r:.5}"),
                _ => String::new(),
            };
            writeln!(out, "{},{:e},{:.5e},{},{:.5e},{}", l.n, l.h, l.l2_error, num(l2r), l.h1_error, num(h1r)).unwrap();
        }
        out
    }

    /// Error and rate columns for both norms, one row per mesh.
    pub fn to_markdown(&self) -> String {
        let mut out = String::from("| n | L2 error | L2 rate | H1 error | H1 rate |\n|---|---|---|---|---|\n");
        for (k, l) in self.levels.iter().enumerate() {
            let prev = k.checked_sub(1);
            writeln!(
                out,
                "| {} | {:.5e} | {} | {:.5e} | {} |",
                l.n,
                l.l2_error,
                rate_cell(prev.map(|p| &self.l2_rates[p])),
                l.h1_error,
                rate_cell(prev.map(|p| &self.h1_rates[p])),
            )
            .unwrap();
        }
        out
    }
}
