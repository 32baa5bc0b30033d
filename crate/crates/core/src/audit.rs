//! Randomized audit of coordinate, geometry and interpolation properties.
//!
//! Every check is evaluated on seeded random polygons and points and
//! reports how many evaluations it made, how many violated the limit, and
//! the most extreme value seen. Polygon `k` draws from its own random stream,
//! so the report is identical for any number of worker threads.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::coords::{areal_coordinates, fd_gradient, gradients, mvc_weights, values, CoordinateKind};
use crate::geometry::{
    ball_edge_intersections, compute_hstar, geometric_constants, point_geometry, Polygon,
};
use crate::interp::{error_norms, h2_seminorm, QuadratureSettings, TestField};
use crate::point::Vec2;
use crate::sampling::{interior_points, random_polygon, random_triangle, stream_rng, RotationSimilarity, ShapeLimits};
use crate::{CoordsError, InterpError};

#[derive(Debug, thiserror::Error)]
pub enum AuditError {
    #[error("{0} must be at least 1")]
    EmptyCount(&'static str),
    #[error(transparent)]
    Coords(#[from] CoordsError),
    #[error(transparent)]
    Interp(#[from] InterpError),
}

/// Limits used by the checks. [`Tolerances::uniform`] replaces all of them
/// by one value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub nonnegative: f64,
    pub partition: f64,
    pub linear_precision: f64,
    pub gradient_identities: f64,
    pub vertex_limit: f64,
    pub edge_limit: f64,
    pub invariance_values: f64,
    pub invariance_gradients: f64,
    pub triangle: f64,
    pub fd_relative: f64,
    pub angle_sum: f64,
    pub weight_sum: f64,
    pub angle_gradient: f64,
    pub linear_field: f64,
    pub quadrature_agreement: f64,
    pub ratio_stability: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            nonnegative: 1e-12,
            partition: 1e-12,
            linear_precision: 1e-12,
            gradient_identities: 1e-9,
            vertex_limit: 1e-5,
            edge_limit: 1e-5,
            invariance_values: 1e-12,
            invariance_gradients: 1e-9,
            triangle: 1e-10,
            fd_relative: 1e-6,
            angle_sum: 1e-12,
            weight_sum: 1e-12,
            angle_gradient: 1e-6,
            linear_field: 1e-12,
            // Four significant digits.
            quadrature_agreement: 5e-5,
            ratio_stability: 0.1,
        }
    }
}

impl Tolerances {
    pub fn uniform(t: f64) -> Self {
        Tolerances {
            nonnegative: t,
            partition: t,
            linear_precision: t,
            gradient_identities: t,
            vertex_limit: t,
            edge_limit: t,
            invariance_values: t,
            invariance_gradients: t,
            triangle: t,
            fd_relative: t,
            angle_sum: t,
            weight_sum: t,
            angle_gradient: t,
            linear_field: t,
            quadrature_agreement: t,
            ratio_stability: t,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditConfig {
    pub seed: u64,
    pub polygons: usize,
    /// Random interior points per polygon.
    pub samples: usize,
    /// Points per polygon for the finite-difference gradient check.
    pub fd_points: usize,
    /// Points per polygon for the similarity-invariance check.
    pub invariance_points: usize,
    /// Points per random triangle for the triangle check.
    pub triangle_points: usize,
    /// Include the interpolation-estimate checks, which integrate over every
    /// polygon and dominate the run time for small sample counts.
    pub interpolation: bool,
    pub limits: ShapeLimits,
    pub tolerances: Tolerances,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            seed: 42,
            polygons: 100,
            samples: 10_000,
            fd_points: 10,
            invariance_points: 100,
            triangle_points: 100,
            interpolation: true,
            limits: ShapeLimits::default(),
            tolerances: Tolerances::default(),
        }
    }
}

/// Whether a checked value must stay below or above its limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub bound: Bound,
    pub limit: f64,
    pub checked: u64,
    pub violations: u64,
    /// Largest value seen for `AtMost` checks, smallest for `AtLeast`.
    pub extreme: f64,
}

impl CheckResult {
    fn new(name: &'static str, bound: Bound, limit: f64) -> Self {
        let extreme = match bound {
            Bound::AtMost => f64::NEG_INFINITY,
            Bound::AtLeast => f64::INFINITY,
        };
        CheckResult { name, bound, limit, checked: 0, violations: 0, extreme }
    }

    fn record(&mut self, value: f64) {
        self.checked += 1;
        let ok = match self.bound {
            Bound::AtMost => value <= self.limit,
            Bound::AtLeast => value >= self.limit,
        };
        if !ok {
            self.violations += 1;
        }
        self.extreme = match self.bound {
            _ if value.is_nan() || self.extreme.is_nan() => f64::NAN,
            Bound::AtMost => self.extreme.max(value),
            Bound::AtLeast => self.extreme.min(value),
        };
    }

    fn merge(&mut self, other: &CheckResult) {
        self.checked += other.checked;
        self.violations += other.violations;
        self.extreme = match self.bound {
            _ if other.extreme.is_nan() || self.extreme.is_nan() => f64::NAN,
            Bound::AtMost => self.extreme.max(other.extreme),
            Bound::AtLeast => self.extreme.min(other.extreme),
        };
    }
}

/// Largest `estimate_ratio` over the suite for one field.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioSummary {
    pub field: &'static str,
    pub max_ratio: f64,
    pub max_ratio_refined: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub config: AuditConfig,
    pub checks: Vec<CheckResult>,
    pub ratios: Vec<RatioSummary>,
}

impl AuditReport {
    pub fn total_violations(&self) -> u64 {
        self.checks.iter().map(|c| c.violations).sum()
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_text(&self) -> String {
        let c = &self.config;
        let mut out = format!(
            "property audit: seed {}, {} polygons, {} samples per polygon\n",
            c.seed, c.polygons, c.samples
        );
        writeln!(out, "{:<30} {:>10} {:>10} {:>13} {:>13}", "check", "checked", "violations", "extreme", "limit").unwrap();
        for ch in &self.checks {
            let sign = match ch.bound {
                Bound::AtMost => "<=",
                Bound::AtLeast => ">=",
            };
            writeln!(
                out,
                "{:<30} {:>10} {:>10} {:>13.6e} {} {:.6e}",
                ch.name, ch.checked, ch.violations, ch.extreme, sign, ch.limit
            )
            .unwrap();
        }
        for r in &self.ratios {
            writeln!(
                out,
                "estimate ratio {:<10} max {:.6e} refined {:.6e}",
                r.field, r.max_ratio, r.max_ratio_refined
            )
            .unwrap();
        }
        writeln!(out, "total violations: {}", self.total_violations()).unwrap();
        out
    }
}

/// Check names in report order.
pub const CHECK_NAMES: [&str; 26] = [
    "b1_nonnegative",
    "b4_partition_of_unity",
    "b5_linear_precision",
    "gradient_sum_zero",
    "gradient_linear_identity",
    "b6_vertex_limit",
    "edge_linearity",
    "b3_invariance_values",
    "b3_invariance_gradients",
    "triangle_values",
    "triangle_gradients",
    "fd_gradient_relative_error",
    "angle_sum",
    "mvc_weight_sum",
    "hstar_below_half_min_edge",
    "one_vertex_within_hstar",
    "one_angle_above_alpha_star",
    "large_angle_near_vertex",
    "near_vertex_angle_pair",
    "ball_meets_adjacent_edges",
    "angle_gradient_bound",
    "linear_field_error",
    "quadrature_agreement_l2",
    "quadrature_agreement_h1",
    "estimate_ratio_finite",
    "estimate_ratio_stability",
];

struct Checks(Vec<CheckResult>);

impl Checks {
    fn new(t: &Tolerances) -> Self {
        use Bound::*;
        let limits: [(Bound, f64); 26] = [
            (AtLeast, -t.nonnegative),
            (AtMost, t.partition),
            (AtMost, t.linear_precision),
            (AtMost, t.gradient_identities),
            (AtMost, t.gradient_identities),
            (AtMost, t.vertex_limit),
            (AtMost, t.edge_limit),
            (AtMost, t.invariance_values),
            (AtMost, t.invariance_gradients),
            (AtMost, t.triangle),
            (AtMost, t.triangle),
            (AtMost, t.fd_relative),
            (AtMost, t.angle_sum),
            (AtLeast, TAU * (1.0 - t.weight_sum)),
            (AtMost, 0.0),
            (AtMost, 1.0),
            (AtMost, 1.0),
            (AtMost, 0.0),
            (AtLeast, 2.0 * PI / 3.0),
            (AtMost, 0.0),
            (AtMost, 1.0 + t.angle_gradient),
            (AtMost, t.linear_field),
            (AtMost, t.quadrature_agreement),
            (AtMost, t.quadrature_agreement),
            (AtMost, 0.0),
            (AtMost, t.ratio_stability),
        ];
        Checks(CHECK_NAMES.iter().zip(limits).map(|(&n, (b, l))| CheckResult::new(n, b, l)).collect())
    }

    fn get(&mut self, name: &str) -> &mut CheckResult {
        self.0.iter_mut().find(|c| c.name == name).expect("known check name")
    }

    fn record(&mut self, name: &str, value: f64) {
        self.get(name).record(value);
    }
}

/// Per-polygon interpolation results, reduced across the suite afterwards.
struct PolygonRatios {
    ratio: [f64; 4],
    refined: [f64; 4],
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn max_vec_diff(a: &[Vec2], b: &[Vec2]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((*x - *y).norm()))
}

fn max_norm(a: &[Vec2]) -> f64 {
    a.iter().fold(0.0, |m, g| m.max(g.norm()))
}

fn audit_basis(checks: &mut Checks, p: &Polygon, x: Vec2) -> Result<(), AuditError> {
    for kind in CoordinateKind::ALL {
        let e = gradients(p, x, kind)?;
        let g = e.gradients();
        let min = e.lambda.iter().copied().fold(f64::INFINITY, f64::min);
        checks.record("b1_nonnegative", min);
        checks.record("b4_partition_of_unity", (e.lambda.iter().sum::<f64>() - 1.0).abs());
        let recon: Vec2 = p.vertices().iter().zip(&e.lambda).map(|(&v, &l)| v * l).sum();
        checks.record("b5_linear_precision", (recon - x).norm() / p.diameter());
        checks.record("gradient_sum_zero", g.iter().copied().sum::<Vec2>().norm());
        // sum_i v_i (x) grad lambda_i, row-major
        let mut m = [0.0; 4];
        for (v, gi) in p.vertices().iter().zip(g) {
            m[0] += v.x * gi.x;
            m[1] += v.x * gi.y;
            m[2] += v.y * gi.x;
            m[3] += v.y * gi.y;
        }
        let dev = [m[0] - 1.0, m[1], m[2], m[3] - 1.0].iter().fold(0.0f64, |a, d| a.max(d.abs()));
        checks.record("gradient_linear_identity", dev);
    }
    Ok(())
}

fn audit_geometry(checks: &mut Checks, p: &Polygon, x: Vec2, h_star: f64, alpha_star: f64) -> Result<(), AuditError> {
    let pg = point_geometry(p, x).map_err(CoordsError::from)?;
    let n = pg.len();
    checks.record("angle_sum", (pg.alpha.iter().sum::<f64>() - TAU).abs());
    checks.record("mvc_weight_sum", mvc_weights(&pg).iter().sum());

    let close: Vec<usize> = (0..n).filter(|&i| pg.r[i] < h_star).collect();
    let wide: Vec<usize> = (0..n).filter(|&i| pg.alpha[i] > alpha_star).collect();
    checks.record("one_vertex_within_hstar", close.len() as f64);
    checks.record("one_angle_above_alpha_star", wide.len() as f64);
    for &i in &wide {
        let stray = close.iter().filter(|&&j| j != i && j != (i + 1) % n).count();
        checks.record("large_angle_near_vertex", stray as f64);
    }
    for &i in &close {
        checks.record("near_vertex_angle_pair", pg.alpha[(i + n - 1) % n] + pg.alpha[i]);
    }

    let hit = ball_edge_intersections(p, x, h_star * (1.0 - 1e-9));
    let bad = match hit.as_slice() {
        [] | [_] => false,
        [a, b] => !((a + 1) % n == *b || (b + 1) % n == *a),
        _ => true,
    };
    checks.record("ball_meets_adjacent_edges", if bad { hit.len() as f64 } else { 0.0 });

    // Finite differences of alpha with a step well inside the distance to
    // the boundary, where alpha is singular. The divisor is the step as
    // actually represented, which matters once it nears the spacing of
    // doubles around `x`. Each alpha is accurate to a few ulps, so a central
    // difference carries up to `8 eps / h` of rounding noise, which is
    // discounted before comparing with the bound.
    let h = 1e-4 * p.boundary_distance(x);
    let noise = 8.0 * f64::EPSILON / h;
    let (xp, xm) = (Vec2::new(x.x + h, x.y), Vec2::new(x.x - h, x.y));
    let (yp, ym) = (Vec2::new(x.x, x.y + h), Vec2::new(x.x, x.y - h));
    let alpha_at = |y: Vec2| point_geometry(p, y).map(|g| g.alpha);
    if let (Ok(axp), Ok(axm), Ok(ayp), Ok(aym)) = (alpha_at(xp), alpha_at(xm), alpha_at(yp), alpha_at(ym)) {
        for i in 0..n {
            let fd = Vec2::new((axp[i] - axm[i]) / (xp.x - xm.x), (ayp[i] - aym[i]) / (yp.y - ym.y));
            let bound = 1.0 / pg.r[i] + 1.0 / pg.r[(i + 1) % n];
            checks.record("angle_gradient_bound", (fd.norm() - noise).max(0.0) / bound);
        }
    } else {
        checks.record("angle_gradient_bound", f64::NAN);
    }
    Ok(())
}

/// Vertex and edge limits at offset `1e-7`. The deviation from the limit is
/// about the offset times the gradient, which is uniformly bounded for mean
/// value coordinates only; Wachspress gradients grow without bound next to
/// nearly straight interior angles, so these limits are checked on mean
/// value coordinates.
fn audit_limits(checks: &mut Checks, p: &Polygon, rng: &mut impl Rng) -> Result<(), AuditError> {
    let n = p.len();
    let c = p.vertex_centroid();
    let kind = CoordinateKind::MeanValue;
    for j in 0..n {
        let v = p.vertex(j);
        let e = values(p, v + (c - v) * 1e-7, kind)?;
        let dev = (0..n).fold(0.0f64, |m, i| m.max((e.lambda[i] - if i == j { 1.0 } else { 0.0 }).abs()));
        checks.record("b6_vertex_limit", dev);

        let s: f64 = rng.gen();
        let (a, b) = p.edge(j);
        let x = a + (b - a) * s + p.inward_normal(j) * 1e-7;
        let e = values(p, x, kind)?;
        let mut want = vec![0.0; n];
        want[j] = 1.0 - s;
        want[(j + 1) % n] += s;
        checks.record("edge_linearity", max_abs_diff(&e.lambda, &want));
    }
    Ok(())
}

fn audit_invariance(checks: &mut Checks, p: &Polygon, pts: &[Vec2], t: &RotationSimilarity) -> Result<(), AuditError> {
    let q = p.map_vertices(|v| t.apply(v)).map_err(CoordsError::from)?;
    for &x in pts {
        for kind in CoordinateKind::ALL {
            let a = gradients(p, x, kind)?;
            let b = gradients(&q, t.apply(x), kind)?;
            checks.record("b3_invariance_values", max_abs_diff(&a.lambda, &b.lambda));
            let mapped: Vec<Vec2> = a.gradients().iter().map(|&g| t.map_gradient(g) * t.scale).collect();
            let scaled: Vec<Vec2> = b.gradients().iter().map(|&g| g * t.scale).collect();
            checks.record("b3_invariance_gradients", max_vec_diff(&mapped, &scaled));
        }
    }
    Ok(())
}

fn audit_triangle(checks: &mut Checks, tri: &Polygon, rng: &mut impl Rng, count: usize) -> Result<(), AuditError> {
    let v = [tri.vertex(0), tri.vertex(1), tri.vertex(2)];
    for x in interior_points(tri, rng, count, tri.eval_tolerance()) {
        let (lambda, grad) = areal_coordinates(v, x);
        for kind in CoordinateKind::ALL {
            let e = gradients(tri, x, kind)?;
            checks.record("triangle_values", max_abs_diff(&e.lambda, &lambda));
            checks.record("triangle_gradients", max_vec_diff(e.gradients(), &grad));
        }
    }
    Ok(())
}

fn audit_fd(checks: &mut Checks, p: &Polygon, pts: &[Vec2]) -> Result<(), AuditError> {
    let step = 1e-6 * p.diameter();
    for &x in pts {
        for kind in CoordinateKind::ALL {
            let e = gradients(p, x, kind)?;
            let fd = fd_gradient(p, x, kind, step)?;
            checks.record("fd_gradient_relative_error", max_vec_diff(e.gradients(), &fd) / max_norm(e.gradients()));
        }
    }
    Ok(())
}

/// Refinement used to judge quadrature sensitivity of the norms.
const REFINED_NORMS: QuadratureSettings = QuadratureSettings { degree: 10, subdivision: 3 };
const COARSE_NORMS: QuadratureSettings = QuadratureSettings { degree: 8, subdivision: 2 };

fn audit_interpolation(checks: &mut Checks, p: &Polygon) -> Result<PolygonRatios, AuditError> {
    let base = QuadratureSettings::NORMS.rule(p)?;
    let refined = REFINED_NORMS.rule(p)?;
    let coarse = COARSE_NORMS.rule(p)?;
    let affine = TestField::Affine { a: 0.7, b: -1.3, c: 2.1 };
    let e = error_norms(p, &affine, &base)?;
    checks.record("linear_field_error", e.l2.max(e.h1_semi));

    let mut out = PolygonRatios { ratio: [0.0; 4], refined: [0.0; 4] };
    for (k, u) in TestField::NONLINEAR.iter().enumerate() {
        let ratio_with = |rule| -> Result<(crate::interp::ErrorNorms, f64), AuditError> {
            let e = error_norms(p, u, rule)?;
            Ok((e, e.h1_semi / (p.diameter() * h2_seminorm(u, rule))))
        };
        let (e_base, r_base) = ratio_with(&base)?;
        let (e_fine, r_fine) = ratio_with(&refined)?;
        let e_coarse = error_norms(p, u, &coarse)?;
        out.ratio[k] = r_base;
        out.refined[k] = r_fine;
        checks.record("estimate_ratio_finite", if r_base.is_finite() && r_base > 0.0 { 0.0 } else { 1.0 });
        checks.record("quadrature_agreement_l2", ((e_coarse.l2 - e_fine.l2) / e_fine.l2).abs());
        checks.record("quadrature_agreement_h1", ((e_coarse.h1_semi - e_fine.h1_semi) / e_fine.h1_semi).abs());
        let _ = e_base;
    }
    Ok(out)
}

fn audit_polygon(config: &AuditConfig, k: usize) -> Result<(Checks, Option<PolygonRatios>), AuditError> {
    let mut checks = Checks::new(&config.tolerances);
    let mut rng = stream_rng(config.seed, k as u64);
    let p = random_polygon(&mut rng, &config.limits);
    let gc = geometric_constants(&p);
    let h_star = compute_hstar(&p);
    checks.record("hstar_below_half_min_edge", if h_star < 0.5 * gc.min_edge { 0.0 } else { 1.0 });

    for x in interior_points(&p, &mut rng, config.samples, p.eval_tolerance()) {
        audit_basis(&mut checks, &p, x)?;
        audit_geometry(&mut checks, &p, x, h_star, gc.alpha_star)?;
    }
    audit_limits(&mut checks, &p, &mut rng)?;

    let t = RotationSimilarity::random(&mut rng);
    let pts = interior_points(&p, &mut rng, config.invariance_points, p.eval_tolerance());
    audit_invariance(&mut checks, &p, &pts, &t)?;

    let step = 1e-6 * p.diameter();
    let pts = interior_points(&p, &mut rng, config.fd_points, 1e-3 * p.diameter() + step);
    audit_fd(&mut checks, &p, &pts)?;

    let tri = random_triangle(&mut rng, 0.1);
    audit_triangle(&mut checks, &tri, &mut rng, config.triangle_points)?;

    let ratios = if config.interpolation { Some(audit_interpolation(&mut checks, &p)?) } else { None };
    Ok((checks, ratios))
}

/// Runs the audit. Results are merged in polygon order.
pub fn run_audit(config: &AuditConfig) -> Result<AuditReport, AuditError> {
    if config.polygons == 0 {
        return Err(AuditError::EmptyCount("polygon count"));
    }
    if config.samples == 0 {
        return Err(AuditError::EmptyCount("samples per polygon"));
    }
    let per_polygon: Vec<(Checks, Option<PolygonRatios>)> =
        (0..config.polygons).into_par_iter().map(|k| audit_polygon(config, k)).collect::<Result<_, _>>()?;

    let mut checks = Checks::new(&config.tolerances);
    for (c, _) in &per_polygon {
        for (mine, theirs) in checks.0.iter_mut().zip(&c.0) {
            mine.merge(theirs);
        }
    }
    let mut ratios = Vec::new();
    if config.interpolation {
        for (k, field) in TestField::NONLINEAR.iter().enumerate() {
            let fold = |pick: fn(&PolygonRatios) -> [f64; 4]| {
                per_polygon.iter().filter_map(|(_, r)| r.as_ref()).fold(0.0f64, |m, r| m.max(pick(r)[k]))
            };
            let max_ratio = fold(|r| r.ratio);
            let max_ratio_refined = fold(|r| r.refined);
            checks.record("estimate_ratio_stability", ((max_ratio_refined - max_ratio) / max_ratio).abs());
            ratios.push(RatioSummary { field: field.name(), max_ratio, max_ratio_refined });
        }
    }
    Ok(AuditReport { config: config.clone(), checks: checks.0, ratios })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> AuditConfig {
        AuditConfig { polygons: 4, samples: 300, invariance_points: 20, triangle_points: 20, ..AuditConfig::default() }
    }

    #[test]
    fn small_audit_is_clean() {
        let report = run_audit(&small()).unwrap();
        assert_eq!(report.total_violations(), 0, "{}", report.to_text());
        assert_eq!(report.checks.len(), CHECK_NAMES.len());
        assert_eq!(report.check("b1_nonnegative").unwrap().checked, 4 * 300 * 2);
    }

    #[test]
    fn report_is_deterministic() {
        let a = run_audit(&small()).unwrap().to_text();
        let b = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| run_audit(&small()).unwrap().to_text());
        assert_eq!(a, b);
    }

    #[test]
    fn tiny_tolerance_reports_violations() {
        let config = AuditConfig { tolerances: Tolerances::uniform(1e-16), interpolation: false, ..small() };
        let report = run_audit(&config).unwrap();
        assert!(report.total_violations() > 0);
        assert!(report.check("b6_vertex_limit").unwrap().violations > 0);
    }

    #[test]
    fn zero_counts_are_rejected() {
        assert!(run_audit(&AuditConfig { polygons: 0, ..small() }).is_err());
        assert!(run_audit(&AuditConfig { samples: 0, ..small() }).is_err());
    }
}
