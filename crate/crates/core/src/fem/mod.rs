//! Galerkin solution of the Poisson problem on the unit square with mean
//! value basis functions on meshes of degenerate octagons.

mod assembly;
mod mesh;
mod sparse;
mod study;

use thiserror::Error;

use crate::coords::CoordsError;
use crate::geometry::GeometryError;
use crate::interp::{InterpError, QuadratureSettings};

pub use assembly::{assemble, assemble_global, element_system, ElementSystem, LinearSystem, SystemStats};
pub use mesh::{build_mesh, octagon_node_count, Mesh, MeshFile};
pub use sparse::{pcg, CsrMatrix, SolveError, SolveReport, DEFAULT_SOLVER_TOL};
pub use study::{convergence_study, solution_errors, solve_level, ConvergenceReport, LevelResult, RATE_ERROR_FLOOR};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FemError {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("mesh levels must be non-empty and strictly increasing, got {0:?}")]
    InvalidLevels(Vec<usize>),
    #[error("expected {expected} nodal coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Coords(#[from] CoordsError),
    #[error(transparent)]
    Interp(#[from] InterpError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// The default refinement levels of a convergence study.
pub const DEFAULT_LEVELS: [usize; 6] = [2, 4, 8, 16, 32, 64];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FemSettings {
    pub assembly: QuadratureSettings,
    pub norms: QuadratureSettings,
    pub solver_tol: f64,
    /// Defaults to ten times the number of unknowns.
    pub max_iter: Option<usize>,
}

impl Default for FemSettings {
    fn default() -> Self {
        FemSettings {
            assembly: QuadratureSettings::ASSEMBLY,
            norms: QuadratureSettings::NORMS,
            solver_tol: DEFAULT_SOLVER_TOL,
            max_iter: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coords::mvc_values;
    use crate::interp::{ScalarField, TestField};
    use crate::point::Vec2;

    #[test]
    fn stiffness_rows_sum_to_zero() {
        let mesh = build_mesh(3).unwrap();
        let (k, _) = assemble_global(&mesh, &TestField::SinExp, QuadratureSettings::ASSEMBLY).unwrap();
        assert!(k.row_sums().iter().all(|s| s.abs() < 1e-9));
        assert!(k.asymmetry() < 1e-10 * k.max_abs());
    }

    #[test]
    fn element_stiffness_of_degenerate_octagon() {
        let mesh = build_mesh(1).unwrap();
        let el = element_system(&mesh, 0, &TestField::SinExp, QuadratureSettings::ASSEMBLY).unwrap();
        assert!(el.load.iter().all(|&f| f == 0.0));
        // Symmetry of the square: all corner diagonals agree, as do midsides.
        for a in [2, 4, 6] {
            assert!((el.stiffness[a][a] - el.stiffness[0][0]).abs() < 1e-12);
            assert!((el.stiffness[a + 1][a + 1] - el.stiffness[1][1]).abs() < 1e-12);
        }
        // K applied to an affine field's nodal values is zero away from the
        // boundary's contribution: u^T K u equals the Dirichlet energy.
        let u = TestField::Affine { a: 0.2, b: 1.5, c: -0.5 };
        let nodal: Vec<f64> = mesh.elements[0].iter().map(|&k| u.value(mesh.nodes[k])).collect();
        let energy: f64 = (0..8)
            .flat_map(|a| (0..8).map(move |b| (a, b)))
            .map(|(a, b)| nodal[a] * el.stiffness[a][b] * nodal[b])
            .sum();
        assert!((energy - (1.5f64 * 1.5 + 0.25)).abs() < 1e-12);
    }

    #[test]
    fn harmonic_load_is_boundary_lift_only() {
        let mesh = build_mesh(2).unwrap();
        let (k, f) = assemble_global(&mesh, &TestField::SinExp, QuadratureSettings::ASSEMBLY).unwrap();
        assert!(f.iter().all(|&v| v == 0.0));
        let sys = assemble(&mesh, &TestField::SinExp, QuadratureSettings::ASSEMBLY).unwrap();
        for (row, &node) in sys.dof_map.iter().enumerate() {
            let lift: f64 = k
                .row(node)
                .filter(|(c, _)| mesh.is_boundary(*c))
                .map(|(c, v)| -v * TestField::SinExp.value(mesh.nodes[c]))
                .sum();
            assert!((sys.rhs[row] - lift).abs() < 1e-14);
        }
    }

    #[test]
    fn one_element_patch_test() {
        // With n = 1 every node is prescribed; the interior is reproduced by
        // the basis alone.
        let u = TestField::Affine { a: 1.0, b: -2.0, c: 0.5 };
        let (mesh, coeffs, report) = solve_level(1, &u, &FemSettings::default()).unwrap();
        assert!(report.solution.is_empty());
        for (k, &c) in coeffs.iter().enumerate() {
            assert!((c - u.value(mesh.nodes[k])).abs() < 1e-10);
        }
        let e = solution_errors(&mesh, &coeffs, &u, &FemSettings::default()).unwrap();
        assert!(e.l2 < 1e-12 && e.h1_semi < 1e-12);
    }

    #[test]
    fn patch_test_on_refined_meshes() {
        let u = TestField::Affine { a: -0.3, b: 0.8, c: 1.7 };
        let report = convergence_study(&[2, 4, 8], &u, "affine", &FemSettings::default()).unwrap();
        for l in &report.levels {
            assert!(l.l2_error < 1e-9 && l.h1_error < 1e-9, "{l:?}");
            assert!(l.relative_residual <= DEFAULT_SOLVER_TOL);
        }
        assert!(report.l2_rates.iter().chain(&report.h1_rates).all(Option::is_none));
    }

    #[test]
    fn basis_is_conforming_across_shared_edges() {
        let mesh = build_mesh(2).unwrap();
        // Elements 0 and 1 share the vertical edge x = 0.5, y in [0, 0.5].
        let (left, right) = (mesh.element_polygon(0).unwrap(), mesh.element_polygon(1).unwrap());
        let (el_l, el_r) = (mesh.elements[0], mesh.elements[1]);
        for j in 1..=10 {
            let y = 0.5 * j as f64 / 11.0;
            let a = mvc_values(&left, Vec2::new(0.5 - 1e-7, y)).unwrap();
            let b = mvc_values(&right, Vec2::new(0.5 + 1e-7, y)).unwrap();
            for node in 0..mesh.nodes.len() {
                let pick = |el: &[usize; 8], lam: &[f64]| el.iter().position(|&k| k == node).map_or(0.0, |i| lam[i]);
                assert!((pick(&el_l, &a.lambda) - pick(&el_r, &b.lambda)).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn coarse_errors_are_near_published_magnitudes() {
        let settings = FemSettings::default();
        let r = convergence_study(&[2, 4], &TestField::SinExp, "sin(x)e^y", &settings).unwrap();
        let l = &r.levels[0];
        assert!(l.relative_residual <= 1e-10);
        let within3 = |got: f64, want: f64| got / want < 3.0 && want / got < 3.0;
        assert!(within3(l.l2_error, 3.35e-3), "{l:?}");
        assert!(within3(l.h1_error, 7.56e-2), "{l:?}");
        assert_eq!(r.l2_rates.len(), 1);
    }

    #[test]
    fn report_formats() {
        let r = convergence_study(&[1, 2], &TestField::XSquared, "x^2", &FemSettings::default()).unwrap();
        let csv = r.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "n,h,l2_error,l2_rate,h1_error,h1_rate");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("1,1e0,") && lines[1].ends_with(','));
        assert_eq!(lines[2].split(',').count(), 6);
        let md = r.to_markdown();
        assert!(md.starts_with("| n | L2 error | L2 rate | H1 error | H1 rate |"));
        assert_eq!(md.lines().count(), 4);
        assert!(convergence_study(&[4, 2], &TestField::XSquared, "x^2", &FemSettings::default()).is_err());
    }

    #[test]
    fn assembly_is_thread_count_independent() {
        let mesh = build_mesh(4).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| assemble(&mesh, &TestField::XY, QuadratureSettings::ASSEMBLY).unwrap())
        };
        assert_eq!(run(1), run(4));
    }
}
