use rayon::prelude::*;
use serde::Serialize;

use super::mesh::Mesh;
use super::sparse::CsrMatrix;
use super::FemError;
use crate::coords::mvc_gradients;
use crate::interp::{QuadratureSettings, ScalarField};
use crate::point::pairwise_sum;

/// Element stiffness `K_ab = ∫ ∇φ_a·∇φ_b` and load `F_a = ∫ f φ_a` for one
/// element, with `φ` the mean value coordinates of the element.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementSystem {
    pub stiffness: Vec<Vec<f64>>,
    pub load: Vec<f64>,
}

pub fn element_system<F: ScalarField + ?Sized>(
    mesh: &Mesh,
    e: usize,
    field: &F,
    quad: QuadratureSettings,
) -> Result<ElementSystem, FemError> {
    let poly = mesh.element_polygon(e)?;
    let rule = quad.rule(&poly)?;
    let m = poly.len();
    let mut k_terms = vec![vec![Vec::with_capacity(rule.points.len()); m]; m];
    let mut f_terms = vec![Vec::with_capacity(rule.points.len()); m];
    for &(x, w) in &rule.points {
        let basis = mvc_gradients(&poly, x)?;
        let grads = basis.gradients();
        let f = field.source(x);
        for a in 0..m {
            f_terms[a].push(w * f * basis.lambda[a]);
            for b in a..m {
                k_terms[a][b].push(w * grads[a].dot(grads[b]));
            }
        }
    }
    let mut stiffness = vec![vec![0.0; m]; m];
    for a in 0..m {
        for b in a..m {
            let v = pairwise_sum(&k_terms[a][b]);
            stiffness[a][b] = v;
            stiffness[b][a] = v;
        }
    }
    let load = f_terms.iter().map(|t| pairwise_sum(t)).collect();
    Ok(ElementSystem { stiffness, load })
}

/// Global stiffness matrix and load vector over all nodes, before boundary
/// conditions are applied. Element contributions are combined in element
/// order, so the result does not depend on the number of worker threads.
pub fn assemble_global<F: ScalarField + ?Sized>(
    mesh: &Mesh,
    field: &F,
    quad: QuadratureSettings,
) -> Result<(CsrMatrix, Vec<f64>), FemError> {
    let locals: Vec<ElementSystem> = (0..mesh.elements.len())
        .into_par_iter()
        .map(|e| element_system(mesh, e, field, quad))
        .collect::<Result<_, _>>()?;
    let mut triplets = Vec::with_capacity(locals.len() * 64);
    let mut load = vec![0.0; mesh.nodes.len()];
    for (el, local) in mesh.elements.iter().zip(&locals) {
        for (a, &ga) in el.iter().enumerate() {
            load[ga] += local.load[a];
            for (b, &gb) in el.iter().enumerate() {
                triplets.push((ga, gb, local.stiffness[a][b]));
            }
        }
    }
    Ok((CsrMatrix::from_triplets(mesh.nodes.len(), triplets), load))
}

/// The reduced system on interior nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
    /// Global node index of each unknown.
    pub dof_map: Vec<usize>,
    /// Prescribed `(node, value)` pairs.
    pub boundary_values: Vec<(usize, f64)>,
    pub node_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SystemStats {
    pub dofs: usize,
    pub nnz: usize,
    pub asymmetry: f64,
    pub max_abs: f64,
}

impl LinearSystem {
    pub fn stats(&self) -> SystemStats {
        SystemStats {
            dofs: self.dof_map.len(),
            nnz: self.matrix.nnz(),
            asymmetry: self.matrix.asymmetry(),
            max_abs: self.matrix.max_abs(),
        }
    }

    /// Nodal coefficients for every mesh node from a solution on the unknowns.
    pub fn expand(&self, free: &[f64]) -> Vec<f64> {
        let mut full = vec![0.0; self.node_count];
        for &(node, v) in &self.boundary_values {
            full[node] = v;
        }
        for (k, &node) in self.dof_map.iter().enumerate() {
            full[node] = free[k];
        }
        full
    }
}

/// Assembles the Poisson problem `-Δu = f` with `f` and the Dirichlet data
/// taken from `field`. Boundary rows and columns are eliminated and their
/// known values moved to the right-hand side.
pub fn assemble<F: ScalarField + ?Sized>(
    mesh: &Mesh,
    field: &F,
    quad: QuadratureSettings,
) -> Result<LinearSystem, FemError> {
    let (k, f) = assemble_global(mesh, field, quad)?;
    let n = mesh.nodes.len();
    let mut prescribed = vec![None; n];
    let boundary_values: Vec<(usize, f64)> =
        mesh.boundary_nodes.iter().map(|&b| (b, field.value(mesh.nodes[b]))).collect();
    for &(b, v) in &boundary_values {
        prescribed[b] = Some(v);
    }
    let dof_map: Vec<usize> = (0..n).filter(|&i| prescribed[i].is_none()).collect();
    let mut dof_of = vec![usize::MAX; n];
    for (k, &node) in dof_map.iter().enumerate() {
        dof_of[node] = k;
    }

    let mut triplets = Vec::with_capacity(k.nnz());
    let mut rhs: Vec<f64> = dof_map.iter().map(|&node| f[node]).collect();
    for (r, c, v) in k.entries() {
        let row = dof_of[r];
        if row == usize::MAX {
            continue;
        }
        match prescribed[c] {
            Some(g) => rhs[row] -= v * g,
            None => triplets.push((row, dof_of[c], v)),
        }
    }
    Ok(LinearSystem {
        matrix: CsrMatrix::from_triplets(dof_map.len(), triplets),
        rhs,
        dof_map,
        boundary_values,
        node_count: n,
    })
}
