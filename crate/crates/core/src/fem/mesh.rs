use serde::{Deserialize, Serialize};

use super::FemError;
use crate::geometry::Polygon;
use crate::point::Vec2;

/// Uniform mesh of the unit square by `n x n` degenerate octagons.
///
/// Node numbering: the `(n+1)^2` square corners row by row, then the
/// `n(n+1)` midpoints of horizontal sides, then the `n(n+1)` midpoints of
/// vertical sides.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub nodes: Vec<Vec2>,
    /// Counterclockwise eight-node loops starting at the lower-left corner.
    pub elements: Vec<[usize; 8]>,
    /// Sorted node indices on the boundary of the unit square.
    pub boundary_nodes: Vec<usize>,
    pub n: usize,
}

/// Node count of the `n x n` degenerate-octagon mesh.
pub fn octagon_node_count(n: usize) -> usize {
    (n + 1) * (n + 1) + 2 * n * (n + 1)
}

pub fn build_mesh(n: usize) -> Result<Mesh, FemError> {
    if n == 0 {
        return Err(FemError::InvalidMesh("refinement parameter must be at least 1".into()));
    }
    let h = 1.0 / n as f64;
    let corner = |i: usize, j: usize| j * (n + 1) + i;
    let horiz_base = (n + 1) * (n + 1);
    let horiz = |i: usize, j: usize| horiz_base + j * n + i;
    let vert_base = horiz_base + n * (n + 1);
    let vert = |i: usize, j: usize| vert_base + j * (n + 1) + i;

    let mut nodes = vec![Vec2::ZERO; octagon_node_count(n)];
    for j in 0..=n {
        for i in 0..=n {
            nodes[corner(i, j)] = Vec2::new(i as f64 * h, j as f64 * h);
        }
    }
    for j in 0..=n {
        for i in 0..n {
            nodes[horiz(i, j)] = Vec2::new((i as f64 + 0.5) * h, j as f64 * h);
        }
    }
    for j in 0..n {
        for i in 0..=n {
            nodes[vert(i, j)] = Vec2::new(i as f64 * h, (j as f64 + 0.5) * h);
        }
    }

    let mut elements = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            elements.push([
                corner(i, j),
                horiz(i, j),
                corner(i + 1, j),
                vert(i + 1, j),
                corner(i + 1, j + 1),
                horiz(i, j + 1),
                corner(i, j + 1),
                vert(i, j),
            ]);
        }
    }

    let boundary_nodes = nodes
        .iter()
        .enumerate()
        .filter(|(_, p)| p.x == 0.0 || p.y == 0.0 || p.x == 1.0 || p.y == 1.0)
        .map(|(k, _)| k)
        .collect();

    Ok(Mesh { nodes, elements, boundary_nodes, n })
}

impl Mesh {
    pub fn element_polygon(&self, e: usize) -> Result<Polygon, FemError> {
        Ok(Polygon::new(self.elements[e].iter().map(|&k| self.nodes[k]).collect())?)
    }

    pub fn is_boundary(&self, node: usize) -> bool {
        self.boundary_nodes.binary_search(&node).is_ok()
    }

    /// Checks that every element is a valid counterclockwise polygon and that
    /// each interior edge is traversed once in each direction.
    pub fn validate(&self) -> Result<(), FemError> {
        use std::collections::HashMap;
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for (e, el) in self.elements.iter().enumerate() {
            let poly = self.element_polygon(e)?;
            if poly.was_reversed() {
                return Err(FemError::InvalidMesh(format!("element {e} is clockwise")));
            }
            for k in 0..el.len() {
                *directed.entry((el[k], el[(k + 1) % el.len()])).or_default() += 1;
            }
        }
        for (&(a, b), &count) in &directed {
            if count != 1 {
                return Err(FemError::InvalidMesh(format!("edge {a}-{b} used {count} times")));
            }
            let on_boundary = self.is_boundary(a) && self.is_boundary(b) && !directed.contains_key(&(b, a));
            if !on_boundary && directed.get(&(b, a)) != Some(&1) {
                return Err(FemError::InvalidMesh(format!("edge {a}-{b} has no matching neighbour")));
            }
        }
        Ok(())
    }
}

/// On-disk mesh description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshFile {
    pub nodes: Vec<[f64; 2]>,
    pub elements: Vec<Vec<usize>>,
    pub boundary: Vec<usize>,
}

impl From<&Mesh> for MeshFile {
    fn from(m: &Mesh) -> Self {
        MeshFile {
            nodes: m.nodes.iter().map(|&p| p.into()).collect(),
            elements: m.elements.iter().map(|e| e.to_vec()).collect(),
            boundary: m.boundary_nodes.clone(),
        }
    }
}
