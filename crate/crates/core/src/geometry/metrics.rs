use std::f64::consts::PI;

use serde::Serialize;

use super::Polygon;
use crate::point::{segment_segment_distance, Vec2};

/// Shape constants of a polygon, reported for the polygon as given.
///
/// Normalize to unit diameter first when the diameter-one values are wanted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeometricConstants {
    pub diameter: f64,
    pub inradius: f64,
    /// Diameter over inradius.
    pub aspect_ratio: f64,
    pub min_edge: f64,
    /// Smallest distance between two distinct vertices.
    pub min_vertex_separation: f64,
    pub beta_min: f64,
    pub beta_max: f64,
    pub h_star: f64,
    /// `max(pi - beta_min / 2, 2 atan(1 / h_star))`.
    pub alpha_star: f64,
}

pub(super) fn vertex_diameter(vertices: &[Vec2]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, a) in vertices.iter().enumerate() {
        for b in &vertices[i + 1..] {
            d = d.max(a.distance(*b));
        }
    }
    d
}

/// Largest distance between two vertices, which for a convex polygon is the
/// largest distance between any two of its points.
pub fn diameter(p: &Polygon) -> f64 {
    p.diameter()
}

/// Smallest distance between two distinct vertices.
pub fn min_vertex_separation(p: &Polygon) -> f64 {
    let v = p.vertices();
    let mut d = f64::INFINITY;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            d = d.min(v[i].distance(v[j]));
        }
    }
    d
}

/// Radius of the largest inscribed circle.
///
/// Solves the three-variable linear program
/// `max r  s.t.  n_e . (c - a_e) >= r` over the inward edge normals by
/// enumerating its vertices: every optimum is attained where three edge
/// constraints are active.
pub fn inradius(p: &Polygon) -> f64 {
    chebyshev_center(p).1
}

/// Centre and radius of the largest inscribed circle.
pub fn chebyshev_center(p: &Polygon) -> (Vec2, f64) {
    let n = p.len();
    let normals: Vec<Vec2> = (0..n).map(|i| p.inward_normal(i)).collect();
    let offsets: Vec<f64> = (0..n).map(|i| normals[i].dot(p.vertex(i))).collect();
    let tol = 1e-12 * p.diameter();

    let mut best = (p.vertex_centroid(), 0.0);
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let Some((c, r)) = solve_active(
                    [normals[i], normals[j], normals[k]],
                    [offsets[i], offsets[j], offsets[k]],
                ) else {
                    continue;
                };
                if r <= best.1 {
                    continue;
                }
                let feasible = (0..n).all(|m| normals[m].dot(c) - r >= offsets[m] - tol);
                if feasible {
                    best = (c, r);
                }
            }
        }
    }
    best
}

/// Solves `n_e . c - r = b_e` for the three given constraints.
fn solve_active(nrm: [Vec2; 3], b: [f64; 3]) -> Option<(Vec2, f64)> {
    // Rows: [n.x, n.y, -1]
    let m = [
        [nrm[0].x, nrm[0].y, -1.0],
        [nrm[1].x, nrm[1].y, -1.0],
        [nrm[2].x, nrm[2].y, -1.0],
    ];
    let det3 = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let det = det3(m);
    if det.abs() < 1e-12 {
        return None;
    }
    let mut sol = [0.0; 3];
    for (col, s) in sol.iter_mut().enumerate() {
        let mut mc = m;
        for row in 0..3 {
            mc[row][col] = b[row];
        }
        *s = det3(mc) / det;
    }
    Some((Vec2::new(sol[0], sol[1]), sol[2]))
}

/// Diameter over inradius.
pub fn aspect_ratio(p: &Polygon) -> f64 {
    p.diameter() / inradius(p)
}

/// Interior angle at every vertex, in `(0, pi]`.
pub fn interior_angles(p: &Polygon) -> Vec<f64> {
    let n = p.len();
    (0..n)
        .map(|i| {
            let v = p.vertex(i);
            let to_next = p.vertex(i + 1) - v;
            let to_prev = p.vertex(i + n - 1) - v;
            let mut beta = to_next.cross(to_prev).atan2(to_next.dot(to_prev));
            if beta < 0.0 {
                beta += 2.0 * PI;
            }
            beta.min(PI)
        })
        .collect()
}

fn adjacent_edges(n: usize, i: usize, j: usize) -> bool {
    i == j || (i + 1) % n == j || (j + 1) % n == i
}

/// Largest radius `h` for which no ball `B(x, h)` centred in the polygon
/// meets two non-adjacent edges or three edges.
///
/// For `n >= 4` any three edges contain a non-adjacent pair, so the answer
/// is half the smallest distance between non-adjacent closed edges. A
/// triangle has no non-adjacent pairs; a ball meets all three edges exactly
/// when its radius exceeds the largest edge distance from its centre, so the
/// answer is `min_x max_e dist(x, e)`, which is attained at the incentre and
/// equals the inradius.
///
/// Both values are suprema: a closed ball of exactly that radius touches the
/// offending edges. The returned radius is smaller by the relative factor
/// [`HSTAR_SHRINK`], which makes it a valid radius.
pub fn compute_hstar(p: &Polygon) -> f64 {
    (1.0 - HSTAR_SHRINK) * hstar_supremum(p)
}

/// Relative distance of [`compute_hstar`] below the supremum of valid radii.
pub const HSTAR_SHRINK: f64 = 1e-9;

fn hstar_supremum(p: &Polygon) -> f64 {
    let n = p.len();
    if n == 3 {
        return inradius(p);
    }
    let mut d = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            if adjacent_edges(n, i, j) {
                continue;
            }
            let (a, b) = p.edge(i);
            let (c, e) = p.edge(j);
            d = d.min(segment_segment_distance(a, b, c, e));
        }
    }
    0.5 * d
}

pub fn geometric_constants(p: &Polygon) -> GeometricConstants {
    let betas = interior_angles(p);
    let beta_min = betas.iter().copied().fold(f64::INFINITY, f64::min);
    let beta_max = betas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let inradius = inradius(p);
    let h_star = compute_hstar(p);
    let alpha_star = (PI - 0.5 * beta_min).max(2.0 * (1.0 / h_star).atan());
    GeometricConstants {
        diameter: p.diameter(),
        inradius,
        aspect_ratio: p.diameter() / inradius,
        min_edge: p.min_edge_length(),
        min_vertex_separation: min_vertex_separation(p),
        beta_min,
        beta_max,
        h_star,
        alpha_star,
    }
}
