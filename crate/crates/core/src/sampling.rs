//! Seeded generators for well-shaped random polygons, interior points and
//! similarity transforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::geometry::{aspect_ratio, min_vertex_separation, normalize_to_unit_diameter, Polygon};
use crate::point::Vec2;

/// Aspect-ratio and vertex-separation bounds a generated polygon must
/// satisfy after scaling to unit diameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShapeLimits {
    pub gamma_star: f64,
    pub d_star: f64,
    pub min_vertices: usize,
    pub max_vertices: usize,
}

impl Default for ShapeLimits {
    fn default() -> Self {
        ShapeLimits { gamma_star: 6.0, d_star: 0.1, min_vertices: 5, max_vertices: 10 }
    }
}

impl ShapeLimits {
    /// `gamma < gamma_star` and every pair of vertices further apart than
    /// `d_star`, measured on the unit-diameter rescaling of `p`.
    pub fn accepts(&self, p: &Polygon) -> bool {
        let (q, _) = normalize_to_unit_diameter(p);
        aspect_ratio(&q) < self.gamma_star && min_vertex_separation(&q) > self.d_star
    }
}

/// Independent generator for item `index` of a seeded family.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Counterclockwise convex hull without collinear points.
pub fn convex_hull(points: &[Vec2]) -> Vec<Vec2> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let turn = |o: Vec2, a: Vec2, b: Vec2| (a - o).cross(b - o);
    let mut hull: Vec<Vec2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Vec2>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Convex hull of points at random angles and radii about the origin,
/// rescaled to unit diameter. Draws until the hull has an acceptable vertex
/// count and satisfies `limits`.
pub fn random_polygon(rng: &mut impl Rng, limits: &ShapeLimits) -> Polygon {
    loop {
        let k = rng.gen_range(limits.min_vertices..=limits.max_vertices);
        let pts: Vec<Vec2> = (0..k)
            .map(|_| {
                let theta = rng.gen_range(0.0..std::f64::consts::TAU);
                let r = rng.gen_range(0.3..1.0);
                Vec2::new(r * theta.cos(), r * theta.sin())
            })
            .collect();
        let hull = convex_hull(&pts);
        if hull.len() < limits.min_vertices.max(3) {
            continue;
        }
        let Ok(p) = Polygon::new(hull) else { continue };
        if limits.accepts(&p) {
            return normalize_to_unit_diameter(&p).0;
        }
    }
}

/// `count` polygons, the `k`-th drawn from stream `k` of `seed`.
pub fn random_polygons(seed: u64, count: usize, limits: &ShapeLimits) -> Vec<Polygon> {
    (0..count).map(|k| random_polygon(&mut stream_rng(seed, k as u64), limits)).collect()
}

/// A triangle with vertices in the unit square whose smallest angle exceeds
/// `min_angle`.
pub fn random_triangle(rng: &mut impl Rng, min_angle: f64) -> Polygon {
    loop {
        let v: Vec<Vec2> = (0..3).map(|_| Vec2::new(rng.gen(), rng.gen())).collect();
        let Ok(p) = Polygon::new(v) else { continue };
        if crate::geometry::interior_angles(&p).iter().all(|&a| a > min_angle) {
            return p;
        }
    }
}

/// Uniform point of `p` whose distance to the boundary is at least `margin`.
pub fn interior_point(p: &Polygon, rng: &mut impl Rng, margin: f64) -> Vec2 {
    let (lo, hi) = p.bounding_box();
    loop {
        let x = Vec2::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
        if p.boundary_distance(x) >= margin {
            return x;
        }
    }
}

pub fn interior_points(p: &Polygon, rng: &mut impl Rng, count: usize, margin: f64) -> Vec<Vec2> {
    (0..count).map(|_| interior_point(p, rng, margin)).collect()
}

/// `x -> scale * R(angle) x + shift`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RotationSimilarity {
    pub angle: f64,
    pub scale: f64,
    pub shift: Vec2,
}

impl RotationSimilarity {
    pub fn random(rng: &mut impl Rng) -> Self {
        RotationSimilarity {
            angle: rng.gen_range(0.0..std::f64::consts::TAU),
            scale: 10f64.powf(rng.gen_range(-1.0..1.0)),
            shift: Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        }
    }

    fn rotate(&self, v: Vec2, angle: f64) -> Vec2 {
        let (s, c) = angle.sin_cos();
        Vec2::new(c * v.x - s * v.y, s * v.x + c * v.y)
    }

    pub fn apply(&self, x: Vec2) -> Vec2 {
        self.rotate(x, self.angle) * self.scale + self.shift
    }

    /// How a gradient at `x` transforms: `R(angle) g / scale`.
    pub fn map_gradient(&self, g: Vec2) -> Vec2 {
        self.rotate(g, self.angle) / self.scale
    }
}
