//! Symmetric Gauss rules on triangles, mapped onto fan triangulations of
//! convex polygons, with collapsed product rules next to polygon vertices.

use super::InterpError;
use crate::geometry::Polygon;
use crate::point::{pairwise_sum, Vec2};

/// Orbit of a symmetric rule, in barycentric coordinates on the reference
/// triangle. Weights are normalized to sum to one over the triangle.
#[derive(Debug, Clone, Copy)]
enum Orbit {
    Centroid(f64),
    /// `(a, a, 1 - 2a)` and permutations.
    Edge { a: f64, w: f64 },
    /// `(a, b, 1 - a - b)` and all six permutations.
    General { a: f64, b: f64, w: f64 },
}

// Dunavant rules, polished to double precision against exact monomial moments.
const DEGREE_2: &[Orbit] = &[Orbit::Edge { a: 1.0 / 6.0, w: 1.0 / 3.0 }];

const DEGREE_5: &[Orbit] = &[
    Orbit::Centroid(0.225),
    Orbit::Edge { a: 0.470_142_064_105_115_09, w: 0.132_394_152_788_506_18 },
    Orbit::Edge { a: 0.101_286_507_323_456_34, w: 0.125_939_180_544_827_15 },
];

const DEGREE_8: &[Orbit] = &[
    Orbit::Centroid(0.144_315_607_677_787_17),
    Orbit::Edge { a: 0.459_292_588_292_723_16, w: 0.095_091_634_267_284_625 },
    Orbit::Edge { a: 0.170_569_307_751_760_21, w: 0.103_217_370_534_718_25 },
    Orbit::Edge { a: 0.050_547_228_317_030_975, w: 0.032_458_497_623_198_080 },
    Orbit::General { a: 0.008_394_777_409_957_605_3, b: 0.263_112_829_634_638_11, w: 0.027_230_314_174_434_994 },
];

const DEGREE_10: &[Orbit] = &[
    Orbit::Centroid(0.090_817_990_382_753_580),
    Orbit::Edge { a: 0.485_577_633_383_657_38, w: 0.036_725_957_756_466_705 },
    Orbit::Edge { a: 0.109_481_575_485_037_05, w: 0.045_321_059_435_527_935 },
    Orbit::General { a: 0.141_707_219_414_879_95, b: 0.307_939_838_764_120_95, w: 0.072_757_916_845_420_109 },
    Orbit::General { a: 0.025_003_534_762_686_386, b: 0.246_672_560_639_902_69, w: 0.028_327_242_531_057_485 },
    Orbit::General { a: 0.009_540_815_400_299_457_6, b: 0.066_803_251_012_200_266, w: 0.009_421_666_963_732_823_5 },
];

pub const SUPPORTED_DEGREES: [usize; 4] = [2, 5, 8, 10];
pub const MAX_SUBDIVISION: usize = 4;

/// Barycentric points and normalized weights of a triangle rule.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleRule {
    pub degree: usize,
    pub points: Vec<([f64; 3], f64)>,
}

impl TriangleRule {
    pub fn new(degree: usize) -> Result<Self, InterpError> {
        let orbits = match degree {
            2 => DEGREE_2,
            5 => DEGREE_5,
            8 => DEGREE_8,
            10 => DEGREE_10,
            _ => return Err(InterpError::UnsupportedDegree(degree)),
        };
        let mut points = Vec::new();
        for orbit in orbits {
            match *orbit {
                Orbit::Centroid(w) => points.push(([1.0 / 3.0; 3], w)),
                Orbit::Edge { a, w } => {
                    let b = 1.0 - 2.0 * a;
                    points.extend([([b, a, a], w), ([a, b, a], w), ([a, a, b], w)]);
                }
                Orbit::General { a, b, w } => {
                    let c = 1.0 - a - b;
                    points.extend([
                        ([a, b, c], w),
                        ([a, c, b], w),
                        ([b, a, c], w),
                        ([b, c, a], w),
                        ([c, a, b], w),
                        ([c, b, a], w),
                    ]);
                }
            }
        }
        Ok(TriangleRule { degree, points })
    }

    /// Physical points and weights on the triangle `tri`.
    pub fn map(&self, tri: [Vec2; 3]) -> impl Iterator<Item = (Vec2, f64)> + '_ {
        let area = 0.5 * (tri[1] - tri[0]).cross(tri[2] - tri[0]).abs();
        self.points
            .iter()
            .map(move |&(l, w)| (tri[0] * l[0] + tri[1] * l[1] + tri[2] * l[2], w * area))
    }
}

/// Quadrature points and weights covering a polygon.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub points: Vec<(Vec2, f64)>,
    pub degree: usize,
    pub subdivision: usize,
}

impl QuadratureRule {
    pub fn total_weight(&self) -> f64 {
        let w: Vec<f64> = self.points.iter().map(|&(_, w)| w).collect();
        pairwise_sum(&w)
    }

    /// Integrates `f` with a fixed, partition-independent summation order.
    pub fn integrate(&self, mut f: impl FnMut(Vec2) -> f64) -> f64 {
        let terms: Vec<f64> = self.points.iter().map(|&(x, w)| w * f(x)).collect();
        pairwise_sum(&terms)
    }

    /// Like [`QuadratureRule::integrate`] but for fallible integrands.
    pub fn try_integrate<E>(&self, mut f: impl FnMut(Vec2) -> Result<f64, E>) -> Result<f64, E> {
        let mut terms = Vec::with_capacity(self.points.len());
        for &(x, w) in &self.points {
            terms.push(w * f(x)?);
        }
        Ok(pairwise_sum(&terms))
    }
}

/// Gauss–Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre(m: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(m);
    for k in 0..m {
        // Newton iteration on P_m from the Chebyshev-like initial guess.
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=m {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if m == 0 { 1.0 } else { p1 };
            dp = m as f64 * (x * p - p0) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((0.5 * (1.0 - x), 0.5 * w));
    }
    out
}

/// Product rule on a triangle collapsed onto one corner.
///
/// With `x = v + u ((a - v) + w (b - a))` the Jacobian is proportional to
/// `u`, and an integrand that depends on the direction of approach to `v`
/// becomes smooth in `(u, w)`. Exact for polynomials of degree `degree`
/// with twice the minimal point count in each direction: next to interior
/// angles close to `π` the direction dependence is sharp.
#[derive(Debug, Clone, PartialEq)]
struct CollapsedRule {
    u: Vec<(f64, f64)>,
    w: Vec<(f64, f64)>,
}

impl CollapsedRule {
    fn new(degree: usize) -> Self {
        CollapsedRule { u: gauss_legendre(degree + 3), w: gauss_legendre(degree + 2) }
    }

    /// Points on the triangle `(v, a, b)` collapsed onto `v`.
    fn map(&self, v: Vec2, a: Vec2, b: Vec2) -> impl Iterator<Item = (Vec2, f64)> + '_ {
        let twice_area = (a - v).cross(b - v).abs();
        self.u.iter().flat_map(move |&(u, wu)| {
            self.w
                .iter()
                .map(move |&(w, ww)| (v + ((a - v) + (b - a) * w) * u, wu * ww * u * twice_area))
        })
    }
}

/// A triangle of the fan with its corners that are polygon vertices marked.
#[derive(Debug, Clone, Copy)]
struct FanTriangle {
    v: [Vec2; 3],
    at_vertex: [bool; 3],
}

fn refine(t: FanTriangle) -> [FanTriangle; 4] {
    let [a, b, c] = t.v;
    let [fa, fb, fc] = t.at_vertex;
    let (ab, bc, ca) = ((a + b) * 0.5, (b + c) * 0.5, (c + a) * 0.5);
    [
        FanTriangle { v: [a, ab, ca], at_vertex: [fa, false, false] },
        FanTriangle { v: [ab, b, bc], at_vertex: [false, fb, false] },
        FanTriangle { v: [ca, bc, c], at_vertex: [false, false, fc] },
        FanTriangle { v: [ab, bc, ca], at_vertex: [false; 3] },
    ]
}

fn fan(p: &Polygon, subdivision: usize) -> Vec<FanTriangle> {
    let c = p.vertex_centroid();
    let mut tris: Vec<FanTriangle> = (0..p.len())
        .map(|i| FanTriangle { v: [c, p.vertex(i), p.vertex(i + 1)], at_vertex: [false, true, true] })
        .collect();
    for _ in 0..subdivision {
        tris = tris.into_iter().flat_map(refine).collect();
    }
    tris
}

/// Fan triangles about the vertex centroid, each refined `subdivision`
/// times by midpoint splitting.
pub fn fan_triangles(p: &Polygon, subdivision: usize) -> Vec<[Vec2; 3]> {
    fan(p, subdivision).into_iter().map(|t| t.v).collect()
}

/// Composite rule on the fan triangulation of `p`.
///
/// Mean value gradients are bounded at polygon vertices but depend on the
/// direction of approach, so triangles touching a vertex use a rule
/// collapsed onto that vertex. The others use the symmetric rule.
pub fn fan_quadrature(p: &Polygon, degree: usize, subdivision: usize) -> Result<QuadratureRule, InterpError> {
    if subdivision > MAX_SUBDIVISION {
        return Err(InterpError::UnsupportedSubdivision(subdivision));
    }
    let rule = TriangleRule::new(degree)?;
    let collapsed = CollapsedRule::new(degree);
    let mut points = Vec::new();
    for t in fan(p, subdivision) {
        let [a, b, c] = t.v;
        match t.at_vertex {
            [false, false, false] => points.extend(rule.map(t.v)),
            [true, false, false] => points.extend(collapsed.map(a, b, c)),
            [false, true, false] => points.extend(collapsed.map(b, c, a)),
            [false, false, true] => points.extend(collapsed.map(c, a, b)),
            // An unrefined fan triangle: split at the midpoint of its
            // boundary edge so each half touches one vertex.
            [false, true, true] => {
                let m = (b + c) * 0.5;
                points.extend(collapsed.map(b, m, a));
                points.extend(collapsed.map(c, a, m));
            }
            _ => unreachable!("fan triangles have the centroid as first corner"),
        }
    }
    Ok(QuadratureRule { points, degree, subdivision })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: u32) -> f64 {
        (1..=n).map(f64::from).product()
    }

    /// Exact integral of `x^a y^b` over the triangle (0,0), (1,0), (0,1).
    fn monomial_moment(a: u32, b: u32) -> f64 {
        factorial(a) * factorial(b) / factorial(a + b + 2)
    }

    #[test]
    fn rules_are_exact_to_their_degree() {
        let tri = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)];
        for degree in SUPPORTED_DEGREES {
            let rule = TriangleRule::new(degree).unwrap();
            for a in 0..=degree as u32 {
                for b in 0..=(degree as u32 - a) {
                    let got: f64 = rule.map(tri).map(|(x, w)| w * x.x.powi(a as i32) * x.y.powi(b as i32)).sum();
                    let want = monomial_moment(a, b);
                    assert!((got - want).abs() < 2e-16, "degree {degree}: x^{a} y^{b}: {got} vs {want}");
                }
            }
            assert!(rule.points.iter().all(|(l, w)| *w > 0.0 && l.iter().all(|&c| c > 0.0)));
        }
    }

    #[test]
    fn degree_10_is_not_exact_at_degree_12() {
        let tri = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)];
        let rule = TriangleRule::new(10).unwrap();
        let got: f64 = rule.map(tri).map(|(x, w)| w * x.x.powi(12)).sum();
        assert!((got - monomial_moment(12, 0)).abs() > 1e-12);
    }

    #[test]
    fn unsupported_inputs() {
        let p = Polygon::from_points([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]).unwrap();
        assert_eq!(fan_quadrature(&p, 3, 0).unwrap_err(), InterpError::UnsupportedDegree(3));
        assert!(fan_quadrature(&p, 2, 9).is_err());
    }

    #[test]
    fn gauss_legendre_nodes() {
        for m in 1..=8 {
            let rule = gauss_legendre(m);
            for k in 0..2 * m {
                let got: f64 = rule.iter().map(|&(x, w)| w * x.powi(k as i32)).sum();
                assert!((got - 1.0 / (k as f64 + 1.0)).abs() < 1e-15, "m {m}, x^{k}");
            }
            assert!(rule.windows(2).all(|w| w[0].0 < w[1].0));
        }
    }

    #[test]
    fn collapsed_rules_are_exact_to_their_degree() {
        let v = [Vec2::new(0.2, 0.1), Vec2::new(1.3, 0.4), Vec2::new(0.5, 1.1)];
        let reference = TriangleRule::new(10).unwrap();
        for degree in SUPPORTED_DEGREES {
            let rule = CollapsedRule::new(degree);
            for a in 0..=degree as i32 {
                for b in 0..=(degree as i32 - a) {
                    let f = |x: Vec2| x.x.powi(a) * x.y.powi(b);
                    let got: f64 = rule.map(v[1], v[2], v[0]).map(|(x, w)| w * f(x)).sum();
                    let want: f64 = reference.map(v).map(|(x, w)| w * f(x)).sum();
                    assert!((got - want).abs() < 1e-14, "degree {degree}: x^{a} y^{b}");
                }
            }
        }
    }

    #[test]
    fn vertex_direction_dependence_is_integrated_accurately() {
        // atan2 about a vertex is bounded but discontinuous there, like mean
        // value gradients. Over the unit square about (0, 0) its integral
        // equals pi / 4.
        let p = Polygon::from_points([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]).unwrap();
        for s in 0..=2 {
            let q = fan_quadrature(&p, 8, s).unwrap();
            assert!((q.integrate(|x| x.y.atan2(x.x)) - std::f64::consts::FRAC_PI_4).abs() < 1e-12, "{s}");
        }
    }

    #[test]
    fn unit_square_integrals() {
        let p = Polygon::from_points([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]).unwrap();
        let q = fan_quadrature(&p, 2, 0).unwrap();
        assert!((q.total_weight() - 1.0).abs() < 1e-15);
        let q = fan_quadrature(&p, 5, 0).unwrap();
        assert!((q.integrate(|x| x.x * x.x * x.y) - 1.0 / 6.0).abs() < 1e-15);
        for s in 0..=3 {
            let q = fan_quadrature(&p, 8, s).unwrap();
            assert!((q.total_weight() - 1.0).abs() < 1e-14);
            assert!((q.integrate(|x| x.x.powi(4) * x.y.powi(4)) - 1.0 / 25.0).abs() < 1e-15);
            assert!(q.points.iter().all(|&(x, _)| p.boundary_distance(x) > p.eval_tolerance()));
        }
    }
}
