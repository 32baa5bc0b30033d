use crate::point::Vec2;

/// Symmetric 2x2 matrix `[[xx, xy], [xy, yy]]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Hessian {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

impl Hessian {
    pub fn trace(&self) -> f64 {
        self.xx + self.yy
    }

    /// Sum of squared second derivatives over the multi-indices (2,0),
    /// (1,1) and (0,2).
    pub fn seminorm_density(&self) -> f64 {
        self.xx * self.xx + self.xy * self.xy + self.yy * self.yy
    }
}

/// A smooth field with analytic derivatives.
pub trait ScalarField: Sync {
    fn value(&self, x: Vec2) -> f64;
    fn gradient(&self, x: Vec2) -> Vec2;
    fn hessian(&self, x: Vec2) -> Hessian;

    /// `-laplacian(u)`, the Poisson load that produces this field.
    fn source(&self, x: Vec2) -> f64 {
        -self.hessian(x).trace()
    }
}

/// The fields used in tests and experiments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TestField {
    /// `a + b x + c y`
    Affine { a: f64, b: f64, c: f64 },
    XSquared,
    XY,
    YSquared,
    /// `sin(x) e^y`, harmonic.
    SinExp,
}

impl TestField {
    /// The four non-affine fields used in interpolation studies.
    pub const NONLINEAR: [TestField; 4] = [TestField::XSquared, TestField::XY, TestField::YSquared, TestField::SinExp];

    pub fn name(&self) -> &'static str {
        match self {
            TestField::Affine { .. } => "affine",
            TestField::XSquared => "x^2",
            TestField::XY => "xy",
            TestField::YSquared => "y^2",
            TestField::SinExp => "sin(x)e^y",
        }
    }
}

impl ScalarField for TestField {
    fn value(&self, p: Vec2) -> f64 {
        let Vec2 { x, y } = p;
        match *self {
            TestField::Affine { a, b, c } => a + b * x + c * y,
            TestField::XSquared => x * x,
            TestField::XY => x * y,
            TestField::YSquared => y * y,
            TestField::SinExp => x.sin() * y.exp(),
        }
    }

    fn gradient(&self, p: Vec2) -> Vec2 {
        let Vec2 { x, y } = p;
        match *self {
            TestField::Affine { b, c, .. } => Vec2::new(b, c),
            TestField::XSquared => Vec2::new(2.0 * x, 0.0),
            TestField::XY => Vec2::new(y, x),
            TestField::YSquared => Vec2::new(0.0, 2.0 * y),
            TestField::SinExp => Vec2::new(x.cos() * y.exp(), x.sin() * y.exp()),
        }
    }

    fn hessian(&self, p: Vec2) -> Hessian {
        let Vec2 { x, y } = p;
        match *self {
            TestField::Affine { .. } => Hessian::default(),
            TestField::XSquared => Hessian { xx: 2.0, xy: 0.0, yy: 0.0 },
            TestField::XY => Hessian { xx: 0.0, xy: 1.0, yy: 0.0 },
            TestField::YSquared => Hessian { xx: 0.0, xy: 0.0, yy: 2.0 },
            TestField::SinExp => {
                let e = y.exp();
                Hessian { xx: -x.sin() * e, xy: x.cos() * e, yy: x.sin() * e }
            }
        }
    }

    fn source(&self, p: Vec2) -> f64 {
        match *self {
            // Exactly harmonic; avoid the rounding in -(u_xx + u_yy).
            TestField::SinExp => 0.0,
            _ => -self.hessian(p).trace(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIELDS: [TestField; 5] = [
        TestField::Affine { a: 0.3, b: -1.2, c: 2.5 },
        TestField::XSquared,
        TestField::XY,
        TestField::YSquared,
        TestField::SinExp,
    ];

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-5;
        for f in FIELDS {
            for &x in &[Vec2::new(0.3, 0.7), Vec2::new(-1.1, 0.2), Vec2::new(0.9, -0.6)] {
                let fd = Vec2::new(
                    (f.value(x + Vec2::new(h, 0.0)) - f.value(x - Vec2::new(h, 0.0))) / (2.0 * h),
                    (f.value(x + Vec2::new(0.0, h)) - f.value(x - Vec2::new(0.0, h))) / (2.0 * h),
                );
                let g = f.gradient(x);
                assert!((g - fd).norm() <= 1e-6 * g.norm().max(1.0), "{}", f.name());
                let gx = (f.gradient(x + Vec2::new(h, 0.0)) - f.gradient(x - Vec2::new(h, 0.0))) / (2.0 * h);
                let gy = (f.gradient(x + Vec2::new(0.0, h)) - f.gradient(x - Vec2::new(0.0, h))) / (2.0 * h);
                let hs = f.hessian(x);
                assert!((hs.xx - gx.x).abs() < 1e-6 && (hs.xy - gx.y).abs() < 1e-6);
                assert!((hs.xy - gy.x).abs() < 1e-6 && (hs.yy - gy.y).abs() < 1e-6);
                assert!((f.source(x) + hs.trace()).abs() < 1e-12);
            }
        }
    }
}
