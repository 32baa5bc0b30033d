use serde::Serialize;

use super::Polygon;
use crate::point::Vec2;

/// The map `x -> scale * x + translation`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Similarity {
    pub scale: f64,
    pub translation: Vec2,
}

impl Similarity {
    pub const IDENTITY: Similarity = Similarity { scale: 1.0, translation: Vec2::ZERO };

    pub fn apply(&self, x: Vec2) -> Vec2 {
        x * self.scale + self.translation
    }

    pub fn inverse(&self) -> Similarity {
        Similarity {
            scale: 1.0 / self.scale,
            translation: -self.translation / self.scale,
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }
}

/// Rescales `p` about its vertex centroid so that its diameter is one.
pub fn normalize_to_unit_diameter(p: &Polygon) -> (Polygon, Similarity) {
    let d = p.diameter();
    if d == 1.0 {
        return (p.clone(), Similarity::IDENTITY);
    }
    let scale = 1.0 / d;
    let c = p.vertex_centroid();
    let t = Similarity { scale, translation: c * (1.0 - scale) };
    let q = p.map_vertices(|v| t.apply(v)).expect("similarity preserves validity");
    (q, t)
}
