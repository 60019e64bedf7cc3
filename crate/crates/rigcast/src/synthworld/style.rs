//! Per-identity face styles.
//!
//! A style fixes the shape and palette of one identity's face; it is a
//! deterministic function of (world seed, identity id). Identity 0 — the
//! wild identity — gets a deliberately off-palette look so that wild faces
//! are a genuine domain shift relative to the riggable avatars.

use rand::Rng;
use serde::{Deserialize, Serialize};

/// All coordinates are in normalized image units (0..1, y growing downward).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaceStyle {
    pub background: [f32; 3],
    pub skin: [f32; 3],
    pub feature: [f32; 3],
    pub eye_color: [f32; 3],

    pub head_rx: f64,
    pub head_ry: f64,

    pub eye_y: f64,
    pub eye_dx: f64,
    pub eye_rx: f64,
    pub eye_ry_min: f64,
    pub eye_ry_max: f64,

    pub brow_y: f64,
    pub brow_half_len: f64,
    pub brow_thickness: f64,
    pub brow_raise_range: f64,
    /// Outer-end slope of the brow stroke, radians; mirrored on the right.
    pub brow_angle: f64,

    pub mouth_y: f64,
    pub mouth_half_width_min: f64,
    pub mouth_half_width_max: f64,
    pub mouth_half_height_min: f64,
    pub mouth_half_height_max: f64,
    pub mouth_corner_range: f64,
}

fn hsv(h: f64, s: f64, v: f64) -> [f32; 3] {
    let h = (h.fract() + 1.0).fract() * 6.0;
    let i = h.floor() as i64;
    let f = h - i as f64;
    let p = v * (1.0 - s);
    let q = v * (1.0 - s * f);
    let t = v * (1.0 - s * (1.0 - f));
    let (r, g, b) = match i.rem_euclid(6) {
        0 => (v, t, p),
        1 => (q, v, p),
        2 => (p, v, t),
        3 => (p, q, v),
        4 => (t, p, v),
        _ => (v, p, q),
    };
    [r as f32, g as f32, b as f32]
}

impl FaceStyle {
    pub fn derive<R: Rng>(rng: &mut R, id: u32) -> Self {
        // Golden-ratio hue spacing keeps avatar palettes well separated.
        let hue = 0.07 + id as f64 * 0.618_033_988_749_895;
        let wild = id == 0;
        let (background, skin) = if wild {
            (
                hsv(0.6, 0.08, 0.42),
                hsv(0.09 + rng.gen_range(-0.02..0.02), 0.18, 0.96),
            )
        } else {
            (
                hsv(hue + 0.45, rng.gen_range(0.25..0.4), rng.gen_range(0.18..0.30)),
                hsv(hue, rng.gen_range(0.30..0.48), rng.gen_range(0.80..0.95)),
            )
        };
        FaceStyle {
            background,
            skin,
            feature: hsv(hue + 0.02, 0.55, rng.gen_range(0.10..0.22)),
            eye_color: hsv(hue + 0.5, 0.6, rng.gen_range(0.08..0.20)),
            head_rx: rng.gen_range(0.28..0.34),
            head_ry: rng.gen_range(0.34..0.40),
            eye_y: rng.gen_range(0.40..0.44),
            eye_dx: rng.gen_range(0.12..0.15),
            eye_rx: rng.gen_range(0.050..0.062),
            eye_ry_min: 0.006,
            eye_ry_max: rng.gen_range(0.036..0.048),
            brow_y: rng.gen_range(0.30..0.33),
            brow_half_len: rng.gen_range(0.045..0.060),
            brow_thickness: rng.gen_range(0.010..0.016),
            brow_raise_range: 0.05,
            brow_angle: rng.gen_range(-0.25..0.25),
            mouth_y: rng.gen_range(0.66..0.70),
            mouth_half_width_min: 0.05,
            mouth_half_width_max: rng.gen_range(0.13..0.16),
            mouth_half_height_min: 0.006,
            mouth_half_height_max: rng.gen_range(0.045..0.060),
            mouth_corner_range: rng.gen_range(0.035..0.050),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    #[test]
    fn styles_are_deterministic_per_id() {
        let a = FaceStyle::derive(&mut substream(3, "style", 1), 1);
        let b = FaceStyle::derive(&mut substream(3, "style", 1), 1);
        assert_eq!(a, b);
    }

    #[test]
    fn hsv_stays_in_unit_range() {
        for i in 0..60 {
            let c = hsv(i as f64 * 0.1 - 3.0, 0.5, 0.9);
            assert!(c.iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }
}
