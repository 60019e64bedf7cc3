//! Procedural face rasterizer.
//!
//! Faces are composited back-to-front from analytically defined shapes:
//! a head ellipse, two angled brow strokes, two height-varying eye ellipses
//! and a width/height/corner-varying mouth curve. Every shape edge is
//! feathered over a fixed sub-pixel band, so the rendered pixels are a
//! continuous function of the expression controls, and every geometric
//! quantity below is a monotone function of the control that drives it.

use crate::faceimage::FaceImage;
use crate::synthworld::style::FaceStyle;
use crate::synthworld::types::{Control, ExpressionParams, NuisanceParams};

/// Edge feather half-width in normalized units, for a 64-px image about
/// 1.5 px. Shared by every shape so anti-aliasing is uniform.
const FEATHER_PX: f64 = 1.5;

/// Geometry of one posed face, in normalized units. Derived from
/// (style, expression) only; the rasterizer consumes it verbatim.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceGeometry {
    pub center: (f64, f64),
    pub head_rx: f64,
    pub head_ry: f64,
    /// (center, half-length direction) per brow, left then right.
    pub brows: [((f64, f64), (f64, f64)); 2],
    pub brow_thickness: f64,
    /// (center, rx, ry) per eye, left then right.
    pub eyes: [((f64, f64), f64, f64); 2],
    /// Mouth: midline y, half-width, full half-height, corner y-offsets
    /// (left, right; positive offsets lift the corner upward).
    pub mouth_y: f64,
    pub mouth_half_width: f64,
    pub mouth_half_height: f64,
    pub mouth_corners: (f64, f64),
}

fn lerp(a: f64, b: f64, t: f64) -> f64 {
    a + (b - a) * t
}

/// Pose a style with an expression. Each field is monotone in the control
/// that drives it: raising a brow control moves that brow up, opening an
/// eye grows its vertical radius, and so on.
pub fn face_geometry(style: &FaceStyle, expr: &ExpressionParams, shift: (f64, f64)) -> FaceGeometry {
    let cx = 0.5 + shift.0;
    let cy = 0.5 + shift.1;
    let brow_y = |raise: f64| cy + (style.brow_y - 0.5) - (raise - 0.5) * style.brow_raise_range;
    let brow = |side: f64, raise: f64| {
        let bx = cx + side * style.eye_dx;
        let by = brow_y(raise);
        // Angled stroke: the outer end tilts by the style angle.
        let dir = (side * style.brow_angle.cos(), -style.brow_angle.sin());
        ((bx, by), (dir.0 * style.brow_half_len, dir.1 * style.brow_half_len))
    };
    let eye = |side: f64, openness: f64| {
        let ex = cx + side * style.eye_dx;
        let ey = cy + (style.eye_y - 0.5);
        let ry = lerp(style.eye_ry_min, style.eye_ry_max, openness);
        ((ex, ey), style.eye_rx, ry)
    };
    FaceGeometry {
        center: (cx, cy),
        head_rx: style.head_rx,
        head_ry: style.head_ry,
        brows: [
            brow(-1.0, expr.get(Control::BrowLeft)),
            brow(1.0, expr.get(Control::BrowRight)),
        ],
        brow_thickness: style.brow_thickness,
        eyes: [
            eye(-1.0, expr.get(Control::EyeLeft)),
            eye(1.0, expr.get(Control::EyeRight)),
        ],
        mouth_y: cy + (style.mouth_y - 0.5),
        mouth_half_width: lerp(
            style.mouth_half_width_min,
            style.mouth_half_width_max,
            expr.get(Control::MouthWide),
        ),
        mouth_half_height: lerp(
            style.mouth_half_height_min,
            style.mouth_half_height_max,
            expr.get(Control::MouthOpen),
        ),
        mouth_corners: (
            (expr.get(Control::CornerLeft) - 0.5) * 2.0 * style.mouth_corner_range,
            (expr.get(Control::CornerRight) - 0.5) * 2.0 * style.mouth_corner_range,
        ),
    }
}

/// Axis-aligned pixel rectangle, max-exclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PixelRect {
    pub x0: usize,
    pub y0: usize,
    pub x1: usize,
    pub y1: usize,
}

impl PixelRect {
    pub fn contains(&self, x: usize, y: usize) -> bool {
        x >= self.x0 && x < self.x1 && y >= self.y0 && y < self.y1
    }
}

/// Smallest pixel rectangle that can be touched by the mouth under any
/// expression, for an untranslated render of this style.
pub fn mouth_region(style: &FaceStyle, side: usize) -> PixelRect {
    let aa = FEATHER_PX / side as f64;
    let reach_y = style.mouth_half_height_max + style.mouth_corner_range + 2.0 * aa;
    let reach_x = style.mouth_half_width_max + 2.0 * aa;
    let clampf = |v: f64| (v.max(0.0) * side as f64) as usize;
    PixelRect {
        x0: clampf(0.5 - reach_x),
        y0: clampf(style.mouth_y - reach_y),
        x1: (clampf(0.5 + reach_x) + 1).min(side),
        y1: (clampf(style.mouth_y + reach_y) + 1).min(side),
    }
}

struct Canvas {
    side: usize,
    data: Vec<f32>, // CHW
}

impl Canvas {
    fn filled(side: usize, color: [f32; 3]) -> Self {
        let mut data = vec![0.0; 3 * side * side];
        for c in 0..3 {
            data[c * side * side..(c + 1) * side * side].fill(color[c]);
        }
        Canvas { side, data }
    }

    #[inline]
    fn blend(&mut self, x: usize, y: usize, color: [f32; 3], alpha: f64) {
        if alpha <= 0.0 {
            return;
        }
        let a = alpha.min(1.0) as f32;
        let n = self.side * self.side;
        let idx = y * self.side + x;
        for c in 0..3 {
            let px = &mut self.data[c * n + idx];
            *px += (color[c] - *px) * a;
        }
    }

    /// Paint `inside_dist(x, y)` (positive inside the shape) over a bounding
    /// box, feathering the edge over the shared sub-pixel band.
    fn paint<F: Fn(f64, f64) -> f64>(&mut self, color: [f32; 3], bbox: (f64, f64, f64, f64), inside_dist: F) {
        let s = self.side as f64;
        let aa = FEATHER_PX / s;
        let x0 = ((bbox.0 - 2.0 * aa) * s).floor().max(0.0) as usize;
        let y0 = ((bbox.1 - 2.0 * aa) * s).floor().max(0.0) as usize;
        let x1 = (((bbox.2 + 2.0 * aa) * s).ceil() as usize).min(self.side);
        let y1 = (((bbox.3 + 2.0 * aa) * s).ceil() as usize).min(self.side);
        for py in y0..y1 {
            let fy = (py as f64 + 0.5) / s;
            for px in x0..x1 {
                let fx = (px as f64 + 0.5) / s;
                let d = inside_dist(fx, fy);
                let alpha = (0.5 + d / (2.0 * aa)).clamp(0.0, 1.0);
                self.blend(px, py, color, alpha);
            }
        }
    }
}

fn ellipse_inside_dist(p: (f64, f64), c: (f64, f64), rx: f64, ry: f64) -> f64 {
    let nx = (p.0 - c.0) / rx;
    let ny = (p.1 - c.1) / ry;
    (1.0 - (nx * nx + ny * ny).sqrt()) * rx.min(ry)
}

fn capsule_inside_dist(p: (f64, f64), center: (f64, f64), half: (f64, f64), thickness: f64) -> f64 {
    // Distance to the segment [center - half, center + half], minus radius.
    let ax = center.0 - half.0;
    let ay = center.1 - half.1;
    let bx = center.0 + half.0;
    let by = center.1 + half.1;
    let abx = bx - ax;
    let aby = by - ay;
    let len2 = abx * abx + aby * aby;
    let t = if len2 > 0.0 {
        (((p.0 - ax) * abx + (p.1 - ay) * aby) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let dx = p.0 - (ax + t * abx);
    let dy = p.1 - (ay + t * aby);
    thickness - (dx * dx + dy * dy).sqrt()
}

/// Vertical inside-distance for the mouth curve. `t` runs -1..1 across the
/// mouth; the midline bends toward lifted corners and the opening tapers
/// parabolically toward them.
fn mouth_inside_dist(p: (f64, f64), cx: f64, geom: &FaceGeometry) -> f64 {
    let w = geom.mouth_half_width;
    let t = (p.0 - cx) / w;
    if t.abs() >= 1.0 {
        return f64::NEG_INFINITY;
    }
    let ramp = |u: f64| u.max(0.0) * u.max(0.0);
    let midline = geom.mouth_y - geom.mouth_corners.0 * ramp(-t) - geom.mouth_corners.1 * ramp(t);
    let half_h = geom.mouth_half_height * (1.0 - t * t);
    half_h - (p.1 - midline).abs()
}

/// Rasterize a posed face.
pub fn render(style: &FaceStyle, geom: &FaceGeometry, side: usize, nuisance: Option<&NuisanceParams>) -> FaceImage {
    let background = nuisance.map(|n| n.background).unwrap_or(style.background);
    let mut canvas = Canvas::filled(side, background);
    let (cx, cy) = geom.center;

    canvas.paint(
        style.skin,
        (cx - geom.head_rx, cy - geom.head_ry, cx + geom.head_rx, cy + geom.head_ry),
        |x, y| ellipse_inside_dist((x, y), geom.center, geom.head_rx, geom.head_ry),
    );

    for ((bc, bh), _) in geom.brows.iter().map(|b| (b, ())) {
        let reach = geom.brow_thickness + bh.0.abs().max(bh.1.abs());
        canvas.paint(
            style.feature,
            (bc.0 - reach, bc.1 - reach, bc.0 + reach, bc.1 + reach),
            |x, y| capsule_inside_dist((x, y), *bc, *bh, geom.brow_thickness),
        );
    }

    for (ec, rx, ry) in geom.eyes.iter() {
        canvas.paint(
            style.eye_color,
            (ec.0 - rx, ec.1 - ry, ec.0 + rx, ec.1 + ry),
            |x, y| ellipse_inside_dist((x, y), *ec, *rx, *ry),
        );
    }

    let mouth_reach = geom.mouth_half_height + geom.mouth_corners.0.abs().max(geom.mouth_corners.1.abs());
    canvas.paint(
        style.feature,
        (
            cx - geom.mouth_half_width,
            geom.mouth_y - mouth_reach,
            cx + geom.mouth_half_width,
            geom.mouth_y + mouth_reach,
        ),
        |x, y| mouth_inside_dist((x, y), cx, geom),
    );

    let brightness = nuisance.map(|n| n.brightness).unwrap_or(1.0) as f32;
    if brightness != 1.0 {
        for v in canvas.data.iter_mut() {
            *v = (*v * brightness).clamp(0.0, 1.0);
        }
    }
    FaceImage::new(side, canvas.data).expect("rasterizer output is clamped to [0,1]")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use crate::synthworld::style::FaceStyle;

    fn style() -> FaceStyle {
        FaceStyle::derive(&mut substream(5, "style", 1), 1)
    }

    #[test]
    fn geometry_is_monotone_in_each_control() {
        let st = style();
        let neutral = ExpressionParams::neutral(8);
        let lo = face_geometry(&st, &neutral.with(Control::EyeLeft, 0.1).unwrap(), (0.0, 0.0));
        let hi = face_geometry(&st, &neutral.with(Control::EyeLeft, 0.9).unwrap(), (0.0, 0.0));
        assert!(hi.eyes[0].2 > lo.eyes[0].2);

        let lo = face_geometry(&st, &neutral.with(Control::BrowRight, 0.1).unwrap(), (0.0, 0.0));
        let hi = face_geometry(&st, &neutral.with(Control::BrowRight, 0.9).unwrap(), (0.0, 0.0));
        assert!(hi.brows[1].0 .1 < lo.brows[1].0 .1, "raised brow sits higher (smaller y)");

        let lo = face_geometry(&st, &neutral.with(Control::MouthOpen, 0.0).unwrap(), (0.0, 0.0));
        let hi = face_geometry(&st, &neutral.with(Control::MouthOpen, 1.0).unwrap(), (0.0, 0.0));
        assert!(hi.mouth_half_height > lo.mouth_half_height);

        let lo = face_geometry(&st, &neutral.with(Control::MouthWide, 0.0).unwrap(), (0.0, 0.0));
        let hi = face_geometry(&st, &neutral.with(Control::MouthWide, 1.0).unwrap(), (0.0, 0.0));
        assert!(hi.mouth_half_width > lo.mouth_half_width);

        let lo = face_geometry(&st, &neutral.with(Control::CornerLeft, 0.0).unwrap(), (0.0, 0.0));
        let hi = face_geometry(&st, &neutral.with(Control::CornerLeft, 1.0).unwrap(), (0.0, 0.0));
        assert!(hi.mouth_corners.0 > lo.mouth_corners.0);
    }

    #[test]
    fn rendering_is_deterministic() {
        let st = style();
        let expr = ExpressionParams::neutral(8);
        let geom = face_geometry(&st, &expr, (0.0, 0.0));
        let a = render(&st, &geom, 64, None);
        let b = render(&st, &geom, 64, None);
        assert_eq!(a, b);
    }

    #[test]
    fn mouth_stays_inside_reported_region() {
        let st = style();
        let region = mouth_region(&st, 64);
        let neutral = ExpressionParams::neutral(8);
        let base = render(&st, &face_geometry(&st, &neutral, (0.0, 0.0)), 64, None);
        for (c, v) in [
            (Control::MouthOpen, 1.0),
            (Control::MouthOpen, 0.0),
            (Control::MouthWide, 1.0),
            (Control::CornerLeft, 1.0),
            (Control::CornerRight, 0.0),
        ] {
            let posed = render(
                &st,
                &face_geometry(&st, &neutral.with(c, v).unwrap(), (0.0, 0.0)),
                64,
                None,
            );
            for (x, y) in base.diff_pixels(&posed, 0.0) {
                assert!(region.contains(x, y), "pixel ({x},{y}) outside mouth region {region:?}");
            }
        }
    }
}
