//! `FaceImage`: fixed-size RGB raster with values in [0, 1].
//!
//! This is the universal currency between the synthetic world, the encoder
//! and the animator. Pixels are stored channel-major (CHW) to match the
//! tensor layout used by the models.

use crate::error::{Error, Result};
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub struct FaceImage {
    side: usize,
    /// CHW, length `3 * side * side`, every value in [0, 1].
    data: Vec<f32>,
}

impl FaceImage {
    pub fn new(side: usize, data: Vec<f32>) -> Result<Self> {
        if data.len() != 3 * side * side {
            return Err(Error::ShapeMismatch(format!(
                "image buffer has {} values, expected {} for side {}",
                data.len(),
                3 * side * side,
                side
            )));
        }
        if let Some(v) = data.iter().find(|v| !(0.0..=1.0).contains(*v) || !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "pixel value {v} outside [0,1]"
            )));
        }
        Ok(Self { side, data })
    }

    /// All-zero (black) image.
    pub fn zeros(side: usize) -> Self {
        Self { side, data: vec![0.0; 3 * side * side] }
    }

    pub fn splat(side: usize, value: f32) -> Result<Self> {
        Self::new(side, vec![value; 3 * side * side])
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f32> {
        self.data
    }

    #[inline]
    pub fn get(&self, channel: usize, y: usize, x: usize) -> f32 {
        self.data[(channel * self.side + y) * self.side + x]
    }

    #[inline]
    pub fn set(&mut self, channel: usize, y: usize, x: usize, value: f32) {
        self.data[(channel * self.side + y) * self.side + x] = value.clamp(0.0, 1.0);
    }

    /// Quantize to 8-bit, CHW order (the archive encoding).
    pub fn to_u8(&self) -> Vec<u8> {
        self.data
            .iter()
            .map(|v| (v * 255.0).round().clamp(0.0, 255.0) as u8)
            .collect()
    }

    pub fn from_u8(side: usize, bytes: &[u8]) -> Result<Self> {
        if bytes.len() != 3 * side * side {
            return Err(Error::ShapeMismatch(format!(
                "byte buffer has {} values, expected {}",
                bytes.len(),
                3 * side * side
            )));
        }
        let data = bytes.iter().map(|b| *b as f32 / 255.0).collect();
        Ok(Self { side, data })
    }

    /// Mean squared difference per element.
    pub fn mse(&self, other: &FaceImage) -> Result<f64> {
        if self.side != other.side {
            return Err(Error::ShapeMismatch(format!(
                "image sides differ: {} vs {}",
                self.side, other.side
            )));
        }
        let sum: f64 = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let d = (*a - *b) as f64;
                d * d
            })
            .sum();
        Ok(sum / self.data.len() as f64)
    }

    /// Pixel positions (x, y) where any channel differs by more than `tol`.
    pub fn diff_pixels(&self, other: &FaceImage, tol: f32) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for y in 0..self.side {
            for x in 0..self.side {
                let differs = (0..3).any(|c| (self.get(c, y, x) - other.get(c, y, x)).abs() > tol);
                if differs {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn save_png(&self, path: &Path) -> Result<()> {
        let side = self.side as u32;
        let mut img = image::RgbImage::new(side, side);
        for y in 0..self.side {
            for x in 0..self.side {
                let px = image::Rgb([
                    (self.get(0, y, x) * 255.0).round() as u8,
                    (self.get(1, y, x) * 255.0).round() as u8,
                    (self.get(2, y, x) * 255.0).round() as u8,
                ]);
                img.put_pixel(x as u32, y as u32, px);
            }
        }
        img.save(path)?;
        Ok(())
    }

    pub fn load_png(path: &Path) -> Result<Self> {
        let img = image::open(path)?.to_rgb8();
        let (w, h) = img.dimensions();
        if w != h {
            return Err(Error::InvalidArgument(format!(
                "expected a square image, got {w}x{h}"
            )));
        }
        let side = w as usize;
        let mut out = Self::zeros(side);
        for y in 0..side {
            for x in 0..side {
                let px = img.get_pixel(x as u32, y as u32);
                for c in 0..3 {
                    out.set(c, y, x, px.0[c] as f32 / 255.0);
                }
            }
        }
        Ok(out)
    }
}
