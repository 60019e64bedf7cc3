//! Domain types for the synthetic avatar world.

use crate::error::{Error, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Number of canonical expression controls: left/right brow raise, left/right
/// eye openness, mouth openness, mouth width, left/right mouth-corner lift.
pub const CONTROL_COUNT: usize = 8;

/// Indices into an [`ExpressionParams`] vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    BrowLeft = 0,
    BrowRight = 1,
    EyeLeft = 2,
    EyeRight = 3,
    MouthOpen = 4,
    MouthWide = 5,
    CornerLeft = 6,
    CornerRight = 7,
}

/// Avatar identity. Id 0 is the "wild" (unpaired, riggless) identity; ids
/// 1..=K are riggable target avatars.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AvatarId(pub u32);

impl AvatarId {
    pub const WILD: AvatarId = AvatarId(0);

    pub fn is_wild(self) -> bool {
        self.0 == 0
    }
}

impl std::fmt::Display for AvatarId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Canonical expression controls, every component in [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpressionParams {
    values: Vec<f64>,
}

impl ExpressionParams {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v) || !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "expression control {v} outside [0,1]"
            )));
        }
        Ok(Self { values })
    }

    /// Clamp each component into [0, 1].
    pub fn clamped(values: Vec<f64>) -> Self {
        Self { values: values.iter().map(|v| v.clamp(0.0, 1.0)).collect() }
    }

    /// All controls at their midpoint.
    pub fn neutral(dim: usize) -> Self {
        Self { values: vec![0.5; dim] }
    }

    pub fn uniform<R: Rng>(rng: &mut R, dim: usize) -> Self {
        Self { values: (0..dim).map(|_| rng.gen::<f64>()).collect() }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, c: Control) -> f64 {
        self.values[c as usize]
    }

    pub fn with(&self, c: Control, v: f64) -> Result<Self> {
        let mut values = self.values.clone();
        values[c as usize] = v;
        Self::new(values)
    }

    /// Euclidean distance between two control vectors — the world's oracle
    /// notion of expression dissimilarity.
    pub fn distance(&self, other: &ExpressionParams) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

/// Per-avatar facial control vector, every component in [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RigParams {
    values: Vec<f64>,
}

impl RigParams {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v) || !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "rig component {v} outside [0,1]"
            )));
        }
        Ok(Self { values })
    }

    pub fn clamped(values: Vec<f64>) -> Self {
        Self { values: values.iter().map(|v| v.clamp(0.0, 1.0)).collect() }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn from_f32(values: &[f32]) -> Self {
        Self::clamped(values.iter().map(|v| *v as f64).collect())
    }

    pub fn to_f32(&self) -> Vec<f32> {
        self.values.iter().map(|v| *v as f32).collect()
    }

    /// Mean absolute difference per component.
    pub fn mean_abs_diff(&self, other: &RigParams) -> f64 {
        let n = self.values.len().max(1);
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
            / n as f64
    }
}

/// Rendering variability applied to wild (id 0) faces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NuisanceParams {
    /// Background color override.
    pub background: [f32; 3],
    /// Whole-face translation in pixels, each component within ±max_translation.
    pub translation: (f64, f64),
    /// Global brightness scale.
    pub brightness: f64,
}

impl NuisanceParams {
    pub fn sample<R: Rng>(rng: &mut R, max_translation_px: f64, brightness: (f64, f64)) -> Self {
        Self {
            background: [rng.gen::<f32>(), rng.gen::<f32>(), rng.gen::<f32>()],
            translation: (
                rng.gen_range(-max_translation_px..=max_translation_px),
                rng.gen_range(-max_translation_px..=max_translation_px),
            ),
            brightness: rng.gen_range(brightness.0..=brightness.1),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expression_params_validate_range() {
        assert!(ExpressionParams::new(vec![0.0, 1.0, 0.5]).is_ok());
        assert!(ExpressionParams::new(vec![-0.1]).is_err());
        assert!(ExpressionParams::new(vec![1.01]).is_err());
        let c = ExpressionParams::clamped(vec![-3.0, 2.0]);
        assert_eq!(c.values(), &[0.0, 1.0]);
    }

    #[test]
    fn distance_is_euclidean() {
        let a = ExpressionParams::new(vec![0.0, 0.0]).unwrap();
        let b = ExpressionParams::new(vec![0.3, 0.4]).unwrap();
        assert!((a.distance(&b) - 0.5).abs() < 1e-12);
    }
}
