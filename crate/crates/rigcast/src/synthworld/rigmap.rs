//! Invertible affine maps between canonical expression controls and
//! per-avatar rig parameters.
//!
//! Each map is built so that the image of the control cube [0,1]^S lies
//! strictly inside the rig cube [0,1]^R: the clamp in the forward direction
//! is then a no-op for valid controls and the map has an exact analytic
//! inverse everywhere it is used. Rows are dominated by a single scaled,
//! signed control with a small random cross-mix, which keeps the condition
//! number low and each rig component spread over most of [0, 1].

use crate::error::{Error, Result};
use crate::synthworld::types::{ExpressionParams, RigParams};
use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Maximum admissible condition number for a generated map.
pub const MAX_CONDITION: f64 = 4.0;

/// Row absolute sums are kept at or below this bound so the affine image of
/// the centered control cube stays inside the rig cube.
const ROW_BUDGET: f64 = 0.98;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RigMap {
    /// Row-major S x S matrix.
    matrix: Vec<Vec<f64>>,
    offset: Vec<f64>,
    #[serde(skip)]
    cache: Option<RigMapCache>,
}

#[derive(Debug, Clone)]
struct RigMapCache {
    a: DMatrix<f64>,
    a_inv: DMatrix<f64>,
    b: DVector<f64>,
}

impl PartialEq for RigMap {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix && self.offset == other.offset
    }
}

impl RigMap {
    /// The identity map (rig equals expression).
    pub fn identity(dim: usize) -> Self {
        let mut matrix = vec![vec![0.0; dim]; dim];
        for (i, row) in matrix.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        let mut map = Self { matrix, offset: vec![0.0; dim], cache: None };
        map.rebuild_cache().expect("identity map is invertible");
        map
    }

    /// Build from explicit coefficients. Fails if the matrix is singular.
    pub fn from_parts(matrix: Vec<Vec<f64>>, offset: Vec<f64>) -> Result<Self> {
        let mut map = Self { matrix, offset, cache: None };
        map.rebuild_cache()?;
        Ok(map)
    }

    /// Draw a random well-conditioned map for one avatar.
    pub fn generate<R: Rng>(rng: &mut R, dim: usize) -> Self {
        let mut perm: Vec<usize> = (0..dim).collect();
        perm.shuffle(rng);
        let mut matrix = vec![vec![0.0; dim]; dim];
        for i in 0..dim {
            let dominant = rng.gen_range(0.90..=0.96);
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            matrix[i][perm[i]] = sign * dominant;
            // Spend most of the remaining row budget on a couple of
            // off-dominant couplings.
            let budget = ROW_BUDGET - dominant;
            let mut others: Vec<usize> = (0..dim).filter(|j| *j != perm[i]).collect();
            others.shuffle(rng);
            let split = rng.gen_range(0.3..0.7);
            for (k, j) in others.iter().take(2).enumerate() {
                let share = if k == 0 { split } else { 1.0 - split };
                let s = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                matrix[i][*j] = s * budget * share * rng.gen_range(0.5..=1.0);
            }
        }
        // Center the image of the cube: controls at 0.5 map to rigs at 0.5.
        let offset: Vec<f64> = (0..dim)
            .map(|i| 0.5 - 0.5 * matrix[i].iter().sum::<f64>())
            .collect();
        let mut map = Self { matrix, offset, cache: None };
        map.rebuild_cache()
            .expect("diagonally dominant map is invertible");
        debug_assert!(map.condition_number() <= MAX_CONDITION);
        map
    }

    fn rebuild_cache(&mut self) -> Result<()> {
        let dim = self.matrix.len();
        if self.matrix.iter().any(|r| r.len() != dim) || self.offset.len() != dim {
            return Err(Error::InvalidArgument("rig map is not square".into()));
        }
        let a = DMatrix::from_fn(dim, dim, |i, j| self.matrix[i][j]);
        let a_inv = a
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidArgument("rig map matrix is singular".into()))?;
        let b = DVector::from_iterator(dim, self.offset.iter().copied());
        self.cache = Some(RigMapCache { a, a_inv, b });
        Ok(())
    }

    fn cache(&self) -> &RigMapCache {
        self.cache
            .as_ref()
            .expect("rig map cache initialized at construction")
    }

    /// Restore the inverse cache after deserialization.
    pub fn ensure_cache(&mut self) -> Result<()> {
        if self.cache.is_none() {
            self.rebuild_cache()?;
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.matrix
    }

    pub fn offset(&self) -> &[f64] {
        &self.offset
    }

    /// r = clamp(A s + b). The clamp is a no-op for any s in [0,1]^S by
    /// construction of the row budget.
    pub fn rig_from_expression(&self, expr: &ExpressionParams) -> Result<RigParams> {
        let c = self.cache();
        if expr.dim() != self.dim() {
            return Err(Error::ShapeMismatch(format!(
                "expression dim {} vs rig map dim {}",
                expr.dim(),
                self.dim()
            )));
        }
        let s = DVector::from_iterator(expr.dim(), expr.values().iter().copied());
        let r = &c.a * s + &c.b;
        Ok(RigParams::clamped(r.iter().copied().collect()))
    }

    /// s = clamp(A^{-1} (r − b)).
    pub fn expression_from_rig(&self, rig: &RigParams) -> Result<ExpressionParams> {
        let c = self.cache();
        if rig.dim() != self.dim() {
            return Err(Error::ShapeMismatch(format!(
                "rig dim {} vs rig map dim {}",
                rig.dim(),
                self.dim()
            )));
        }
        let r = DVector::from_iterator(rig.dim(), rig.values().iter().copied());
        let s = &c.a_inv * (r - &c.b);
        Ok(ExpressionParams::clamped(s.iter().copied().collect()))
    }

    /// 2-norm condition number of the linear part.
    pub fn condition_number(&self) -> f64 {
        let svd = self.cache().a.clone().svd(false, false);
        let max = svd.singular_values.max();
        let min = svd.singular_values.min();
        max / min
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    #[test]
    fn identity_map_passes_values_through() {
        let map = RigMap::identity(8);
        let s = ExpressionParams::new(vec![0.3; 8]).unwrap();
        let r = map.rig_from_expression(&s).unwrap();
        assert_eq!(r.values(), s.values());
    }

    #[test]
    fn round_trip_is_exact_on_interior_points() {
        let mut rng = substream(11, "rigmap-test", 0);
        let map = RigMap::generate(&mut rng, 8);
        let s = ExpressionParams::new(vec![0.3, 0.7, 0.5, 0.1, 0.9, 0.4, 0.6, 0.2]).unwrap();
        let r = map.rig_from_expression(&s).unwrap();
        let back = map.expression_from_rig(&r).unwrap();
        for (a, b) in s.values().iter().zip(back.values()) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn sampled_round_trips_stay_below_tolerance() {
        // Brute-force sampling oracle: 1000 interior points per generated map.
        for map_idx in 0..3u64 {
            let mut rng = substream(23, "rigmap-test", map_idx);
            let map = RigMap::generate(&mut rng, 8);
            let mut worst = 0.0f64;
            for i in 0..1000u64 {
                let mut srng = substream(29, "rigmap-sample", map_idx * 10_000 + i);
                let s = ExpressionParams::uniform(&mut srng, 8);
                let r = map.rig_from_expression(&s).unwrap();
                let back = map.expression_from_rig(&r).unwrap();
                let err = s
                    .values()
                    .iter()
                    .zip(back.values())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                worst = worst.max(err);
            }
            assert!(worst < 1e-6, "max round-trip error {worst}");
        }
    }

    #[test]
    fn generated_maps_are_well_conditioned_and_stay_in_cube() {
        for idx in 0..8u64 {
            let mut rng = substream(31, "rigmap-test", idx);
            let map = RigMap::generate(&mut rng, 8);
            assert!(map.condition_number() <= MAX_CONDITION);
            // Cube corners are the extreme points of the affine image.
            for corner in 0..(1u32 << 8) {
                let s: Vec<f64> = (0..8)
                    .map(|b| if corner >> b & 1 == 1 { 1.0 } else { 0.0 })
                    .collect();
                let expr = ExpressionParams::new(s).unwrap();
                let rig = map.rig_from_expression(&expr).unwrap();
                // Round-trip through the inverse must recover the corner,
                // which fails if the forward clamp was active.
                let back = map.expression_from_rig(&rig).unwrap();
                for (a, b) in expr.values().iter().zip(back.values()) {
                    assert!((a - b).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let matrix = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        assert!(RigMap::from_parts(matrix, vec![0.0, 0.0]).is_err());
    }
}
