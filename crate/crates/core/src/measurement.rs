//! Channel subsampling and measurement simulation.
//!
//! Masked data keeps the full `(n_ch, n_t)` shape with dropped channels set
//! to zero, so the same operator shapes work for every subsampling pattern.

use rand::seq::index::sample;
use rand::Rng;

use crate::error::{Error, Result};
use crate::forward::ModelMatrix;
use crate::types::{ImageGrid, RngSeed, SensorData};

/// Subset of kept channels out of `n_ch`. Kept indices are sorted, unique,
/// non-empty, and in range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelMask {
    n_ch: usize,
    kept: Vec<usize>,
}

/// Subsampling pattern for [`make_mask`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaskPattern {
    /// Evenly spaced channels: `floor(i * n_ch / n_keep)` for each kept slot.
    Uniform,
    /// Uniformly random subset without replacement, drawn from the seed.
    Random(RngSeed),
    /// A contiguous block of channels starting at `offset`.
    LimitedView { offset: usize },
}

impl ChannelMask {
    pub fn new(n_ch: usize, mut kept: Vec<usize>) -> Result<Self> {
        if n_ch == 0 {
            return Err(Error::config("mask over zero channels".to_string()));
        }
        if kept.is_empty() {
            return Err(Error::config("mask keeps no channels".to_string()));
        }
        kept.sort_unstable();
        for pair in kept.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::config(format!("duplicate kept channel {}", pair[0])));
            }
        }
        if *kept.last().unwrap() >= n_ch {
            return Err(Error::config(format!(
                "kept channel {} out of range for {} channels",
                kept.last().unwrap(),
                n_ch
            )));
        }
        Ok(Self { n_ch, kept })
    }

    /// Mask that keeps every channel.
    pub fn full(n_ch: usize) -> Result<Self> {
        Self::new(n_ch, (0..n_ch).collect())
    }

    pub fn n_ch(&self) -> usize {
        self.n_ch
    }

    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    pub fn n_kept(&self) -> usize {
        self.kept.len()
    }

    pub fn is_kept(&self, ch: usize) -> bool {
        self.kept.binary_search(&ch).is_ok()
    }
}

/// Builds a mask keeping `n_keep` of `n_ch` channels with the given pattern.
pub fn make_mask(n_ch: usize, n_keep: usize, pattern: MaskPattern) -> Result<ChannelMask> {
    if n_keep == 0 || n_keep > n_ch {
        return Err(Error::config(format!(
            "n_keep must be in 1..={n_ch}, got {n_keep}"
        )));
    }
    let kept = match pattern {
        MaskPattern::Uniform => (0..n_keep).map(|i| i * n_ch / n_keep).collect(),
        MaskPattern::Random(seed) => {
            let mut rng = seed.rng();
            let mut kept = sample(&mut rng, n_ch, n_keep).into_vec();
            kept.sort_unstable();
            kept
        }
        MaskPattern::LimitedView { offset } => {
            if offset + n_keep > n_ch {
                return Err(Error::config(format!(
                    "limited view block {offset}..{} exceeds {n_ch} channels",
                    offset + n_keep
                )));
            }
            (offset..offset + n_keep).collect()
        }
    };
    ChannelMask::new(n_ch, kept)
}

/// Zeroes out dropped channels, keeping the full shape.
pub fn apply_mask(mask: &ChannelMask, y: &SensorData) -> Result<SensorData> {
    if y.n_ch() != mask.n_ch {
        return Err(Error::shape("mask channels", mask.n_ch, y.n_ch()));
    }
    let n_t = y.n_t();
    let mut out = vec![0.0; y.values().len()];
    for &ch in &mask.kept {
        out[ch * n_t..(ch + 1) * n_t].copy_from_slice(y.channel(ch));
    }
    SensorData::new(y.n_ch(), n_t, out)
}

/// Simulates `y = M (A x + noise)` with i.i.d. Gaussian noise of standard
/// deviation `noise_std` drawn from the seed's noise stream. The noise is
/// drawn for the full shape before masking, so the kept channels' noise does
/// not depend on the mask.
pub fn simulate_measurement(
    matrix: &ModelMatrix,
    x: &ImageGrid,
    mask: &ChannelMask,
    noise_std: f64,
    seed: RngSeed,
) -> Result<SensorData> {
    if !(noise_std >= 0.0 && noise_std.is_finite()) {
        return Err(Error::config(format!(
            "noise_std must be >= 0, got {noise_std}"
        )));
    }
    let clean = crate::forward::apply_forward(matrix, x)?;
    if mask.n_ch != clean.n_ch() {
        return Err(Error::shape("mask channels", clean.n_ch(), mask.n_ch));
    }
    let (n_ch, n_t) = (clean.n_ch(), clean.n_t());
    let mut values = clean.into_values();
    if noise_std > 0.0 {
        let mut rng = seed.rng();
        let normal = rand_distr::StandardNormal;
        for v in &mut values {
            let z: f64 = rng.sample(normal);
            *v += noise_std * z;
        }
    } else {
        // keep the stream position consistent with the noisy path
        let mut rng = seed.rng();
        let normal = rand_distr::StandardNormal;
        for _ in 0..values.len() {
            let _: f64 = rng.sample(normal);
        }
    }
    let noisy = SensorData::new(n_ch, n_t, values)?;
    apply_mask(mask, &noisy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::{build_model_matrix, ArrayGeometry};

    fn small_matrix() -> ModelMatrix {
        let geo = ArrayGeometry {
            n_ch: 8,
            radius: 3.0,
            sound_speed: 1.5,
            n_t: 40,
            dt: 0.05,
            t0: 1.5,
        };
        build_model_matrix(&geo, 8, 0.1).unwrap()
    }

    #[test]
    fn mask_validation() {
        assert!(ChannelMask::new(8, vec![]).is_err());
        assert!(ChannelMask::new(8, vec![8]).is_err());
        assert!(ChannelMask::new(8, vec![1, 1]).is_err());
        let m = ChannelMask::new(8, vec![5, 0, 2]).unwrap();
        assert_eq!(m.kept(), &[0, 2, 5]);
        assert!(m.is_kept(2));
        assert!(!m.is_kept(3));
    }

    #[test]
    fn uniform_pattern_positions() {
        let m = make_mask(64, 16, MaskPattern::Uniform).unwrap();
        let expect: Vec<usize> = (0..16).map(|i| i * 4).collect();
        assert_eq!(m.kept(), expect.as_slice());
        // non-divisible case still yields n_keep distinct sorted channels
        let m = make_mask(10, 3, MaskPattern::Uniform).unwrap();
        assert_eq!(m.kept(), &[0, 3, 6]);
        let m = make_mask(8, 8, MaskPattern::Uniform).unwrap();
        assert_eq!(m.n_kept(), 8);
    }

    #[test]
    fn random_pattern_is_seeded_and_valid() {
        let a = make_mask(64, 16, MaskPattern::Random(RngSeed(9))).unwrap();
        let b = make_mask(64, 16, MaskPattern::Random(RngSeed(9))).unwrap();
        assert_eq!(a, b);
        let c = make_mask(64, 16, MaskPattern::Random(RngSeed(10))).unwrap();
        assert_ne!(a, c); // overwhelmingly likely for distinct seeds
        assert_eq!(a.n_kept(), 16);
        assert!(a.kept().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn limited_view_block() {
        let m = make_mask(64, 16, MaskPattern::LimitedView { offset: 0 }).unwrap();
        assert_eq!(m.kept(), (0..16).collect::<Vec<_>>().as_slice());
        let m = make_mask(64, 16, MaskPattern::LimitedView { offset: 48 }).unwrap();
        assert_eq!(m.kept(), (48..64).collect::<Vec<_>>().as_slice());
        assert!(make_mask(64, 16, MaskPattern::LimitedView { offset: 49 }).is_err());
    }

    #[test]
    fn apply_mask_zero_fills_and_is_idempotent() {
        let y = SensorData::new(4, 3, (0..12).map(|v| v as f64 + 1.0).collect()).unwrap();
        let mask = ChannelMask::new(4, vec![0, 2]).unwrap();
        let masked = apply_mask(&mask, &y).unwrap();
        assert_eq!(masked.channel(0), y.channel(0));
        assert_eq!(masked.channel(2), y.channel(2));
        assert!(masked.channel(1).iter().all(|&v| v == 0.0));
        assert!(masked.channel(3).iter().all(|&v| v == 0.0));
        let twice = apply_mask(&mask, &masked).unwrap();
        assert_eq!(twice, masked);
    }

    #[test]
    fn full_mask_is_identity() {
        let y = SensorData::new(4, 3, (0..12).map(|v| v as f64).collect()).unwrap();
        let mask = ChannelMask::full(4).unwrap();
        assert_eq!(apply_mask(&mask, &y).unwrap(), y);
    }

    #[test]
    fn zero_noise_simulation_is_masked_forward() {
        let m = small_matrix();
        let x = ImageGrid::new(8, 0.1, (0..64).map(|v| v as f64 / 64.0).collect()).unwrap();
        let mask = make_mask(8, 4, MaskPattern::Uniform).unwrap();
        let y = simulate_measurement(&m, &x, &mask, 0.0, RngSeed(1)).unwrap();
        let clean = apply_mask(&mask, &crate::forward::apply_forward(&m, &x).unwrap()).unwrap();
        assert_eq!(y, clean);
    }

    #[test]
    fn noise_is_seeded_and_mask_independent() {
        let m = small_matrix();
        let x = ImageGrid::new(8, 0.1, (0..64).map(|v| v as f64 / 64.0).collect()).unwrap();
        let mask = make_mask(8, 4, MaskPattern::Uniform).unwrap();
        let a = simulate_measurement(&m, &x, &mask, 0.1, RngSeed(7)).unwrap();
        let b = simulate_measurement(&m, &x, &mask, 0.1, RngSeed(7)).unwrap();
        assert_eq!(a, b);
        let c = simulate_measurement(&m, &x, &mask, 0.1, RngSeed(8)).unwrap();
        assert_ne!(a, c);

        // kept channels see the same noise regardless of the mask
        let full = ChannelMask::full(8).unwrap();
        let d = simulate_measurement(&m, &x, &full, 0.1, RngSeed(7)).unwrap();
        for &ch in mask.kept() {
            assert_eq!(a.channel(ch), d.channel(ch));
        }

        // dropped channels are exactly zero even with noise
        for ch in 0..8 {
            if !mask.is_kept(ch) {
                assert!(a.channel(ch).iter().all(|&v| v == 0.0));
            }
        }
    }

    #[test]
    fn negative_noise_rejected() {
        let m = small_matrix();
        let x = ImageGrid::zeros(8, 0.1).unwrap();
        let mask = ChannelMask::full(8).unwrap();
        let err = simulate_measurement(&m, &x, &mask, -0.1, RngSeed(0)).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }
}
