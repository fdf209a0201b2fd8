//! Core array containers and RNG seeding.
//!
//! [`ImageGrid`] is the unknown square image, [`SensorData`] the stacked
//! per-channel time series. Both store `f64` values in a flat buffer and are
//! immutable after construction, so they can be shared freely across threads.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Square pixel image. Values are stored row-major, row 0 at the top.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageGrid {
    side: usize,
    pixel_size: f64,
    values: Vec<f64>,
}

impl ImageGrid {
    /// Builds an image, validating that `side >= 2`, the buffer length is
    /// `side * side` and every value is finite.
    pub fn new(side: usize, pixel_size: f64, values: Vec<f64>) -> Result<Self> {
        if side < 2 {
            return Err(Error::config(format!("image side must be >= 2, got {side}")));
        }
        if !(pixel_size.is_finite() && pixel_size > 0.0) {
            return Err(Error::config(format!(
                "pixel_size must be positive and finite, got {pixel_size}"
            )));
        }
        if values.len() != side * side {
            return Err(Error::shape(
                "image value buffer",
                side * side,
                values.len(),
            ));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::Numerical("image contains non-finite values".into()));
        }
        Ok(Self {
            side,
            pixel_size,
            values,
        })
    }

    pub fn zeros(side: usize, pixel_size: f64) -> Result<Self> {
        Self::new(side, pixel_size, vec![0.0; side * side])
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn pixel_size(&self) -> f64 {
        self.pixel_size
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Value at (row, col).
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.side + col]
    }

    /// Returns a copy with the same geometry but different values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        Self::new(self.side, self.pixel_size, values)
    }

    /// Physical (x, y) coordinate of a pixel center in mm, relative to the
    /// grid center; x grows to the right, y grows upward (row 0 at the top).
    pub fn pixel_center(&self, row: usize, col: usize) -> (f64, f64) {
        crate::forward::pixel_center(self.side, self.pixel_size, row, col)
    }

    pub fn min_max(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &v in &self.values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (lo, hi)
    }
}

/// Multi-channel time-series measurements, channel-major: the sample at
/// channel `ch`, time bin `k` lives at flat index `ch * n_t + k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorData {
    n_ch: usize,
    n_t: usize,
    values: Vec<f64>,
}

impl SensorData {
    pub fn new(n_ch: usize, n_t: usize, values: Vec<f64>) -> Result<Self> {
        if n_ch == 0 || n_t == 0 {
            return Err(Error::config(format!(
                "sensor dims must be positive, got {n_ch} x {n_t}"
            )));
        }
        if values.len() != n_ch * n_t {
            return Err(Error::shape(
                "sensor value buffer",
                n_ch * n_t,
                values.len(),
            ));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::Numerical("sensor data contains non-finite values".into()));
        }
        Ok(Self { n_ch, n_t, values })
    }

    pub fn zeros(n_ch: usize, n_t: usize) -> Result<Self> {
        Self::new(n_ch, n_t, vec![0.0; n_ch * n_t])
    }

    pub fn n_ch(&self) -> usize {
        self.n_ch
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Time series of one channel.
    pub fn channel(&self, ch: usize) -> &[f64] {
        &self.values[ch * self.n_t..(ch + 1) * self.n_t]
    }

    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        Self::new(self.n_ch, self.n_t, values)
    }
}

/// Seed for every stochastic draw in the pipeline. Identical seeds plus
/// identical call sequences yield identical streams on every platform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngSeed(pub u64);

impl RngSeed {
    /// Generator for the main draw stream of this seed.
    pub fn rng(self) -> ChaCha8Rng {
        self.stream(0)
    }

    /// Generator for an independent named stream under the same seed.
    /// Streams do not overlap, so consuming one never perturbs another.
    pub fn stream(self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0);
        rng.set_stream(stream.into());
        rng
    }
}

pub(crate) fn l2_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
