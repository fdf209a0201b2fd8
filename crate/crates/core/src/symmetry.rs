//! Cyclic rotation group on images and the matching channel shift on sensor
//! data, plus the equivariance residual between the two.
//!
//! Rotating an image counterclockwise by the inter-sensor angle should look,
//! through the forward operator, like shifting every channel up by one. The
//! residual of that identity is the quantity the sampler's correction step
//! drives down.

use crate::error::{Error, Result};
use crate::forward::ModelMatrix;
use crate::types::{l2_norm, ImageGrid, SensorData};

/// Group element: rotation by `2*pi*r/n_ch` counterclockwise. `r` is stored
/// reduced mod `n_ch`, so composing rotations adds indices mod `n_ch`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RotationIndex {
    r: usize,
    n_ch: usize,
}

impl RotationIndex {
    pub fn new(r: usize, n_ch: usize) -> Result<Self> {
        if n_ch == 0 {
            return Err(Error::config("rotation group of order zero".to_string()));
        }
        Ok(Self { r: r % n_ch, n_ch })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n_ch(&self) -> usize {
        self.n_ch
    }

    pub fn angle(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.r as f64 / self.n_ch as f64
    }

    /// True when the angle is a multiple of 90 degrees, i.e. the rotation is
    /// an exact pixel permutation.
    pub fn is_quarter_multiple(&self) -> bool {
        (4 * self.r) % self.n_ch == 0
    }
}

pub(crate) fn rotate_flat(values: &[f64], side: usize, r: usize, n_ch: usize) -> Vec<f64> {
    debug_assert_eq!(values.len(), side * side);
    let r = r % n_ch;
    if r == 0 {
        return values.to_vec();
    }
    if (4 * r) % n_ch == 0 {
        let q = 4 * r / n_ch; // 1, 2 or 3 quarter turns
        let mut out = vec![0.0; values.len()];
        let s = side - 1;
        for i in 0..side {
            for j in 0..side {
                let v = match q {
                    1 => values[j * side + (s - i)],
                    2 => values[(s - i) * side + (s - j)],
                    _ => values[(s - j) * side + i],
                };
                out[i * side + j] = v;
            }
        }
        return out;
    }
    // Bilinear pull-back: each output pixel samples the input at the
    // inverse-rotated location, in pixel coordinates about the grid center.
    let theta = 2.0 * std::f64::consts::PI * r as f64 / n_ch as f64;
    let (sin_t, cos_t) = theta.sin_cos();
    let c = (side as f64 - 1.0) / 2.0;
    let mut out = vec![0.0; values.len()];
    for i in 0..side {
        for j in 0..side {
            let dx = j as f64 - c;
            let dy = c - i as f64;
            // rotate (dx, dy) by -theta
            let sx = dx * cos_t + dy * sin_t;
            let sy = -dx * sin_t + dy * cos_t;
            let col_f = sx + c;
            let row_f = c - sy;
            let j0 = col_f.floor();
            let i0 = row_f.floor();
            let dj = col_f - j0;
            let di = row_f - i0;
            let mut acc = 0.0;
            for (ii, wi) in [(i0, 1.0 - di), (i0 + 1.0, di)] {
                if wi == 0.0 || ii < 0.0 || ii >= side as f64 {
                    continue;
                }
                for (jj, wj) in [(j0, 1.0 - dj), (j0 + 1.0, dj)] {
                    if wj == 0.0 || jj < 0.0 || jj >= side as f64 {
                        continue;
                    }
                    acc += wi * wj * values[ii as usize * side + jj as usize];
                }
            }
            out[i * side + j] = acc;
        }
    }
    out
}

pub(crate) fn shift_flat(values: &[f64], n_ch: usize, n_t: usize, r: usize) -> Vec<f64> {
    let r = r % n_ch;
    let mut out = vec![0.0; values.len()];
    for ch in 0..n_ch {
        let dst = (ch + r) % n_ch;
        out[dst * n_t..(dst + 1) * n_t].copy_from_slice(&values[ch * n_t..(ch + 1) * n_t]);
    }
    out
}

/// Rotates the image counterclockwise by `rot.angle()`. Multiples of 90
/// degrees are exact index permutations; other angles use bilinear
/// interpolation with out-of-grid samples read as 0.
pub fn rotate_image(x: &ImageGrid, rot: RotationIndex) -> Result<ImageGrid> {
    let out = rotate_flat(x.values(), x.side(), rot.r, rot.n_ch);
    x.with_values(out)
}

/// Moves channel `i`'s time series to channel `(i + r) mod n_ch`.
pub fn shift_channels(y: &SensorData, rot: RotationIndex) -> Result<SensorData> {
    if y.n_ch() != rot.n_ch {
        return Err(Error::shape("shift channels", rot.n_ch, y.n_ch()));
    }
    let out = shift_flat(y.values(), y.n_ch(), y.n_t(), rot.r);
    y.with_values(out)
}

pub(crate) struct EquivarianceParts {
    /// Forward projection of the unrotated image.
    pub ax: Vec<f64>,
    /// shift(Ax, r) - A rotate(x, r), flat sensor layout.
    pub residual: Vec<f64>,
    /// ||residual|| / max(||Ax||, tiny)
    pub relative_norm: f64,
}

pub(crate) fn equivariance_parts(
    matrix: &ModelMatrix,
    x: &[f64],
    r: usize,
) -> EquivarianceParts {
    let geo = matrix.geometry();
    let ax = matrix.forward_flat(x);
    let shifted = shift_flat(&ax, geo.n_ch, geo.n_t, r);
    let rotated = rotate_flat(x, matrix.grid_side(), r, geo.n_ch);
    let a_rot = matrix.forward_flat(&rotated);
    let residual: Vec<f64> = shifted
        .iter()
        .zip(&a_rot)
        .map(|(s, a)| s - a)
        .collect();
    let relative_norm = l2_norm(&residual) / l2_norm(&ax).max(f64::MIN_POSITIVE);
    EquivarianceParts {
        ax,
        residual,
        relative_norm,
    }
}

/// Residual of the rotation-shift identity through the forward operator:
/// `shift_channels(Ax, r) - A rotate_image(x, r)`, together with its norm
/// relative to `||Ax||`.
pub fn equivariance_residual(
    matrix: &ModelMatrix,
    x: &ImageGrid,
    rot: RotationIndex,
) -> Result<(SensorData, f64)> {
    matrix.check_image(x)?;
    if rot.n_ch != matrix.geometry().n_ch {
        return Err(Error::shape("rotation group order", matrix.geometry().n_ch, rot.n_ch));
    }
    let parts = equivariance_parts(matrix, x.values(), rot.r);
    let residual = SensorData::new(matrix.geometry().n_ch, matrix.geometry().n_t, parts.residual)?;
    Ok((residual, parts.relative_norm))
}
