//! Non-learned reconstruction baselines: back projection and total-variation
//! denoising.

use crate::error::{Error, Result};
use crate::forward::{apply_adjoint, ModelMatrix};
use crate::measurement::{apply_mask, ChannelMask};
use crate::types::{ImageGrid, SensorData};

/// Back projection of the masked data: `adjoint(M y)`.
pub fn reconstruct_linear(
    matrix: &ModelMatrix,
    mask: &ChannelMask,
    y: &SensorData,
) -> Result<ImageGrid> {
    let masked = apply_mask(mask, y)?;
    apply_adjoint(matrix, &masked)
}

/// Knobs for [`tv_denoise`], which solves
/// `min_u ||u - x||^2 / 2 + (1/lambda) TV(u)`: larger `lambda` means weaker
/// smoothing. Iteration stops when the dual variable moves less than `tol`
/// in max-abs, or after `max_iter` sweeps.
#[derive(Debug, Clone, Copy)]
pub struct TvParams {
    pub lambda: f64,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for TvParams {
    fn default() -> Self {
        TvParams {
            lambda: 2000.0,
            max_iter: 200,
            tol: 2e-4,
        }
    }
}

impl TvParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::config(format!(
                "tv lambda must be positive, got {}",
                self.lambda
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::config("tv max_iter must be >= 1".to_string()));
        }
        if !(self.tol >= 0.0 && self.tol.is_finite()) {
            return Err(Error::config(format!("tv tol must be >= 0, got {}", self.tol)));
        }
        Ok(())
    }
}

/// Forward differences with reflecting boundary: the difference across the
/// last row/column is zero.
fn gradient(u: &[f64], side: usize, gx: &mut [f64], gy: &mut [f64]) {
    for i in 0..side {
        for j in 0..side {
            let p = i * side + j;
            gx[p] = if j + 1 < side { u[p + 1] - u[p] } else { 0.0 };
            gy[p] = if i + 1 < side { u[p + side] - u[p] } else { 0.0 };
        }
    }
}

/// Negative adjoint of [`gradient`]: backward-difference divergence.
fn divergence(px: &[f64], py: &[f64], side: usize, out: &mut [f64]) {
    for i in 0..side {
        for j in 0..side {
            let p = i * side + j;
            let dx = if j + 1 < side { px[p] } else { 0.0 }
                - if j > 0 { px[p - 1] } else { 0.0 };
            let dy = if i + 1 < side { py[p] } else { 0.0 }
                - if i > 0 { py[p - side] } else { 0.0 };
            out[p] = dx + dy;
        }
    }
}

/// Isotropic total variation of `u` under the same discrete gradient the
/// denoiser uses.
pub fn tv_norm(u: &ImageGrid) -> f64 {
    let side = u.side();
    let n = side * side;
    let mut gx = vec![0.0; n];
    let mut gy = vec![0.0; n];
    gradient(u.values(), side, &mut gx, &mut gy);
    gx.iter()
        .zip(&gy)
        .map(|(a, b)| a.hypot(*b))
        .sum()
}

/// `||u - x||^2 / 2 + TV(u) / lambda`: the objective [`tv_denoise`] minimizes.
pub fn tv_objective(u: &ImageGrid, x: &ImageGrid, lambda: f64) -> Result<f64> {
    if u.side() != x.side() {
        return Err(Error::shape("tv objective sides", x.side(), u.side()));
    }
    let fit: f64 = u
        .values()
        .iter()
        .zip(x.values())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(0.5 * fit + tv_norm(u) / lambda)
}

pub fn tv_denoise(x: &ImageGrid, params: &TvParams) -> Result<ImageGrid> {
    let (u, _) = tv_denoise_traced(x, params)?;
    Ok(u)
}

/// As [`tv_denoise`], also returning the objective value of the primal
/// iterate after every dual sweep.
pub fn tv_denoise_traced(x: &ImageGrid, params: &TvParams) -> Result<(ImageGrid, Vec<f64>)> {
    params.validate()?;
    let side = x.side();
    let n = side * side;
    let weight = 1.0 / params.lambda;

    // Dual ascent on p: p <- (p + tau grad(div p - x/weight)) / (1 + tau |grad ...|),
    // with the primal recovered as u = x - weight * div p. tau = 1/4 keeps the
    // projection-free update stable for this gradient/divergence pair.
    let tau = 0.25;
    let mut px = vec![0.0; n];
    let mut py = vec![0.0; n];
    let mut div = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut gx = vec![0.0; n];
    let mut gy = vec![0.0; n];
    let mut objectives = Vec::new();
    let mut u = vec![0.0; n];

    for _ in 0..params.max_iter {
        divergence(&px, &py, side, &mut div);
        for p in 0..n {
            v[p] = div[p] - x.values()[p] / weight;
        }
        gradient(&v, side, &mut gx, &mut gy);
        let mut max_change = 0.0f64;
        for p in 0..n {
            let mag = gx[p].hypot(gy[p]);
            let denom = 1.0 + tau * mag;
            let nx = (px[p] + tau * gx[p]) / denom;
            let ny = (py[p] + tau * gy[p]) / denom;
            max_change = max_change.max((nx - px[p]).abs()).max((ny - py[p]).abs());
            px[p] = nx;
            py[p] = ny;
        }
        divergence(&px, &py, side, &mut div);
        for p in 0..n {
            u[p] = x.values()[p] - weight * div[p];
        }
        let img = x.with_values(u.clone())?;
        objectives.push(tv_objective(&img, x, params.lambda)?);
        if max_change < params.tol {
            break;
        }
    }
    if objectives.is_empty() {
        // max_iter >= 1 always produces at least one sweep
        unreachable!("tv loop ran zero sweeps");
    }
    Ok((x.with_values(u)?, objectives))
}
