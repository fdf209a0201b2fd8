//! PSNR and SSIM, the two scores used in the evaluation tables.

use crate::error::{Error, Result};
use crate::types::ImageGrid;

/// SSIM configuration. Window weights always normalize to sum 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SsimParams {
    pub k1: f64,
    pub k2: f64,
    pub window_side: usize,
    pub window_sigma: f64,
    pub data_range: f64,
}

impl SsimParams {
    /// Standard parameters (k1=0.01, k2=0.03, Gaussian 11x11 window with
    /// std 1.5) at the given dynamic range.
    pub fn new(data_range: f64) -> Result<Self> {
        let p = Self {
            k1: 0.01,
            k2: 0.03,
            window_side: 11,
            window_sigma: 1.5,
            data_range,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.data_range > 0.0 && self.data_range.is_finite()) {
            return Err(Error::config(format!(
                "data_range must be positive, got {}",
                self.data_range
            )));
        }
        if self.window_side < 2 || self.window_side % 2 == 0 {
            return Err(Error::config(format!(
                "window side must be odd and >= 3, got {}",
                self.window_side
            )));
        }
        if !(self.window_sigma > 0.0 && self.window_sigma.is_finite()) {
            return Err(Error::config(format!(
                "window sigma must be positive, got {}",
                self.window_sigma
            )));
        }
        if !(self.k1 > 0.0 && self.k2 > 0.0) {
            return Err(Error::config("k1 and k2 must be positive".to_string()));
        }
        Ok(())
    }

    fn window(&self) -> Vec<f64> {
        let n = self.window_side;
        let c = (n as f64 - 1.0) / 2.0;
        let mut w = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let d2 = (i as f64 - c).powi(2) + (j as f64 - c).powi(2);
                w.push((-d2 / (2.0 * self.window_sigma * self.window_sigma)).exp());
            }
        }
        let total: f64 = w.iter().sum();
        for v in &mut w {
            *v /= total;
        }
        w
    }
}

pub(crate) fn mse(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>() / n
}

pub(crate) fn psnr_flat(reference: &[f64], test: &[f64], peak: f64) -> f64 {
    let e = mse(reference, test);
    if e == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (peak * peak / e).log10()
    }
}

/// Peak signal-to-noise ratio in dB: `10 log10(peak^2 / MSE)`. Identical
/// images yield the +infinity sentinel (formats as "inf").
pub fn psnr(reference: &ImageGrid, test: &ImageGrid, peak: f64) -> Result<f64> {
    if reference.side() != test.side() {
        return Err(Error::shape("psnr images", reference.side(), test.side()));
    }
    if !(peak > 0.0 && peak.is_finite()) {
        return Err(Error::config(format!("peak must be positive, got {peak}")));
    }
    Ok(psnr_flat(reference.values(), test.values(), peak))
}

/// Dynamic range of a reference image for metric defaults; 1.0 for constant
/// images so the metrics stay defined.
pub fn default_data_range(reference: &ImageGrid) -> f64 {
    let (lo, hi) = reference.min_max();
    if hi > lo {
        hi - lo
    } else {
        1.0
    }
}

/// Mean structural similarity over all fully-interior window positions
/// (valid-region convolution, no padding).
pub fn ssim(reference: &ImageGrid, test: &ImageGrid, params: &SsimParams) -> Result<f64> {
    params.validate()?;
    let side = reference.side();
    if side != test.side() {
        return Err(Error::shape("ssim images", side, test.side()));
    }
    if side < params.window_side {
        return Err(Error::shape("ssim image side", params.window_side, side));
    }
    let w = params.window();
    let n = params.window_side;
    let c1 = (params.k1 * params.data_range).powi(2);
    let c2 = (params.k2 * params.data_range).powi(2);
    let x = reference.values();
    let y = test.values();
    let valid = side - n + 1;
    let mut total = 0.0;
    for wi in 0..valid {
        for wj in 0..valid {
            let mut mx = 0.0;
            let mut my = 0.0;
            let mut mxx = 0.0;
            let mut myy = 0.0;
            let mut mxy = 0.0;
            for a in 0..n {
                let row = (wi + a) * side + wj;
                let wrow = a * n;
                for b in 0..n {
                    let weight = w[wrow + b];
                    let xv = x[row + b];
                    let yv = y[row + b];
                    mx += weight * xv;
                    my += weight * yv;
                    mxx += weight * xv * xv;
                    myy += weight * yv * yv;
                    mxy += weight * xv * yv;
                }
            }
            let vx = mxx - mx * mx;
            let vy = myy - my * my;
            let vxy = mxy - mx * my;
            total += ((2.0 * mx * my + c1) * (2.0 * vxy + c2))
                / ((mx * mx + my * my + c1) * (vx + vy + c2));
        }
    }
    Ok(total / (valid * valid) as f64)
}
