//! Run configuration for the command-line pipeline.
//!
//! A run is described by one TOML file with `[geometry]`, `[grid]`, `[mask]`,
//! `[simulate]`, `[prior]`, `[method]`, `[sweep]` and `[paths]` blocks; every
//! block has defaults, and command-line flags override individual fields.
//! Validation is total: `validate` checks every numeric constraint of the
//! downstream types before any file is touched or any work starts.

use std::path::Path;

use serde::Deserialize;

use crate::baselines::TvParams;
use crate::error::{Error, Result};
use crate::forward::{build_model_matrix, ArrayGeometry, ModelMatrix};
use crate::measurement::{make_mask, ChannelMask, MaskPattern};
use crate::priors::{GaussianPrior, GmrfPrior, ScoreModel};
use crate::priors::{make_schedule, Covariance};
use crate::samplers::{InitKind, ReconConfig, RotationPolicy};
use crate::types::RngSeed;

/// Reconstruction method selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum MethodName {
    Linear,
    Tv,
    Langevin,
    Rcc,
}

impl MethodName {
    pub fn is_sampler(self) -> bool {
        matches!(self, MethodName::Langevin | MethodName::Rcc)
    }
}

/// Channel subsampling pattern selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum PatternName {
    Uniform,
    Random,
    Limited,
}

/// Rotation policy selector for the consistency correction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum RotationName {
    Fixed,
    Cycle,
    Random,
}

/// Sampler initialisation selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum InitName {
    Zeros,
    Adjoint,
    Random,
}

/// Prior selector for the sampler methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum PriorName {
    Gmrf,
    Gaussian,
}

/// Sweep search mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SweepMode {
    Grid,
    Random,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometryBlock {
    pub n_ch: usize,
    pub radius: f64,
    pub sound_speed: f64,
    pub n_t: usize,
    pub dt: f64,
    pub t0: f64,
    /// Back-projection scale; omitted or 0 means the built-in default.
    pub adjoint_scale: f64,
}

impl Default for GeometryBlock {
    fn default() -> Self {
        Self {
            n_ch: 64,
            radius: 6.0,
            sound_speed: 1.5,
            n_t: 64,
            dt: 0.1,
            t0: 0.9,
            adjoint_scale: 0.0,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridBlock {
    pub side: usize,
    pub pixel_size: f64,
}

impl Default for GridBlock {
    fn default() -> Self {
        Self { side: 64, pixel_size: 0.1 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MaskBlock {
    pub pattern: PatternName,
    /// 0 means keep every channel.
    pub n_keep: usize,
    /// Seed for the random pattern.
    pub seed: u64,
    /// Start channel for the limited-view pattern.
    pub offset: usize,
}

impl Default for MaskBlock {
    fn default() -> Self {
        Self { pattern: PatternName::Uniform, n_keep: 0, seed: 0, offset: 0 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateBlock {
    pub noise_std: f64,
    pub seed: u64,
}

impl Default for SimulateBlock {
    fn default() -> Self {
        Self { noise_std: 0.0, seed: 0 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PriorBlock {
    pub kind: PriorName,
    /// Smoothness weight of the grid prior.
    pub beta: f64,
    /// Ridge weight of the grid prior.
    pub tau: f64,
    /// Marginal variance of the isotropic Gaussian prior.
    pub variance: f64,
}

impl Default for PriorBlock {
    fn default() -> Self {
        Self { kind: PriorName::Gmrf, beta: 1.0, tau: 1.0, variance: 1.0 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MethodBlock {
    pub name: MethodName,
    // total-variation parameters
    pub lambda: f64,
    pub max_iter: usize,
    pub tol: f64,
    // sampler parameters
    pub n_scales: usize,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub steps_per_scale: usize,
    pub eps0: f64,
    pub gamma: f64,
    pub c: f64,
    pub alpha: f64,
    pub rotation: RotationName,
    /// Rotation step for the fixed policy.
    pub rotation_r: usize,
    pub init: InitName,
    pub seed: u64,
}

impl Default for MethodBlock {
    fn default() -> Self {
        Self {
            name: MethodName::Linear,
            lambda: 2000.0,
            max_iter: 200,
            tol: 2e-4,
            n_scales: 500,
            sigma_min: 0.01,
            sigma_max: 100.0,
            steps_per_scale: 5,
            eps0: 1e-5,
            gamma: 0.05,
            c: 1.0,
            alpha: 0.1,
            rotation: RotationName::Random,
            rotation_r: 1,
            init: InitName::Adjoint,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepBlock {
    pub mode: Option<SweepMode>,
    /// Trial count for random search.
    pub n_random: usize,
    /// Seed for random search draws.
    pub seed: u64,
    /// Grid mode: explicit values. Random mode: [lo, hi] ranges.
    pub alpha: Vec<f64>,
    pub eps0: Vec<f64>,
    pub gamma: Vec<f64>,
    pub c: Vec<f64>,
    pub steps_per_scale: Vec<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PathsBlock {
    pub input: Option<String>,
    pub output: Option<String>,
    pub ground_truth: Option<String>,
    pub mask: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub geometry: GeometryBlock,
    pub grid: GridBlock,
    pub mask: MaskBlock,
    pub simulate: SimulateBlock,
    pub prior: PriorBlock,
    pub method: MethodBlock,
    pub sweep: SweepBlock,
    pub paths: PathsBlock,
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::config(format!("bad config file: {e}")))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::persistence(path.to_path_buf(), e))?;
        Self::from_toml_str(&text)
    }

    pub fn geometry(&self) -> ArrayGeometry {
        ArrayGeometry {
            n_ch: self.geometry.n_ch,
            radius: self.geometry.radius,
            sound_speed: self.geometry.sound_speed,
            n_t: self.geometry.n_t,
            dt: self.geometry.dt,
            t0: self.geometry.t0,
        }
    }

    pub fn build_matrix(&self) -> Result<ModelMatrix> {
        let matrix = build_model_matrix(&self.geometry(), self.grid.side, self.grid.pixel_size)?;
        if self.geometry.adjoint_scale != 0.0 {
            matrix.with_adjoint_scale(self.geometry.adjoint_scale)
        } else {
            Ok(matrix)
        }
    }

    pub fn build_mask(&self) -> Result<ChannelMask> {
        let n_keep = if self.mask.n_keep == 0 { self.geometry.n_ch } else { self.mask.n_keep };
        let pattern = match self.mask.pattern {
            PatternName::Uniform => MaskPattern::Uniform,
            PatternName::Random => MaskPattern::Random(RngSeed(self.mask.seed)),
            PatternName::Limited => MaskPattern::LimitedView { offset: self.mask.offset },
        };
        make_mask(self.geometry.n_ch, n_keep, pattern)
    }

    pub fn tv_params(&self) -> TvParams {
        TvParams {
            lambda: self.method.lambda,
            max_iter: self.method.max_iter,
            tol: self.method.tol,
        }
    }

    pub fn recon_config(&self) -> Result<ReconConfig> {
        let m = &self.method;
        Ok(ReconConfig {
            schedule: make_schedule(m.n_scales, m.sigma_min, m.sigma_max)?,
            steps_per_scale: m.steps_per_scale,
            eps0: m.eps0,
            gamma: m.gamma,
            c: m.c,
            alpha: m.alpha,
            rotation_policy: match m.rotation {
                RotationName::Fixed => RotationPolicy::Fixed(m.rotation_r),
                RotationName::Cycle => RotationPolicy::Cycle,
                RotationName::Random => RotationPolicy::Random,
            },
            init: match m.init {
                InitName::Zeros => InitKind::Zeros,
                InitName::Adjoint => InitKind::Adjoint,
                InitName::Random => InitKind::Random,
            },
            seed: RngSeed(m.seed),
        })
    }

    pub fn build_prior(&self) -> Result<Box<dyn ScoreModel + Sync>> {
        let n = self.grid.side * self.grid.side;
        match self.prior.kind {
            PriorName::Gmrf => Ok(Box::new(GmrfPrior::new(
                self.grid.side,
                self.prior.beta,
                self.prior.tau,
            )?)),
            PriorName::Gaussian => Ok(Box::new(GaussianPrior::new(
                vec![0.0; n],
                Covariance::Isotropic(self.prior.variance),
            )?)),
        }
    }

    /// Checks every numeric constraint of the downstream types. Path fields
    /// are checked by the commands that use them (requirements differ).
    pub fn validate(&self) -> Result<()> {
        self.geometry().validate()?;
        if self.grid.side == 0 {
            return Err(Error::config("grid side must be positive".to_string()));
        }
        if !(self.grid.pixel_size > 0.0 && self.grid.pixel_size.is_finite()) {
            return Err(Error::config(format!(
                "pixel_size must be positive, got {}",
                self.grid.pixel_size
            )));
        }
        self.build_mask()?;
        if !(self.simulate.noise_std >= 0.0 && self.simulate.noise_std.is_finite()) {
            return Err(Error::config(format!(
                "noise_std must be >= 0, got {}",
                self.simulate.noise_std
            )));
        }
        match self.method.name {
            MethodName::Linear => {}
            MethodName::Tv => self.tv_params().validate()?,
            MethodName::Langevin | MethodName::Rcc => {
                self.recon_config()?.validate(self.geometry.n_ch)?;
                self.build_prior()?;
            }
        }
        Ok(())
    }

    /// Input paths named by the config must exist before work starts.
    pub fn check_input_paths(&self, fields: &[(&str, &Option<String>)]) -> Result<()> {
        for (name, value) in fields {
            match value {
                None => {
                    return Err(Error::config(format!("missing required path: {name}")));
                }
                Some(p) if !Path::new(p).exists() => {
                    return Err(Error::config(format!("{name} path does not exist: {p}")));
                }
                Some(_) => {}
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn toml_round_trip_overrides_defaults() {
        let cfg = RunConfig::from_toml_str(
            "[geometry]\nn_ch = 32\n\n[method]\nname = \"rcc\"\nalpha = 0.25\nn_scales = 10\nsigma_max = 1.0\n",
        )
        .unwrap();
        assert_eq!(cfg.geometry.n_ch, 32);
        assert_eq!(cfg.method.name, MethodName::Rcc);
        assert_eq!(cfg.method.alpha, 0.25);
        // untouched fields keep their defaults
        assert_eq!(cfg.grid.side, 64);
        assert_eq!(cfg.method.steps_per_scale, 5);
        cfg.validate().unwrap();
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(RunConfig::from_toml_str("[geometry]\nn_chx = 32\n").is_err());
        assert!(RunConfig::from_toml_str("[geom]\nn_ch = 32\n").is_err());
    }

    #[test]
    fn invalid_downstream_values_rejected_up_front() {
        let cfg = RunConfig::from_toml_str("[method]\nname = \"tv\"\nlambda = 0.0\n").unwrap();
        assert!(cfg.validate().is_err());
        let cfg =
            RunConfig::from_toml_str("[method]\nname = \"langevin\"\neps0 = -1.0\n").unwrap();
        assert!(cfg.validate().is_err());
        let cfg = RunConfig::from_toml_str("[mask]\nn_keep = 999\n").unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn mask_zero_keep_means_full() {
        let cfg = RunConfig::default();
        assert_eq!(cfg.build_mask().unwrap().n_kept(), cfg.geometry.n_ch);
    }

    #[test]
    fn missing_input_path_is_config_error() {
        let cfg = RunConfig::default();
        let missing = Some("/nonexistent/file.patb".to_string());
        assert!(cfg.check_input_paths(&[("input", &missing)]).is_err());
        assert!(cfg.check_input_paths(&[("input", &None)]).is_err());
    }
}
