//! Command-line pipeline: phantom generation, forward simulation,
//! reconstruction, evaluation, and hyperparameter sweeps.
//!
//! Every command reads an optional `--config FILE` (TOML) whose fields are
//! overridden by flags, validates the full configuration before any work,
//! and writes deterministic outputs given fixed seeds.
//!
//! Exit codes: 0 success, 2 configuration or usage error, 1 runtime error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use patrec::config::{
    InitName, MethodName, PatternName, PriorName, RotationName, RunConfig, SweepMode,
};
use patrec::{
    io, make_phantom, psnr, reconstruct_linear, run_langevin, run_rcc_sgm, ssim, tv_denoise,
    Error, ImageGrid, PhantomKind, PhantomSpec, Result, RngSeed, SsimParams,
};

#[derive(Parser)]
#[command(
    name = "patrec",
    version,
    about = "Photoacoustic tomography reconstruction pipeline"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a phantom image, or a seeded dataset with a manifest.
    Phantom(PhantomArgs),
    /// Simulate masked, noisy sensor data from a phantom image.
    Simulate(SimulateArgs),
    /// Reconstruct an image from sensor data.
    Reconstruct(ReconstructArgs),
    /// Compute PSNR/SSIM for reconstruction/ground-truth pairs.
    Eval(EvalArgs),
    /// Sweep sampler hyperparameters against mean PSNR on a dataset.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum KindArg {
    Disks,
    Rings,
    Vessels,
}

#[derive(Args)]
struct PhantomArgs {
    /// Phantom family.
    #[arg(long, value_enum, default_value = "disks")]
    kind: KindArg,
    /// Image side in pixels.
    #[arg(long, default_value_t = 64)]
    side: usize,
    /// Number of features (disks/rings/branches).
    #[arg(long, default_value_t = 3)]
    count: usize,
    /// Generator seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Border fraction kept empty.
    #[arg(long)]
    margin: Option<f64>,
    /// Output image file (single phantom).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Dataset size; requires --out-dir.
    #[arg(long)]
    n: Option<usize>,
    /// Dataset output directory.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// TOML config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Phantom image to project.
    #[arg(long)]
    input: Option<String>,
    /// Output sensor file.
    #[arg(long)]
    out: Option<String>,
    /// Output mask file; defaults to `<out>.mask.txt`.
    #[arg(long)]
    mask_out: Option<PathBuf>,
    /// Also export the system matrix as a triplet text file.
    #[arg(long)]
    dump_matrix: Option<PathBuf>,
    /// Kept channel count (0 = all).
    #[arg(long)]
    channels: Option<usize>,
    /// Subsampling pattern.
    #[arg(long, value_enum)]
    pattern: Option<PatternName>,
    /// Seed for the random mask pattern.
    #[arg(long)]
    mask_seed: Option<u64>,
    /// Start channel for the limited-view pattern.
    #[arg(long)]
    offset: Option<usize>,
    /// Measurement noise standard deviation.
    #[arg(long)]
    noise_std: Option<f64>,
    /// Measurement noise seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct ReconstructArgs {
    /// TOML config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Input sensor file.
    #[arg(long)]
    input: Option<String>,
    /// Mask file written by `simulate`; omitted means the config's mask.
    #[arg(long)]
    mask: Option<String>,
    /// Output image file.
    #[arg(long)]
    out: Option<String>,
    /// Optional 8-bit preview image.
    #[arg(long)]
    pgm: Option<PathBuf>,
    /// Optional per-scale trace CSV (sampler methods).
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Ground truth image for the trace PSNR column.
    #[arg(long)]
    ground_truth: Option<String>,
    #[arg(long, value_enum)]
    method: Option<MethodName>,
    /// Correction strength of the rcc method.
    #[arg(long)]
    alpha: Option<f64>,
    /// Base step size.
    #[arg(long)]
    eps0: Option<f64>,
    /// Measurement noise level in the likelihood.
    #[arg(long)]
    gamma: Option<f64>,
    /// Likelihood annealing weight.
    #[arg(long)]
    c: Option<f64>,
    /// Langevin steps per noise scale.
    #[arg(long)]
    steps: Option<usize>,
    /// Number of noise scales.
    #[arg(long)]
    scales: Option<usize>,
    #[arg(long)]
    sigma_min: Option<f64>,
    #[arg(long)]
    sigma_max: Option<f64>,
    /// Sampler seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    rotation: Option<RotationName>,
    /// Rotation step for the fixed policy.
    #[arg(long)]
    rotation_r: Option<usize>,
    #[arg(long, value_enum)]
    init: Option<InitName>,
    /// Total-variation weight (1/lambda smooths more).
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long, value_enum)]
    prior: Option<PriorName>,
    /// Smoothness weight of the grid prior.
    #[arg(long)]
    beta: Option<f64>,
    /// Ridge weight of the grid prior.
    #[arg(long)]
    tau: Option<f64>,
    /// Variance of the isotropic Gaussian prior.
    #[arg(long)]
    variance: Option<f64>,
    /// Kept channel count (0 = all), for rebuilding the mask.
    #[arg(long)]
    channels: Option<usize>,
    #[arg(long, value_enum)]
    pattern: Option<PatternName>,
}

#[derive(Args)]
struct EvalArgs {
    /// Manifest with one `reconstruction,ground_truth` pair per line,
    /// relative to the manifest's directory.
    #[arg(long)]
    manifest: PathBuf,
    /// Output CSV.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    /// TOML config file with the `[sweep]` block.
    #[arg(long)]
    config: PathBuf,
    /// Manifest of ground-truth phantom images.
    #[arg(long)]
    manifest: PathBuf,
    /// Output CSV.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum)]
    mode: Option<SweepMode>,
    /// Trial count for random search.
    #[arg(long)]
    n_random: Option<usize>,
    /// Seed for random search draws.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Phantom(args) => cmd_phantom(args),
        Cmd::Simulate(args) => cmd_simulate(args),
        Cmd::Reconstruct(args) => cmd_reconstruct(args),
        Cmd::Eval(args) => cmd_eval(args),
        Cmd::Sweep(args) => cmd_sweep(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn load_config(path: &Option<PathBuf>) -> Result<RunConfig> {
    match path {
        Some(p) => RunConfig::load(p),
        None => Ok(RunConfig::default()),
    }
}

fn cmd_phantom(args: PhantomArgs) -> Result<()> {
    let kind = match args.kind {
        KindArg::Disks => PhantomKind::Disks,
        KindArg::Rings => PhantomKind::Rings,
        KindArg::Vessels => PhantomKind::Vessels,
    };
    let mut spec = PhantomSpec::new(kind, args.side, args.count, RngSeed(args.seed));
    if let Some(margin) = args.margin {
        spec.margin = margin;
    }
    spec.validate()?;
    match (&args.out, args.n) {
        (Some(out), None) => {
            let img = make_phantom(&spec)?;
            io::save_image(out, &img)
        }
        (None, Some(n)) => {
            let dir = args.out_dir.ok_or_else(|| {
                Error::config("--n requires --out-dir for the dataset".to_string())
            })?;
            patrec::make_dataset(&spec, n, &dir)?;
            Ok(())
        }
        (Some(_), Some(_)) => {
            Err(Error::config("use either --out or --n/--out-dir, not both".to_string()))
        }
        (None, None) => Err(Error::config(
            "missing output: pass --out FILE or --n N --out-dir DIR".to_string(),
        )),
    }
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let mut cfg = load_config(&args.config)?;
    if let Some(v) = &args.input {
        cfg.paths.input = Some(v.clone());
    }
    if let Some(v) = &args.out {
        cfg.paths.output = Some(v.clone());
    }
    if let Some(v) = args.channels {
        cfg.mask.n_keep = v;
    }
    if let Some(v) = args.pattern {
        cfg.mask.pattern = v;
    }
    if let Some(v) = args.mask_seed {
        cfg.mask.seed = v;
    }
    if let Some(v) = args.offset {
        cfg.mask.offset = v;
    }
    if let Some(v) = args.noise_std {
        cfg.simulate.noise_std = v;
    }
    if let Some(v) = args.seed {
        cfg.simulate.seed = v;
    }
    cfg.validate()?;
    cfg.check_input_paths(&[("input", &cfg.paths.input)])?;
    let out = cfg
        .paths
        .output
        .clone()
        .ok_or_else(|| Error::config("missing required path: output".to_string()))?;

    let x = io::load_image(cfg.paths.input.as_ref().unwrap())?;
    let matrix = cfg.build_matrix()?;
    let mask = cfg.build_mask()?;
    let y = patrec::simulate_measurement(
        &matrix,
        &x,
        &mask,
        cfg.simulate.noise_std,
        RngSeed(cfg.simulate.seed),
    )?;
    io::save_sensor(&out, &y)?;
    let mask_out = args
        .mask_out
        .unwrap_or_else(|| PathBuf::from(format!("{out}.mask.txt")));
    io::save_mask(&mask_out, &mask)?;
    if let Some(path) = &args.dump_matrix {
        matrix.export_triplets(path)?;
    }
    Ok(())
}

fn cmd_reconstruct(args: ReconstructArgs) -> Result<()> {
    let mut cfg = load_config(&args.config)?;
    if let Some(v) = &args.input {
        cfg.paths.input = Some(v.clone());
    }
    if let Some(v) = &args.out {
        cfg.paths.output = Some(v.clone());
    }
    if let Some(v) = &args.mask {
        cfg.paths.mask = Some(v.clone());
    }
    if let Some(v) = &args.ground_truth {
        cfg.paths.ground_truth = Some(v.clone());
    }
    if let Some(v) = args.method {
        cfg.method.name = v;
    }
    if let Some(v) = args.alpha {
        cfg.method.alpha = v;
    }
    if let Some(v) = args.eps0 {
        cfg.method.eps0 = v;
    }
    if let Some(v) = args.gamma {
        cfg.method.gamma = v;
    }
    if let Some(v) = args.c {
        cfg.method.c = v;
    }
    if let Some(v) = args.steps {
        cfg.method.steps_per_scale = v;
    }
    if let Some(v) = args.scales {
        cfg.method.n_scales = v;
    }
    if let Some(v) = args.sigma_min {
        cfg.method.sigma_min = v;
    }
    if let Some(v) = args.sigma_max {
        cfg.method.sigma_max = v;
    }
    if let Some(v) = args.seed {
        cfg.method.seed = v;
    }
    if let Some(v) = args.rotation {
        cfg.method.rotation = v;
    }
    if let Some(v) = args.rotation_r {
        cfg.method.rotation_r = v;
    }
    if let Some(v) = args.init {
        cfg.method.init = v;
    }
    if let Some(v) = args.lambda {
        cfg.method.lambda = v;
    }
    if let Some(v) = args.tol {
        cfg.method.tol = v;
    }
    if let Some(v) = args.max_iter {
        cfg.method.max_iter = v;
    }
    if let Some(v) = args.prior {
        cfg.prior.kind = v;
    }
    if let Some(v) = args.beta {
        cfg.prior.beta = v;
    }
    if let Some(v) = args.tau {
        cfg.prior.tau = v;
    }
    if let Some(v) = args.variance {
        cfg.prior.variance = v;
    }
    if let Some(v) = args.channels {
        cfg.mask.n_keep = v;
    }
    if let Some(v) = args.pattern {
        cfg.mask.pattern = v;
    }
    cfg.validate()?;
    let mut inputs = vec![("input", &cfg.paths.input)];
    if cfg.paths.mask.is_some() {
        inputs.push(("mask", &cfg.paths.mask));
    }
    if cfg.paths.ground_truth.is_some() {
        inputs.push(("ground_truth", &cfg.paths.ground_truth));
    }
    cfg.check_input_paths(&inputs)?;
    let out = cfg
        .paths
        .output
        .clone()
        .ok_or_else(|| Error::config("missing required path: output".to_string()))?;

    let y = io::load_sensor(cfg.paths.input.as_ref().unwrap())?;
    let matrix = cfg.build_matrix()?;
    let mask = match &cfg.paths.mask {
        Some(p) => io::load_mask(p)?,
        None => cfg.build_mask()?,
    };
    let ground_truth = match &cfg.paths.ground_truth {
        Some(p) => Some(io::load_image(p)?),
        None => None,
    };

    let image = match cfg.method.name {
        MethodName::Linear => reconstruct_linear(&matrix, &mask, &y)?,
        MethodName::Tv => {
            let lin = reconstruct_linear(&matrix, &mask, &y)?;
            tv_denoise(&lin, &cfg.tv_params())?
        }
        MethodName::Langevin | MethodName::Rcc => {
            let prior = cfg.build_prior()?;
            let rc = cfg.recon_config()?;
            let (image, trace) = if cfg.method.name == MethodName::Langevin {
                run_langevin(&matrix, &mask, &y, prior.as_ref(), &rc, ground_truth.as_ref())?
            } else {
                run_rcc_sgm(&matrix, &mask, &y, prior.as_ref(), &rc, ground_truth.as_ref())?
            };
            if let Some(path) = &args.trace {
                trace.write_csv(path)?;
            }
            image
        }
    };
    io::save_image(&out, &image)?;
    if let Some(path) = &args.pgm {
        io::export_pgm(&image, path)?;
    }
    Ok(())
}

/// PSNR peak and SSIM data range: the ground truth's value range, or 1 when
/// the ground truth is constant.
fn data_range(gt: &ImageGrid) -> f64 {
    let (lo, hi) = gt.min_max();
    if hi > lo {
        hi - lo
    } else {
        1.0
    }
}

fn cmd_eval(args: EvalArgs) -> Result<()> {
    let lines = io::load_manifest(&args.manifest)?;
    let base = args.manifest.parent().unwrap_or(Path::new("")).to_path_buf();
    let mut pairs = Vec::new();
    for line in &lines {
        let mut fields = line.split(',');
        match (fields.next(), fields.next(), fields.next()) {
            (Some(recon), Some(gt), None) => {
                pairs.push((recon.trim().to_string(), gt.trim().to_string()));
            }
            _ => {
                return Err(Error::config(format!(
                    "manifest line is not `reconstruction,ground_truth`: {line}"
                )));
            }
        }
    }

    let missing: Vec<String> = pairs
        .iter()
        .flat_map(|(a, b)| [a, b])
        .filter(|p| !base.join(p).exists())
        .cloned()
        .collect();
    if !missing.is_empty() {
        return Err(Error::persistence(
            args.manifest.clone(),
            std::io::Error::new(
                std::io::ErrorKind::NotFound,
                format!("missing files: {}", missing.join(", ")),
            ),
        ));
    }

    let mut csv = String::from("recon,ground_truth,psnr,ssim\n");
    let mut psnrs = Vec::new();
    let mut ssims = Vec::new();
    for (recon_path, gt_path) in &pairs {
        let recon = io::load_image(base.join(recon_path))?;
        let gt = io::load_image(base.join(gt_path))?;
        let range = data_range(&gt);
        let p = psnr(&gt, &recon, range)?;
        let s = ssim(&gt, &recon, &SsimParams::new(range)?)?;
        csv.push_str(&format!("{recon_path},{gt_path},{p},{s}\n"));
        psnrs.push(p);
        ssims.push(s);
    }
    if !pairs.is_empty() {
        let stat = |v: &[f64]| {
            let m = v.iter().sum::<f64>() / v.len() as f64;
            let sd =
                (v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / v.len() as f64).sqrt();
            (m, sd)
        };
        let (pm, ps) = stat(&psnrs);
        let (sm, ss) = stat(&ssims);
        csv.push_str(&format!("mean±std,,{pm}±{ps},{sm}±{ss}\n"));
    }
    std::fs::write(&args.out, csv).map_err(|e| Error::persistence(args.out.clone(), e))
}

#[derive(Debug, Clone, Copy)]
struct Trial {
    alpha: f64,
    eps0: f64,
    gamma: f64,
    c: f64,
    steps_per_scale: usize,
}

fn grid_values(list: &[f64], fixed: f64) -> Vec<f64> {
    if list.is_empty() {
        vec![fixed]
    } else {
        list.to_vec()
    }
}

fn build_trials(cfg: &RunConfig) -> Result<Vec<Trial>> {
    let sweep = &cfg.sweep;
    let m = &cfg.method;
    let mode = sweep
        .mode
        .ok_or_else(|| Error::config("sweep mode missing: set grid or random".to_string()))?;
    match mode {
        SweepMode::Grid => {
            if sweep.alpha.is_empty()
                && sweep.eps0.is_empty()
                && sweep.gamma.is_empty()
                && sweep.c.is_empty()
                && sweep.steps_per_scale.is_empty()
            {
                return Err(Error::config(
                    "empty sweep space: list values for at least one parameter".to_string(),
                ));
            }
            let steps = if sweep.steps_per_scale.is_empty() {
                vec![m.steps_per_scale]
            } else {
                sweep.steps_per_scale.clone()
            };
            let mut trials = Vec::new();
            for &alpha in &grid_values(&sweep.alpha, m.alpha) {
                for &eps0 in &grid_values(&sweep.eps0, m.eps0) {
                    for &gamma in &grid_values(&sweep.gamma, m.gamma) {
                        for &c in &grid_values(&sweep.c, m.c) {
                            for &steps_per_scale in &steps {
                                trials.push(Trial { alpha, eps0, gamma, c, steps_per_scale });
                            }
                        }
                    }
                }
            }
            Ok(trials)
        }
        SweepMode::Random => {
            if sweep.n_random == 0 {
                return Err(Error::config("empty sweep space: n_random is 0".to_string()));
            }
            let range = |list: &[f64], name: &str| -> Result<Option<(f64, f64)>> {
                match list {
                    [] => Ok(None),
                    [lo, hi] if lo <= hi => Ok(Some((*lo, *hi))),
                    _ => Err(Error::config(format!(
                        "random sweep expects `{name} = [lo, hi]`, got {list:?}"
                    ))),
                }
            };
            let alpha = range(&sweep.alpha, "alpha")?;
            let eps0 = range(&sweep.eps0, "eps0")?;
            let gamma = range(&sweep.gamma, "gamma")?;
            let c = range(&sweep.c, "c")?;
            let steps = match sweep.steps_per_scale.as_slice() {
                [] => None,
                [lo, hi] if lo <= hi => Some((*lo, *hi)),
                other => {
                    return Err(Error::config(format!(
                        "random sweep expects `steps_per_scale = [lo, hi]`, got {other:?}"
                    )));
                }
            };
            if alpha.is_none() && eps0.is_none() && gamma.is_none() && c.is_none() && steps.is_none()
            {
                return Err(Error::config(
                    "empty sweep space: give a [lo, hi] range for at least one parameter"
                        .to_string(),
                ));
            }
            use rand::Rng;
            fn draw(rng: &mut impl Rng, r: Option<(f64, f64)>, fixed: f64) -> f64 {
                match r {
                    Some((lo, hi)) if lo < hi => rng.random_range(lo..=hi),
                    Some((lo, _)) => lo,
                    None => fixed,
                }
            }
            let mut rng = RngSeed(sweep.seed).rng();
            let mut trials = Vec::with_capacity(sweep.n_random);
            for _ in 0..sweep.n_random {
                let alpha = draw(&mut rng, alpha, m.alpha);
                let eps0 = draw(&mut rng, eps0, m.eps0);
                let gamma = draw(&mut rng, gamma, m.gamma);
                let c = draw(&mut rng, c, m.c);
                let steps_per_scale = match steps {
                    Some((lo, hi)) if lo < hi => rng.random_range(lo..=hi),
                    Some((lo, _)) => lo,
                    None => m.steps_per_scale,
                };
                trials.push(Trial { alpha, eps0, gamma, c, steps_per_scale });
            }
            Ok(trials)
        }
    }
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let mut cfg = RunConfig::load(&args.config)?;
    if let Some(v) = args.mode {
        cfg.sweep.mode = Some(v);
    }
    if let Some(v) = args.n_random {
        cfg.sweep.n_random = v;
    }
    if let Some(v) = args.seed {
        cfg.sweep.seed = v;
    }
    if !cfg.method.name.is_sampler() {
        return Err(Error::config(format!(
            "sweep requires a sampler method (langevin or rcc), got {:?}",
            cfg.method.name
        )));
    }
    cfg.validate()?;
    let trials = build_trials(&cfg)?;

    let lines = io::load_manifest(&args.manifest)?;
    let base = args.manifest.parent().unwrap_or(Path::new("")).to_path_buf();
    if lines.is_empty() {
        return Err(Error::config("sweep manifest lists no images".to_string()));
    }
    let ground_truths: Vec<ImageGrid> = lines
        .iter()
        .map(|p| io::load_image(base.join(p)))
        .collect::<Result<_>>()?;

    let matrix = cfg.build_matrix()?;
    let mask = cfg.build_mask()?;
    let prior = cfg.build_prior()?;
    let base_rc = cfg.recon_config()?;

    // Pre-validate every trial configuration (fail fast, before any sampling).
    let mut trial_configs = Vec::with_capacity(trials.len());
    for t in &trials {
        let mut rc = base_rc.clone();
        rc.alpha = t.alpha;
        rc.eps0 = t.eps0;
        rc.gamma = t.gamma;
        rc.c = t.c;
        rc.steps_per_scale = t.steps_per_scale;
        rc.validate(cfg.geometry.n_ch)?;
        trial_configs.push(rc);
    }

    // Per-item measurements are shared across trials (same seeds).
    let measurements: Vec<patrec::SensorData> = ground_truths
        .iter()
        .enumerate()
        .map(|(i, gt)| {
            patrec::simulate_measurement(
                &matrix,
                gt,
                &mask,
                cfg.simulate.noise_std,
                RngSeed(cfg.simulate.seed + i as u64),
            )
        })
        .collect::<Result<_>>()?;

    let use_rcc = cfg.method.name == MethodName::Rcc;
    let run_one = |rc: &patrec::ReconConfig| -> Result<f64> {
        let mut sum = 0.0;
        for (i, (gt, y)) in ground_truths.iter().zip(&measurements).enumerate() {
            let mut rc = rc.clone();
            rc.seed = RngSeed(cfg.method.seed + i as u64);
            let (x, _) = if use_rcc {
                run_rcc_sgm(&matrix, &mask, y, prior.as_ref(), &rc, None)?
            } else {
                run_langevin(&matrix, &mask, y, prior.as_ref(), &rc, None)?
            };
            sum += psnr(gt, &x, data_range(gt))?;
        }
        Ok(sum / ground_truths.len() as f64)
    };
    let scores: Vec<f64> = trial_configs
        .par_iter()
        .map(run_one)
        .collect::<Result<_>>()?;

    let mut csv = String::from("trial,alpha,eps0,gamma,c,steps_per_scale,mean_psnr\n");
    for (i, (t, score)) in trials.iter().zip(&scores).enumerate() {
        csv.push_str(&format!(
            "{i},{},{},{},{},{},{score}\n",
            t.alpha, t.eps0, t.gamma, t.c, t.steps_per_scale
        ));
    }
    // ties resolve to the lowest trial index
    let mut best = 0;
    for i in 1..scores.len() {
        if scores[i] > scores[best] {
            best = i;
        }
    }
    let t = &trials[best];
    csv.push_str(&format!(
        "argmax,{},{},{},{},{},{}\n",
        t.alpha, t.eps0, t.gamma, t.c, t.steps_per_scale, scores[best]
    ));
    std::fs::write(&args.out, csv).map_err(|e| Error::persistence(args.out.clone(), e))
}
