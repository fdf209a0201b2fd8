//! C interface to the photoacoustic reconstruction library.
//!
//! The API hands out opaque heap-allocated handles (`PatrecImage`,
//! `PatrecSensor`, `PatrecModel`, `PatrecMask`, `PatrecPrior`) and reports
//! failures through [`PatrecStatus`] codes. After any non-`Ok` status,
//! [`patrec_last_error`] returns a human-readable message for the calling
//! thread; the pointer stays valid until the next failing call on that
//! thread.
//!
//! Pointer contract, shared by every function here:
//!
//! * Handle and buffer arguments must be valid for the stated access (read
//!   for `*const`, write for `*mut`) for the duration of the call, or NULL.
//!   NULL where a value is required yields `PATREC_STATUS_INVALID_ARGUMENT`,
//!   never a crash.
//! * Buffer lengths are given explicitly and are trusted; a shorter actual
//!   allocation is undefined behavior, exactly as in any C API.
//! * Handles are created by `*_create`/`*_load`/builder calls, owned by the
//!   caller, and released with the matching `*_free`. Frees accept NULL.
//! * Handles are not synchronized; do not share one across threads without
//!   external locking.
//!
//! Panics never unwind across the boundary: they are caught and reported as
//! `PATREC_STATUS_INTERNAL`.

#![allow(clippy::missing_safety_doc)] // the module docs state the pointer contract once

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use patrec::{
    apply_adjoint, apply_forward, build_model_matrix, default_adjoint_scale, load_image,
    load_sensor, make_mask, make_phantom, make_schedule, psnr, reconstruct_linear, run_langevin,
    run_rcc_sgm, save_image, save_sensor, simulate_measurement, ssim, tv_denoise, ArrayGeometry,
    ChannelMask, Covariance, Error, GaussianPrior, GmrfPrior, ImageGrid, InitKind, MaskPattern,
    ModelMatrix, PhantomKind, PhantomSpec, ReconConfig, RngSeed, RotationPolicy, ScoreModel,
    SensorData, SsimParams, TvParams,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatrecStatus {
    /// Success.
    Ok = 0,
    /// A pointer was NULL, a string was not UTF-8, or an enum value was
    /// out of range.
    InvalidArgument = 1,
    /// A parameter value was rejected (non-positive size, bad range, ...).
    Config = 2,
    /// Two arguments had incompatible dimensions.
    Shape = 3,
    /// A numerical routine failed to produce a finite result.
    Numerical = 4,
    /// File I/O failed.
    Persistence = 5,
    /// A file was read but its contents were not understood.
    Format = 6,
    /// A panic was caught at the boundary; state may be stale but memory
    /// is intact.
    Internal = 7,
}

/// Square image on a uniform grid. Opaque.
pub struct PatrecImage(ImageGrid);

/// Per-channel time series block. Opaque.
pub struct PatrecSensor(SensorData);

/// Sparse forward operator for one array/grid combination. Opaque.
pub struct PatrecModel(ModelMatrix);

/// Subset of kept channels. Opaque.
pub struct PatrecMask(ChannelMask);

/// Prior with score and log-density evaluations. Opaque.
pub struct PatrecPrior(Box<dyn ScoreModel>);

/// Channel subsampling patterns for [`patrec_mask_create`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatrecMaskPattern {
    /// Evenly spaced channels; `seed` and `offset` are ignored.
    Uniform = 0,
    /// Random subset without replacement drawn from `seed`; `offset` is
    /// ignored.
    Random = 1,
    /// Contiguous block starting at `offset`; `seed` is ignored.
    LimitedView = 2,
}

/// Synthetic image families for [`patrec_phantom`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatrecPhantomKind {
    Disks = 0,
    Rings = 1,
    Vessels = 2,
}

/// How the consistency-correction rotation index is chosen per scale.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatrecRotation {
    /// Always `rotation_r`.
    Fixed = 0,
    /// Cycles through all non-identity rotations; `rotation_r` is ignored.
    Cycle = 1,
    /// Uniform draw per scale; `rotation_r` is ignored.
    Random = 2,
}

/// Chain initialization for the samplers.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatrecInit {
    Zeros = 0,
    /// Back projection of the masked data.
    Adjoint = 1,
    /// i.i.d. Gaussian at the largest noise scale.
    Random = 2,
}

/// Circular sensor array over a square grid.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PatrecGeometry {
    /// Sensor count; must be >= 4 and divisible by 4.
    pub n_ch: usize,
    /// Array radius in mm; must exceed the grid half-diagonal.
    pub radius: f64,
    /// Speed of sound in mm/us.
    pub sound_speed: f64,
    /// Time samples per channel.
    pub n_t: usize,
    /// Sample spacing in us.
    pub dt: f64,
    /// Time of the first sample in us.
    pub t0: f64,
}

/// Sampler settings for [`patrec_run_langevin`] and [`patrec_run_rcc`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PatrecReconConfig {
    /// Number of noise scales; >= 2.
    pub n_scales: usize,
    /// Smallest noise level; > 0.
    pub sigma_min: f64,
    /// Largest noise level; > sigma_min.
    pub sigma_max: f64,
    /// Langevin steps per scale.
    pub steps_per_scale: usize,
    /// Step size at the smallest scale; scales quadratically with sigma.
    pub eps0: f64,
    /// Measurement-noise level in the guidance denominator.
    pub gamma: f64,
    /// Guidance annealing coefficient: divides by gamma^2 + c sigma^2.
    pub c: f64,
    /// Consistency-correction strength; 0 reduces the corrected sampler to
    /// plain Langevin, bit for bit.
    pub alpha: f64,
    pub rotation: PatrecRotation,
    /// Rotation index when `rotation` is fixed; 1..n_ch-1.
    pub rotation_r: usize,
    pub init: PatrecInit,
    /// Seed for all sampler randomness; equal seeds give equal outputs.
    pub seed: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).expect("NULs were stripped");
    });
}

/// Message for the most recent failure on the calling thread, empty if none.
/// Valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn patrec_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn patrec_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

fn fail(e: Error) -> PatrecStatus {
    let status = match &e {
        Error::Persistence { .. } => PatrecStatus::Persistence,
        Error::Format { .. } => PatrecStatus::Format,
        Error::Shape { .. } => PatrecStatus::Shape,
        Error::Config(_) => PatrecStatus::Config,
        Error::Numerical(_) => PatrecStatus::Numerical,
    };
    set_error(e.to_string());
    status
}

fn invalid(msg: String) -> PatrecStatus {
    set_error(msg);
    PatrecStatus::InvalidArgument
}

fn guard(body: impl FnOnce() -> PatrecStatus) -> PatrecStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| (*s).to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            set_error(format!("internal panic: {msg}"));
            PatrecStatus::Internal
        }
    }
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

unsafe fn handle_ref<'a, T>(ptr: *const T, name: &str) -> Result<&'a T, PatrecStatus> {
    ptr.as_ref().ok_or_else(|| invalid(format!("{name} is null")))
}

unsafe fn out_param<'a, T>(ptr: *mut T, name: &str) -> Result<&'a mut T, PatrecStatus> {
    ptr.as_mut().ok_or_else(|| invalid(format!("{name} is null")))
}

unsafe fn slice_arg<'a>(ptr: *const f64, len: usize, name: &str) -> Result<&'a [f64], PatrecStatus> {
    if ptr.is_null() {
        return Err(invalid(format!("{name} is null")));
    }
    if len == 0 {
        return Ok(&[]);
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

unsafe fn slice_out<'a>(ptr: *mut f64, len: usize, name: &str) -> Result<&'a mut [f64], PatrecStatus> {
    if ptr.is_null() {
        return Err(invalid(format!("{name} is null")));
    }
    if len == 0 {
        return Ok(&mut []);
    }
    Ok(std::slice::from_raw_parts_mut(ptr, len))
}

unsafe fn path_arg<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, PatrecStatus> {
    if ptr.is_null() {
        return Err(invalid(format!("{name} is null")));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| invalid(format!("{name} is not valid UTF-8")))
}

fn expect_len(expected: usize, got: usize, what: &str) -> Result<(), PatrecStatus> {
    if expected == got {
        Ok(())
    } else {
        set_error(format!("{what}: expected length {expected}, got {got}"));
        Err(PatrecStatus::Shape)
    }
}

// ---------------------------------------------------------------------------
// Images

/// Creates a `side` x `side` image from `len == side*side` row-major values.
#[no_mangle]
pub unsafe extern "C" fn patrec_image_create(
    side: usize,
    pixel_size: f64,
    values: *const f64,
    len: usize,
    out: *mut *mut PatrecImage,
) -> PatrecStatus {
    guard(|| {
        let out = try_status!(unsafe { out_param(out, "out") });
        *out = ptr::null_mut();
        let values = try_status!(unsafe { slice_arg(values, len, "values") });
        let img = try_status!(ImageGrid::new(side, pixel_size, values.to_vec()).map_err(fail));
        *out = Box::into_raw(Box::new(PatrecImage(img)));
        PatrecStatus::Ok
    })
}

/// Writes the image side length to `out`.
#[no_mangle]
pub unsafe extern "C" fn patrec_image_side(
    image: *const PatrecImage,
    out: *mut usize,
) -> PatrecStatus {
    guard(|| {
        let image = try_status!(unsafe { handle_ref(image, "image") });
        let out = try_status!(unsafe { out_param(out, "out") });
        *out = image.0.side();
        PatrecStatus::Ok
    })
}

/// Writes the pixel edge length in mm to `out`.
#[no_mangle]
pub unsafe extern "C" fn patrec_image_pixel_size(
    image: *const PatrecImage,
    out: *mut f64,
) -> PatrecStatus {
    guard(|| {
        let image = try_status!(unsafe { handle_ref(image, "image") });
        let out = try_status!(unsafe { out_param(out, "out") });
        *out = image.0.pixel_size();
        PatrecStatus::Ok
    })
}

/// Copies the row-major pixel values into `buf`; `len` must equal
/// `side*side`.
#[no_mangle]
pub unsafe extern "C" fn patrec_image_values(
    image: *const PatrecImage,
    buf: *mut f64,
    len: usize,
) -> PatrecStatus {
    guard(|| {
        let image = try_status!(unsafe { handle_ref(image, "image") });
        let buf = try_status!(unsafe { slice_out(buf, len, "buf") });
        try_status!(expect_len(image.0.values().len(), len, "image buffer"));
        buf.copy_from_slice(image.0.values());
        PatrecStatus::Ok
    })
}

/// Saves the image to `path` in the library's container format.
#[no_mangle]
pub unsafe extern "C" fn patrec_image_save(
    image: *const PatrecImage,
    path: *const c_char,
) -> PatrecStatus {
    guard(|| {
        let image = try_status!(unsafe { handle_ref(image, "image") });
        let path = try_status!(unsafe { path_arg(path, "path") });
        try_status!(save_image(path, &image.0).map_err(fail));
        PatrecStatus::Ok
    })
}

/// Loads an image previously written by [`patrec_image_save`].
#[no_mangle]
pub unsafe extern "C" fn patrec_image_load(
    path: *const c_char,
    out: *mut *mut PatrecImage,
) -> PatrecStatus {
    guard(|| {
        let out = try_status!(unsafe { out_param(out, "out") });
        *out = ptr::null_mut();
        let path = try_status!(unsafe { path_arg(path, "path") });
        let img = try_status!(load_image(path).map_err(fail));
        *out = Box::into_raw(Box::new(PatrecImage(img)));
        PatrecStatus::Ok
    })
}

/// Releases an image handle. NULL is allowed.
#[no_mangle]
pub unsafe extern "C" fn patrec_image_free(image: *mut PatrecImage) {
    if !image.is_null() {
        drop(unsafe { Box::from_raw(image) });
    }
}

/// Draws a synthetic image: `count` disks, rings, or vessel branches on a
/// `side` x `side` grid, deterministic in `seed`.
#[no_mangle]
pub unsafe extern "C" fn patrec_phantom(
    kind: PatrecPhantomKind,
    side: usize,
    count: usize,
    seed: u64,
    out: *mut *mut PatrecImage,
) -> PatrecStatus {
    guard(|| {
        let out = try_status!(unsafe { out_param(out, "out") });
        *out = ptr::null_mut();
        let kind = match kind {
            PatrecPhantomKind::Disks => PhantomKind::Disks,
            PatrecPhantomKind::Rings => PhantomKind::Rings,
            PatrecPhantomKind::Vessels => PhantomKind::Vessels,
        };
        let spec = PhantomSpec::new(kind, side, count, RngSeed(seed));
        let img = try_status!(make_phantom(&spec).map_err(fail));
        *out = Box::into_raw(Box::new(PatrecImage(img)));
        PatrecStatus::Ok
    })
}

// ---------------------------------------------------------------------------
// Sensor blocks

/// Creates an `n_ch` x `n_t` time-series block from `len == n_ch*n_t`
/// channel-major values.
#[no_mangle]
pub unsafe extern "C" fn patrec_sensor_create(
    n_ch: usize,
    n_t: usize,
    values: *const f64,
    len: usize,
    out: *mut *mut PatrecSensor,
) -> PatrecStatus {
    guard(|| {
        let out = try_status!(unsafe { out_param(out, "out") });
        *out = ptr::null_mut();
        let values = try_status!(unsafe { slice_arg(values, len, "values") });
        let data = try_status!(SensorData::new(n_ch, n_t, values.to_vec()).map_err(fail));
        *out = Box::into_raw(Box::new(PatrecSensor(data)));
        PatrecStatus::Ok
    })
}

/// Writes the channel count and samples-per-channel count.
#[no_mangle]
pub unsafe extern "C" fn patrec_sensor_shape(
    sensor: *const PatrecSensor,
    out_n_ch: *mut usize,
    out_n_t: *mut usize,
) -> PatrecStatus {
    guard(|| {
        let sensor = try_status!(unsafe { handle_ref(sensor, "sensor") });
        let out_n_ch = try_status!(unsafe { out_param(out_n_ch, "out_n_ch") });
        let out_n_t = try_status!(unsafe { out_param(out_n_t, "out_n_t") });
        *out_n_ch = sensor.0.n_ch();
        *out_n_t = sensor.0.n_t();
        PatrecStatus::Ok
    })
}

/// Copies the channel-major samples into `buf`; `len` must equal
/// `n_ch*n_t`.
#[no_mangle]
pub unsafe extern "C" fn patrec_sensor_values(
    sensor: *const PatrecSensor,
    buf: *mut f64,
    len: usize,
) -> PatrecStatus {
    guard(|| {
        let sensor = try_status!(unsafe { handle_ref(sensor, "sensor") });
        let buf = try_status!(unsafe { slice_out(buf, len, "buf") });
        try_status!(expect_len(sensor.0.values().len(), len, "sensor buffer"));
        buf.copy_from_slice(sensor.0.values());
        PatrecStatus::Ok
    })
}

/// Saves the block to `path` in the library's container format.
#[no_mangle]
pub unsafe extern "C" fn patrec_sensor_save(
    sensor: *const PatrecSensor,
    path: *const c_char,
) -> PatrecStatus {
    guard(|| {
        let sensor = try_status!(unsafe { handle_ref(sensor, "sensor") });
        let path = try_status!(unsafe { path_arg(path, "path") });
        try_status!(save_sensor(path, &sensor.0).map_err(fail));
        PatrecStatus::Ok
    })
}

/// Loads a block previously written by [`patrec_sensor_save`].
#[no_mangle]
pub unsafe extern "C" fn patrec_sensor_load(
    path: *const c_char,
    out: *mut *mut PatrecSensor,
) -> PatrecStatus {
    guard(|| {
        let out = try_status!(unsafe { out_param(out, "out") });
        *out = ptr::null_mut();
        let path = try_status!(unsafe { path_arg(path, "path") });
        let data = try_status!(load_sensor(path).map_err(fail));
        *out = Box::into_raw(Box::new(PatrecSensor(data)));
        PatrecStatus::Ok
    })
}

/// Releases a sensor handle. NULL is allowed.
#[no_mangle]
pub unsafe extern "C" fn patrec_sensor_free(sensor: *mut PatrecSensor) {
    if !sensor.is_null() {
        drop(unsafe { Box::from_raw(sensor) });
    }
}

// ---------------------------------------------------------------------------
// Forward model

/// Assembles the sparse forward operator for `geometry` over a `grid_side`
/// square grid with `pixel_size` mm pixels. `adjoint_scale` <= 0 selects the
/// built-in back-projection normalization; a positive value overrides it.
#[no_mangle]
pub unsafe extern "C" fn patrec_model_build(
    geometry: *const PatrecGeometry,
    grid_side: usize,
    pixel_size: f64,
    adjoint_scale: f64,
    out: *mut *mut PatrecModel,
) -> PatrecStatus {
    guard(|| {
        let out = try_status!(unsafe { out_param(out, "out") });
        *out = ptr::null_mut();
        let g = try_status!(unsafe { handle_ref(geometry, "geometry") });
        let geometry = ArrayGeometry {
            n_ch: g.n_ch,
            radius: g.radius,
            sound_speed: g.sound_speed,
            n_t: g.n_t,
            dt: g.dt,
            t0: g.t0,
        };
        let mut matrix = try_status!(build_model_matrix(&geometry, grid_side, pixel_size).map_err(fail));
        if adjoint_scale > 0.0 {
            matrix = try_status!(matrix.with_adjoint_scale(adjoint_scale).map_err(fail));
        }
        *out = Box::into_raw(Box::new(PatrecModel(matrix)));
        PatrecStatus::Ok
    })
}

/// Applies the forward operator: image in, clean time series out.
#[no_mangle]
pub unsafe extern "C" fn patrec_model_forward(
    model: *const PatrecModel,
    image: *const PatrecImage,
    out: *mut *mut PatrecSensor,
) -> PatrecStatus {
    guard(|| {
        let out = try_status!(unsafe { out_param(out, "out") });
        *out = ptr::null_mut();
        let model = try_status!(unsafe { handle_ref(model, "model") });
        let image = try_status!(unsafe { handle_ref(image, "image") });
        let data = try_status!(apply_forward(&model.0, &image.0).map_err(fail));
        *out = Box::into_raw(Box::new(PatrecSensor(data)));
        PatrecStatus::Ok
    })
}

/// Applies the scaled transpose (back projection): time series in, image
/// out.
#[no_mangle]
pub unsafe extern "C" fn patrec_model_adjoint(
    model: *const PatrecModel,
    sensor: *const PatrecSensor,
    out: *mut *mut PatrecImage,
) -> PatrecStatus {
    guard(|| {
        let out = try_status!(unsafe { out_param(out, "out") });
        *out = ptr::null_mut();
        let model = try_status!(unsafe { handle_ref(model, "model") });
        let sensor = try_status!(unsafe { handle_ref(sensor, "sensor") });
        let img = try_status!(apply_adjoint(&model.0, &sensor.0).map_err(fail));
        *out = Box::into_raw(Box::new(PatrecImage(img)));
        PatrecStatus::Ok
    })
}

/// Writes the back-projection scale in effect for this model.
#[no_mangle]
pub unsafe extern "C" fn patrec_model_adjoint_scale(
    model: *const PatrecModel,
    out: *mut f64,
) -> PatrecStatus {
    guard(|| {
        let model = try_status!(unsafe { handle_ref(model, "model") });
        let out = try_status!(unsafe { out_param(out, "out") });
        *out = model.0.adjoint_scale();
        PatrecStatus::Ok
    })
}

/// Releases a model handle. NULL is allowed.
#[no_mangle]
pub unsafe extern "C" fn patrec_model_free(model: *mut PatrecModel) {
    if !model.is_null() {
        drop(unsafe { Box::from_raw(model) });
    }
}

// ---------------------------------------------------------------------------
// Masks and measurement

/// Builds a mask keeping `n_keep` of `n_ch` channels. `seed` feeds the
/// random pattern, `offset` places the limited-view block; each is ignored
/// by the other patterns.
#[no_mangle]
pub unsafe extern "C" fn patrec_mask_create(
    n_ch: usize,
    n_keep: usize,
    pattern: PatrecMaskPattern,
    seed: u64,
    offset: usize,
    out: *mut *mut PatrecMask,
) -> PatrecStatus {
    guard(|| {
        let out = try_status!(unsafe { out_param(out, "out") });
        *out = ptr::null_mut();
        let pattern = match pattern {
            PatrecMaskPattern::Uniform => MaskPattern::Uniform,
            PatrecMaskPattern::Random => MaskPattern::Random(RngSeed(seed)),
            PatrecMaskPattern::LimitedView => MaskPattern::LimitedView { offset },
        };
        let mask = try_status!(make_mask(n_ch, n_keep, pattern).map_err(fail));
        *out = Box::into_raw(Box::new(PatrecMask(mask)));
        PatrecStatus::Ok
    })
}

/// Writes the number of kept channels.
#[no_mangle]
pub unsafe extern "C" fn patrec_mask_n_kept(
    mask: *const PatrecMask,
    out: *mut usize,
) -> PatrecStatus {
    guard(|| {
        let mask = try_status!(unsafe { handle_ref(mask, "mask") });
        let out = try_status!(unsafe { out_param(out, "out") });
        *out = mask.0.n_kept();
        PatrecStatus::Ok
    })
}

/// Releases a mask handle. NULL is allowed.
#[no_mangle]
pub unsafe extern "C" fn patrec_mask_free(mask: *mut PatrecMask) {
    if !mask.is_null() {
        drop(unsafe { Box::from_raw(mask) });
    }
}

/// Simulates a measurement: forward map of `image`, i.i.d. Gaussian noise of
/// standard deviation `noise_std` drawn from `seed`, then masking to the
/// kept channels (dropped channels are zeroed). Deterministic in `seed`.
#[no_mangle]
pub unsafe extern "C" fn patrec_simulate(
    model: *const PatrecModel,
    image: *const PatrecImage,
    mask: *const PatrecMask,
    noise_std: f64,
    seed: u64,
    out: *mut *mut PatrecSensor,
) -> PatrecStatus {
    guard(|| {
        let out = try_status!(unsafe { out_param(out, "out") });
        *out = ptr::null_mut();
        let model = try_status!(unsafe { handle_ref(model, "model") });
        let image = try_status!(unsafe { handle_ref(image, "image") });
        let mask = try_status!(unsafe { handle_ref(mask, "mask") });
        let data = try_status!(
            simulate_measurement(&model.0, &image.0, &mask.0, noise_std, RngSeed(seed))
                .map_err(fail)
        );
        *out = Box::into_raw(Box::new(PatrecSensor(data)));
        PatrecStatus::Ok
    })
}

// ---------------------------------------------------------------------------
// Priors

/// Gauss-Markov random field prior on a `side` x `side` grid: precision
/// `beta * L + tau * I` with `L` the 4-neighbor Laplacian.
#[no_mangle]
pub unsafe extern "C" fn patrec_prior_gmrf(
    side: usize,
    beta: f64,
    tau: f64,
    out: *mut *mut PatrecPrior,
) -> PatrecStatus {
    guard(|| {
        let out = try_status!(unsafe { out_param(out, "out") });
        *out = ptr::null_mut();
        let prior = try_status!(GmrfPrior::new(side, beta, tau).map_err(fail));
        *out = Box::into_raw(Box::new(PatrecPrior(Box::new(prior))));
        PatrecStatus::Ok
    })
}

/// Isotropic Gaussian prior N(mean * 1, variance * I) in `dim` dimensions.
#[no_mangle]
pub unsafe extern "C" fn patrec_prior_isotropic_gaussian(
    dim: usize,
    mean: f64,
    variance: f64,
    out: *mut *mut PatrecPrior,
) -> PatrecStatus {
    guard(|| {
        let out = try_status!(unsafe { out_param(out, "out") });
        *out = ptr::null_mut();
        let prior = try_status!(
            GaussianPrior::new(vec![mean; dim], Covariance::Isotropic(variance)).map_err(fail)
        );
        *out = Box::into_raw(Box::new(PatrecPrior(Box::new(prior))));
        PatrecStatus::Ok
    })
}

/// Releases a prior handle. NULL is allowed.
#[no_mangle]
pub unsafe extern "C" fn patrec_prior_free(prior: *mut PatrecPrior) {
    if !prior.is_null() {
        drop(unsafe { Box::from_raw(prior) });
    }
}

// ---------------------------------------------------------------------------
// Reconstruction

/// Linear baseline: back projection of the masked data.
#[no_mangle]
pub unsafe extern "C" fn patrec_reconstruct_linear(
    model: *const PatrecModel,
    mask: *const PatrecMask,
    sensor: *const PatrecSensor,
    out: *mut *mut PatrecImage,
) -> PatrecStatus {
    guard(|| {
        let out = try_status!(unsafe { out_param(out, "out") });
        *out = ptr::null_mut();
        let model = try_status!(unsafe { handle_ref(model, "model") });
        let mask = try_status!(unsafe { handle_ref(mask, "mask") });
        let sensor = try_status!(unsafe { handle_ref(sensor, "sensor") });
        let img = try_status!(reconstruct_linear(&model.0, &mask.0, &sensor.0).map_err(fail));
        *out = Box::into_raw(Box::new(PatrecImage(img)));
        PatrecStatus::Ok
    })
}

/// Total-variation denoising of `image`: minimizes
/// `||u - image||^2 / 2 + TV(u) / lambda`. Iteration stops after `max_iter`
/// sweeps or when the dual update drops below `tol`.
#[no_mangle]
pub unsafe extern "C" fn patrec_tv_denoise(
    image: *const PatrecImage,
    lambda: f64,
    max_iter: usize,
    tol: f64,
    out: *mut *mut PatrecImage,
) -> PatrecStatus {
    guard(|| {
        let out = try_status!(unsafe { out_param(out, "out") });
        *out = ptr::null_mut();
        let image = try_status!(unsafe { handle_ref(image, "image") });
        let params = TvParams { lambda, max_iter, tol };
        let img = try_status!(tv_denoise(&image.0, &params).map_err(fail));
        *out = Box::into_raw(Box::new(PatrecImage(img)));
        PatrecStatus::Ok
    })
}

fn convert_config(config: &PatrecReconConfig) -> Result<ReconConfig, PatrecStatus> {
    let schedule =
        make_schedule(config.n_scales, config.sigma_min, config.sigma_max).map_err(fail)?;
    let rotation_policy = match config.rotation {
        PatrecRotation::Fixed => RotationPolicy::Fixed(config.rotation_r),
        PatrecRotation::Cycle => RotationPolicy::Cycle,
        PatrecRotation::Random => RotationPolicy::Random,
    };
    let init = match config.init {
        PatrecInit::Zeros => InitKind::Zeros,
        PatrecInit::Adjoint => InitKind::Adjoint,
        PatrecInit::Random => InitKind::Random,
    };
    Ok(ReconConfig {
        schedule,
        steps_per_scale: config.steps_per_scale,
        eps0: config.eps0,
        gamma: config.gamma,
        c: config.c,
        alpha: config.alpha,
        rotation_policy,
        init,
        seed: RngSeed(config.seed),
    })
}

unsafe fn run_sampler_ffi(
    model: *const PatrecModel,
    mask: *const PatrecMask,
    sensor: *const PatrecSensor,
    prior: *const PatrecPrior,
    config: *const PatrecReconConfig,
    out: *mut *mut PatrecImage,
    with_correction: bool,
) -> PatrecStatus {
    guard(|| {
        let out = try_status!(unsafe { out_param(out, "out") });
        *out = ptr::null_mut();
        let model = try_status!(unsafe { handle_ref(model, "model") });
        let mask = try_status!(unsafe { handle_ref(mask, "mask") });
        let sensor = try_status!(unsafe { handle_ref(sensor, "sensor") });
        let prior = try_status!(unsafe { handle_ref(prior, "prior") });
        let config = try_status!(unsafe { handle_ref(config, "config") });
        let config = try_status!(convert_config(config));
        let run = if with_correction { run_rcc_sgm } else { run_langevin };
        let (img, _trace) = try_status!(
            run(&model.0, &mask.0, &sensor.0, prior.0.as_ref(), &config, None).map_err(fail)
        );
        *out = Box::into_raw(Box::new(PatrecImage(img)));
        PatrecStatus::Ok
    })
}

/// Annealed Langevin reconstruction with likelihood guidance. Deterministic
/// in `config->seed`.
#[no_mangle]
pub unsafe extern "C" fn patrec_run_langevin(
    model: *const PatrecModel,
    mask: *const PatrecMask,
    sensor: *const PatrecSensor,
    prior: *const PatrecPrior,
    config: *const PatrecReconConfig,
    out: *mut *mut PatrecImage,
) -> PatrecStatus {
    run_sampler_ffi(model, mask, sensor, prior, config, out, false)
}

/// Langevin reconstruction plus one rotation-consistency correction per
/// noise scale; `config->alpha == 0` reproduces [`patrec_run_langevin`]
/// bit for bit.
#[no_mangle]
pub unsafe extern "C" fn patrec_run_rcc(
    model: *const PatrecModel,
    mask: *const PatrecMask,
    sensor: *const PatrecSensor,
    prior: *const PatrecPrior,
    config: *const PatrecReconConfig,
    out: *mut *mut PatrecImage,
) -> PatrecStatus {
    run_sampler_ffi(model, mask, sensor, prior, config, out, true)
}

// ---------------------------------------------------------------------------
// Metrics

/// Peak signal-to-noise ratio of `test` against `reference` with the given
/// peak value. Writes +infinity for identical images.
#[no_mangle]
pub unsafe extern "C" fn patrec_psnr(
    reference: *const PatrecImage,
    test: *const PatrecImage,
    peak: f64,
    out: *mut f64,
) -> PatrecStatus {
    guard(|| {
        let reference = try_status!(unsafe { handle_ref(reference, "reference") });
        let test = try_status!(unsafe { handle_ref(test, "test") });
        let out = try_status!(unsafe { out_param(out, "out") });
        *out = try_status!(psnr(&reference.0, &test.0, peak).map_err(fail));
        PatrecStatus::Ok
    })
}

/// Mean structural similarity of `test` against `reference` with the given
/// data range.
#[no_mangle]
pub unsafe extern "C" fn patrec_ssim(
    reference: *const PatrecImage,
    test: *const PatrecImage,
    data_range: f64,
    out: *mut f64,
) -> PatrecStatus {
    guard(|| {
        let reference = try_status!(unsafe { handle_ref(reference, "reference") });
        let test = try_status!(unsafe { handle_ref(test, "test") });
        let out = try_status!(unsafe { out_param(out, "out") });
        let params = try_status!(SsimParams::new(data_range).map_err(fail));
        *out = try_status!(ssim(&reference.0, &test.0, &params).map_err(fail));
        PatrecStatus::Ok
    })
}

/// Default back-projection normalization for `geometry`, as used when
/// [`patrec_model_build`] is called with a non-positive `adjoint_scale`.
#[no_mangle]
pub unsafe extern "C" fn patrec_default_adjoint_scale(
    geometry: *const PatrecGeometry,
    out: *mut f64,
) -> PatrecStatus {
    guard(|| {
        let g = try_status!(unsafe { handle_ref(geometry, "geometry") });
        let out = try_status!(unsafe { out_param(out, "out") });
        let geometry = ArrayGeometry {
            n_ch: g.n_ch,
            radius: g.radius,
            sound_speed: g.sound_speed,
            n_t: g.n_t,
            dt: g.dt,
            t0: g.t0,
        };
        *out = default_adjoint_scale(&geometry);
        PatrecStatus::Ok
    })
}
