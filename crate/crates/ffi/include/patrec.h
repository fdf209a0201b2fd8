#ifndef PATREC_H
#define PATREC_H

/* Generated by cbindgen from the patrec-ffi crate. Do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum {
  /**
   * Success.
   */
  PATREC_STATUS_OK = 0,
  /**
   * A pointer was NULL, a string was not UTF-8, or an enum value was
   * out of range.
   */
  PATREC_STATUS_INVALID_ARGUMENT = 1,
  /**
   * A parameter value was rejected (non-positive size, bad range, ...).
   */
  PATREC_STATUS_CONFIG = 2,
  /**
   * Two arguments had incompatible dimensions.
   */
  PATREC_STATUS_SHAPE = 3,
  /**
   * A numerical routine failed to produce a finite result.
   */
  PATREC_STATUS_NUMERICAL = 4,
  /**
   * File I/O failed.
   */
  PATREC_STATUS_PERSISTENCE = 5,
  /**
   * A file was read but its contents were not understood.
   */
  PATREC_STATUS_FORMAT = 6,
  /**
   * A panic was caught at the boundary; state may be stale but memory
   * is intact.
   */
  PATREC_STATUS_INTERNAL = 7,
} PatrecStatus;

/**
 * Synthetic image families for [`patrec_phantom`].
 */
typedef enum {
  PATREC_PHANTOM_KIND_DISKS = 0,
  PATREC_PHANTOM_KIND_RINGS = 1,
  PATREC_PHANTOM_KIND_VESSELS = 2,
} PatrecPhantomKind;

/**
 * Channel subsampling patterns for [`patrec_mask_create`].
 */
typedef enum {
  /**
   * Evenly spaced channels; `seed` and `offset` are ignored.
   */
  PATREC_MASK_PATTERN_UNIFORM = 0,
  /**
   * Random subset without replacement drawn from `seed`; `offset` is
   * ignored.
   */
  PATREC_MASK_PATTERN_RANDOM = 1,
  /**
   * Contiguous block starting at `offset`; `seed` is ignored.
   */
  PATREC_MASK_PATTERN_LIMITED_VIEW = 2,
} PatrecMaskPattern;

/**
 * How the consistency-correction rotation index is chosen per scale.
 */
typedef enum {
  /**
   * Always `rotation_r`.
   */
  PATREC_ROTATION_FIXED = 0,
  /**
   * Cycles through all non-identity rotations; `rotation_r` is ignored.
   */
  PATREC_ROTATION_CYCLE = 1,
  /**
   * Uniform draw per scale; `rotation_r` is ignored.
   */
  PATREC_ROTATION_RANDOM = 2,
} PatrecRotation;

/**
 * Chain initialization for the samplers.
 */
typedef enum {
  PATREC_INIT_ZEROS = 0,
  /**
   * Back projection of the masked data.
   */
  PATREC_INIT_ADJOINT = 1,
  /**
   * i.i.d. Gaussian at the largest noise scale.
   */
  PATREC_INIT_RANDOM = 2,
} PatrecInit;

/**
 * Square image on a uniform grid. Opaque.
 */
typedef struct PatrecImage PatrecImage;

/**
 * Subset of kept channels. Opaque.
 */
typedef struct PatrecMask PatrecMask;

/**
 * Sparse forward operator for one array/grid combination. Opaque.
 */
typedef struct PatrecModel PatrecModel;

/**
 * Prior with score and log-density evaluations. Opaque.
 */
typedef struct PatrecPrior PatrecPrior;

/**
 * Per-channel time series block. Opaque.
 */
typedef struct PatrecSensor PatrecSensor;

/**
 * Circular sensor array over a square grid.
 */
typedef struct {
  /**
   * Sensor count; must be >= 4 and divisible by 4.
   */
  size_t n_ch;
  /**
   * Array radius in mm; must exceed the grid half-diagonal.
   */
  double radius;
  /**
   * Speed of sound in mm/us.
   */
  double sound_speed;
  /**
   * Time samples per channel.
   */
  size_t n_t;
  /**
   * Sample spacing in us.
   */
  double dt;
  /**
   * Time of the first sample in us.
   */
  double t0;
} PatrecGeometry;

/**
 * Sampler settings for [`patrec_run_langevin`] and [`patrec_run_rcc`].
 */
typedef struct {
  /**
   * Number of noise scales; >= 2.
   */
  size_t n_scales;
  /**
   * Smallest noise level; > 0.
   */
  double sigma_min;
  /**
   * Largest noise level; > sigma_min.
   */
  double sigma_max;
  /**
   * Langevin steps per scale.
   */
  size_t steps_per_scale;
  /**
   * Step size at the smallest scale; scales quadratically with sigma.
   */
  double eps0;
  /**
   * Measurement-noise level in the guidance denominator.
   */
  double gamma;
  /**
   * Guidance annealing coefficient: divides by gamma^2 + c sigma^2.
   */
  double c;
  /**
   * Consistency-correction strength; 0 reduces the corrected sampler to
   * plain Langevin, bit for bit.
   */
  double alpha;
  PatrecRotation rotation;
  /**
   * Rotation index when `rotation` is fixed; 1..n_ch-1.
   */
  size_t rotation_r;
  PatrecInit init;
  /**
   * Seed for all sampler randomness; equal seeds give equal outputs.
   */
  uint64_t seed;
} PatrecReconConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on the calling thread, empty if none.
 * Valid until the next failing call on this thread.
 */
const char *patrec_last_error(void);

/**
 * Library version as a static string.
 */
const char *patrec_version(void);

/**
 * Creates a `side` x `side` image from `len == side*side` row-major values.
 */
PatrecStatus patrec_image_create(size_t side,
                                 double pixel_size,
                                 const double *values,
                                 size_t len,
                                 PatrecImage **out);

/**
 * Writes the image side length to `out`.
 */
PatrecStatus patrec_image_side(const PatrecImage *image, size_t *out);

/**
 * Writes the pixel edge length in mm to `out`.
 */
PatrecStatus patrec_image_pixel_size(const PatrecImage *image, double *out);

/**
 * Copies the row-major pixel values into `buf`; `len` must equal
 * `side*side`.
 */
PatrecStatus patrec_image_values(const PatrecImage *image, double *buf, size_t len);

/**
 * Saves the image to `path` in the library's container format.
 */
PatrecStatus patrec_image_save(const PatrecImage *image, const char *path);

/**
 * Loads an image previously written by [`patrec_image_save`].
 */
PatrecStatus patrec_image_load(const char *path, PatrecImage **out);

/**
 * Releases an image handle. NULL is allowed.
 */
void patrec_image_free(PatrecImage *image);

/**
 * Draws a synthetic image: `count` disks, rings, or vessel branches on a
 * `side` x `side` grid, deterministic in `seed`.
 */
PatrecStatus patrec_phantom(PatrecPhantomKind kind,
                            size_t side,
                            size_t count,
                            uint64_t seed,
                            PatrecImage **out);

/**
 * Creates an `n_ch` x `n_t` time-series block from `len == n_ch*n_t`
 * channel-major values.
 */
PatrecStatus patrec_sensor_create(size_t n_ch,
                                  size_t n_t,
                                  const double *values,
                                  size_t len,
                                  PatrecSensor **out);

/**
 * Writes the channel count and samples-per-channel count.
 */
PatrecStatus patrec_sensor_shape(const PatrecSensor *sensor, size_t *out_n_ch, size_t *out_n_t);

/**
 * Copies the channel-major samples into `buf`; `len` must equal
 * `n_ch*n_t`.
 */
PatrecStatus patrec_sensor_values(const PatrecSensor *sensor, double *buf, size_t len);

/**
 * Saves the block to `path` in the library's container format.
 */
PatrecStatus patrec_sensor_save(const PatrecSensor *sensor, const char *path);

/**
 * Loads a block previously written by [`patrec_sensor_save`].
 */
PatrecStatus patrec_sensor_load(const char *path, PatrecSensor **out);

/**
 * Releases a sensor handle. NULL is allowed.
 */
void patrec_sensor_free(PatrecSensor *sensor);

/**
 * Assembles the sparse forward operator for `geometry` over a `grid_side`
 * square grid with `pixel_size` mm pixels. `adjoint_scale` <= 0 selects the
 * built-in back-projection normalization; a positive value overrides it.
 */
PatrecStatus patrec_model_build(const PatrecGeometry *geometry,
                                size_t grid_side,
                                double pixel_size,
                                double adjoint_scale,
                                PatrecModel **out);

/**
 * Applies the forward operator: image in, clean time series out.
 */
PatrecStatus patrec_model_forward(const PatrecModel *model,
                                  const PatrecImage *image,
                                  PatrecSensor **out);

/**
 * Applies the scaled transpose (back projection): time series in, image
 * out.
 */
PatrecStatus patrec_model_adjoint(const PatrecModel *model,
                                  const PatrecSensor *sensor,
                                  PatrecImage **out);

/**
 * Writes the back-projection scale in effect for this model.
 */
PatrecStatus patrec_model_adjoint_scale(const PatrecModel *model, double *out);

/**
 * Releases a model handle. NULL is allowed.
 */
void patrec_model_free(PatrecModel *model);

/**
 * Builds a mask keeping `n_keep` of `n_ch` channels. `seed` feeds the
 * random pattern, `offset` places the limited-view block; each is ignored
 * by the other patterns.
 */
PatrecStatus patrec_mask_create(size_t n_ch,
                                size_t n_keep,
                                PatrecMaskPattern pattern,
                                uint64_t seed,
                                size_t offset,
                                PatrecMask **out);

/**
 * Writes the number of kept channels.
 */
PatrecStatus patrec_mask_n_kept(const PatrecMask *mask, size_t *out);

/**
 * Releases a mask handle. NULL is allowed.
 */
void patrec_mask_free(PatrecMask *mask);

/**
 * Simulates a measurement: forward map of `image`, i.i.d. Gaussian noise of
 * standard deviation `noise_std` drawn from `seed`, then masking to the
 * kept channels (dropped channels are zeroed). Deterministic in `seed`.
 */
PatrecStatus patrec_simulate(const PatrecModel *model,
                             const PatrecImage *image,
                             const PatrecMask *mask,
                             double noise_std,
                             uint64_t seed,
                             PatrecSensor **out);

/**
 * Gauss-Markov random field prior on a `side` x `side` grid: precision
 * `beta * L + tau * I` with `L` the 4-neighbor Laplacian.
 */
PatrecStatus patrec_prior_gmrf(size_t side, double beta, double tau, PatrecPrior **out);

/**
 * Isotropic Gaussian prior N(mean * 1, variance * I) in `dim` dimensions.
 */
PatrecStatus patrec_prior_isotropic_gaussian(size_t dim,
                                             double mean,
                                             double variance,
                                             PatrecPrior **out);

/**
 * Releases a prior handle. NULL is allowed.
 */
void patrec_prior_free(PatrecPrior *prior);

/**
 * Linear baseline: back projection of the masked data.
 */
PatrecStatus patrec_reconstruct_linear(const PatrecModel *model,
                                       const PatrecMask *mask,
                                       const PatrecSensor *sensor,
                                       PatrecImage **out);

/**
 * Total-variation denoising of `image`: minimizes
 * `||u - image||^2 / 2 + TV(u) / lambda`. Iteration stops after `max_iter`
 * sweeps or when the dual update drops below `tol`.
 */
PatrecStatus patrec_tv_denoise(const PatrecImage *image,
                               double lambda,
                               size_t max_iter,
                               double tol,
                               PatrecImage **out);

/**
 * Annealed Langevin reconstruction with likelihood guidance. Deterministic
 * in `config->seed`.
 */
PatrecStatus patrec_run_langevin(const PatrecModel *model,
                                 const PatrecMask *mask,
                                 const PatrecSensor *sensor,
                                 const PatrecPrior *prior,
                                 const PatrecReconConfig *config,
                                 PatrecImage **out);

/**
 * Langevin reconstruction plus one rotation-consistency correction per
 * noise scale; `config->alpha == 0` reproduces [`patrec_run_langevin`]
 * bit for bit.
 */
PatrecStatus patrec_run_rcc(const PatrecModel *model,
                            const PatrecMask *mask,
                            const PatrecSensor *sensor,
                            const PatrecPrior *prior,
                            const PatrecReconConfig *config,
                            PatrecImage **out);

/**
 * Peak signal-to-noise ratio of `test` against `reference` with the given
 * peak value. Writes +infinity for identical images.
 */
PatrecStatus patrec_psnr(const PatrecImage *reference,
                         const PatrecImage *test,
                         double peak,
                         double *out);

/**
 * Mean structural similarity of `test` against `reference` with the given
 * data range.
 */
PatrecStatus patrec_ssim(const PatrecImage *reference,
                         const PatrecImage *test,
                         double data_range,
                         double *out);

/**
 * Default back-projection normalization for `geometry`, as used when
 * [`patrec_model_build`] is called with a non-positive `adjoint_scale`.
 */
PatrecStatus patrec_default_adjoint_scale(const PatrecGeometry *geometry, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PATREC_H */
