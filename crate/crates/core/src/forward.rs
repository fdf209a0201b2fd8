//! Sparse model matrix for a circular transducer array.
//!
//! `A` maps image pixels to sensor time samples by arc binning: pixel `p`
//! contributes to the time bin of channel `ch` whose bin-center radius is
//! nearest to the pixel-to-sensor distance, with a triangular radial kernel.
//! The back projection `A†` is a scaled transpose.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::types::{ImageGrid, SensorData};

/// Sensors evenly spaced on a full circle centered on the grid center.
/// Channel `ch` sits at angle `2*pi*ch/n_ch`, counterclockwise from +x.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayGeometry {
    /// Sensor count on the full circle; must be >= 4 and divisible by 4 so
    /// that a quarter turn maps the array onto itself exactly.
    pub n_ch: usize,
    /// Circle radius in mm.
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

impl ArrayGeometry {
    pub fn validate(&self) -> Result<()> {
        if self.n_ch < 4 || self.n_ch % 4 != 0 {
            return Err(Error::config(format!(
                "n_ch must be >= 4 and divisible by 4, got {}",
                self.n_ch
            )));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::config(format!("radius must be positive, got {}", self.radius)));
        }
        if !(self.sound_speed > 0.0 && self.sound_speed.is_finite()) {
            return Err(Error::config(format!(
                "sound_speed must be positive, got {}",
                self.sound_speed
            )));
        }
        if self.n_t == 0 {
            return Err(Error::config("n_t must be >= 1".to_string()));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::config(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t0.is_finite() && self.t0 >= 0.0) {
            return Err(Error::config(format!("t0 must be >= 0, got {}", self.t0)));
        }
        Ok(())
    }

    /// Sensor position in mm relative to the grid center.
    pub fn sensor_position(&self, ch: usize) -> (f64, f64) {
        let angle = 2.0 * std::f64::consts::PI * ch as f64 / self.n_ch as f64;
        (self.radius * angle.cos(), self.radius * angle.sin())
    }

    /// Radius of the center of time bin `k`, in mm.
    pub fn bin_radius(&self, k: usize) -> f64 {
        (self.t0 + k as f64 * self.dt) * self.sound_speed
    }

    pub fn n_rows(&self) -> usize {
        self.n_ch * self.n_t
    }
}

pub(crate) fn pixel_center(side: usize, pixel_size: f64, row: usize, col: usize) -> (f64, f64) {
    let half = (side as f64 - 1.0) / 2.0;
    let x = (col as f64 - half) * pixel_size;
    let y = (half - row as f64) * pixel_size;
    (x, y)
}

/// Sparse forward operator plus its transpose, stored in compressed row and
/// compressed column form. Immutable after construction.
#[derive(Debug, Clone)]
pub struct ModelMatrix {
    geometry: ArrayGeometry,
    grid_side: usize,
    grid_pixel_size: f64,
    adjoint_scale: f64,
    // rows indexed by ch * n_t + k, entries sorted by pixel index
    row_ptr: Vec<usize>,
    col_idx: Vec<u32>,
    row_weights: Vec<f64>,
    // transpose, indexed by pixel, entries sorted by row index
    col_ptr: Vec<usize>,
    row_idx: Vec<u32>,
    col_weights: Vec<f64>,
}

/// Default back-projection normalization: the angular arc per sensor divided
/// by twice the radial bin width. Any positive value is valid; this one keeps
/// `A†y` near the intensity scale of the source image.
pub fn default_adjoint_scale(geometry: &ArrayGeometry) -> f64 {
    std::f64::consts::PI * geometry.radius
        / (geometry.n_ch as f64 * geometry.sound_speed * geometry.dt)
}

/// Builds the sparse model matrix for `geometry` over a `grid_side` square
/// grid with `pixel_size` mm pixels.
///
/// Row `(ch, k)` holds weight `1 - |d - r_k| / (v_s*dt/2)` for every pixel
/// whose center distance `d` to sensor `ch` satisfies `|d - r_k| < v_s*dt/2`,
/// `r_k` being the bin-center radius. Deterministic for fixed inputs and
/// independent of thread count.
pub fn build_model_matrix(
    geometry: &ArrayGeometry,
    grid_side: usize,
    pixel_size: f64,
) -> Result<ModelMatrix> {
    geometry.validate()?;
    if grid_side < 1 || !(pixel_size > 0.0 && pixel_size.is_finite()) {
        return Err(Error::config(format!(
            "invalid grid: side {grid_side}, pixel_size {pixel_size}"
        )));
    }
    let half_diag = grid_side as f64 * pixel_size * std::f64::consts::SQRT_2 / 2.0;
    if geometry.radius <= half_diag {
        return Err(Error::config(format!(
            "sensors inside grid: radius {} must exceed grid half-diagonal {half_diag}",
            geometry.radius
        )));
    }

    let n_px = grid_side * grid_side;
    let half_width = geometry.sound_speed * geometry.dt / 2.0;

    // Each channel's rows are independent; keep channel order on collect.
    let per_channel: Vec<Vec<Vec<(u32, f64)>>> = (0..geometry.n_ch)
        .into_par_iter()
        .map(|ch| {
            let (sx, sy) = geometry.sensor_position(ch);
            let mut rows: Vec<Vec<(u32, f64)>> = vec![Vec::new(); geometry.n_t];
            for p in 0..n_px {
                let (px, py) = pixel_center(grid_side, pixel_size, p / grid_side, p % grid_side);
                let d = ((px - sx) * (px - sx) + (py - sy) * (py - sy)).sqrt();
                let k_f = (d / geometry.sound_speed - geometry.t0) / geometry.dt;
                let k = k_f.round();
                if k < 0.0 || k >= geometry.n_t as f64 {
                    continue;
                }
                let r_k = geometry.bin_radius(k as usize);
                let w = 1.0 - (d - r_k).abs() / half_width;
                if w > 0.0 {
                    rows[k as usize].push((p as u32, w));
                }
            }
            rows
        })
        .collect();

    let mut row_ptr = Vec::with_capacity(geometry.n_rows() + 1);
    let mut col_idx = Vec::new();
    let mut row_weights = Vec::new();
    row_ptr.push(0);
    for rows in &per_channel {
        for row in rows {
            for &(p, w) in row {
                col_idx.push(p);
                row_weights.push(w);
            }
            row_ptr.push(col_idx.len());
        }
    }

    let adjoint_scale = default_adjoint_scale(geometry);
    Ok(ModelMatrix::assemble(
        geometry.clone(),
        grid_side,
        pixel_size,
        adjoint_scale,
        row_ptr,
        col_idx,
        row_weights,
    ))
}

impl ModelMatrix {
    /// Builds a matrix from explicit sparse rows (row index `ch * n_t + k`,
    /// entries `(pixel index, weight)`). Intended for small hand-built
    /// operators; the caller is responsible for geometric meaning, the
    /// structural invariants are still checked.
    pub fn from_rows(
        geometry: ArrayGeometry,
        grid_side: usize,
        grid_pixel_size: f64,
        rows: Vec<Vec<(u32, f64)>>,
        adjoint_scale: f64,
    ) -> Result<Self> {
        geometry.validate()?;
        if rows.len() != geometry.n_rows() {
            return Err(Error::shape("model matrix rows", geometry.n_rows(), rows.len()));
        }
        if !(adjoint_scale > 0.0 && adjoint_scale.is_finite()) {
            return Err(Error::config(format!(
                "adjoint_scale must be positive, got {adjoint_scale}"
            )));
        }
        let n_px = grid_side * grid_side;
        let mut row_ptr = Vec::with_capacity(rows.len() + 1);
        let mut col_idx = Vec::new();
        let mut row_weights = Vec::new();
        row_ptr.push(0);
        for row in &rows {
            for &(p, w) in row {
                if (p as usize) >= n_px {
                    return Err(Error::shape("pixel index", n_px - 1, p));
                }
                if !w.is_finite() {
                    return Err(Error::config(format!("weights must be finite, got {w}")));
                }
                col_idx.push(p);
                row_weights.push(w);
            }
            row_ptr.push(col_idx.len());
        }
        Ok(Self::assemble(
            geometry,
            grid_side,
            grid_pixel_size,
            adjoint_scale,
            row_ptr,
            col_idx,
            row_weights,
        ))
    }

    fn assemble(
        geometry: ArrayGeometry,
        grid_side: usize,
        grid_pixel_size: f64,
        adjoint_scale: f64,
        row_ptr: Vec<usize>,
        col_idx: Vec<u32>,
        row_weights: Vec<f64>,
    ) -> Self {
        // Transpose by counting sort; scanning rows in order keeps each
        // column's entries sorted by row index.
        let n_px = grid_side * grid_side;
        let nnz = col_idx.len();
        let mut col_ptr = vec![0usize; n_px + 1];
        for &p in &col_idx {
            col_ptr[p as usize + 1] += 1;
        }
        for p in 0..n_px {
            col_ptr[p + 1] += col_ptr[p];
        }
        let mut fill = col_ptr.clone();
        let mut row_idx = vec![0u32; nnz];
        let mut col_weights = vec![0.0f64; nnz];
        for r in 0..row_ptr.len() - 1 {
            for e in row_ptr[r]..row_ptr[r + 1] {
                let p = col_idx[e] as usize;
                row_idx[fill[p]] = r as u32;
                col_weights[fill[p]] = row_weights[e];
                fill[p] += 1;
            }
        }
        Self {
            geometry,
            grid_side,
            grid_pixel_size,
            adjoint_scale,
            row_ptr,
            col_idx,
            row_weights,
            col_ptr,
            row_idx,
            col_weights,
        }
    }

    pub fn geometry(&self) -> &ArrayGeometry {
        &self.geometry
    }

    pub fn grid_side(&self) -> usize {
        self.grid_side
    }

    pub fn grid_pixel_size(&self) -> f64 {
        self.grid_pixel_size
    }

    pub fn adjoint_scale(&self) -> f64 {
        self.adjoint_scale
    }

    /// Returns a copy with a different back-projection normalization.
    pub fn with_adjoint_scale(mut self, adjoint_scale: f64) -> Result<Self> {
        if !(adjoint_scale > 0.0 && adjoint_scale.is_finite()) {
            return Err(Error::config(format!(
                "adjoint_scale must be positive, got {adjoint_scale}"
            )));
        }
        self.adjoint_scale = adjoint_scale;
        Ok(self)
    }

    pub fn n_rows(&self) -> usize {
        self.row_ptr.len() - 1
    }

    pub fn n_pixels(&self) -> usize {
        self.grid_side * self.grid_side
    }

    pub fn nnz(&self) -> usize {
        self.col_idx.len()
    }

    /// Entries of one sparse row, sorted by pixel index.
    pub fn row_entries(&self, row: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let lo = self.row_ptr[row];
        let hi = self.row_ptr[row + 1];
        self.col_idx[lo..hi]
            .iter()
            .zip(&self.row_weights[lo..hi])
            .map(|(&p, &w)| (p as usize, w))
    }

    pub(crate) fn forward_flat(&self, x: &[f64]) -> Vec<f64> {
        let dot_row = |r: usize| -> f64 {
            let lo = self.row_ptr[r];
            let hi = self.row_ptr[r + 1];
            let mut acc = 0.0;
            for e in lo..hi {
                acc += self.row_weights[e] * x[self.col_idx[e] as usize];
            }
            acc
        };
        if self.n_rows() >= 4096 {
            (0..self.n_rows()).into_par_iter().map(dot_row).collect()
        } else {
            (0..self.n_rows()).map(dot_row).collect()
        }
    }

    /// Raw transpose product without the adjoint normalization.
    pub(crate) fn transpose_flat(&self, y: &[f64]) -> Vec<f64> {
        let dot_col = |p: usize| -> f64 {
            let lo = self.col_ptr[p];
            let hi = self.col_ptr[p + 1];
            let mut acc = 0.0;
            for e in lo..hi {
                acc += self.col_weights[e] * y[self.row_idx[e] as usize];
            }
            acc
        };
        if self.n_pixels() >= 4096 {
            (0..self.n_pixels()).into_par_iter().map(dot_col).collect()
        } else {
            (0..self.n_pixels()).map(dot_col).collect()
        }
    }

    pub(crate) fn adjoint_flat(&self, y: &[f64]) -> Vec<f64> {
        let mut x = self.transpose_flat(y);
        for v in &mut x {
            *v *= self.adjoint_scale;
        }
        x
    }

    pub(crate) fn check_image(&self, x: &ImageGrid) -> Result<()> {
        if x.side() != self.grid_side {
            return Err(Error::shape("image side", self.grid_side, x.side()));
        }
        Ok(())
    }

    pub(crate) fn check_sensor(&self, y: &SensorData) -> Result<()> {
        if y.n_ch() != self.geometry.n_ch || y.n_t() != self.geometry.n_t {
            return Err(Error::shape(
                "sensor dims",
                format!("{}x{}", self.geometry.n_ch, self.geometry.n_t),
                format!("{}x{}", y.n_ch(), y.n_t()),
            ));
        }
        Ok(())
    }

    /// Writes the matrix as text triplets `row col weight`, one per line in
    /// row-major order.
    pub fn export_triplets(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut f = std::io::BufWriter::new(
            fs::File::create(path).map_err(|e| Error::persistence(path, e))?,
        );
        for r in 0..self.n_rows() {
            for (p, w) in self.row_entries(r) {
                writeln!(f, "{r} {p} {w}").map_err(|e| Error::persistence(path, e))?;
            }
        }
        f.flush().map_err(|e| Error::persistence(path, e))
    }
}

/// Computes `y = A x`.
pub fn apply_forward(matrix: &ModelMatrix, x: &ImageGrid) -> Result<SensorData> {
    matrix.check_image(x)?;
    let y = matrix.forward_flat(x.values());
    SensorData::new(matrix.geometry.n_ch, matrix.geometry.n_t, y)
}

/// Computes the back projection `adjoint_scale * A^T y`.
pub fn apply_adjoint(matrix: &ModelMatrix, y: &SensorData) -> Result<ImageGrid> {
    matrix.check_sensor(y)?;
    let x = matrix.adjoint_flat(y.values());
    ImageGrid::new(matrix.grid_side, matrix.grid_pixel_size, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{dot, RngSeed};
    use rand::Rng;

    fn test_geometry(n_ch: usize, n_t: usize) -> ArrayGeometry {
        // bins span radii [3.0, 3.0 + 0.075 * (n_t - 1)] mm
        ArrayGeometry {
            n_ch,
            radius: 5.3,
            sound_speed: 1.5,
            n_t,
            dt: 0.05,
            t0: 2.0,
        }
    }

    /// Independent dense construction straight from the kernel rule.
    fn dense_oracle(geometry: &ArrayGeometry, side: usize, pixel_size: f64) -> Vec<Vec<f64>> {
        let n_px = side * side;
        let half_width = geometry.sound_speed * geometry.dt / 2.0;
        let mut dense = vec![vec![0.0; n_px]; geometry.n_rows()];
        for ch in 0..geometry.n_ch {
            let (sx, sy) = geometry.sensor_position(ch);
            for k in 0..geometry.n_t {
                let r_k = geometry.bin_radius(k);
                for p in 0..n_px {
                    let (px, py) = pixel_center(side, pixel_size, p / side, p % side);
                    let d = ((px - sx).powi(2) + (py - sy).powi(2)).sqrt();
                    if (d - r_k).abs() < half_width {
                        dense[ch * geometry.n_t + k][p] = 1.0 - (d - r_k).abs() / half_width;
                    }
                }
            }
        }
        dense
    }

    #[test]
    fn rejects_sensors_inside_grid() {
        let geo = ArrayGeometry {
            radius: 1.0,
            ..test_geometry(8, 16)
        };
        let err = build_model_matrix(&geo, 32, 0.1).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn bin_center_pixel_gets_weight_one() {
        // Single interior pixel at the grid center: choose t0 so the sensor
        // distance lands exactly on bin 3.
        let side = 3;
        let pixel_size = 0.1;
        let radius = 4.0;
        let sound_speed = 1.6;
        let dt = 0.05;
        // center pixel at distance exactly `radius`
        let t0 = radius / sound_speed - 3.0 * dt;
        let geo = ArrayGeometry {
            n_ch: 4,
            radius,
            sound_speed,
            n_t: 8,
            dt,
            t0,
        };
        let m = build_model_matrix(&geo, side, pixel_size).unwrap();
        let center = (side * side) / 2;
        for ch in 0..4 {
            let entries: Vec<(usize, f64)> = m.row_entries(ch * 8 + 3).collect();
            let hit = entries.iter().find(|(p, _)| *p == center).unwrap();
            assert!((hit.1 - 1.0).abs() < 1e-12, "weight {}", hit.1);
        }
    }

    #[test]
    fn kernel_support_edge_is_excluded() {
        // Pixel exactly half a bin width away from the bin center gets zero
        // weight and is dropped from the row.
        let side = 3;
        let pixel_size = 0.1;
        let radius = 4.0;
        let sound_speed = 1.6;
        let dt = 0.05;
        let half_width = sound_speed * dt / 2.0;
        // center pixel distance = bin_radius(3) + half_width exactly
        let t0 = (radius - half_width) / sound_speed - 3.0 * dt;
        let geo = ArrayGeometry {
            n_ch: 4,
            radius,
            sound_speed,
            n_t: 8,
            dt,
            t0,
        };
        let m = build_model_matrix(&geo, side, pixel_size).unwrap();
        let center = (side * side) / 2;
        for ch in 0..4 {
            for k in [3usize, 4] {
                let on_edge = m
                    .row_entries(ch * 8 + k)
                    .any(|(p, w)| p == center && w != 0.0);
                assert!(!on_edge, "ch {ch} bin {k} should exclude the edge pixel");
            }
        }
    }

    #[test]
    fn matches_dense_oracle_and_column_sums_positive() {
        let geo = test_geometry(8, 64);
        let side = 32;
        let pixel_size = 0.1;
        let m = build_model_matrix(&geo, side, pixel_size).unwrap();
        let dense = dense_oracle(&geo, side, pixel_size);

        // structure and weights match the dense rule
        for r in 0..m.n_rows() {
            let mut row = vec![0.0; side * side];
            for (p, w) in m.row_entries(r) {
                row[p] = w;
            }
            for p in 0..side * side {
                assert!(
                    (row[p] - dense[r][p]).abs() < 1e-14,
                    "row {r} pixel {p}: {} vs {}",
                    row[p],
                    dense[r][p]
                );
            }
        }

        // all pixel radii lie inside the sampled interval for this setup
        let r_min = geo.bin_radius(0);
        let r_max = geo.bin_radius(geo.n_t - 1);
        for p in 0..side * side {
            let mut inside_all = true;
            for ch in 0..geo.n_ch {
                let (sx, sy) = geo.sensor_position(ch);
                let (px, py) = pixel_center(side, pixel_size, p / side, p % side);
                let d = ((px - sx).powi(2) + (py - sy).powi(2)).sqrt();
                if d < r_min || d > r_max {
                    inside_all = false;
                }
            }
            assert!(inside_all, "test geometry must cover the grid");
            let col_sum: f64 = dense.iter().map(|row| row[p]).sum();
            assert!(col_sum > 0.0, "column {p} sums to zero");
        }

        // forward agrees with the dense matrix-vector product
        let mut rng = RngSeed(11).rng();
        let x: Vec<f64> = (0..side * side).map(|_| rng.random::<f64>()).collect();
        let img = ImageGrid::new(side, pixel_size, x.clone()).unwrap();
        let y = apply_forward(&m, &img).unwrap();
        for r in 0..m.n_rows() {
            let expect = dot(&dense[r], &x);
            assert!((y.values()[r] - expect).abs() <= 1e-12 * expect.abs().max(1.0));
        }
    }

    #[test]
    fn forward_of_zero_is_zero_and_center_pixel_is_isotropic() {
        let geo = test_geometry(8, 96);
        let side = 33; // odd side so one pixel sits exactly at the center
        let m = build_model_matrix(&geo, side, 0.1).unwrap();

        let zero = ImageGrid::zeros(side, 0.1).unwrap();
        let y = apply_forward(&m, &zero).unwrap();
        assert!(y.values().iter().all(|&v| v == 0.0));

        let mut v = vec![0.0; side * side];
        v[(side / 2) * side + side / 2] = 1.0;
        let img = ImageGrid::new(side, 0.1, v).unwrap();
        let y = apply_forward(&m, &img).unwrap();
        let c0 = y.channel(0);
        for ch in 1..geo.n_ch {
            for (a, b) in y.channel(ch).iter().zip(c0) {
                assert!((a - b).abs() <= 1e-12, "channel {ch} differs: {a} vs {b}");
            }
        }
    }

    #[test]
    fn adjoint_identity_and_unit_row_extraction() {
        let geo = test_geometry(8, 48);
        let side = 16;
        let m = build_model_matrix(&geo, side, 0.1).unwrap();
        let mut rng = RngSeed(3).rng();

        for _ in 0..20 {
            let x: Vec<f64> = (0..side * side).map(|_| rng.random::<f64>() - 0.5).collect();
            let y: Vec<f64> = (0..m.n_rows()).map(|_| rng.random::<f64>() - 0.5).collect();
            let ax = m.forward_flat(&x);
            let aty = m.adjoint_flat(&y);
            let lhs = dot(&ax, &y);
            let rhs = dot(&x, &aty) / m.adjoint_scale();
            let scale = crate::types::l2_norm(&ax) * crate::types::l2_norm(&y);
            assert!((lhs - rhs).abs() <= 1e-12 * scale.max(1e-30));
        }

        // adjoint of zero
        let zero = SensorData::zeros(geo.n_ch, geo.n_t).unwrap();
        let img = apply_adjoint(&m, &zero).unwrap();
        assert!(img.values().iter().all(|&v| v == 0.0));

        // unit vector at one sensor sample scatters one scaled row
        let row = 3 * geo.n_t + 20;
        let mut yv = vec![0.0; m.n_rows()];
        yv[row] = 1.0;
        let y = SensorData::new(geo.n_ch, geo.n_t, yv).unwrap();
        let img = apply_adjoint(&m, &y).unwrap();
        let mut expect = vec![0.0; side * side];
        for (p, w) in m.row_entries(row) {
            expect[p] = w * m.adjoint_scale();
        }
        assert_eq!(img.values(), expect.as_slice());
    }

    #[test]
    fn empty_rows_outside_grid_distance_range() {
        let geo = test_geometry(4, 200); // long time axis overshoots the grid
        let side = 16;
        let pixel_size = 0.1;
        let m = build_model_matrix(&geo, side, pixel_size).unwrap();
        for ch in 0..geo.n_ch {
            let (sx, sy) = geo.sensor_position(ch);
            let (d_min, d_max) = (0..side * side)
                .map(|p| {
                    let (px, py) = pixel_center(side, pixel_size, p / side, p % side);
                    ((px - sx).powi(2) + (py - sy).powi(2)).sqrt()
                })
                .fold((f64::INFINITY, 0.0f64), |(lo, hi), d| (lo.min(d), hi.max(d)));
            for k in 0..geo.n_t {
                let r_k = geo.bin_radius(k);
                if r_k < d_min - geo.sound_speed * geo.dt || r_k > d_max + geo.sound_speed * geo.dt
                {
                    assert_eq!(
                        m.row_entries(ch * geo.n_t + k).count(),
                        0,
                        "row ({ch},{k}) should be empty"
                    );
                }
            }
        }
    }

    #[test]
    fn builds_are_deterministic() {
        let geo = test_geometry(16, 64);
        let a = build_model_matrix(&geo, 24, 0.1).unwrap();
        let b = build_model_matrix(&geo, 24, 0.1).unwrap();
        assert_eq!(a.row_ptr, b.row_ptr);
        assert_eq!(a.col_idx, b.col_idx);
        assert_eq!(
            a.row_weights
                .iter()
                .map(|w| w.to_bits())
                .collect::<Vec<_>>(),
            b.row_weights.iter().map(|w| w.to_bits()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let geo = test_geometry(4, 16);
        let m = build_model_matrix(&geo, 8, 0.1).unwrap();
        let img = ImageGrid::zeros(9, 0.1).unwrap();
        assert!(matches!(apply_forward(&m, &img), Err(Error::Shape { .. })));
        let y = SensorData::zeros(4, 15).unwrap();
        assert!(matches!(apply_adjoint(&m, &y), Err(Error::Shape { .. })));
    }
}
