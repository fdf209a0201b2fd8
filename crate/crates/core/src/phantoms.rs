//! Synthetic test images: disks, rings, and vessel-like branching
//! structures, all compactly supported away from the grid border.

use std::path::Path;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::io;
use crate::types::{ImageGrid, RngSeed};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhantomKind {
    Disks,
    Rings,
    /// Random-walk branches of varying thickness.
    Vessels,
}

/// Recipe for one synthetic image. All mass stays inside the centered disk
/// of radius `(0.5 - margin) * side` pixels; values lie in [0, 1].
#[derive(Debug, Clone, Copy)]
pub struct PhantomSpec {
    pub kind: PhantomKind,
    pub side: usize,
    /// Fraction of the side kept empty at the border.
    pub margin: f64,
    /// Number of disks, rings, or branches.
    pub count: usize,
    /// Disk/ring radii, or branch half-widths, in pixels.
    pub radius_range: (f64, f64),
    /// Structure intensities; must stay within [0.2, 1].
    pub intensity_range: (f64, f64),
    pub seed: RngSeed,
}

impl PhantomSpec {
    pub fn new(kind: PhantomKind, side: usize, count: usize, seed: RngSeed) -> Self {
        let radius_range = match kind {
            PhantomKind::Disks => (2.0, 0.12 * side as f64),
            PhantomKind::Rings => (3.0, 0.3 * side as f64),
            PhantomKind::Vessels => (0.8, 2.0),
        };
        PhantomSpec {
            kind,
            side,
            margin: 0.15,
            count,
            radius_range,
            intensity_range: (0.2, 1.0),
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.side < 4 {
            return Err(Error::config(format!("phantom side must be >= 4, got {}", self.side)));
        }
        if !(self.margin >= 0.0 && self.margin < 0.5) {
            return Err(Error::config(format!(
                "margin must lie in [0, 0.5), got {}",
                self.margin
            )));
        }
        let (rl, rh) = self.radius_range;
        if !(rl > 0.0 && rl <= rh && rh.is_finite()) {
            return Err(Error::config(format!("bad radius range ({rl}, {rh})")));
        }
        if rh >= self.allowed_radius() {
            return Err(Error::config(format!(
                "max radius {rh} does not fit inside the allowed disk of radius {}",
                self.allowed_radius()
            )));
        }
        let (il, ih) = self.intensity_range;
        if !(il >= 0.2 && il <= ih && ih <= 1.0) {
            return Err(Error::config(format!(
                "intensity range ({il}, {ih}) must sit inside [0.2, 1]"
            )));
        }
        Ok(())
    }

    /// Radius in pixels of the disk that may carry mass.
    pub fn allowed_radius(&self) -> f64 {
        (0.5 - self.margin) * self.side as f64
    }
}

fn uniform_in(rng: &mut impl Rng, range: (f64, f64)) -> f64 {
    if range.0 == range.1 {
        range.0
    } else {
        rng.random_range(range.0..range.1)
    }
}

/// Uniform point in the centered disk of radius `r`, as (row, col) offsets
/// from the image center.
fn point_in_disk(rng: &mut impl Rng, r: f64) -> (f64, f64) {
    let rad = r * rng.random::<f64>().sqrt();
    let ang = rng.random_range(0.0..std::f64::consts::TAU);
    (rad * ang.sin(), rad * ang.cos())
}

struct Canvas {
    side: usize,
    center: f64,
    allowed: f64,
    values: Vec<f64>,
}

impl Canvas {
    fn new(spec: &PhantomSpec) -> Self {
        Canvas {
            side: spec.side,
            center: (spec.side - 1) as f64 / 2.0,
            allowed: spec.allowed_radius(),
            values: vec![0.0; spec.side * spec.side],
        }
    }

    /// Max-blends `intensity * profile(distance to (row, col))` over the
    /// profile's support, skipping anything outside the allowed disk. The
    /// profile must map into [0, 1] and vanish for arguments >= `reach`.
    fn stamp(
        &mut self,
        row: f64,
        col: f64,
        reach: f64,
        intensity: f64,
        profile: impl Fn(f64) -> f64,
    ) {
        let lo_i = (row - reach).floor().max(0.0) as usize;
        let hi_i = ((row + reach).ceil() as usize).min(self.side - 1);
        let lo_j = (col - reach).floor().max(0.0) as usize;
        let hi_j = ((col + reach).ceil() as usize).min(self.side - 1);
        for i in lo_i..=hi_i {
            for j in lo_j..=hi_j {
                let dc = j as f64 - self.center;
                let dr = i as f64 - self.center;
                // support invariant: never write outside the allowed disk
                if (dc * dc + dr * dr).sqrt() > self.allowed {
                    continue;
                }
                let d = (i as f64 - row).hypot(j as f64 - col);
                let v = intensity * profile(d).clamp(0.0, 1.0);
                let cell = &mut self.values[i * self.side + j];
                if v > *cell {
                    *cell = v;
                }
            }
        }
    }
}

/// Deterministic in the spec (same spec, same image — bit for bit).
pub fn make_phantom(spec: &PhantomSpec) -> Result<ImageGrid> {
    spec.validate()?;
    let mut rng = spec.seed.rng();
    let mut canvas = Canvas::new(spec);
    match spec.kind {
        PhantomKind::Disks => {
            for _ in 0..spec.count {
                let r = uniform_in(&mut rng, spec.radius_range);
                let intensity = uniform_in(&mut rng, spec.intensity_range);
                let (dr, dc) = point_in_disk(&mut rng, (canvas.allowed - r).max(0.0));
                canvas.stamp(
                    canvas.center + dr,
                    canvas.center + dc,
                    r + 1.0,
                    intensity,
                    // unit plateau with a one-pixel linear edge
                    |d| r + 0.5 - d,
                );
            }
        }
        PhantomKind::Rings => {
            let thickness = 1.5;
            for _ in 0..spec.count {
                let r = uniform_in(&mut rng, spec.radius_range);
                let intensity = uniform_in(&mut rng, spec.intensity_range);
                let (dr, dc) = if spec.count == 1 {
                    // exactly centered: the image is then invariant under
                    // quarter turns bit for bit
                    (0.0, 0.0)
                } else {
                    point_in_disk(&mut rng, (canvas.allowed - r - thickness).max(0.0))
                };
                canvas.stamp(
                    canvas.center + dr,
                    canvas.center + dc,
                    r + thickness,
                    intensity,
                    move |d| 1.0 - (d - r).abs() / thickness,
                );
            }
        }
        PhantomKind::Vessels => {
            let mut trail: Vec<(f64, f64)> = Vec::new();
            for branch in 0..spec.count {
                let w = uniform_in(&mut rng, spec.radius_range);
                let intensity = uniform_in(&mut rng, spec.intensity_range);
                let (mut r, mut c) = if branch == 0 || trail.is_empty() {
                    let (dr, dc) = point_in_disk(&mut rng, 0.4 * canvas.allowed);
                    (canvas.center + dr, canvas.center + dc)
                } else {
                    trail[rng.random_range(0..trail.len())]
                };
                let mut heading = rng.random_range(0.0..std::f64::consts::TAU);
                let steps = (2.0 * canvas.allowed) as usize;
                for _ in 0..steps {
                    canvas.stamp(r, c, w + 1.0, intensity, |d| w + 0.5 - d);
                    trail.push((r, c));
                    heading += 0.25 * rng.sample::<f64, _>(StandardNormal);
                    let (nr, nc) = (r + heading.sin(), c + heading.cos());
                    let (dr, dc) = (nr - canvas.center, nc - canvas.center);
                    if (dr * dr + dc * dc).sqrt() > canvas.allowed - w - 1.0 {
                        break;
                    }
                    r = nr;
                    c = nc;
                }
            }
        }
    }
    ImageGrid::new(spec.side, 1.0, canvas.values)
}

/// Writes `n` phantoms (seeds `seed + 0 .. seed + n`) as PATB files plus a
/// `manifest.txt` listing their relative paths, and returns those paths.
pub fn make_dataset(
    template: &PhantomSpec,
    n: usize,
    out_dir: impl AsRef<Path>,
) -> Result<Vec<String>> {
    let out_dir = out_dir.as_ref();
    template.validate()?;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::persistence(out_dir, e))?;
    let mut entries = Vec::with_capacity(n);
    for i in 0..n {
        let mut spec = *template;
        spec.seed = RngSeed(template.seed.0 + i as u64);
        let img = make_phantom(&spec)?;
        let name = format!("phantom_{i:03}.patb");
        io::save_image(out_dir.join(&name), &img)?;
        entries.push(name);
    }
    io::save_manifest(out_dir.join("manifest.txt"), &entries)?;
    Ok(entries)
}
