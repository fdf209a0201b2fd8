//! File persistence: the PATB container format, PGM export, and the small
//! text formats (channel masks, dataset manifests).
//!
//! PATB layout, all integers little-endian:
//!
//! ```text
//! offset 0   4 bytes   magic "PATB"
//! offset 4   1 byte    version (1)
//! offset 5   1 byte    kind (0 = image, 1 = sensor)
//! offset 6   8 bytes   two u32 dims: (side, side) or (n_ch, n_t)
//! offset 14  8*n       f64 values
//! ```
//!
//! The image `pixel_size` is deliberately not persisted; it is acquisition
//! metadata carried by the run configuration, and loaders default it to 1.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::measurement::ChannelMask;
use crate::types::{ImageGrid, SensorData};

const MAGIC: &[u8; 4] = b"PATB";
const VERSION: u8 = 1;
const KIND_IMAGE: u8 = 0;
const KIND_SENSOR: u8 = 1;
const HEADER_LEN: usize = 14;

/// Payload of a PATB container.
#[derive(Debug, Clone, PartialEq)]
pub enum Container {
    Image(ImageGrid),
    Sensor(SensorData),
}

/// Serializes an image or sensor block to the PATB format. Round-trips
/// bit-exactly through [`load_container`].
pub fn save_container(path: impl AsRef<Path>, payload: &Container) -> Result<()> {
    let path = path.as_ref();
    let (kind, d0, d1, values) = match payload {
        Container::Image(img) => (KIND_IMAGE, img.side(), img.side(), img.values()),
        Container::Sensor(s) => (KIND_SENSOR, s.n_ch(), s.n_t(), s.values()),
    };
    let mut buf = Vec::with_capacity(HEADER_LEN + 8 * values.len());
    buf.extend_from_slice(MAGIC);
    buf.push(VERSION);
    buf.push(kind);
    buf.extend_from_slice(&(d0 as u32).to_le_bytes());
    buf.extend_from_slice(&(d1 as u32).to_le_bytes());
    for v in values {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    fs::write(path, &buf).map_err(|e| Error::persistence(path, e))
}

/// Reads a PATB container, validating magic, version, kind and length.
/// Loaded images get `pixel_size = 1.0`.
pub fn load_container(path: impl AsRef<Path>) -> Result<Container> {
    let path = path.as_ref();
    let buf = fs::read(path).map_err(|e| Error::persistence(path, e))?;
    if buf.len() < HEADER_LEN {
        return Err(Error::format(path, "length"));
    }
    if &buf[0..4] != MAGIC {
        return Err(Error::format(path, "magic"));
    }
    if buf[4] != VERSION {
        return Err(Error::format(path, "version"));
    }
    let kind = buf[5];
    if kind > KIND_SENSOR {
        return Err(Error::format(path, "kind"));
    }
    let d0 = u32::from_le_bytes(buf[6..10].try_into().unwrap()) as usize;
    let d1 = u32::from_le_bytes(buf[10..14].try_into().unwrap()) as usize;
    let n = d0
        .checked_mul(d1)
        .ok_or_else(|| Error::format(path, "dims"))?;
    let expected = HEADER_LEN + 8 * n;
    if buf.len() != expected {
        return Err(Error::format(path, "length"));
    }
    let values: Vec<f64> = buf[HEADER_LEN..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    match kind {
        KIND_IMAGE => {
            if d0 != d1 {
                return Err(Error::format(path, "dims"));
            }
            let img = ImageGrid::new(d0, 1.0, values).map_err(|_| Error::format(path, "values"))?;
            Ok(Container::Image(img))
        }
        _ => {
            let s = SensorData::new(d0, d1, values).map_err(|_| Error::format(path, "values"))?;
            Ok(Container::Sensor(s))
        }
    }
}

pub fn save_image(path: impl AsRef<Path>, img: &ImageGrid) -> Result<()> {
    save_container(path, &Container::Image(img.clone()))
}

/// Loads a container and requires it to hold an image.
pub fn load_image(path: impl AsRef<Path>) -> Result<ImageGrid> {
    match load_container(&path)? {
        Container::Image(img) => Ok(img),
        Container::Sensor(_) => Err(Error::format(path.as_ref(), "kind")),
    }
}

pub fn save_sensor(path: impl AsRef<Path>, data: &SensorData) -> Result<()> {
    save_container(path, &Container::Sensor(data.clone()))
}

/// Loads a container and requires it to hold sensor data.
pub fn load_sensor(path: impl AsRef<Path>) -> Result<SensorData> {
    match load_container(&path)? {
        Container::Image(_) => Err(Error::format(path.as_ref(), "kind")),
        Container::Sensor(s) => Ok(s),
    }
}

/// Writes an 8-bit binary PGM (P5). Values are mapped linearly from the
/// image's [min, max] onto [0, 255] with round-half-up; a constant image
/// maps to mid-gray 128.
pub fn export_pgm(image: &ImageGrid, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let side = image.side();
    let (lo, hi) = image.min_max();
    let range = hi - lo;
    let mut buf = Vec::with_capacity(32 + side * side);
    buf.extend_from_slice(format!("P5\n{side} {side}\n255\n").as_bytes());
    for &v in image.values() {
        let level = if range == 0.0 {
            128u8
        } else {
            ((v - lo) / range * 255.0 + 0.5).floor().clamp(0.0, 255.0) as u8
        };
        buf.push(level);
    }
    fs::write(path, &buf).map_err(|e| Error::persistence(path, e))
}

/// Writes a channel mask as text: first line the total channel count, then
/// one kept index per line.
pub fn save_mask(path: impl AsRef<Path>, mask: &ChannelMask) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    out.push_str(&format!("{}\n", mask.n_ch()));
    for &ch in mask.kept() {
        out.push_str(&format!("{ch}\n"));
    }
    fs::write(path, out).map_err(|e| Error::persistence(path, e))
}

pub fn load_mask(path: impl AsRef<Path>) -> Result<ChannelMask> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::persistence(path, e))?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let n_ch: usize = lines
        .next()
        .and_then(|l| l.trim().parse().ok())
        .ok_or_else(|| Error::format(path, "n_ch"))?;
    let kept: Vec<usize> = lines
        .map(|l| l.trim().parse())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::format(path, "index"))?;
    ChannelMask::new(n_ch, kept)
}

/// Writes a dataset manifest: one relative path per line.
pub fn save_manifest(path: impl AsRef<Path>, entries: &[String]) -> Result<()> {
    let path = path.as_ref();
    let mut f = fs::File::create(path).map_err(|e| Error::persistence(path, e))?;
    for e in entries {
        writeln!(f, "{e}").map_err(|err| Error::persistence(path, err))?;
    }
    Ok(())
}

pub fn load_manifest(path: impl AsRef<Path>) -> Result<Vec<String>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::persistence(path, e))?;
    Ok(text
        .lines()
        .map(|l| l.trim())
        .filter(|l| !l.is_empty())
        .map(String::from)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn image_container_is_46_bytes_and_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("img.patb");
        let img = ImageGrid::new(2, 1.0, vec![0.0, 0.5, 1.0, 0.25]).unwrap();
        save_image(&p, &img).unwrap();
        assert_eq!(fs::metadata(&p).unwrap().len(), 46);
        let back = load_image(&p).unwrap();
        assert_eq!(back.side(), 2);
        assert_eq!(back.values(), img.values());
    }

    #[test]
    fn sensor_zeros_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.patb");
        let s = SensorData::zeros(4, 8).unwrap();
        save_sensor(&p, &s).unwrap();
        let raw = fs::read(&p).unwrap();
        assert_eq!(raw[5], 1, "kind byte");
        let back = load_sensor(&p).unwrap();
        assert_eq!(back, s);
        assert!(back.values().iter().all(|&v| v == 0.0));
        assert_eq!(back.values().len(), 32);
    }

    #[test]
    fn unwritable_path_is_persistence_error() {
        let img = ImageGrid::zeros(2, 1.0).unwrap();
        let err = save_image("/nonexistent-dir/x.patb", &img).unwrap_err();
        assert!(matches!(err, Error::Persistence { .. }));
        let err = save_image("", &img).unwrap_err();
        assert!(matches!(err, Error::Persistence { .. }));
    }

    #[test]
    fn bad_magic_version_and_truncation() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.patb");
        let img = ImageGrid::zeros(2, 1.0).unwrap();
        save_image(&p, &img).unwrap();
        let good = fs::read(&p).unwrap();

        let mut bad = good.clone();
        bad[0..4].copy_from_slice(b"XXXX");
        fs::write(&p, &bad).unwrap();
        match load_container(&p).unwrap_err() {
            Error::Format { field, .. } => assert_eq!(field, "magic"),
            e => panic!("unexpected error {e}"),
        }

        let mut bad = good.clone();
        bad[4] = 9;
        fs::write(&p, &bad).unwrap();
        match load_container(&p).unwrap_err() {
            Error::Format { field, .. } => assert_eq!(field, "version"),
            e => panic!("unexpected error {e}"),
        }

        let mut bad = good.clone();
        bad[5] = 2;
        fs::write(&p, &bad).unwrap();
        match load_container(&p).unwrap_err() {
            Error::Format { field, .. } => assert_eq!(field, "kind"),
            e => panic!("unexpected error {e}"),
        }

        fs::write(&p, &good[..good.len() - 5]).unwrap();
        match load_container(&p).unwrap_err() {
            Error::Format { field, .. } => assert_eq!(field, "length"),
            e => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn pgm_endpoints_midpoint_and_constant() {
        let dir = tempfile::tempdir().unwrap();

        let p = dir.path().join("a.pgm");
        let img = ImageGrid::new(2, 1.0, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        export_pgm(&img, &p).unwrap();
        let raw = fs::read(&p).unwrap();
        assert_eq!(&raw[raw.len() - 4..], &[0, 255, 255, 0]);

        let img = ImageGrid::new(2, 1.0, vec![0.0, 0.5, 1.0, 1.0]).unwrap();
        export_pgm(&img, &p).unwrap();
        let raw = fs::read(&p).unwrap();
        assert_eq!(raw[raw.len() - 3], 128, "0.5 rounds half up to 128");

        let img = ImageGrid::new(2, 1.0, vec![0.7; 4]).unwrap();
        export_pgm(&img, &p).unwrap();
        let raw = fs::read(&p).unwrap();
        assert_eq!(&raw[raw.len() - 4..], &[128, 128, 128, 128]);
    }

    #[test]
    fn mask_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.mask");
        let mask = ChannelMask::new(8, vec![0, 3, 7]).unwrap();
        save_mask(&p, &mask).unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "8\n0\n3\n7\n");
        assert_eq!(load_mask(&p).unwrap(), mask);
    }

    proptest! {
        // Bit-exact round trip for arbitrary finite payloads.
        #[test]
        fn container_round_trip_is_bit_exact(
            side in 2usize..6,
            seed in any::<u64>(),
        ) {
            use rand::Rng;
            let mut rng = crate::types::RngSeed(seed).rng();
            let values: Vec<f64> = (0..side * side)
                .map(|_| f64::from_bits(rng.random::<u64>()))
                .map(|v| if v.is_finite() { v } else { 0.5 })
                .collect();
            let img = ImageGrid::new(side, 1.0, values).unwrap();
            let dir = tempfile::tempdir().unwrap();
            let p = dir.path().join("rt.patb");
            save_image(&p, &img).unwrap();
            let back = load_image(&p).unwrap();
            prop_assert_eq!(back.side(), img.side());
            for (a, b) in back.values().iter().zip(img.values()) {
                prop_assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }
}
