//! KITTI Velodyne binary format: four little-endian f32 per point,
//! `(x, y, z, intensity)`.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::types::{Point, PointCloud};

const POINT_STRIDE: usize = 16;

pub fn parse_point_cloud(bytes: &[u8]) -> Result<PointCloud> {
    if !bytes.len().is_multiple_of(POINT_STRIDE) {
        return Err(Error::TruncatedPointCloud {
            length: bytes.len(),
            valid_end: bytes.len() - bytes.len() % POINT_STRIDE,
        });
    }
    let mut points = Vec::with_capacity(bytes.len() / POINT_STRIDE);
    for (index, record) in bytes.chunks_exact(POINT_STRIDE).enumerate() {
        let mut values = [0.0f32; 4];
        for (v, lane) in values.iter_mut().zip(record.chunks_exact(4)) {
            *v = f32::from_le_bytes([lane[0], lane[1], lane[2], lane[3]]);
        }
        for (value, component) in values.iter().zip(["x", "y", "z", "intensity"]) {
            if !value.is_finite() {
                return Err(Error::NonFinitePoint { index, component });
            }
        }
        points.push(Point::new(
            f64::from(values[0]),
            f64::from(values[1]),
            f64::from(values[2]),
            f64::from(values[3]),
        ));
    }
    Ok(PointCloud::new(points))
}

pub fn load_point_cloud(path: impl AsRef<Path>) -> Result<PointCloud> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_point_cloud(&bytes)
}

/// Serializes to the on-disk layout. Coordinates are narrowed to f32; values
/// that were loaded from disk narrow losslessly.
pub fn point_cloud_bytes(pc: &PointCloud) -> Vec<u8> {
    let mut bytes = Vec::with_capacity(pc.len() * POINT_STRIDE);
    for p in &pc.points {
        for v in [p.x, p.y, p.z, p.intensity] {
            bytes.extend_from_slice(&(v as f32).to_le_bytes());
        }
    }
    bytes
}

pub fn write_point_cloud(pc: &PointCloud, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, point_cloud_bytes(pc)).map_err(|e| Error::io(path, e))
}
