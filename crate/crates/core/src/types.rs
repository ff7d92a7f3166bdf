//! Shared domain types: sensor buffers, calibration, labels, frames.

use nalgebra::{Matrix3, Matrix3x4, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One LiDAR return: position in sensor coordinates (meters) plus
/// reflectance intensity in `[0, 1]`.
///
/// Stored as f64 so rigid-body math keeps sub-nanometer precision; the
/// on-disk format is f32 and survives a load→write round trip bitwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub intensity: f64,
}

impl Point {
    pub fn new(x: f64, y: f64, z: f64, intensity: f64) -> Self {
        Point { x, y, z, intensity }
    }

    pub fn position(&self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }

    pub fn range(&self) -> f64 {
        self.position().norm()
    }
}

/// A LiDAR sweep. May be empty (e.g. after 100% signal loss).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PointCloud {
    pub points: Vec<Point>,
}

impl PointCloud {
    pub fn new(points: Vec<Point>) -> Self {
        PointCloud { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Checks the type invariants: finite coordinates, intensity in `[0, 1]`.
    pub fn validate(&self) -> Result<()> {
        for (index, p) in self.points.iter().enumerate() {
            for (value, component) in [(p.x, "x"), (p.y, "y"), (p.z, "z")] {
                if !value.is_finite() {
                    return Err(Error::NonFinitePoint { index, component });
                }
            }
            if !p.intensity.is_finite() || !(0.0..=1.0).contains(&p.intensity) {
                return Err(Error::NonFinitePoint {
                    index,
                    component: "intensity",
                });
            }
        }
        Ok(())
    }
}

/// 8-bit RGB camera frame, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageBuffer {
    pub width: u32,
    pub height: u32,
    /// `width * height * 3` bytes, R G B per pixel.
    pub pixels: Vec<u8>,
}

impl ImageBuffer {
    pub fn new(width: u32, height: u32, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidInput(format!(
                "image dimensions must be positive, got {width}x{height}"
            )));
        }
        let expected = width as usize * height as usize * 3;
        if pixels.len() != expected {
            return Err(Error::InvalidInput(format!(
                "pixel buffer length {} does not match {width}x{height}x3 = {expected}",
                pixels.len()
            )));
        }
        Ok(ImageBuffer {
            width,
            height,
            pixels,
        })
    }

    /// Solid-color image, mostly useful in tests.
    pub fn filled(width: u32, height: u32, rgb: [u8; 3]) -> Self {
        let mut pixels = Vec::with_capacity(width as usize * height as usize * 3);
        for _ in 0..(width as usize * height as usize) {
            pixels.extend_from_slice(&rgb);
        }
        ImageBuffer {
            width,
            height,
            pixels,
        }
    }

    pub fn pixel_count(&self) -> usize {
        self.width as usize * self.height as usize
    }

    pub fn get(&self, x: u32, y: u32) -> [u8; 3] {
        let i = (y as usize * self.width as usize + x as usize) * 3;
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }

    pub fn set(&mut self, x: u32, y: u32, rgb: [u8; 3]) {
        let i = (y as usize * self.width as usize + x as usize) * 3;
        self.pixels[i..i + 3].copy_from_slice(&rgb);
    }
}

/// KITTI-style camera/LiDAR calibration.
///
/// `velo_to_cam` is the rigid LiDAR→camera transform; its rotation block is
/// expected orthonormal up to the rounding carried by distributed text files.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationSet {
    /// 3x4 camera projection matrix (P2 in KITTI files), pixels.
    pub projection: Matrix3x4<f64>,
    /// 3x3 rectifying rotation (R0_rect).
    pub rectification: Matrix3<f64>,
    /// 3x4 rigid transform `[R | t]` from LiDAR to camera coordinates.
    pub velo_to_cam: Matrix3x4<f64>,
}

/// How far a 3x3 block deviates from a proper rotation:
/// `max(‖RᵀR − I‖∞, |det R − 1|)`.
pub fn rotation_deviation(r: &Matrix3<f64>) -> f64 {
    let gram = r.transpose() * r;
    let mut dev: f64 = (gram - Matrix3::identity()).abs().max();
    dev = dev.max((r.determinant() - 1.0).abs());
    dev
}

impl CalibrationSet {
    pub fn identity() -> Self {
        CalibrationSet {
            projection: Matrix3x4::identity(),
            rectification: Matrix3::identity(),
            velo_to_cam: Matrix3x4::identity(),
        }
    }

    pub fn velo_rotation(&self) -> Matrix3<f64> {
        self.velo_to_cam.fixed_view::<3, 3>(0, 0).into_owned()
    }

    pub fn velo_translation(&self) -> Vector3<f64> {
        self.velo_to_cam.column(3).into_owned()
    }

    /// Deviation of the two rotation blocks from orthonormality.
    /// Returns `(velo_to_cam rotation, rectification)` deviations.
    pub fn rotation_deviations(&self) -> (f64, f64) {
        (
            rotation_deviation(&self.velo_rotation()),
            rotation_deviation(&self.rectification),
        )
    }
}

/// KITTI object classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ObjectClass {
    Car,
    Van,
    Truck,
    Pedestrian,
    PersonSitting,
    Cyclist,
    Tram,
    Misc,
    DontCare,
}

impl ObjectClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            ObjectClass::Car => "Car",
            ObjectClass::Van => "Van",
            ObjectClass::Truck => "Truck",
            ObjectClass::Pedestrian => "Pedestrian",
            ObjectClass::PersonSitting => "Person_sitting",
            ObjectClass::Cyclist => "Cyclist",
            ObjectClass::Tram => "Tram",
            ObjectClass::Misc => "Misc",
            ObjectClass::DontCare => "DontCare",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "Car" => ObjectClass::Car,
            "Van" => ObjectClass::Van,
            "Truck" => ObjectClass::Truck,
            "Pedestrian" => ObjectClass::Pedestrian,
            "Person_sitting" => ObjectClass::PersonSitting,
            "Cyclist" => ObjectClass::Cyclist,
            "Tram" => ObjectClass::Tram,
            "Misc" => ObjectClass::Misc,
            "DontCare" => ObjectClass::DontCare,
            _ => return None,
        })
    }
}

impl std::fmt::Display for ObjectClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Axis-aligned 2D box in pixel coordinates, `(left, top, right, bottom)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox2D {
    pub left: f64,
    pub top: f64,
    pub right: f64,
    pub bottom: f64,
}

impl BBox2D {
    pub fn new(left: f64, top: f64, right: f64, bottom: f64) -> Self {
        BBox2D {
            left,
            top,
            right,
            bottom,
        }
    }

    pub fn width(&self) -> f64 {
        self.right - self.left
    }

    pub fn height(&self) -> f64 {
        self.bottom - self.top
    }

    pub fn area(&self) -> f64 {
        (self.width().max(0.0)) * (self.height().max(0.0))
    }
}

/// One row of a KITTI label file: an oriented 3D box with class and
/// difficulty attributes. Tracking rows additionally carry `frame` and
/// `track_id`; detection predictions carry `score`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectLabel {
    pub class: ObjectClass,
    /// Fraction of the object leaving image boundaries, `[0, 1]` (−1 for DontCare).
    pub truncation: f64,
    /// 0 = fully visible … 3 = unknown (−1 for DontCare).
    pub occlusion: i32,
    /// Observation angle, radians.
    pub alpha: f64,
    pub bbox2d: BBox2D,
    /// Box dimensions `(height, width, length)` in meters.
    pub dims: (f64, f64, f64),
    /// Bottom-center of the box in camera coordinates, meters.
    pub location: Vector3<f64>,
    /// Heading about the camera Y axis, radians in `[−π, π]`.
    pub rotation_y: f64,
    pub score: Option<f64>,
    pub track_id: Option<i64>,
    pub frame: Option<i64>,
}

impl ObjectLabel {
    /// Measured 2D box height in pixels; the moderate-difficulty gate input.
    pub fn bbox_height(&self) -> f64 {
        self.bbox2d.height()
    }

    pub fn volume(&self) -> f64 {
        let (h, w, l) = self.dims;
        h * w * l
    }
}

/// Dense-or-sparse depth image; `None` marks pixels without ground truth.
/// Values are millimeters.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthMap {
    pub width: u32,
    pub height: u32,
    pub depth_mm: Vec<Option<f64>>,
}

/// Millimeters per 16-bit raw unit: KITTI stores depth as `raw / 256` meters.
pub const MM_PER_RAW: f64 = 1000.0 / 256.0;

impl DepthMap {
    pub fn new(width: u32, height: u32, depth_mm: Vec<Option<f64>>) -> Result<Self> {
        if depth_mm.len() != width as usize * height as usize {
            return Err(Error::InvalidInput(format!(
                "depth buffer length {} does not match {width}x{height}",
                depth_mm.len()
            )));
        }
        Ok(DepthMap {
            width,
            height,
            depth_mm,
        })
    }

    /// Builds a map from raw 16-bit units (0 = absent).
    pub fn from_raw(width: u32, height: u32, raw: &[u16]) -> Result<Self> {
        let depth_mm = raw
            .iter()
            .map(|&r| {
                if r == 0 {
                    None
                } else {
                    Some(f64::from(r) * MM_PER_RAW)
                }
            })
            .collect();
        DepthMap::new(width, height, depth_mm)
    }

    /// Converts back to raw units; errors if a value does not quantize into
    /// a nonzero u16 (absent pixels encode as 0).
    pub fn to_raw(&self) -> Result<Vec<u16>> {
        self.depth_mm
            .iter()
            .enumerate()
            .map(|(index, d)| match d {
                None => Ok(0),
                Some(mm) => {
                    let raw = (mm / MM_PER_RAW).round();
                    if !(1.0..=f64::from(u16::MAX)).contains(&raw) {
                        Err(Error::DepthOutOfRange { value: *mm, index })
                    } else {
                        Ok(raw as u16)
                    }
                }
            })
            .collect()
    }

    /// Number of pixels with ground truth present (the `m` of the RMSE
    /// denominator).
    pub fn valid_count(&self) -> usize {
        self.depth_mm.iter().filter(|d| d.is_some()).count()
    }
}

/// Everything one timestamp contributes: camera frame, LiDAR sweep,
/// calibration, and optional depth ground truth.
#[derive(Debug, Clone)]
pub struct FrameBundle {
    pub frame_id: i64,
    /// File stem the frame was loaded from (e.g. "000042"), reused on output.
    pub stem: String,
    pub image: ImageBuffer,
    pub cloud: PointCloud,
    pub calib: CalibrationSet,
    pub depth_gt: Option<DepthMap>,
}
