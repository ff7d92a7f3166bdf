//! Rigid-body math, LiDAR→image projection, and oriented 3D box overlap.

mod iou;
mod polygon;

pub use iou::{box_iou_2d, box_iou_3d, ground_corners};
pub use polygon::{clip_convex, polygon_area};

use nalgebra::{Matrix3, Vector3, Vector4};

use crate::error::{Error, Result};
use crate::types::{rotation_deviation, CalibrationSet, Point, PointCloud};

/// Rotation angles in degrees about the x (roll), y (pitch), and z (yaw)
/// axes. Each is normalized into `(−180, 180]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerAngles {
    pub roll_deg: f64,
    pub pitch_deg: f64,
    pub yaw_deg: f64,
}

fn wrap_deg(a: f64) -> f64 {
    let mut r = a % 360.0;
    if r <= -180.0 {
        r += 360.0;
    } else if r > 180.0 {
        r -= 360.0;
    }
    r
}

impl EulerAngles {
    pub fn new(roll_deg: f64, pitch_deg: f64, yaw_deg: f64) -> Self {
        EulerAngles {
            roll_deg: wrap_deg(roll_deg),
            pitch_deg: wrap_deg(pitch_deg),
            yaw_deg: wrap_deg(yaw_deg),
        }
    }

    pub fn zero() -> Self {
        EulerAngles::new(0.0, 0.0, 0.0)
    }
}

/// Builds the rotation matrix `Rz(yaw) · Ry(pitch) · Rx(roll)`.
///
/// The composition order is fixed so that a given angle triple always maps
/// to the same perturbation.
pub fn rotation_from_euler(angles: EulerAngles) -> Matrix3<f64> {
    let (roll, pitch, yaw) = (
        angles.roll_deg.to_radians(),
        angles.pitch_deg.to_radians(),
        angles.yaw_deg.to_radians(),
    );
    let (sr, cr) = roll.sin_cos();
    let (sp, cp) = pitch.sin_cos();
    let (sy, cy) = yaw.sin_cos();

    let rx = Matrix3::new(1.0, 0.0, 0.0, 0.0, cr, -sr, 0.0, sr, cr);
    let ry = Matrix3::new(cp, 0.0, sp, 0.0, 1.0, 0.0, -sp, 0.0, cp);
    let rz = Matrix3::new(cy, -sy, 0.0, sy, cy, 0.0, 0.0, 0.0, 1.0);

    rz * ry * rx
}

/// Proper rigid transform: orthonormal rotation (det +1) plus translation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidTransform {
    rotation: Matrix3<f64>,
    translation: Vector3<f64>,
}

impl RigidTransform {
    /// Fails if the rotation block deviates from orthonormality by more
    /// than 1e-9.
    pub fn new(rotation: Matrix3<f64>, translation: Vector3<f64>) -> Result<Self> {
        let dev = rotation_deviation(&rotation);
        if dev > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "rotation block is not orthonormal (deviation {dev:.3e})"
            )));
        }
        Ok(RigidTransform {
            rotation,
            translation,
        })
    }

    pub fn identity() -> Self {
        RigidTransform {
            rotation: Matrix3::identity(),
            translation: Vector3::zeros(),
        }
    }

    pub fn from_euler(angles: EulerAngles, translation: Vector3<f64>) -> Self {
        RigidTransform {
            rotation: rotation_from_euler(angles),
            translation,
        }
    }

    pub fn rotation(&self) -> &Matrix3<f64> {
        &self.rotation
    }

    pub fn translation(&self) -> &Vector3<f64> {
        &self.translation
    }

    pub fn inverse(&self) -> Self {
        let rt = self.rotation.transpose();
        RigidTransform {
            rotation: rt,
            translation: -(rt * self.translation),
        }
    }

    pub fn apply_point(&self, p: Vector3<f64>) -> Vector3<f64> {
        self.rotation * p + self.translation
    }
}

/// Maps every point through `R·p + t`; intensity and count are unchanged.
pub fn apply_transform(pc: &PointCloud, t: &RigidTransform) -> PointCloud {
    let points = pc
        .points
        .iter()
        .map(|p| {
            let q = t.apply_point(p.position());
            Point::new(q.x, q.y, q.z, p.intensity)
        })
        .collect();
    PointCloud::new(points)
}

/// A LiDAR return projected into the image plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectedPoint {
    pub u: f64,
    pub v: f64,
    /// Depth along the rectified camera optical axis, meters.
    pub depth: f64,
}

/// Projects LiDAR points through `P2 · R0_rect · Tr_velo_to_cam`.
///
/// Points with rectified-camera depth ≤ 0 are excluded; the rest are mapped
/// by perspective division.
pub fn project_to_image(pc: &PointCloud, calib: &CalibrationSet) -> Vec<ProjectedPoint> {
    let mut out = Vec::with_capacity(pc.len());
    for p in &pc.points {
        let hom = Vector4::new(p.x, p.y, p.z, 1.0);
        let cam = calib.velo_to_cam * hom;
        let rect = calib.rectification * cam;
        if rect.z <= 0.0 {
            continue;
        }
        let img = calib.projection * Vector4::new(rect.x, rect.y, rect.z, 1.0);
        out.push(ProjectedPoint {
            u: img.x / img.z,
            v: img.y / img.z,
            depth: rect.z,
        });
    }
    out
}
