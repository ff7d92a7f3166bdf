//! Sensor misalignment: calibration rotation errors and inter-branch frame
//! delays.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{rotation_from_euler, EulerAngles};
use crate::types::{CalibrationSet, FrameBundle};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn parse(s: &str) -> Option<Axis> {
        match s {
            "x" | "X" => Some(Axis::X),
            "y" | "Y" => Some(Axis::Y),
            "z" | "Z" => Some(Axis::Z),
            _ => None,
        }
    }
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Camera,
    Lidar,
}

impl Branch {
    pub fn parse(s: &str) -> Option<Branch> {
        match s.to_ascii_lowercase().as_str() {
            "camera" | "c" => Some(Branch::Camera),
            "lidar" | "l" => Some(Branch::Lidar),
            _ => None,
        }
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Branch::Camera => "camera",
            Branch::Lidar => "lidar",
        })
    }
}

/// Pre-composes a rotation about one axis onto the LiDAR→camera extrinsics
/// (equivalent to the LiDAR mount rotating in place). The translation,
/// projection, and rectification are untouched, so the corruption lives
/// purely in calibration.
pub fn spatial_misalign(calib: &CalibrationSet, axis: Axis, degrees: f64) -> CalibrationSet {
    let angles = match axis {
        Axis::X => EulerAngles::new(degrees, 0.0, 0.0),
        Axis::Y => EulerAngles::new(0.0, degrees, 0.0),
        Axis::Z => EulerAngles::new(0.0, 0.0, degrees),
    };
    let perturbation = rotation_from_euler(angles);
    let rotation = perturbation * calib.velo_rotation();
    let mut velo_to_cam = calib.velo_to_cam;
    velo_to_cam.fixed_view_mut::<3, 3>(0, 0).copy_from(&rotation);
    CalibrationSet {
        projection: calib.projection,
        rectification: calib.rectification,
        velo_to_cam,
    }
}

/// A one-branch signal delay, converted to whole frames at the dataset
/// frame rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TemporalShift {
    pub branch: Branch,
    pub delay_s: f64,
    pub frame_rate_hz: f64,
}

impl TemporalShift {
    pub fn new(branch: Branch, delay_s: f64, frame_rate_hz: f64) -> Result<Self> {
        if !delay_s.is_finite() || delay_s < 0.0 {
            return Err(Error::InvalidInput(format!(
                "delay must be non-negative, got {delay_s}"
            )));
        }
        if !frame_rate_hz.is_finite() || frame_rate_hz <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "frame rate must be positive, got {frame_rate_hz}"
            )));
        }
        Ok(TemporalShift {
            branch,
            delay_s,
            frame_rate_hz,
        })
    }

    /// Whole-frame shift: `round(delay · frame_rate)`.
    pub fn frame_shift(&self) -> i64 {
        (self.delay_s * self.frame_rate_hz).round() as i64
    }
}

/// Which source frames feed one output frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FramePairing {
    pub output_frame: i64,
    pub camera_source: i64,
    pub lidar_source: i64,
}

/// Computes the delayed pairing over consecutive frame ids. Leading frames
/// whose delayed source would precede the sequence are dropped rather than
/// zero-filled.
pub fn pairing_plan(frame_ids: &[i64], shift: &TemporalShift) -> Result<Vec<FramePairing>> {
    if let Some(&first) = frame_ids.first() {
        for (offset, &id) in frame_ids.iter().enumerate() {
            let expected = first + offset as i64;
            if id != expected {
                return Err(Error::NonSequentialFrames {
                    expected,
                    found: id,
                });
            }
        }
    }
    let k = shift.frame_shift();
    let first = frame_ids.first().copied().unwrap_or(0);
    Ok(frame_ids
        .iter()
        .filter(|&&id| id - k >= first)
        .map(|&id| {
            let delayed = id - k;
            match shift.branch {
                Branch::Camera => FramePairing {
                    output_frame: id,
                    camera_source: delayed,
                    lidar_source: id,
                },
                Branch::Lidar => FramePairing {
                    output_frame: id,
                    camera_source: id,
                    lidar_source: delayed,
                },
            }
        })
        .collect())
}

/// Re-pairs an ordered sequence so the delayed branch of frame `t` carries
/// the data of frame `t − round(delay·rate)`. Nothing is fabricated: every
/// emitted part exists verbatim in the input.
pub fn temporal_misalign(
    frames: &[FrameBundle],
    shift: &TemporalShift,
) -> Result<Vec<FrameBundle>> {
    let ids: Vec<i64> = frames.iter().map(|f| f.frame_id).collect();
    let plan = pairing_plan(&ids, shift)?;
    let first = ids.first().copied().unwrap_or(0);
    let index_of = |id: i64| (id - first) as usize;
    Ok(plan
        .iter()
        .map(|pairing| {
            let base = &frames[index_of(pairing.output_frame)];
            let mut bundle = base.clone();
            bundle.image = frames[index_of(pairing.camera_source)].image.clone();
            bundle.cloud = frames[index_of(pairing.lidar_source)].cloud.clone();
            bundle
        })
        .collect())
}
