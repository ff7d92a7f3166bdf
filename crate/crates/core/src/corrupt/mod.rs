//! Corruption synthesis: pattern taxonomy, severity schedules, and the
//! deterministic per-frame engine.

pub mod camera;
mod engine;
pub mod lidar;
mod misalign;
mod rng;
mod severity;

pub use engine::{corrupt_dataset, corrupt_frame, FrameStatus, Manifest, ManifestFrame};
pub use misalign::{
    pairing_plan, spatial_misalign, temporal_misalign, Axis, Branch, FramePairing, TemporalShift,
};
pub use rng::{derive_rng, frame_seed};
pub use severity::SeverityTable;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The corruption taxonomy: weather, sensor noise/artifacts, misalignment,
/// and signal loss, over the camera and LiDAR branches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pattern {
    /// Rain: photometric streaks + veiling on the image, extinction and
    /// scatter on the point cloud, coupled through one rainfall rate.
    Rain,
    /// Fog: exponential attenuation toward airlight on the image, extinction
    /// and scatter on the point cloud, coupled through one visibility.
    Fog,
    Brightness,
    Darkness,
    /// Radial lens distortion.
    Distortion,
    MotionBlur,
    DefocusBlur,
    GaussianNoiseCamera,
    GaussianNoiseLidar,
    ImpulseNoiseCamera,
    ImpulseNoiseLidar,
    /// Rotation error injected into the LiDAR→camera extrinsic calibration.
    SpatialMisalignment,
    /// One branch delayed by whole frames.
    TemporalMisalignment,
    SignalLossCamera,
    SignalLossLidar,
}

/// All patterns in canonical (report column) order.
pub const ALL_PATTERNS: [Pattern; 15] = [
    Pattern::Rain,
    Pattern::Fog,
    Pattern::Brightness,
    Pattern::Darkness,
    Pattern::Distortion,
    Pattern::MotionBlur,
    Pattern::DefocusBlur,
    Pattern::GaussianNoiseCamera,
    Pattern::GaussianNoiseLidar,
    Pattern::ImpulseNoiseCamera,
    Pattern::ImpulseNoiseLidar,
    Pattern::SpatialMisalignment,
    Pattern::TemporalMisalignment,
    Pattern::SignalLossCamera,
    Pattern::SignalLossLidar,
];

impl Pattern {
    /// Short code used on the command line and in manifests.
    pub fn code(&self) -> &'static str {
        match self {
            Pattern::Rain => "RN",
            Pattern::Fog => "FG",
            Pattern::Brightness => "BR",
            Pattern::Darkness => "DK",
            Pattern::Distortion => "DT",
            Pattern::MotionBlur => "MB",
            Pattern::DefocusBlur => "DB",
            Pattern::GaussianNoiseCamera => "GN_C",
            Pattern::GaussianNoiseLidar => "GN_L",
            Pattern::ImpulseNoiseCamera => "IN_C",
            Pattern::ImpulseNoiseLidar => "IN_L",
            Pattern::SpatialMisalignment => "SM",
            Pattern::TemporalMisalignment => "TM",
            Pattern::SignalLossCamera => "LOSS_C",
            Pattern::SignalLossLidar => "LOSS_L",
        }
    }

    /// Column label used in rendered report tables.
    pub fn column_label(&self) -> &'static str {
        match self {
            Pattern::GaussianNoiseCamera => "GN(C)",
            Pattern::GaussianNoiseLidar => "GN(L)",
            Pattern::ImpulseNoiseCamera => "IN(C)",
            Pattern::ImpulseNoiseLidar => "IN(L)",
            Pattern::SignalLossCamera => "LOSS(C)",
            Pattern::SignalLossLidar => "LOSS(L)",
            other => other.code(),
        }
    }

    pub fn parse_code(code: &str) -> Option<Pattern> {
        ALL_PATTERNS
            .iter()
            .find(|p| p.code().eq_ignore_ascii_case(code))
            .copied()
    }

    /// Highest severity level: 3 for the core taxonomy, 5 for temporal
    /// misalignment and signal loss.
    pub fn max_severity(&self) -> u8 {
        match self {
            Pattern::TemporalMisalignment
            | Pattern::SignalLossCamera
            | Pattern::SignalLossLidar => 5,
            _ => 3,
        }
    }

    /// Which parts of a frame the pattern may modify:
    /// `(image, point cloud, calibration)`.
    pub fn touches(&self) -> (bool, bool, bool) {
        match self {
            Pattern::Rain | Pattern::Fog => (true, true, false),
            Pattern::Brightness
            | Pattern::Darkness
            | Pattern::Distortion
            | Pattern::MotionBlur
            | Pattern::DefocusBlur
            | Pattern::GaussianNoiseCamera
            | Pattern::ImpulseNoiseCamera
            | Pattern::SignalLossCamera => (true, false, false),
            Pattern::GaussianNoiseLidar
            | Pattern::ImpulseNoiseLidar
            | Pattern::SignalLossLidar => (false, true, false),
            Pattern::SpatialMisalignment => (false, false, true),
            // Temporal misalignment re-pairs whole frames; which branch moves
            // depends on the spec's branch field.
            Pattern::TemporalMisalignment => (true, true, false),
        }
    }
}

impl std::fmt::Display for Pattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.code())
    }
}

/// One corruption job: pattern, severity level, and the master seed.
///
/// `axis` only matters for spatial misalignment and `branch` only for
/// temporal misalignment; both have the defaults used throughout the
/// benchmark (Y axis, LiDAR branch). `param` overrides the severity table's
/// physical value while keeping the level for seeding and bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorruptionSpec {
    pub pattern: Pattern,
    pub severity: u8,
    pub seed: u64,
    #[serde(default = "default_axis")]
    pub axis: Axis,
    #[serde(default = "default_branch")]
    pub branch: Branch,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param: Option<f64>,
}

fn default_axis() -> Axis {
    Axis::Y
}

fn default_branch() -> Branch {
    Branch::Lidar
}

impl CorruptionSpec {
    pub fn new(pattern: Pattern, severity: u8, seed: u64) -> Result<Self> {
        let max = pattern.max_severity();
        if severity < 1 || severity > max {
            return Err(Error::SeverityOutOfRange {
                pattern: pattern.code(),
                severity,
                max,
            });
        }
        Ok(CorruptionSpec {
            pattern,
            severity,
            seed,
            axis: default_axis(),
            branch: default_branch(),
            param: None,
        })
    }

    pub fn with_axis(mut self, axis: Axis) -> Self {
        self.axis = axis;
        self
    }

    pub fn with_branch(mut self, branch: Branch) -> Self {
        self.branch = branch;
        self
    }

    pub fn with_param(mut self, param: f64) -> Self {
        self.param = Some(param);
        self
    }

    /// Level index into a severity table array (0-based).
    pub(crate) fn level_index(&self) -> usize {
        usize::from(self.severity - 1)
    }
}
