//! Corruption synthesis and robustness evaluation for camera+LiDAR
//! perception datasets in KITTI format.
//!
//! The crate has three layers:
//!
//! - [`io`] parses and emits KITTI artifacts (Velodyne binaries, calibration
//!   text, label files, 16-bit depth PNGs, RGB images) losslessly, so
//!   corrupted datasets are drop-in replacements for the originals.
//! - [`corrupt`] synthesizes corruption patterns — weather (rain, fog,
//!   exposure), sensor noise and artifacts, calibration/synchronization
//!   misalignment, and signal loss — at discrete severity levels, with
//!   deterministic per-frame randomness.
//! - [`metrics`] and [`report`] score prediction files (average precision,
//!   MOTA, depth RMSE) and aggregate corrupted-over-clean robustness ratios.

pub mod corrupt;
pub mod error;
pub mod geometry;
pub mod io;
pub mod metrics;
pub mod report;
pub mod types;

pub use error::{Error, Result};
pub use types::{
    BBox2D, CalibrationSet, DepthMap, FrameBundle, ImageBuffer, ObjectClass, ObjectLabel, Point,
    PointCloud,
};

// geometry types (matrices, vectors) in the public API come from nalgebra
pub use nalgebra;

/// Version stamp recorded in manifests and reports.
pub fn toolkit_version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}
