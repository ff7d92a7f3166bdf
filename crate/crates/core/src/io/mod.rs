//! Lossless KITTI-format readers and writers.
//!
//! All loaders are pure functions of the file bytes: any input either
//! parses or yields a structured [`crate::Error`], and a write→load round
//! trip reproduces the in-memory value (bitwise for point clouds,
//! raw-value-exact for depth PNGs, 1e-9-exact for calibration text).

mod calib;
mod dataset;
mod depth;
mod image_io;
mod labels;
mod velodyne;

pub use calib::{
    calibration_text, load_calibration, parse_calibration, write_calibration, CalibrationFile,
    CalibrationWarning,
};
pub use dataset::{
    load_frame, persist_frame, scan_dataset, FrameEntry, FramePaths, CALIB_DIR, DEPTH_DIR,
    IMAGE_DIR, VELODYNE_DIR,
};
pub use depth::{decode_depth_png, encode_depth_png, load_depth_map, write_depth_map};
pub use image_io::{decode_image_png, encode_image_png, load_image, write_image};
pub use labels::{format_label, labels_text, load_labels, parse_labels, write_labels, LabelTask};
pub use velodyne::{load_point_cloud, parse_point_cloud, point_cloud_bytes, write_point_cloud};
