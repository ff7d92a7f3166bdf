//! KITTI directory layout: frame discovery, loading, and persisting.
//!
//! A dataset directory holds `velodyne/*.bin`, `image_2/*.png`,
//! `calib/*.txt`, and optionally `depth/*.png`, all keyed by a shared
//! numeric stem. Output directories mirror the same relative paths.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::types::FrameBundle;

use super::{
    load_calibration, load_depth_map, load_image, load_point_cloud, write_calibration,
    write_depth_map, write_image, write_point_cloud,
};

pub const IMAGE_DIR: &str = "image_2";
pub const VELODYNE_DIR: &str = "velodyne";
pub const CALIB_DIR: &str = "calib";
pub const DEPTH_DIR: &str = "depth";

/// One discovered frame and the files backing it.
#[derive(Debug, Clone)]
pub struct FrameEntry {
    pub stem: String,
    pub frame_id: i64,
    pub image: PathBuf,
    pub cloud: PathBuf,
    pub calib: PathBuf,
    pub depth: Option<PathBuf>,
}

/// Output paths produced for one persisted frame, relative to the dataset
/// root.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct FramePaths {
    pub image: String,
    pub cloud: String,
    pub calib: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<String>,
}

/// Discovers frames under `dir`, sorted by frame id. Every Velodyne sweep
/// must have a matching image and calibration; depth ground truth is
/// optional.
pub fn scan_dataset(dir: impl AsRef<Path>) -> Result<Vec<FrameEntry>> {
    let dir = dir.as_ref();
    let velo_dir = dir.join(VELODYNE_DIR);
    if !velo_dir.is_dir() {
        return Err(Error::EmptyDataset { dir: dir.into() });
    }

    let mut entries = Vec::new();
    let read = fs::read_dir(&velo_dir).map_err(|e| Error::io(&velo_dir, e))?;
    for item in read {
        let item = item.map_err(|e| Error::io(&velo_dir, e))?;
        let path = item.path();
        if path.extension().and_then(|e| e.to_str()) != Some("bin") {
            continue;
        }
        let stem = match path.file_stem().and_then(|s| s.to_str()) {
            Some(s) => s.to_string(),
            None => continue,
        };
        let frame_id: i64 = stem.parse().map_err(|_| {
            Error::InvalidInput(format!(
                "frame stem {stem:?} is not numeric; KITTI-style numeric stems are required"
            ))
        })?;
        let image = dir.join(IMAGE_DIR).join(format!("{stem}.png"));
        if !image.is_file() {
            return Err(Error::IncompleteFrame {
                stem,
                artifact: "image",
            });
        }
        let calib = dir.join(CALIB_DIR).join(format!("{stem}.txt"));
        if !calib.is_file() {
            return Err(Error::IncompleteFrame {
                stem,
                artifact: "calibration",
            });
        }
        let depth_path = dir.join(DEPTH_DIR).join(format!("{stem}.png"));
        entries.push(FrameEntry {
            stem,
            frame_id,
            image,
            cloud: path,
            calib,
            depth: depth_path.is_file().then_some(depth_path),
        });
    }

    if entries.is_empty() {
        return Err(Error::EmptyDataset { dir: dir.into() });
    }
    entries.sort_by_key(|e| e.frame_id);
    Ok(entries)
}

pub fn load_frame(entry: &FrameEntry) -> Result<FrameBundle> {
    Ok(FrameBundle {
        frame_id: entry.frame_id,
        stem: entry.stem.clone(),
        image: load_image(&entry.image)?,
        cloud: load_point_cloud(&entry.cloud)?,
        calib: load_calibration(&entry.calib)?.calibration,
        depth_gt: entry.depth.as_ref().map(load_depth_map).transpose()?,
    })
}

fn ensure_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

/// Writes a frame's artifacts under `out_dir`, mirroring the input layout,
/// and returns the relative paths written.
pub fn persist_frame(bundle: &FrameBundle, out_dir: impl AsRef<Path>) -> Result<FramePaths> {
    let out_dir = out_dir.as_ref();
    let stem = &bundle.stem;

    let image_rel = format!("{IMAGE_DIR}/{stem}.png");
    let cloud_rel = format!("{VELODYNE_DIR}/{stem}.bin");
    let calib_rel = format!("{CALIB_DIR}/{stem}.txt");

    ensure_dir(&out_dir.join(IMAGE_DIR))?;
    ensure_dir(&out_dir.join(VELODYNE_DIR))?;
    ensure_dir(&out_dir.join(CALIB_DIR))?;

    write_image(&bundle.image, out_dir.join(&image_rel))?;
    write_point_cloud(&bundle.cloud, out_dir.join(&cloud_rel))?;
    write_calibration(&bundle.calib, out_dir.join(&calib_rel))?;

    let depth = match &bundle.depth_gt {
        Some(map) => {
            ensure_dir(&out_dir.join(DEPTH_DIR))?;
            let rel = format!("{DEPTH_DIR}/{stem}.png");
            write_depth_map(map, out_dir.join(&rel))?;
            Some(rel)
        }
        None => None,
    };

    Ok(FramePaths {
        image: image_rel,
        cloud: cloud_rel,
        calib: calib_rel,
        depth,
    })
}
