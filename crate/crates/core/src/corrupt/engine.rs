//! The corruption engine: maps `(pattern, severity, seed, frame)` to
//! corrupted frames and fans a job out over a whole dataset.
//!
//! Determinism contract: the output of a job is a pure function of the
//! input dataset and the spec. Per-frame RNG streams are derived by
//! hashing, so the parallelism degree and scheduling order cannot change
//! a single output byte.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::camera::{
    defocus_blur, drop_pixels, exposure_shift, fog_camera, gaussian_noise_image,
    impulse_noise_image, lidar_depth_plane, motion_blur, radial_distortion, rain_camera,
    FogParams, RainParams,
};
use super::lidar::{
    drop_points, gaussian_noise_points, impulse_noise_points, weather_lidar, LidarWeatherParams,
};
use super::misalign::{pairing_plan, spatial_misalign, TemporalShift};
use super::{derive_rng, frame_seed, CorruptionSpec, Pattern, SeverityTable};
use crate::error::{Error, Result};
use crate::io::{load_frame, persist_frame, scan_dataset, FrameEntry, FramePaths};
use crate::types::FrameBundle;

/// Physical parameter the job runs at: the severity table's value for the
/// level, unless the spec carries a raw override.
fn physical_param(spec: &CorruptionSpec, table: &SeverityTable) -> f64 {
    if let Some(param) = spec.param {
        return param;
    }
    let i = spec.level_index();
    match spec.pattern {
        Pattern::Rain => table.rain.rate_mm_h[i],
        Pattern::Fog => table.fog.visibility_m[i],
        Pattern::Brightness => table.exposure.brighten[i],
        Pattern::Darkness => table.exposure.darken[i],
        Pattern::Distortion => table.distortion.k1[i],
        Pattern::MotionBlur => table.blur.motion_length_px[i] as f64,
        Pattern::DefocusBlur => table.blur.defocus_radius_px[i] as f64,
        Pattern::GaussianNoiseCamera => table.image_noise.gaussian_sigma[i],
        Pattern::ImpulseNoiseCamera => table.image_noise.impulse_fraction[i],
        Pattern::GaussianNoiseLidar => table.lidar_noise.gaussian_sigma_m[i],
        Pattern::ImpulseNoiseLidar => table.lidar_noise.impulse_fraction[i],
        Pattern::SpatialMisalignment => table.misalignment.rotation_deg[i],
        Pattern::TemporalMisalignment => table.misalignment.delay_s[i],
        Pattern::SignalLossCamera | Pattern::SignalLossLidar => table.signal_loss.fraction[i],
    }
}

/// Applies one corruption to one frame. Only the modalities the pattern
/// declares are touched; rain and fog modify both branches with the same
/// physical parameter (camera first, then LiDAR, on one RNG stream).
///
/// Temporal misalignment needs an ordered sequence and is rejected here;
/// use [`corrupt_dataset`] or [`super::temporal_misalign`].
pub fn corrupt_frame(
    frame: &FrameBundle,
    spec: &CorruptionSpec,
    table: &SeverityTable,
) -> Result<FrameBundle> {
    let mut rng = derive_rng(spec.seed, frame.frame_id, spec.pattern, spec.severity);
    let param = physical_param(spec, table);
    let mut out = frame.clone();
    match spec.pattern {
        Pattern::Rain => {
            let depth = lidar_depth_plane(
                &frame.cloud,
                &frame.calib,
                frame.image.width,
                frame.image.height,
                table.fog.fallback_depth_m,
            );
            let params = RainParams::from_rate(param, &table.rain, table.fog.atmospheric_light)?;
            out.image = rain_camera(&frame.image, &depth, &params, &mut rng);
            let lidar_params = LidarWeatherParams::rain(param, &table.lidar_weather)?;
            out.cloud = weather_lidar(&frame.cloud, &lidar_params, &mut rng);
        }
        Pattern::Fog => {
            let depth = lidar_depth_plane(
                &frame.cloud,
                &frame.calib,
                frame.image.width,
                frame.image.height,
                table.fog.fallback_depth_m,
            );
            let params = FogParams::from_table(param, &table.fog)?;
            out.image = fog_camera(&frame.image, &depth, &params);
            let lidar_params = LidarWeatherParams::fog(param, &table.lidar_weather)?;
            out.cloud = weather_lidar(&frame.cloud, &lidar_params, &mut rng);
        }
        Pattern::Brightness | Pattern::Darkness => {
            out.image = exposure_shift(&frame.image, param);
        }
        Pattern::Distortion => {
            out.image = radial_distortion(&frame.image, param, param / 3.0);
        }
        Pattern::MotionBlur => {
            out.image = motion_blur(&frame.image, param.round() as usize, table.blur.motion_angle_deg);
        }
        Pattern::DefocusBlur => {
            out.image = defocus_blur(&frame.image, param.round() as usize);
        }
        Pattern::GaussianNoiseCamera => {
            out.image = gaussian_noise_image(&frame.image, param, &mut rng);
        }
        Pattern::ImpulseNoiseCamera => {
            out.image = impulse_noise_image(&frame.image, param, &mut rng)?;
        }
        Pattern::GaussianNoiseLidar => {
            out.cloud = gaussian_noise_points(&frame.cloud, param, &mut rng);
        }
        Pattern::ImpulseNoiseLidar => {
            out.cloud = impulse_noise_points(
                &frame.cloud,
                param,
                table.lidar_noise.impulse_offset_m,
                &mut rng,
            )?;
        }
        Pattern::SpatialMisalignment => {
            out.calib = spatial_misalign(&frame.calib, spec.axis, param);
        }
        Pattern::TemporalMisalignment => {
            return Err(Error::NeedsSequence {
                pattern: spec.pattern.code(),
            });
        }
        Pattern::SignalLossCamera => {
            out.image = drop_pixels(&frame.image, param, &mut rng)?;
        }
        Pattern::SignalLossLidar => {
            out.cloud = drop_points(&frame.cloud, param, &mut rng)?;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "status", content = "detail")]
pub enum FrameStatus {
    Ok,
    Failed(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestFrame {
    pub id: i64,
    pub stem: String,
    /// Derived per-frame seed, for reproduction audits.
    pub seed: u64,
    #[serde(flatten)]
    pub status: FrameStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_paths: Option<FramePaths>,
    /// Source frames per branch; differs from `id` only under temporal
    /// misalignment.
    pub camera_source: i64,
    pub lidar_source: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub spec: CorruptionSpec,
    pub toolkit_version: String,
    /// Physical parameter the job ran at (severity table or override).
    pub physical_param: f64,
    /// Model simplifications a consumer should know about.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub approximations: Vec<String>,
    pub frames: Vec<ManifestFrame>,
}

impl Manifest {
    pub fn failed_frames(&self) -> impl Iterator<Item = &ManifestFrame> {
        self.frames
            .iter()
            .filter(|f| !matches!(f.status, FrameStatus::Ok))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }
}

fn approximations_for(pattern: Pattern) -> Vec<String> {
    match pattern {
        Pattern::Rain => vec![
            "camera rain is a photometric streak+veiling approximation driven by rainfall rate"
                .to_string(),
            "lidar weather is an attenuate/scatter/drop approximation".to_string(),
        ],
        Pattern::Fog => {
            vec!["lidar weather is an attenuate/scatter/drop approximation".to_string()]
        }
        _ => Vec::new(),
    }
}

fn manifest_entry(
    spec: &CorruptionSpec,
    id: i64,
    stem: &str,
    camera_source: i64,
    lidar_source: i64,
    outcome: Result<FramePaths>,
) -> ManifestFrame {
    ManifestFrame {
        id,
        stem: stem.to_string(),
        seed: frame_seed(spec.seed, id, spec.pattern, spec.severity),
        status: match &outcome {
            Ok(_) => FrameStatus::Ok,
            Err(e) => FrameStatus::Failed(e.to_string()),
        },
        output_paths: outcome.ok(),
        camera_source,
        lidar_source,
    }
}

fn process_frame(
    entry: &FrameEntry,
    spec: &CorruptionSpec,
    table: &SeverityTable,
    out_dir: &Path,
) -> Result<FramePaths> {
    let bundle = load_frame(entry)?;
    let corrupted = corrupt_frame(&bundle, spec, table)?;
    persist_frame(&corrupted, out_dir)
}

fn corrupt_dataset_temporal(
    entries: &[FrameEntry],
    spec: &CorruptionSpec,
    table: &SeverityTable,
    out_dir: &Path,
) -> Result<Vec<ManifestFrame>> {
    let delay = physical_param(spec, table);
    let shift = TemporalShift::new(spec.branch, delay, table.misalignment.frame_rate_hz)?;
    let ids: Vec<i64> = entries.iter().map(|e| e.frame_id).collect();
    let plan = pairing_plan(&ids, &shift)?;
    let first = ids.first().copied().unwrap_or(0);

    let mut frames: Vec<ManifestFrame> = plan
        .par_iter()
        .map(|pairing| {
            let base = &entries[(pairing.output_frame - first) as usize];
            let outcome = (|| {
                let mut bundle = load_frame(base)?;
                let camera_entry = &entries[(pairing.camera_source - first) as usize];
                let lidar_entry = &entries[(pairing.lidar_source - first) as usize];
                bundle.image = crate::io::load_image(&camera_entry.image)?;
                bundle.cloud = crate::io::load_point_cloud(&lidar_entry.cloud)?;
                persist_frame(&bundle, out_dir)
            })();
            manifest_entry(
                spec,
                pairing.output_frame,
                &base.stem,
                pairing.camera_source,
                pairing.lidar_source,
                outcome,
            )
        })
        .collect();
    frames.sort_by_key(|f| f.id);
    Ok(frames)
}

/// Corrupts every frame under `in_dir` into `out_dir` (mirroring the
/// layout), writes `manifest.json` there, and returns the manifest.
/// Failed frames are recorded rather than aborting the run.
pub fn corrupt_dataset(
    in_dir: impl AsRef<Path>,
    spec: &CorruptionSpec,
    table: &SeverityTable,
    out_dir: impl AsRef<Path>,
) -> Result<Manifest> {
    table.validate()?;
    let in_dir = in_dir.as_ref();
    let out_dir = out_dir.as_ref();
    let entries = scan_dataset(in_dir)?;

    let frames = if spec.pattern == Pattern::TemporalMisalignment {
        corrupt_dataset_temporal(&entries, spec, table, out_dir)?
    } else {
        let mut frames: Vec<ManifestFrame> = entries
            .par_iter()
            .map(|entry| {
                let outcome = process_frame(entry, spec, table, out_dir);
                manifest_entry(
                    spec,
                    entry.frame_id,
                    &entry.stem,
                    entry.frame_id,
                    entry.frame_id,
                    outcome,
                )
            })
            .collect();
        frames.sort_by_key(|f| f.id);
        frames
    };

    let manifest = Manifest {
        spec: *spec,
        toolkit_version: crate::toolkit_version().to_string(),
        physical_param: physical_param(spec, table),
        approximations: approximations_for(spec.pattern),
        frames,
    };
    let manifest_path = out_dir.join("manifest.json");
    std::fs::write(&manifest_path, manifest.to_json())
        .map_err(|e| Error::io(&manifest_path, e))?;
    Ok(manifest)
}
