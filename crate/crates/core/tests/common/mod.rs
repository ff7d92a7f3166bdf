//! Shared fixtures and independent oracles for the integration suites.
//!
//! The oracles deliberately avoid the library's computation paths: box
//! overlap is estimated by Monte-Carlo volume sampling, and average
//! precision is recomputed from exhaustive optimal matching plus a direct
//! evaluation of the interpolation formula.

#![allow(dead_code)]

use msfbench_core::geometry::{box_iou_2d, box_iou_3d};
use msfbench_core::metrics::{DetectionEvalConfig, DetectionFrame};
use msfbench_core::nalgebra::Vector3;
use msfbench_core::types::{
    BBox2D, CalibrationSet, FrameBundle, ImageBuffer, ObjectClass, ObjectLabel, Point, PointCloud,
};
use rand::Rng;

pub fn car_box(x: f64, y: f64, z: f64, h: f64, w: f64, l: f64, yaw: f64) -> ObjectLabel {
    ObjectLabel {
        class: ObjectClass::Car,
        truncation: 0.0,
        occlusion: 0,
        alpha: 0.0,
        bbox2d: BBox2D::new(100.0, 100.0, 160.0, 140.0),
        dims: (h, w, l),
        location: Vector3::new(x, y, z),
        rotation_y: yaw,
        score: None,
        track_id: None,
        frame: None,
    }
}

/// Point-in-oriented-box test in the KITTI box parameterization.
fn inside(label: &ObjectLabel, p: (f64, f64, f64)) -> bool {
    let (h, w, l) = label.dims;
    let (px, py, pz) = p;
    if py > label.location.y || py < label.location.y - h {
        return false;
    }
    let dx = px - label.location.x;
    let dz = pz - label.location.z;
    let (s, c) = label.rotation_y.sin_cos();
    // inverse of the ground-plane rotation
    let local_x = c * dx - s * dz;
    let local_z = s * dx + c * dz;
    local_x.abs() <= l / 2.0 && local_z.abs() <= w / 2.0
}

/// Monte-Carlo IOU oracle: samples uniformly inside box `a` to estimate the
/// intersection volume, then forms IOU from the analytic box volumes.
pub fn mc_iou_3d(a: &ObjectLabel, b: &ObjectLabel, samples: u32, rng: &mut impl Rng) -> f64 {
    let (ha, wa, la) = a.dims;
    let (s, c) = a.rotation_y.sin_cos();
    let mut hits = 0u64;
    for _ in 0..samples {
        // uniform in a's local frame
        let lx = rng.gen_range(-la / 2.0..la / 2.0);
        let lz = rng.gen_range(-wa / 2.0..wa / 2.0);
        let py = rng.gen_range(a.location.y - ha..a.location.y);
        let px = c * lx + s * lz + a.location.x;
        let pz = -s * lx + c * lz + a.location.z;
        if inside(b, (px, py, pz)) {
            hits += 1;
        }
    }
    let vol_a = ha * wa * la;
    let vol_b = b.dims.0 * b.dims.1 * b.dims.2;
    let intersection = vol_a * hits as f64 / f64::from(samples);
    intersection / (vol_a + vol_b - intersection)
}

/// Exhaustive search over prediction→ground-truth matchings, maximizing
/// true-positive count and, among those, the total score of the true
/// positives (so the choice is unique on the constructed scenes).
fn best_matching(
    pred_index: usize,
    eligible: &[Vec<usize>],
    scores: &[f64],
    used: &mut Vec<bool>,
) -> (usize, f64, Vec<bool>) {
    if pred_index == eligible.len() {
        return (0, 0.0, vec![false; eligible.len()]);
    }
    // option 1: leave this prediction unmatched
    let (mut best_tp, mut best_score, mut best_assignment) =
        best_matching(pred_index + 1, eligible, scores, used);
    // option 2: match it to each still-free eligible ground truth
    for &g in &eligible[pred_index] {
        if used[g] {
            continue;
        }
        used[g] = true;
        let (tp, score, assignment) = best_matching(pred_index + 1, eligible, scores, used);
        used[g] = false;
        let candidate = (tp + 1, score + scores[pred_index]);
        if candidate.0 > best_tp || (candidate.0 == best_tp && candidate.1 > best_score) {
            best_tp = candidate.0;
            best_score = candidate.1;
            best_assignment = assignment;
            best_assignment[pred_index] = true;
        }
    }
    (best_tp, best_score, best_assignment)
}

/// Brute-force AP: optimal matching per frame, then the interpolation
/// formula evaluated literally at each recall level with exact rational
/// comparisons.
pub fn oracle_average_precision(frames: &[DetectionFrame], config: &DetectionEvalConfig) -> f64 {
    let mut pooled: Vec<(f64, bool)> = Vec::new();
    let mut total_gt: u64 = 0;

    for frame in frames {
        let evaluated: Vec<&ObjectLabel> = frame
            .ground_truth
            .iter()
            .filter(|g| config.is_evaluated(g))
            .collect();
        let ignored: Vec<&ObjectLabel> = frame
            .ground_truth
            .iter()
            .filter(|g| !config.is_evaluated(g))
            .collect();
        total_gt += evaluated.len() as u64;

        let preds: Vec<&ObjectLabel> = frame
            .predictions
            .iter()
            .filter(|p| p.class == config.class)
            .collect();
        let scores: Vec<f64> = preds.iter().map(|p| p.score.expect("scored")).collect();
        let eligible: Vec<Vec<usize>> = preds
            .iter()
            .map(|p| {
                evaluated
                    .iter()
                    .enumerate()
                    .filter(|(_, g)| box_iou_3d(p, g) >= config.iou_threshold)
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        let mut used = vec![false; evaluated.len()];
        let (_, _, matched) = best_matching(0, &eligible, &scores, &mut used);

        for (i, p) in preds.iter().enumerate() {
            if matched[i] {
                pooled.push((scores[i], true));
            } else {
                let ignored_hit = ignored.iter().any(|ig| {
                    if ig.dims.0 > 0.0 && ig.dims.1 > 0.0 && ig.dims.2 > 0.0 {
                        box_iou_3d(p, ig) >= config.iou_threshold
                    } else {
                        box_iou_2d(&p.bbox2d, &ig.bbox2d) > 0.0 && {
                            let iw = (p.bbox2d.right.min(ig.bbox2d.right)
                                - p.bbox2d.left.max(ig.bbox2d.left))
                                .max(0.0);
                            let ih = (p.bbox2d.bottom.min(ig.bbox2d.bottom)
                                - p.bbox2d.top.max(ig.bbox2d.top))
                                .max(0.0);
                            iw * ih / p.bbox2d.area() > 0.5
                        }
                    }
                });
                if !ignored_hit {
                    pooled.push((scores[i], false));
                }
            }
        }
    }

    assert!(total_gt > 0, "oracle needs evaluated ground truth");

    // operating points after each distinct score, descending
    pooled.sort_by(|x, y| y.0.total_cmp(&x.0));
    let mut points: Vec<(u64, u64)> = Vec::new();
    let (mut tp, mut fp) = (0u64, 0u64);
    let mut i = 0;
    while i < pooled.len() {
        let score = pooled[i].0;
        while i < pooled.len() && pooled[i].0.total_cmp(&score).is_eq() {
            if pooled[i].1 {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push((tp, fp));
    }

    // AP|R = (1/|R|) Σ max_{recall(r') ≥ r} precision(r'), R = {k/40}
    let levels = u64::from(config.recall_levels);
    let mut sum = 0.0;
    for k in 1..=levels {
        let mut best = 0.0f64;
        for &(tp, fp) in &points {
            // recall ≥ k/levels, compared exactly in u128
            if u128::from(tp) * u128::from(levels) >= u128::from(k) * u128::from(total_gt) {
                best = best.max(tp as f64 / (tp + fp) as f64);
            }
        }
        sum += best;
    }
    sum / levels as f64
}

/// Synthetic "natural" image: gradients plus sinusoidal texture.
pub fn fixture_image(width: u32, height: u32, phase: f64) -> ImageBuffer {
    let mut img = ImageBuffer::filled(width, height, [0, 0, 0]);
    for y in 0..height {
        for x in 0..width {
            let fx = f64::from(x) / f64::from(width);
            let fy = f64::from(y) / f64::from(height);
            let r = 200.0 * fx + 30.0 * ((fy + phase) * 12.0).sin();
            let g = 120.0 + 80.0 * ((fx + phase) * 9.0).cos() * fy;
            let b = 255.0 * fy;
            let q = |v: f64| v.round().clamp(0.0, 255.0) as u8;
            img.set(x, y, [q(r), q(g), q(b)]);
        }
    }
    img
}

/// Structured point cloud ahead of the sensor, mixed ranges and intensities.
pub fn fixture_cloud(n: usize, phase: f64) -> PointCloud {
    let points = (0..n)
        .map(|i| {
            let a = i as f64 * 0.37 + phase;
            let r = 5.0 + 45.0 * ((i * 7919 % n.max(1)) as f64 / n.max(1) as f64);
            Point::new(
                r * a.cos(),
                r * a.sin() * 0.3,
                -1.5 + (i % 13) as f64 * 0.25,
                ((i * 31) % 100) as f64 / 100.0,
            )
        })
        .collect();
    PointCloud::new(points)
}

/// KITTI-flavored calibration: forward-looking extrinsics, realistic P2.
pub fn fixture_calib() -> CalibrationSet {
    use msfbench_core::nalgebra::{Matrix3, Matrix3x4};
    CalibrationSet {
        projection: Matrix3x4::new(
            707.0, 0.0, 601.0, 45.7, //
            0.0, 707.0, 183.1, 0.35, //
            0.0, 0.0, 1.0, 0.005,
        ),
        rectification: Matrix3::identity(),
        velo_to_cam: Matrix3x4::new(
            0.0, -1.0, 0.0, -0.004, //
            0.0, 0.0, -1.0, -0.076, //
            1.0, 0.0, 0.0, -0.272,
        ),
    }
}

pub fn fixture_frame(frame_id: i64, image_size: (u32, u32), cloud_points: usize) -> FrameBundle {
    FrameBundle {
        frame_id,
        stem: format!("{frame_id:06}"),
        image: fixture_image(image_size.0, image_size.1, frame_id as f64 * 0.31),
        cloud: fixture_cloud(cloud_points, frame_id as f64 * 0.17),
        calib: fixture_calib(),
        depth_gt: None,
    }
}
