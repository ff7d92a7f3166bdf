//! Acceptance suite: one test per criterion, each printing a PASS line
//! with its measured numbers (visible under `--nocapture`).
//!
//! Run with `cargo test -p msfbench-core --test acceptance`.

mod common;

use std::f64::consts::PI;
use std::time::Instant;

use common::*;
use msfbench_core::corrupt::{
    camera, corrupt_dataset, corrupt_frame, derive_rng, lidar, pairing_plan, spatial_misalign,
    Axis, Branch, CorruptionSpec, Pattern, SeverityTable, TemporalShift, ALL_PATTERNS,
};
use msfbench_core::geometry::box_iou_3d;
use msfbench_core::io::{
    calibration_text, encode_depth_png, load_frame, parse_calibration, parse_labels,
    parse_point_cloud, persist_frame, point_cloud_bytes, scan_dataset, LabelTask,
};
use msfbench_core::metrics::{
    average_precision, mota, DetectionEvalConfig, DetectionFrame, MotaConfig, RunResult, Task,
    TrackFrame,
};
use msfbench_core::report::{build_report, mean_robustness, robustness_score, ReportMeta};
use msfbench_core::types::{DepthMap, FrameBundle, ImageBuffer, ObjectLabel, PointCloud};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pass(criterion: u32, detail: &str) {
    println!("[PASS] criterion {criterion}: {detail}");
}

// --- 1. format round trip -------------------------------------------------

#[test]
fn criterion_01_format_round_trip() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let frame_count = 12;
    for id in 0..frame_count {
        let mut frame = fixture_frame(id, (200, 100), 2048);
        // sparse depth ground truth
        let depth: Vec<Option<f64>> = (0..200 * 100)
            .map(|i| {
                (i + id as usize)
                    .is_multiple_of(7)
                    .then(|| f64::from(((i * 53) % 20_000 + 256) as u32) * 1000.0 / 256.0)
            })
            .collect();
        frame.depth_gt = Some(DepthMap::new(200, 100, depth).unwrap());
        persist_frame(&frame, dir.path()).unwrap();
    }

    let entries = scan_dataset(dir.path()).unwrap();
    assert_eq!(entries.len(), frame_count as usize);
    for entry in &entries {
        // point clouds: bitwise
        let disk = std::fs::read(&entry.cloud).unwrap();
        let cloud = parse_point_cloud(&disk).unwrap();
        assert_eq!(point_cloud_bytes(&cloud), disk, "cloud bytes differ");

        // depth: raw-value exact
        let depth_path = entry.depth.as_ref().unwrap();
        let depth_bytes = std::fs::read(depth_path).unwrap();
        let depth = msfbench_core::io::decode_depth_png(&depth_bytes).unwrap();
        let re_encoded = encode_depth_png(&depth).unwrap();
        let reloaded = msfbench_core::io::decode_depth_png(&re_encoded).unwrap();
        assert_eq!(reloaded.to_raw().unwrap(), depth.to_raw().unwrap());

        // calibration: 1e-9 exact through text
        let text = std::fs::read_to_string(&entry.calib).unwrap();
        let calib = parse_calibration(&text).unwrap().calibration;
        let rewritten = calibration_text(&calib);
        let reparsed = parse_calibration(&rewritten).unwrap().calibration;
        for (a, b) in calib
            .projection
            .iter()
            .chain(calib.rectification.iter())
            .chain(calib.velo_to_cam.iter())
            .zip(
                reparsed
                    .projection
                    .iter()
                    .chain(reparsed.rectification.iter())
                    .chain(reparsed.velo_to_cam.iter()),
            )
        {
            assert!((a - b).abs() <= 1e-9, "calib drift {a} vs {b}");
        }

        // images: pixel exact through PNG
        let bundle = load_frame(entry).unwrap();
        let png = msfbench_core::io::encode_image_png(&bundle.image).unwrap();
        assert_eq!(
            msfbench_core::io::decode_image_png(&png).unwrap(),
            bundle.image
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    pass(1, &format!("{frame_count} frames round-tripped in {elapsed:?}"));
}

// --- 2. 3D IOU against Monte-Carlo ----------------------------------------

#[test]
fn criterion_02_iou_matches_monte_carlo() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_001);
    let pairs = 1000;
    let samples = 1_000_000;
    let mut worst = 0.0f64;
    for _ in 0..pairs {
        let dims_a = (
            rng.gen_range(1.0..2.5),
            rng.gen_range(1.0..2.5),
            rng.gen_range(2.0..5.0),
        );
        let dims_b = (
            rng.gen_range(1.0..2.5),
            rng.gen_range(1.0..2.5),
            rng.gen_range(2.0..5.0),
        );
        let a = car_box(
            0.0,
            rng.gen_range(-0.5..0.5),
            0.0,
            dims_a.0,
            dims_a.1,
            dims_a.2,
            rng.gen_range(-PI..PI),
        );
        let b = car_box(
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-0.5..0.5),
            rng.gen_range(-3.0..3.0),
            dims_b.0,
            dims_b.1,
            dims_b.2,
            rng.gen_range(-PI..PI),
        );
        let analytic = box_iou_3d(&a, &b);
        let estimated = mc_iou_3d(&a, &b, samples, &mut rng);
        worst = worst.max((analytic - estimated).abs());
    }
    let elapsed = start.elapsed();
    assert!(worst < 2e-3, "worst |analytic - MC| = {worst}");
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    pass(
        2,
        &format!("{pairs} pairs, worst |Δ| = {worst:.2e}, {elapsed:?}"),
    );
}

// --- 3. AP against brute force --------------------------------------------

/// Mini-scenes on a sparse grid: predictions never straddle two ground
/// truths above the matching threshold, so greedy and optimal matching
/// agree and the comparison is exact.
fn build_scenes(count: usize) -> Vec<DetectionFrame> {
    let mut rng = ChaCha8Rng::seed_from_u64(33_003);
    let mut scenes = Vec::with_capacity(count);
    for scene_id in 0..count {
        let mut ground_truth: Vec<ObjectLabel> = Vec::new();
        let mut predictions: Vec<ObjectLabel> = Vec::new();
        let evaluated = rng.gen_range(1..=3usize);
        let mut score = 0.95f64;
        for slot in 0..evaluated {
            let x = slot as f64 * 12.0 - 12.0;
            let z = 10.0 + 9.0 * slot as f64;
            let gt = car_box(x, 1.6, z, 1.5, 1.7, 4.0, rng.gen_range(-3.0..3.0));
            ground_truth.push(gt.clone());
            // jittered true positive with probability 0.8
            if rng.gen_bool(0.8) {
                let mut p = gt.clone();
                p.location.x += rng.gen_range(-0.15..0.15);
                p.location.z += rng.gen_range(-0.15..0.15);
                p.rotation_y += rng.gen_range(-0.04..0.04);
                p.score = Some(score);
                score -= 0.07;
                predictions.push(p);
                // occasional double detection
                if rng.gen_bool(0.3) {
                    let mut dup = gt.clone();
                    dup.location.x -= rng.gen_range(-0.1..0.1);
                    dup.score = Some(score);
                    score -= 0.07;
                    predictions.push(dup);
                }
            }
        }
        // a difficulty-gated (ignored) ground truth with a prediction on it
        if rng.gen_bool(0.5) {
            let mut gated = car_box(30.0, 1.6, 45.0, 1.5, 1.7, 4.0, 0.3);
            gated.bbox2d = msfbench_core::types::BBox2D::new(10.0, 10.0, 40.0, 30.0);
            ground_truth.push(gated.clone());
            let mut p = gated.clone();
            p.score = Some(score);
            score -= 0.07;
            predictions.push(p);
        }
        // far false positives
        for _ in 0..rng.gen_range(0..=2usize) {
            let mut fp = car_box(
                rng.gen_range(150.0..220.0),
                1.6,
                rng.gen_range(10.0..40.0),
                1.4,
                1.6,
                3.8,
                0.0,
            );
            fp.score = Some(score);
            score -= 0.07;
            predictions.push(fp);
        }
        scenes.push(DetectionFrame {
            frame_id: scene_id as i64,
            ground_truth,
            predictions,
        });
    }
    scenes
}

#[test]
fn criterion_03_ap_matches_brute_force() {
    let config = DetectionEvalConfig::default();
    let scenes = build_scenes(24);

    // per-scene exact agreement
    let mut compared = 0;
    for scene in &scenes {
        let frames = std::slice::from_ref(scene);
        let implementation = average_precision(frames, &config).unwrap();
        let oracle = oracle_average_precision(frames, &config);
        assert_eq!(
            implementation, oracle,
            "scene {} diverges from the oracle",
            scene.frame_id
        );
        compared += 1;
    }
    // pooled over all scenes jointly
    let implementation = average_precision(&scenes, &config).unwrap();
    let oracle = oracle_average_precision(&scenes, &config);
    assert_eq!(implementation, oracle);

    // endpoints
    let perfect: Vec<DetectionFrame> = scenes
        .iter()
        .map(|s| DetectionFrame {
            frame_id: s.frame_id,
            ground_truth: s.ground_truth.clone(),
            predictions: s
                .ground_truth
                .iter()
                .map(|g| {
                    let mut p = g.clone();
                    p.score = Some(1.0);
                    p
                })
                .collect(),
        })
        .collect();
    assert_eq!(average_precision(&perfect, &config).unwrap(), 1.0);

    let empty: Vec<DetectionFrame> = scenes
        .iter()
        .map(|s| DetectionFrame {
            frame_id: s.frame_id,
            ground_truth: s.ground_truth.clone(),
            predictions: vec![],
        })
        .collect();
    assert_eq!(average_precision(&empty, &config).unwrap(), 0.0);

    pass(
        3,
        &format!("{compared} scenes + pooled curve equal the exhaustive oracle"),
    );
}

// --- 4. MOTA hand trace -----------------------------------------------------

fn tracked(frame: i64, track_id: i64, x: f64) -> ObjectLabel {
    let mut label = car_box(x / 10.0, 1.6, 20.0, 1.5, 1.7, 4.0, 0.0);
    label.bbox2d = msfbench_core::types::BBox2D::new(x, 100.0, x + 50.0, 140.0);
    label.track_id = Some(track_id);
    label.frame = Some(frame);
    label
}

fn to_frames(rows: &[(i64, i64, f64)]) -> Vec<TrackFrame> {
    let mut by_frame = std::collections::BTreeMap::<i64, TrackFrame>::new();
    for &(frame, id, x) in rows {
        by_frame
            .entry(frame)
            .or_insert_with(|| TrackFrame {
                frame_id: frame,
                boxes: vec![],
            })
            .boxes
            .push(tracked(frame, id, x));
    }
    by_frame.into_values().collect()
}

#[test]
fn criterion_04_mota_hand_trace() {
    let config = MotaConfig::default();
    // Two ground-truth tracks cross over four frames (8 GT boxes). The
    // predictor covers every box perfectly but hands track 2's identity to
    // a fresh id after the crossing.
    //
    // Hand trace: frames 0-1 match (1↔11, 2↔12). Frame 2: GT 1 persists
    // with 11; id 12 is gone, so GT 2 matches the newcomer 13 → one
    // identity switch. Frame 3 persists. FN = FP = 0, IDSW = 1,
    // MOTA = 1 − 1/8.
    let gt = to_frames(&[
        (0, 1, 100.0), (0, 2, 400.0),
        (1, 1, 200.0), (1, 2, 300.0),
        (2, 1, 300.0), (2, 2, 200.0),
        (3, 1, 400.0), (3, 2, 100.0),
    ]);
    let preds = to_frames(&[
        (0, 11, 100.0), (0, 12, 400.0),
        (1, 11, 200.0), (1, 12, 300.0),
        (2, 11, 300.0), (2, 13, 200.0),
        (3, 11, 400.0), (3, 13, 100.0),
    ]);
    let (value, counts) = mota(&preds, &gt, &config).unwrap();
    assert_eq!(counts.ground_truth, 8);
    assert_eq!(counts.false_negatives, 0);
    assert_eq!(counts.false_positives, 0);
    assert_eq!(counts.id_switches, 1);
    assert_eq!(value, 1.0 - 1.0 / 8.0);

    // injecting k false positives into a perfect result lowers MOTA by k/ΣGT
    let (perfect, _) = mota(&gt, &gt, &config).unwrap();
    assert_eq!(perfect, 1.0);
    for k in 1..=4i64 {
        let mut rows: Vec<(i64, i64, f64)> = vec![
            (0, 1, 100.0), (0, 2, 400.0),
            (1, 1, 200.0), (1, 2, 300.0),
            (2, 1, 300.0), (2, 2, 200.0),
            (3, 1, 400.0), (3, 2, 100.0),
        ];
        for j in 0..k {
            rows.push((j % 4, 90 + j, 700.0 + 60.0 * j as f64));
        }
        let (with_fp, counts) = mota(&to_frames(&rows), &gt, &config).unwrap();
        assert_eq!(counts.false_positives, k as u64);
        assert_eq!(with_fp, 1.0 - k as f64 / 8.0);
    }
    pass(4, "hand-traced counts (0 FN, 0 FP, 1 IDSW) and exact FP arithmetic");
}

// --- 5. robustness arithmetic -----------------------------------------------

#[test]
fn criterion_05_robustness_arithmetic() {
    // published clean AP 82.70, corrupted 58.72 → Rb ≈ 0.71
    let clean = RunResult::clean(Task::Detection, 82.70);
    let corrupted = [RunResult::corrupted(Task::Detection, "RN", 1, 58.72)];
    let report = build_report(&clean, &corrupted, ReportMeta::default()).unwrap();
    let rb = report.cells[0].rb;
    assert!((rb - 0.71).abs() <= 0.005, "Rb = {rb}");

    // unchanged performance → exactly 1
    assert_eq!(robustness_score(82.70, 82.70, Task::Detection).unwrap(), 1.0);

    // a uniform-1 table averages to exactly 1
    let cells: Vec<msfbench_core::report::ReportCell> = ALL_PATTERNS
        .iter()
        .flat_map(|p| {
            (1..=p.max_severity()).map(|s| msfbench_core::report::ReportCell {
                pattern: p.code().to_string(),
                severity: s,
                value: 82.70,
                rb: 1.0,
            })
        })
        .collect();
    assert_eq!(mean_robustness(&cells).unwrap(), 1.0);
    pass(5, &format!("Rb(58.72/82.70) = {rb:.4}, identities exact"));
}

// --- 6. determinism and modality isolation ----------------------------------

#[test]
fn criterion_06_determinism_and_isolation() {
    let start = Instant::now();
    let table = SeverityTable::default();
    let input = tempfile::tempdir().unwrap();
    let frames = 5;
    for id in 0..frames {
        persist_frame(&fixture_frame(id, (96, 64), 400), input.path()).unwrap();
    }

    let input_bytes = |rel: &str| std::fs::read(input.path().join(rel)).unwrap();

    for pattern in ALL_PATTERNS {
        let spec = CorruptionSpec::new(pattern, pattern.max_severity(), 1234).unwrap();
        let out_a = tempfile::tempdir().unwrap();
        let out_b = tempfile::tempdir().unwrap();
        let manifest_a = corrupt_dataset(input.path(), &spec, &table, out_a.path()).unwrap();
        let manifest_b = corrupt_dataset(input.path(), &spec, &table, out_b.path()).unwrap();
        assert_eq!(manifest_a.failed_frames().count(), 0, "{pattern}");
        assert_eq!(manifest_a.frames.len(), manifest_b.frames.len());

        let (touch_image, touch_cloud, touch_calib) = pattern.touches();
        for frame in &manifest_a.frames {
            let paths = frame.output_paths.as_ref().unwrap();
            for rel in [&paths.image, &paths.cloud, &paths.calib] {
                // two runs, same bytes
                let a = std::fs::read(out_a.path().join(rel)).unwrap();
                let b = std::fs::read(out_b.path().join(rel)).unwrap();
                assert_eq!(a, b, "{pattern}: {rel} differs between runs");
            }
            // untouched modalities bitwise-equal to the input
            if pattern == Pattern::TemporalMisalignment {
                continue; // re-pairing moves whole frames; isolation below
            }
            if !touch_image {
                assert_eq!(
                    std::fs::read(out_a.path().join(&paths.image)).unwrap(),
                    input_bytes(&paths.image),
                    "{pattern}: image should be untouched"
                );
            }
            if !touch_cloud {
                assert_eq!(
                    std::fs::read(out_a.path().join(&paths.cloud)).unwrap(),
                    input_bytes(&paths.cloud),
                    "{pattern}: cloud should be untouched"
                );
            }
            if !touch_calib {
                assert_eq!(
                    std::fs::read(out_a.path().join(&paths.calib)).unwrap(),
                    input_bytes(&paths.calib),
                    "{pattern}: calib should be untouched"
                );
            }
        }
    }

    // temporal isolation on a longer sequence: the non-delayed branch is
    // bitwise identical to the input frame
    let long_input = tempfile::tempdir().unwrap();
    for id in 0..8 {
        persist_frame(&fixture_frame(id, (64, 48), 200), long_input.path()).unwrap();
    }
    let spec = CorruptionSpec::new(Pattern::TemporalMisalignment, 2, 5)
        .unwrap()
        .with_branch(Branch::Lidar);
    let out = tempfile::tempdir().unwrap();
    let manifest = corrupt_dataset(long_input.path(), &spec, &table, out.path()).unwrap();
    for frame in &manifest.frames {
        let paths = frame.output_paths.as_ref().unwrap();
        assert_eq!(
            std::fs::read(out.path().join(&paths.image)).unwrap(),
            std::fs::read(long_input.path().join(&paths.image)).unwrap(),
            "camera branch must be untouched under lidar delay"
        );
        let expected_cloud = format!("velodyne/{:06}.bin", frame.lidar_source);
        assert_eq!(
            std::fs::read(out.path().join(&paths.cloud)).unwrap(),
            std::fs::read(long_input.path().join(expected_cloud)).unwrap(),
        );
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:?}");
    pass(
        6,
        &format!(
            "{} patterns × max severity, bitwise determinism + isolation in {elapsed:?}",
            ALL_PATTERNS.len()
        ),
    );
}

// --- 7. physics invariants ----------------------------------------------------

#[test]
fn criterion_07_physics_invariants() {
    let table = SeverityTable::default();
    let img = fixture_image(64, 48, 0.7);

    // fog at d = 0 leaves pixels unchanged
    let fog = camera::FogParams::from_table(51.0, &table.fog).unwrap();
    let zero_depth = vec![0.0f32; 64 * 48];
    assert_eq!(camera::fog_camera(&img, &zero_depth, &fog), img);

    // d = 1e6 m saturates to atmospheric light within 1 LSB
    let far_depth = vec![1e6f32; 64 * 48];
    let saturated = camera::fog_camera(&img, &far_depth, &fog);
    for (c, &pixel) in saturated.pixels.iter().enumerate() {
        let airlight = table.fog.atmospheric_light[c % 3] * 255.0;
        assert!((f64::from(pixel) - airlight).abs() <= 1.0);
    }

    // lidar α = 0 is identity
    let cloud = fixture_cloud(500, 0.0);
    let mut rng = derive_rng(0, 0, Pattern::Fog, 1);
    let no_weather = lidar::LidarWeatherParams::new(0.0, 0.3, 0.05).unwrap();
    assert_eq!(lidar::weather_lidar(&cloud, &no_weather, &mut rng), cloud);

    // attenuation factor at r = 50 m, V = 51 m
    let fog_params = lidar::LidarWeatherParams::new(
        20.0f64.ln() / 51.0,
        0.0, // no scatter
        0.0, // keep the weak return observable
    )
    .unwrap();
    let single = PointCloud::new(vec![msfbench_core::types::Point::new(0.0, 30.0, 40.0, 1.0)]);
    let out = lidar::weather_lidar(&single, &fog_params, &mut rng);
    let factor = out.points[0].intensity;
    let expected = (-5.873984850105864f64).exp();
    assert!((factor - expected).abs() < 1e-6, "factor {factor}");

    pass(
        7,
        &format!("fog endpoints exact, α=0 identity, attenuation factor {factor:.6}"),
    );
}

// --- 8. misalignment invariants ------------------------------------------------

#[test]
fn criterion_08_misalignment_invariants() {
    let calib = fixture_calib();

    // 0° is identity
    for axis in [Axis::X, Axis::Y, Axis::Z] {
        assert_eq!(spatial_misalign(&calib, axis, 0.0), calib);
    }
    // θ then −θ returns within 1e-9
    for axis in [Axis::X, Axis::Y, Axis::Z] {
        for degrees in [0.5, 1.0, 2.0] {
            let back = spatial_misalign(&spatial_misalign(&calib, axis, degrees), axis, -degrees);
            for (a, b) in calib.velo_to_cam.iter().zip(back.velo_to_cam.iter()) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    // Δt = 0.3 s at 10 Hz pairs frame 10 with frame 7
    let ids: Vec<i64> = (0..=11).collect();
    let shift = TemporalShift::new(Branch::Lidar, 0.3, 10.0).unwrap();
    let plan = pairing_plan(&ids, &shift).unwrap();
    let frame10 = plan.iter().find(|p| p.output_frame == 10).unwrap();
    assert_eq!(frame10.lidar_source, 7);

    // 100% signal loss: empty cloud, all-black image
    let table = SeverityTable::default();
    let frame = fixture_frame(0, (48, 32), 300);
    let loss_l = CorruptionSpec::new(Pattern::SignalLossLidar, 5, 0).unwrap();
    let out = corrupt_frame(&frame, &loss_l, &table).unwrap();
    assert!(out.cloud.is_empty());
    let loss_c = CorruptionSpec::new(Pattern::SignalLossCamera, 5, 0).unwrap();
    let out = corrupt_frame(&frame, &loss_c, &table).unwrap();
    assert!(out.image.pixels.iter().all(|&v| v == 0));

    pass(8, "identity/inverse rotations, frame pairing 10→7, total loss endpoints");
}

// --- 9. severity monotonicity ----------------------------------------------------

#[test]
fn criterion_09_severity_monotonicity() {
    let table = SeverityTable::default();
    let patterns = [
        Pattern::GaussianNoiseCamera,
        Pattern::ImpulseNoiseCamera,
        Pattern::GaussianNoiseLidar,
        Pattern::ImpulseNoiseLidar,
        Pattern::SignalLossCamera,
        Pattern::SignalLossLidar,
        Pattern::MotionBlur,
        Pattern::DefocusBlur,
        Pattern::Rain,
    ];

    fn image_delta(a: &ImageBuffer, b: &ImageBuffer) -> f64 {
        a.pixels
            .iter()
            .zip(&b.pixels)
            .map(|(&x, &y)| (f64::from(x) - f64::from(y)).abs())
            .sum::<f64>()
            / a.pixels.len() as f64
    }

    fn proxy(pattern: Pattern, original: &FrameBundle, corrupted: &FrameBundle) -> f64 {
        match pattern {
            Pattern::GaussianNoiseLidar => {
                original
                    .cloud
                    .points
                    .iter()
                    .zip(&corrupted.cloud.points)
                    .map(|(a, b)| (a.position() - b.position()).norm())
                    .sum::<f64>()
                    / original.cloud.len() as f64
            }
            Pattern::ImpulseNoiseLidar => {
                let moved = original
                    .cloud
                    .points
                    .iter()
                    .zip(&corrupted.cloud.points)
                    .filter(|(a, b)| a != b)
                    .count();
                moved as f64 / original.cloud.len() as f64
            }
            Pattern::SignalLossLidar => {
                1.0 - corrupted.cloud.len() as f64 / original.cloud.len() as f64
            }
            _ => image_delta(&original.image, &corrupted.image),
        }
    }

    let frame_count = 20;
    let mut cells = 0u32;
    let mut monotone = 0u32;
    for id in 0..frame_count {
        let frame = fixture_frame(id, (64, 48), 500);
        for pattern in patterns {
            let mut previous = -1.0f64;
            let mut ok = true;
            for severity in 1..=pattern.max_severity() {
                let spec = CorruptionSpec::new(pattern, severity, 77).unwrap();
                let corrupted = corrupt_frame(&frame, &spec, &table).unwrap();
                let value = proxy(pattern, &frame, &corrupted);
                if value < previous {
                    ok = false;
                }
                previous = value;
            }
            cells += 1;
            if ok {
                monotone += 1;
            }
        }
    }
    let fraction = f64::from(monotone) / f64::from(cells);
    assert!(
        fraction >= 0.95,
        "only {monotone}/{cells} cells monotone ({fraction:.3})"
    );
    pass(
        9,
        &format!(
            "{monotone}/{cells} frame×pattern cells non-decreasing ({:.1}%)",
            fraction * 100.0
        ),
    );
}

// --- 10. parser fuzz safety ---------------------------------------------------------

#[test]
fn criterion_10_fuzz_safety() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xF0_22_51);
    let runs = 10_000;
    let mut structured_errors = 0u64;
    for i in 0..runs {
        let len = rng.gen_range(0..256usize);
        let mut bytes = vec![0u8; len];
        rng.fill(&mut bytes[..]);
        // bias some inputs toward almost-valid shapes
        match i % 5 {
            1 => bytes.extend_from_slice(b"P2: 1 0 0 0"),
            2 => {
                let mut prefixed = b"Car 0.0 0 ".to_vec();
                prefixed.extend_from_slice(&bytes);
                bytes = prefixed;
            }
            3 => {
                let mut png = b"\x89PNG\r\n\x1a\n".to_vec();
                png.extend_from_slice(&bytes);
                bytes = png;
            }
            _ => {}
        }

        let outcomes: [Result<(), msfbench_core::Error>; 6] = [
            parse_point_cloud(&bytes).map(drop),
            std::str::from_utf8(&bytes)
                .map_err(msfbench_core::Error::from)
                .and_then(|t| parse_calibration(t).map(drop)),
            std::str::from_utf8(&bytes)
                .map_err(msfbench_core::Error::from)
                .and_then(|t| parse_labels(t, LabelTask::Detection).map(drop)),
            std::str::from_utf8(&bytes)
                .map_err(msfbench_core::Error::from)
                .and_then(|t| parse_labels(t, LabelTask::Tracking).map(drop)),
            msfbench_core::io::decode_depth_png(&bytes).map(drop),
            msfbench_core::io::decode_image_png(&bytes).map(drop),
        ];
        for outcome in outcomes {
            if outcome.is_err() {
                structured_errors += 1;
            }
        }
    }
    pass(
        10,
        &format!("{runs} fuzz inputs × 6 parsers, {structured_errors} structured errors, 0 panics"),
    );
}
