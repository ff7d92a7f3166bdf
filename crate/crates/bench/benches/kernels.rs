use criterion::{black_box, criterion_group, criterion_main, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use msfbench_bench::{bench_calib, bench_cloud, bench_image};
use msfbench_core::corrupt::{camera, corrupt_frame, lidar, CorruptionSpec, Pattern, SeverityTable};
use msfbench_core::geometry::{box_iou_3d, project_to_image};
use msfbench_core::types::{BBox2D, FrameBundle, ObjectClass, ObjectLabel};

fn random_box(rng: &mut impl Rng) -> ObjectLabel {
    ObjectLabel {
        class: ObjectClass::Car,
        truncation: 0.0,
        occlusion: 0,
        alpha: 0.0,
        bbox2d: BBox2D::new(0.0, 0.0, 60.0, 40.0),
        dims: (
            rng.gen_range(1.0..2.5),
            rng.gen_range(1.0..2.5),
            rng.gen_range(2.0..5.0),
        ),
        location: msfbench_core::nalgebra::Vector3::new(
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-0.5..0.5),
            rng.gen_range(-3.0..3.0),
        ),
        rotation_y: rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
        score: None,
        track_id: None,
        frame: None,
    }
}

fn iou_benchmark(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let pairs: Vec<(ObjectLabel, ObjectLabel)> = (0..256)
        .map(|_| (random_box(&mut rng), random_box(&mut rng)))
        .collect();
    c.bench_function("box_iou_3d_256_pairs", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for (x, y) in &pairs {
                acc += box_iou_3d(black_box(x), black_box(y));
            }
            acc
        })
    });
}

fn projection_benchmark(c: &mut Criterion) {
    let cloud = bench_cloud(120_000);
    let calib = bench_calib();
    c.bench_function("project_120k_points", |b| {
        b.iter(|| project_to_image(black_box(&cloud), black_box(&calib)))
    });
}

fn corruption_benchmarks(c: &mut Criterion) {
    let table = SeverityTable::default();
    let frame = FrameBundle {
        frame_id: 0,
        stem: "000000".to_string(),
        image: bench_image(1242, 375),
        cloud: bench_cloud(120_000),
        calib: bench_calib(),
        depth_gt: None,
    };

    let mut group = c.benchmark_group("corrupt_kitti_sized_frame");
    group.sample_size(10);
    for pattern in [
        Pattern::Fog,
        Pattern::Rain,
        Pattern::GaussianNoiseCamera,
        Pattern::DefocusBlur,
        Pattern::GaussianNoiseLidar,
        Pattern::SignalLossLidar,
    ] {
        let spec = CorruptionSpec::new(pattern, pattern.max_severity().min(3), 7).unwrap();
        group.bench_function(pattern.code(), |b| {
            b.iter(|| corrupt_frame(black_box(&frame), &spec, &table).unwrap())
        });
    }
    group.finish();

    let mut kernels = c.benchmark_group("camera_kernels_1242x375");
    kernels.sample_size(10);
    let depth = vec![25.0f32; 1242 * 375];
    let fog = camera::FogParams::from_table(51.0, &table.fog).unwrap();
    kernels.bench_function("fog", |b| {
        b.iter(|| camera::fog_camera(black_box(&frame.image), &depth, &fog))
    });
    kernels.bench_function("motion_blur_15px", |b| {
        b.iter(|| camera::motion_blur(black_box(&frame.image), 15, 15.0))
    });
    kernels.finish();

    c.bench_function("weather_lidar_120k_points", |b| {
        let params = lidar::LidarWeatherParams::fog(51.0, &table.lidar_weather).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        b.iter(|| lidar::weather_lidar(black_box(&frame.cloud), &params, &mut rng))
    });
}

criterion_group!(
    benches,
    iou_benchmark,
    projection_benchmark,
    corruption_benchmarks
);
criterion_main!(benches);
