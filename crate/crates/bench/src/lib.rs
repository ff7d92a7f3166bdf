//! Shared fixtures for the criterion benchmarks.

use msfbench_core::nalgebra::{Matrix3, Matrix3x4};
use msfbench_core::types::{CalibrationSet, ImageBuffer, Point, PointCloud};

pub fn bench_image(width: u32, height: u32) -> ImageBuffer {
    let mut img = ImageBuffer::filled(width, height, [0, 0, 0]);
    for y in 0..height {
        for x in 0..width {
            let r = (x * 255 / width) as u8;
            let g = (y * 255 / height) as u8;
            let b = ((x + y) % 256) as u8;
            img.set(x, y, [r, g, b]);
        }
    }
    img
}

pub fn bench_cloud(n: usize) -> PointCloud {
    PointCloud::new(
        (0..n)
            .map(|i| {
                let a = i as f64 * 0.137;
                let r = 4.0 + (i % 60) as f64;
                Point::new(r * a.cos(), r * a.sin() * 0.4, -1.6 + (i % 9) as f64 * 0.3, 0.5)
            })
            .collect(),
    )
}

pub fn bench_calib() -> CalibrationSet {
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
