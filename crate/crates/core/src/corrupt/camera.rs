//! Image-domain corruption synthesizers.
//!
//! Stochastic ops are pure functions of `(input, params, rng stream)`;
//! deterministic ops of `(input, params)`. Outputs are always valid 8-bit
//! RGB: every path rounds and clamps, and nothing can introduce NaN.

use rand::seq::index::sample;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::severity::{FogTable, RainTable};
use crate::error::{Error, Result};
use crate::geometry::project_to_image;
use crate::types::{CalibrationSet, ImageBuffer, PointCloud};

fn quantize(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

fn check_fraction(fraction: f64) -> Result<()> {
    if !fraction.is_finite() || !(0.0..=1.0).contains(&fraction) {
        return Err(Error::InvalidInput(format!(
            "fraction must lie in [0, 1], got {fraction}"
        )));
    }
    Ok(())
}

/// Scales every channel by `factor` (brighten > 1, darken < 1) and clamps.
/// Operates directly on the stored 8-bit values.
pub fn exposure_shift(img: &ImageBuffer, factor: f64) -> ImageBuffer {
    let pixels = img
        .pixels
        .iter()
        .map(|&v| quantize(f64::from(v) * factor))
        .collect();
    ImageBuffer {
        width: img.width,
        height: img.height,
        pixels,
    }
}

/// Adds N(0, sigma) per channel, sigma expressed as a fraction of full
/// scale (255).
pub fn gaussian_noise_image(
    img: &ImageBuffer,
    sigma_fraction: f64,
    rng: &mut impl Rng,
) -> ImageBuffer {
    let sigma = sigma_fraction * 255.0;
    let normal = Normal::new(0.0, sigma).expect("sigma is finite and non-negative");
    let pixels = img
        .pixels
        .iter()
        .map(|&v| quantize(f64::from(v) + normal.sample(rng)))
        .collect();
    ImageBuffer {
        width: img.width,
        height: img.height,
        pixels,
    }
}

/// Sets exactly `floor(fraction · W · H)` pixels, chosen uniformly without
/// replacement, to black or white (fair coin per pixel). All other pixels
/// are untouched.
pub fn impulse_noise_image(
    img: &ImageBuffer,
    fraction: f64,
    rng: &mut impl Rng,
) -> Result<ImageBuffer> {
    check_fraction(fraction)?;
    let total = img.pixel_count();
    let hits = (fraction * total as f64).floor() as usize;
    let mut indices = sample(rng, total, hits).into_vec();
    indices.sort_unstable();
    let mut out = img.clone();
    for idx in indices {
        let value = if rng.gen::<bool>() { 255 } else { 0 };
        let base = idx * 3;
        out.pixels[base..base + 3].copy_from_slice(&[value; 3]);
    }
    Ok(out)
}

/// Blacks out exactly `floor(fraction · W · H)` pixels chosen uniformly
/// without replacement over the flattened pixel index range.
pub fn drop_pixels(img: &ImageBuffer, fraction: f64, rng: &mut impl Rng) -> Result<ImageBuffer> {
    check_fraction(fraction)?;
    let total = img.pixel_count();
    let hits = (fraction * total as f64).floor() as usize;
    let mut indices = sample(rng, total, hits).into_vec();
    indices.sort_unstable();
    let mut out = img.clone();
    for idx in indices {
        let base = idx * 3;
        out.pixels[base..base + 3].copy_from_slice(&[0, 0, 0]);
    }
    Ok(out)
}

/// Dense convolution kernel with weights summing to 1.
#[derive(Debug, Clone)]
pub struct Kernel {
    pub size: usize,
    pub weights: Vec<f64>,
}

impl Kernel {
    fn normalized(size: usize, mut weights: Vec<f64>) -> Kernel {
        let sum: f64 = weights.iter().sum();
        assert!(sum > 0.0, "kernel must have positive mass");
        for w in &mut weights {
            *w /= sum;
        }
        Kernel { size, weights }
    }

    /// Non-zero taps as `(dx, dy, weight)` relative to the kernel center.
    pub fn taps(&self) -> Vec<(i64, i64, f64)> {
        let c = (self.size / 2) as i64;
        let mut taps = Vec::new();
        for y in 0..self.size {
            for x in 0..self.size {
                let w = self.weights[y * self.size + x];
                if w != 0.0 {
                    taps.push((x as i64 - c, y as i64 - c, w));
                }
            }
        }
        taps
    }
}

/// Line segment of `length` pixels at `angle_deg` from horizontal,
/// rasterized with bilinear splatting and normalized to unit mass.
pub fn line_kernel(length: usize, angle_deg: f64) -> Kernel {
    let length = length.max(1);
    let size = if length % 2 == 1 { length } else { length + 1 };
    let mut weights = vec![0.0; size * size];
    let c = (size / 2) as f64;
    let (dy, dx) = angle_deg.to_radians().sin_cos();
    let half = (length as f64 - 1.0) / 2.0;
    let steps = length.max(1);
    for i in 0..steps {
        let t = -half + i as f64;
        let x = c + t * dx;
        let y = c + t * dy;
        let x0 = x.floor();
        let y0 = y.floor();
        let fx = x - x0;
        let fy = y - y0;
        for (ox, oy, w) in [
            (0.0, 0.0, (1.0 - fx) * (1.0 - fy)),
            (1.0, 0.0, fx * (1.0 - fy)),
            (0.0, 1.0, (1.0 - fx) * fy),
            (1.0, 1.0, fx * fy),
        ] {
            let xi = (x0 + ox) as usize;
            let yi = (y0 + oy) as usize;
            if xi < size && yi < size {
                weights[yi * size + xi] += w;
            }
        }
    }
    Kernel::normalized(size, weights)
}

/// Flat disk of the given radius, normalized to unit mass.
pub fn disk_kernel(radius: usize) -> Kernel {
    let size = 2 * radius + 1;
    let mut weights = vec![0.0; size * size];
    let c = radius as i64;
    let r2 = (radius * radius) as i64;
    for y in 0..size as i64 {
        for x in 0..size as i64 {
            if (x - c).pow(2) + (y - c).pow(2) <= r2 {
                weights[(y * size as i64 + x) as usize] = 1.0;
            }
        }
    }
    Kernel::normalized(size, weights)
}

/// Convolves one channel plane with edge replication at the borders.
/// Accumulation is f64, so kernel mass is preserved to ~1e-12.
pub fn convolve_replicate(plane: &[f32], width: u32, height: u32, kernel: &Kernel) -> Vec<f32> {
    let (w, h) = (width as i64, height as i64);
    let taps = kernel.taps();
    let mut out = vec![0.0f32; plane.len()];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0f64;
            for &(dx, dy, weight) in &taps {
                let sx = (x + dx).clamp(0, w - 1);
                let sy = (y + dy).clamp(0, h - 1);
                acc += weight * f64::from(plane[(sy * w + sx) as usize]);
            }
            out[(y * w + x) as usize] = acc as f32;
        }
    }
    out
}

fn split_planes(img: &ImageBuffer) -> [Vec<f32>; 3] {
    let n = img.pixel_count();
    let mut planes = [vec![0.0f32; n], vec![0.0f32; n], vec![0.0f32; n]];
    for (i, rgb) in img.pixels.chunks_exact(3).enumerate() {
        for (plane, &v) in planes.iter_mut().zip(rgb) {
            plane[i] = f32::from(v);
        }
    }
    planes
}

fn merge_planes(planes: &[Vec<f32>; 3], width: u32, height: u32) -> ImageBuffer {
    let n = width as usize * height as usize;
    let mut pixels = vec![0u8; n * 3];
    for (i, rgb) in pixels.chunks_exact_mut(3).enumerate() {
        for (channel, plane) in rgb.iter_mut().zip(planes) {
            *channel = quantize(f64::from(plane[i]));
        }
    }
    ImageBuffer {
        width,
        height,
        pixels,
    }
}

fn convolve_image(img: &ImageBuffer, kernel: &Kernel) -> ImageBuffer {
    let planes = split_planes(img);
    let blurred = [
        convolve_replicate(&planes[0], img.width, img.height, kernel),
        convolve_replicate(&planes[1], img.width, img.height, kernel),
        convolve_replicate(&planes[2], img.width, img.height, kernel),
    ];
    merge_planes(&blurred, img.width, img.height)
}

/// Linear blur along a fixed camera-shake direction.
pub fn motion_blur(img: &ImageBuffer, length_px: usize, angle_deg: f64) -> ImageBuffer {
    convolve_image(img, &line_kernel(length_px, angle_deg))
}

/// Out-of-focus blur with a flat disk point-spread function.
pub fn defocus_blur(img: &ImageBuffer, radius_px: usize) -> ImageBuffer {
    convolve_image(img, &disk_kernel(radius_px))
}

/// Source position sampled by the destination pixel `(x, y)` under radial
/// distortion `scale = 1 + k1·r² + k2·r⁴`, with r the distance from the
/// image center normalized by the half-diagonal.
pub fn distortion_source(x: f64, y: f64, width: u32, height: u32, k1: f64, k2: f64) -> (f64, f64) {
    let cx = f64::from(width - 1) / 2.0;
    let cy = f64::from(height - 1) / 2.0;
    let half_diagonal = (cx * cx + cy * cy).sqrt().max(1.0);
    let nx = (x - cx) / half_diagonal;
    let ny = (y - cy) / half_diagonal;
    let r2 = nx * nx + ny * ny;
    let scale = 1.0 + k1 * r2 + k2 * r2 * r2;
    (cx + (x - cx) * scale, cy + (y - cy) * scale)
}

fn bilinear(img: &ImageBuffer, sx: f64, sy: f64) -> Option<[f64; 3]> {
    let (w, h) = (f64::from(img.width), f64::from(img.height));
    if !(0.0..=w - 1.0).contains(&sx) || !(0.0..=h - 1.0).contains(&sy) {
        return None;
    }
    let x0 = sx.floor() as u32;
    let y0 = sy.floor() as u32;
    let fx = sx - f64::from(x0);
    let fy = sy - f64::from(y0);
    let x1 = (x0 + 1).min(img.width - 1);
    let y1 = (y0 + 1).min(img.height - 1);
    let p00 = img.get(x0, y0);
    let p10 = img.get(x1, y0);
    let p01 = img.get(x0, y1);
    let p11 = img.get(x1, y1);
    let mut out = [0.0; 3];
    for c in 0..3 {
        let top = f64::from(p00[c]) * (1.0 - fx) + f64::from(p10[c]) * fx;
        let bottom = f64::from(p01[c]) * (1.0 - fx) + f64::from(p11[c]) * fx;
        out[c] = top * (1.0 - fy) + bottom * fy;
    }
    Some(out)
}

/// Inverse-mapped radial lens distortion with bilinear sampling; pixels
/// that map outside the source image come out black.
pub fn radial_distortion(img: &ImageBuffer, k1: f64, k2: f64) -> ImageBuffer {
    let mut out = ImageBuffer::filled(img.width, img.height, [0, 0, 0]);
    for y in 0..img.height {
        for x in 0..img.width {
            let (sx, sy) =
                distortion_source(f64::from(x), f64::from(y), img.width, img.height, k1, k2);
            if let Some(rgb) = bilinear(img, sx, sy) {
                out.set(x, y, [quantize(rgb[0]), quantize(rgb[1]), quantize(rgb[2])]);
            }
        }
    }
    out
}

/// Koschmieder fog parameters: extinction derived from meteorological
/// visibility under the 5% contrast convention, `β = ln(20) / V`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FogParams {
    pub visibility_m: f64,
    pub atmospheric_light: [f64; 3],
    pub extinction: f64,
}

impl FogParams {
    pub fn from_visibility(visibility_m: f64, atmospheric_light: [f64; 3]) -> Result<Self> {
        if !visibility_m.is_finite() || visibility_m <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "visibility must be positive, got {visibility_m}"
            )));
        }
        Ok(FogParams {
            visibility_m,
            atmospheric_light,
            extinction: 20.0f64.ln() / visibility_m,
        })
    }

    pub fn from_table(visibility_m: f64, table: &FogTable) -> Result<Self> {
        FogParams::from_visibility(visibility_m, table.atmospheric_light)
    }
}

fn apply_veiling(img: &ImageBuffer, depth_m: &[f32], extinction: f64, light: [f64; 3]) -> ImageBuffer {
    assert_eq!(depth_m.len(), img.pixel_count(), "depth plane size mismatch");
    let mut out = img.clone();
    for (rgb, &d) in out.pixels.chunks_exact_mut(3).zip(depth_m) {
        let t = (-extinction * f64::from(d)).exp();
        for (channel, &a) in rgb.iter_mut().zip(&light) {
            let v = f64::from(*channel);
            *channel = quantize(v * t + a * 255.0 * (1.0 - t));
        }
    }
    out
}

/// Per-pixel Koschmieder blend: `out = in·e^(−βd) + A·(1 − e^(−βd))`.
pub fn fog_camera(img: &ImageBuffer, depth_m: &[f32], params: &FogParams) -> ImageBuffer {
    apply_veiling(img, depth_m, params.extinction, params.atmospheric_light)
}

/// Photometric rain: a semi-transparent streak layer plus rain-rate-derived
/// veiling. Both are controlled by the rainfall rate alone, so the camera
/// and LiDAR branches share one physical knob.
#[derive(Debug, Clone, PartialEq)]
pub struct RainParams {
    pub rate_mm_h: f64,
    pub streak_density: f64,
    pub streak_length_px: f64,
    pub streak_angle_deg: f64,
    pub streak_alpha: f64,
    pub streak_brightness: f64,
    /// Veiling extinction (1/m), `coeff · rate^exponent`.
    pub veiling_extinction: f64,
    pub veiling_light: [f64; 3],
}

impl RainParams {
    pub fn from_rate(rate_mm_h: f64, table: &RainTable, veiling_light: [f64; 3]) -> Result<Self> {
        if !rate_mm_h.is_finite() || rate_mm_h <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "rain rate must be positive, got {rate_mm_h}"
            )));
        }
        Ok(RainParams {
            rate_mm_h,
            streak_density: table.streak_density,
            streak_length_px: table.streak_length_px,
            streak_angle_deg: table.streak_angle_deg,
            streak_alpha: table.streak_alpha,
            streak_brightness: table.streak_brightness,
            veiling_extinction: table.veiling_coeff * rate_mm_h.powf(table.veiling_exponent),
            veiling_light,
        })
    }

    /// Streaks for an image: `round(density · rate · pixels / 1e6)`.
    pub fn streak_count(&self, width: u32, height: u32) -> usize {
        let megapixels = f64::from(width) * f64::from(height) / 1e6;
        (self.streak_density * self.rate_mm_h * megapixels).round() as usize
    }
}

/// Rain on the camera: veiling first, then streaks composited on top.
pub fn rain_camera(
    img: &ImageBuffer,
    depth_m: &[f32],
    params: &RainParams,
    rng: &mut impl Rng,
) -> ImageBuffer {
    let mut out = apply_veiling(img, depth_m, params.veiling_extinction, params.veiling_light);

    let count = params.streak_count(img.width, img.height);
    let streak_value = params.streak_brightness * 255.0;
    let alpha = params.streak_alpha;
    for _ in 0..count {
        let x0: f64 = rng.gen_range(0.0..f64::from(img.width));
        let y0: f64 = rng.gen_range(0.0..f64::from(img.height));
        // slant jitter of ±3° around the nominal streak angle
        let angle = (params.streak_angle_deg + rng.gen_range(-3.0..3.0)).to_radians();
        let (dx, dy) = (angle.sin(), angle.cos());
        let steps = params.streak_length_px.round().max(1.0) as usize;
        for s in 0..steps {
            let x = x0 + dx * s as f64;
            let y = y0 + dy * s as f64;
            if x < 0.0 || y < 0.0 || x >= f64::from(img.width) || y >= f64::from(img.height) {
                break;
            }
            let (xi, yi) = (x as u32, y as u32);
            let base = (yi as usize * img.width as usize + xi as usize) * 3;
            for c in 0..3 {
                let v = f64::from(out.pixels[base + c]);
                out.pixels[base + c] = quantize(v * (1.0 - alpha) + streak_value * alpha);
            }
        }
    }
    out
}

/// Per-pixel scene depth for the weather models: LiDAR returns projected
/// into the image (keeping the nearest return per pixel), holes filled from
/// the nearest populated pixel, `fallback_m` where nothing projects at all.
pub fn lidar_depth_plane(
    cloud: &PointCloud,
    calib: &CalibrationSet,
    width: u32,
    height: u32,
    fallback_m: f64,
) -> Vec<f32> {
    let (w, h) = (width as usize, height as usize);
    let mut plane = vec![f32::NAN; w * h];
    for p in project_to_image(cloud, calib) {
        let x = p.u.round();
        let y = p.v.round();
        if x < 0.0 || y < 0.0 || x >= f64::from(width) || y >= f64::from(height) {
            continue;
        }
        let idx = y as usize * w + x as usize;
        let depth = p.depth as f32;
        if plane[idx].is_nan() || depth < plane[idx] {
            plane[idx] = depth;
        }
    }

    // nearest-valid fill: multi-source BFS from every populated pixel
    let mut queue: std::collections::VecDeque<usize> = plane
        .iter()
        .enumerate()
        .filter(|(_, d)| !d.is_nan())
        .map(|(idx, _)| idx)
        .collect();
    if queue.is_empty() {
        return vec![fallback_m as f32; w * h];
    }
    while let Some(idx) = queue.pop_front() {
        let (x, y) = (idx % w, idx / w);
        let mut visit = |nx: usize, ny: usize| {
            let nidx = ny * w + nx;
            if plane[nidx].is_nan() {
                plane[nidx] = plane[idx];
                queue.push_back(nidx);
            }
        };
        if x > 0 {
            visit(x - 1, y);
        }
        if x + 1 < w {
            visit(x + 1, y);
        }
        if y > 0 {
            visit(x, y - 1);
        }
        if y + 1 < h {
            visit(x, y + 1);
        }
    }
    plane
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corrupt::derive_rng;
    use crate::corrupt::{Pattern, SeverityTable};
    use approx::assert_abs_diff_eq;

    fn rng() -> impl Rng {
        derive_rng(99, 0, Pattern::GaussianNoiseCamera, 1)
    }

    /// Synthetic "natural" image: smooth gradients with texture.
    pub(crate) fn fixture_image(width: u32, height: u32) -> ImageBuffer {
        let mut img = ImageBuffer::filled(width, height, [0, 0, 0]);
        for y in 0..height {
            for x in 0..width {
                let fx = f64::from(x) / f64::from(width);
                let fy = f64::from(y) / f64::from(height);
                let r = 200.0 * fx + 30.0 * (fy * 12.0).sin();
                let g = 120.0 + 80.0 * (fx * 9.0).cos() * fy;
                let b = 255.0 * fy;
                img.set(x, y, [quantize(r), quantize(g), quantize(b)]);
            }
        }
        img
    }

    fn mean_value(img: &ImageBuffer) -> f64 {
        img.pixels.iter().map(|&v| f64::from(v)).sum::<f64>() / img.pixels.len() as f64
    }

    fn mean_abs_delta(a: &ImageBuffer, b: &ImageBuffer) -> f64 {
        a.pixels
            .iter()
            .zip(&b.pixels)
            .map(|(&x, &y)| (f64::from(x) - f64::from(y)).abs())
            .sum::<f64>()
            / a.pixels.len() as f64
    }

    #[test]
    fn brighten_black_stays_black() {
        let img = ImageBuffer::filled(8, 8, [0, 0, 0]);
        for factor in [1.3, 1.6, 1.9] {
            assert_eq!(exposure_shift(&img, factor).pixels, img.pixels);
        }
    }

    #[test]
    fn darken_level_two_halves_mid_gray() {
        let table = SeverityTable::default();
        let img = ImageBuffer::filled(4, 4, [128, 128, 128]);
        let out = exposure_shift(&img, table.exposure.darken[1]);
        assert!(out.pixels.iter().all(|&v| v == 64));
    }

    #[test]
    fn darker_levels_have_lower_mean() {
        let table = SeverityTable::default();
        let img = fixture_image(64, 48);
        let means: Vec<f64> = table
            .exposure
            .darken
            .iter()
            .map(|&f| mean_value(&exposure_shift(&img, f)))
            .collect();
        assert!(means[0] > means[1] && means[1] > means[2]);
    }

    #[test]
    fn gaussian_noise_statistics() {
        let img = ImageBuffer::filled(400, 250, [128, 128, 128]);
        let sigma_fraction = 0.04;
        let out = gaussian_noise_image(&img, sigma_fraction, &mut rng());
        let n = out.pixels.len() as f64;
        let deltas: Vec<f64> = out
            .pixels
            .iter()
            .zip(&img.pixels)
            .map(|(&a, &b)| f64::from(a) - f64::from(b))
            .collect();
        let mean = deltas.iter().sum::<f64>() / n;
        let sigma = sigma_fraction * 255.0;
        assert!(mean.abs() < 3.0 * sigma / n.sqrt() + 0.5, "mean delta {mean}");
        let var = deltas.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / n;
        // quantization adds ~1/12 to the variance
        let measured = var.sqrt();
        assert!(
            (measured - sigma).abs() / sigma < 0.05,
            "std {measured} vs sigma {sigma}"
        );
    }

    #[test]
    fn gaussian_noise_is_deterministic() {
        let img = fixture_image(32, 32);
        let a = gaussian_noise_image(&img, 0.08, &mut rng());
        let b = gaussian_noise_image(&img, 0.08, &mut rng());
        assert_eq!(a, b);
    }

    #[test]
    fn impulse_noise_hits_exact_fraction() {
        let img = ImageBuffer::filled(1000, 1000, [128, 128, 128]);
        let out = impulse_noise_image(&img, 0.05, &mut rng()).unwrap();
        let changed = out
            .pixels
            .chunks_exact(3)
            .filter(|p| p != &[128, 128, 128])
            .count();
        assert_eq!(changed, 50_000);
        assert!(out
            .pixels
            .chunks_exact(3)
            .all(|p| p == [128, 128, 128] || p == [0, 0, 0] || p == [255, 255, 255]));
    }

    #[test]
    fn impulse_noise_levels_are_monotone() {
        let table = SeverityTable::default();
        let img = ImageBuffer::filled(200, 200, [90, 90, 90]);
        let counts: Vec<usize> = table
            .image_noise
            .impulse_fraction
            .iter()
            .map(|&f| {
                let out = impulse_noise_image(&img, f, &mut rng()).unwrap();
                out.pixels.chunks_exact(3).filter(|p| p != &[90, 90, 90]).count()
            })
            .collect();
        assert!(counts[0] < counts[1] && counts[1] < counts[2]);
    }

    #[test]
    fn blur_keeps_constant_images_fixed() {
        let img = ImageBuffer::filled(24, 24, [77, 140, 203]);
        assert_eq!(motion_blur(&img, 7, 15.0), img);
        assert_eq!(defocus_blur(&img, 3), img);
    }

    #[test]
    fn defocus_impulse_response_is_a_mass_preserving_disk() {
        let kernel = disk_kernel(3);
        let mut plane = vec![0.0f32; 31 * 31];
        plane[15 * 31 + 15] = 255.0;
        let out = convolve_replicate(&plane, 31, 31, &kernel);
        let mass: f64 = out.iter().map(|&v| f64::from(v)).sum();
        assert_abs_diff_eq!(mass, 255.0, epsilon = 255.0 * 1e-6);
        // support is exactly the disk
        for y in 0..31i64 {
            for x in 0..31i64 {
                let inside = (x - 15).pow(2) + (y - 15).pow(2) <= 9;
                let v = out[(y * 31 + x) as usize];
                assert_eq!(v > 0.0, inside, "pixel ({x},{y})");
            }
        }
    }

    #[test]
    fn blur_reduces_variance_monotonically() {
        let table = SeverityTable::default();
        let img = fixture_image(96, 64);
        let variance = |im: &ImageBuffer| {
            let mean = mean_value(im);
            im.pixels
                .iter()
                .map(|&v| (f64::from(v) - mean).powi(2))
                .sum::<f64>()
                / im.pixels.len() as f64
        };
        let mut previous = variance(&img);
        for &r in &table.blur.defocus_radius_px {
            let v = variance(&defocus_blur(&img, r));
            assert!(v <= previous + 1e-9);
            previous = v;
        }
    }

    #[test]
    fn distortion_center_pixel_unchanged() {
        let img = fixture_image(65, 41);
        let out = radial_distortion(&img, -0.2, -0.2 / 3.0);
        assert_eq!(out.get(32, 20), img.get(32, 20));
    }

    #[test]
    fn zero_coefficients_are_identity() {
        let img = fixture_image(33, 21);
        assert_eq!(radial_distortion(&img, 0.0, 0.0), img);
    }

    #[test]
    fn corner_displacement_grows_with_level() {
        let table = SeverityTable::default();
        let displacements: Vec<f64> = table
            .distortion
            .k1
            .iter()
            .map(|&k1| {
                let (sx, sy) = distortion_source(0.0, 0.0, 1242, 375, k1, k1 / 3.0);
                (sx * sx + sy * sy).sqrt()
            })
            .collect();
        assert!(displacements[0] < displacements[1] && displacements[1] < displacements[2]);
    }

    #[test]
    fn fog_zero_depth_is_identity() {
        let img = fixture_image(16, 16);
        let depth = vec![0.0f32; 16 * 16];
        let params = FogParams::from_visibility(51.0, [0.8, 0.8, 0.8]).unwrap();
        assert_eq!(fog_camera(&img, &depth, &params), img);
    }

    #[test]
    fn fog_saturates_to_atmospheric_light() {
        let img = fixture_image(8, 8);
        let depth = vec![1e6f32; 64];
        let params = FogParams::from_visibility(104.0, [0.8, 0.8, 0.8]).unwrap();
        let out = fog_camera(&img, &depth, &params);
        assert!(out.pixels.iter().all(|&v| v == 204));
    }

    #[test]
    fn fog_extinction_from_visibility() {
        let params = FogParams::from_visibility(51.0, [0.8, 0.8, 0.8]).unwrap();
        assert_abs_diff_eq!(params.extinction, 0.05873984850105864, epsilon = 1e-12);
    }

    #[test]
    fn fog_stays_between_input_and_airlight() {
        let img = fixture_image(32, 24);
        let depth: Vec<f32> = (0..32 * 24).map(|i| (i % 90) as f32).collect();
        let light = [0.7, 0.8, 0.9];
        let params = FogParams::from_visibility(80.0, light).unwrap();
        let out = fog_camera(&img, &depth, &params);
        for ((&v, &o), &l) in img
            .pixels
            .iter()
            .zip(&out.pixels)
            .zip(light.iter().cycle())
        {
            let a = quantize(l * 255.0);
            assert!(o >= v.min(a) && o <= v.max(a));
        }
    }

    #[test]
    fn rain_streak_count_grows_with_rate() {
        let table = SeverityTable::default();
        let counts: Vec<usize> = table
            .rain
            .rate_mm_h
            .iter()
            .map(|&rate| {
                RainParams::from_rate(rate, &table.rain, table.fog.atmospheric_light)
                    .unwrap()
                    .streak_count(1242, 375)
            })
            .collect();
        assert!(counts[0] < counts[1] && counts[1] < counts[2]);
        // round(120 * 10 * 1242*375 / 1e6)
        assert_eq!(counts[0], 559);
    }

    #[test]
    fn rain_is_seed_deterministic_and_monotone() {
        let table = SeverityTable::default();
        let img = fixture_image(200, 120);
        let depth = vec![25.0f32; 200 * 120];
        let render = |rate: f64| {
            let params =
                RainParams::from_rate(rate, &table.rain, table.fog.atmospheric_light).unwrap();
            rain_camera(&img, &depth, &params, &mut rng())
        };
        assert_eq!(render(25.0), render(25.0));
        let deltas: Vec<f64> = table
            .rain
            .rate_mm_h
            .iter()
            .map(|&rate| mean_abs_delta(&img, &render(rate)))
            .collect();
        assert!(deltas[0] < deltas[1] && deltas[1] < deltas[2], "{deltas:?}");
    }

    #[test]
    fn drop_pixels_exact_counts() {
        let img = ImageBuffer::filled(40, 25, [10, 20, 30]);
        let full = drop_pixels(&img, 1.0, &mut rng()).unwrap();
        assert!(full.pixels.iter().all(|&v| v == 0));
        let half = drop_pixels(&img, 0.5, &mut rng()).unwrap();
        let black = half.pixels.chunks_exact(3).filter(|p| p == &[0, 0, 0]).count();
        assert_eq!(black, 500);
        let none = drop_pixels(&img, 0.0, &mut rng()).unwrap();
        assert_eq!(none, img);
    }

    #[test]
    fn depth_plane_fills_from_nearest_return() {
        use crate::types::Point;
        let calib = CalibrationSet::identity();
        // One point projecting to (0, 0) with depth 4.
        let cloud = PointCloud::new(vec![Point::new(0.0, 0.0, 4.0, 1.0)]);
        let plane = lidar_depth_plane(&cloud, &calib, 3, 2, 30.0);
        assert!(plane.iter().all(|&d| d == 4.0));
        // No returns at all → fallback everywhere.
        let empty = lidar_depth_plane(&PointCloud::default(), &calib, 2, 2, 30.0);
        assert!(empty.iter().all(|&d| d == 30.0));
    }
}
