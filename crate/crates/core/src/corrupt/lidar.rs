//! Point-cloud-domain corruption synthesizers: coordinate noise, weather
//! attenuation/scatter, and point loss.

use rand::seq::index::sample;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::severity::LidarWeatherTable;
use crate::error::{Error, Result};
use crate::types::{Point, PointCloud};

fn check_fraction(fraction: f64) -> Result<()> {
    if !fraction.is_finite() || !(0.0..=1.0).contains(&fraction) {
        return Err(Error::InvalidInput(format!(
            "fraction must lie in [0, 1], got {fraction}"
        )));
    }
    Ok(())
}

/// Perturbs every coordinate by N(0, sigma_m); intensity and point count
/// are unchanged.
pub fn gaussian_noise_points(pc: &PointCloud, sigma_m: f64, rng: &mut impl Rng) -> PointCloud {
    let normal = Normal::new(0.0, sigma_m).expect("sigma is finite and non-negative");
    let points = pc
        .points
        .iter()
        .map(|p| {
            Point::new(
                p.x + normal.sample(rng),
                p.y + normal.sample(rng),
                p.z + normal.sample(rng),
                p.intensity,
            )
        })
        .collect();
    PointCloud::new(points)
}

/// Displaces exactly `floor(fraction · N)` points, chosen uniformly, by
/// ±offset_m per axis with an independent sign per axis. Every displaced
/// point moves exactly `offset_m · √3` in Euclidean norm; the rest are
/// untouched.
pub fn impulse_noise_points(
    pc: &PointCloud,
    fraction: f64,
    offset_m: f64,
    rng: &mut impl Rng,
) -> Result<PointCloud> {
    check_fraction(fraction)?;
    let hits = (fraction * pc.len() as f64).floor() as usize;
    let mut indices = sample(rng, pc.len(), hits).into_vec();
    indices.sort_unstable();
    let mut out = pc.clone();
    for idx in indices {
        let p = &mut out.points[idx];
        for coord in [&mut p.x, &mut p.y, &mut p.z] {
            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            *coord += sign * offset_m;
        }
    }
    Ok(out)
}

/// Weather acting on the LiDAR: two-way extinction over each return's
/// range, with weak returns either scattered back from a droplet on the
/// same ray or lost entirely.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LidarWeatherParams {
    /// One-way extinction coefficient, 1/m.
    pub extinction: f64,
    /// Chance that a too-weak return becomes a droplet echo instead of
    /// disappearing.
    pub scatter_probability: f64,
    /// Attenuated intensity below this is no longer a valid surface return.
    pub intensity_floor: f64,
}

impl LidarWeatherParams {
    pub fn new(extinction: f64, scatter_probability: f64, intensity_floor: f64) -> Result<Self> {
        if !extinction.is_finite() || extinction < 0.0 {
            return Err(Error::InvalidInput(format!(
                "extinction must be non-negative, got {extinction}"
            )));
        }
        check_fraction(scatter_probability)?;
        check_fraction(intensity_floor)?;
        Ok(LidarWeatherParams {
            extinction,
            scatter_probability,
            intensity_floor,
        })
    }

    /// Fog: `α = ln(20) / visibility`, matching the camera-side convention.
    pub fn fog(visibility_m: f64, table: &LidarWeatherTable) -> Result<Self> {
        if !visibility_m.is_finite() || visibility_m <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "visibility must be positive, got {visibility_m}"
            )));
        }
        LidarWeatherParams::new(
            20.0f64.ln() / visibility_m,
            table.scatter_probability,
            table.intensity_floor,
        )
    }

    /// Rain: power-law extinction `α = a · rate^b`.
    pub fn rain(rate_mm_h: f64, table: &LidarWeatherTable) -> Result<Self> {
        if !rate_mm_h.is_finite() || rate_mm_h <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "rain rate must be positive, got {rate_mm_h}"
            )));
        }
        LidarWeatherParams::new(
            table.rain_extinction_a * rate_mm_h.powf(table.rain_extinction_b),
            table.scatter_probability,
            table.intensity_floor,
        )
    }
}

/// Applies two-way extinction `i · e^(−2αr)` per return. Returns whose
/// attenuated intensity drops below the floor are, with
/// `scatter_probability`, replaced by a droplet echo at range `u·r`
/// (u ~ U(0.05, 1)) along the same ray; otherwise they are dropped.
///
/// Scatter intensity is uniform on `[0, min(0.1, original intensity)]`, so
/// the op never brightens a return. α = 0 is the no-weather case and leaves
/// the cloud untouched.
pub fn weather_lidar(
    pc: &PointCloud,
    params: &LidarWeatherParams,
    rng: &mut impl Rng,
) -> PointCloud {
    if params.extinction == 0.0 {
        return pc.clone();
    }
    let mut points = Vec::with_capacity(pc.len());
    for p in &pc.points {
        let range = p.range();
        let attenuated = (p.intensity * (-2.0 * params.extinction * range).exp()).clamp(0.0, 1.0);
        if attenuated >= params.intensity_floor {
            points.push(Point::new(p.x, p.y, p.z, attenuated));
        } else if rng.gen::<f64>() < params.scatter_probability {
            let u: f64 = rng.gen_range(0.05..1.0);
            let intensity = rng.gen::<f64>() * p.intensity.min(0.1);
            points.push(Point::new(p.x * u, p.y * u, p.z * u, intensity));
        }
    }
    PointCloud::new(points)
}

/// Removes exactly `floor(fraction · N)` points, chosen uniformly without
/// replacement; survivors keep their order.
pub fn drop_points(pc: &PointCloud, fraction: f64, rng: &mut impl Rng) -> Result<PointCloud> {
    check_fraction(fraction)?;
    let removals = (fraction * pc.len() as f64).floor() as usize;
    let mut removed = vec![false; pc.len()];
    for idx in sample(rng, pc.len(), removals) {
        removed[idx] = true;
    }
    let points = pc
        .points
        .iter()
        .zip(&removed)
        .filter(|(_, &gone)| !gone)
        .map(|(p, _)| *p)
        .collect();
    Ok(PointCloud::new(points))
}
