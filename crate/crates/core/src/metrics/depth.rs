//! Depth-completion error: RMSE in millimeters over pixels with ground
//! truth.

use crate::error::{Error, Result};
use crate::types::DepthMap;

/// Accumulates squared error over one frame. The prediction must be present
/// at every ground-truth pixel.
fn accumulate(pred: &DepthMap, gt: &DepthMap) -> Result<(f64, u64)> {
    if pred.width != gt.width || pred.height != gt.height {
        return Err(Error::DepthShapeMismatch(
            pred.width,
            pred.height,
            gt.width,
            gt.height,
        ));
    }
    let mut sum_sq = 0.0;
    let mut m = 0u64;
    let mut missing = 0usize;
    let mut first_missing = 0usize;
    for (i, (p, g)) in pred.depth_mm.iter().zip(&gt.depth_mm).enumerate() {
        let Some(g) = g else { continue };
        match p {
            Some(p) => {
                let d = p - g;
                sum_sq += d * d;
                m += 1;
            }
            None => {
                if missing == 0 {
                    first_missing = i;
                }
                missing += 1;
            }
        }
    }
    if missing > 0 {
        return Err(Error::MissingPredictedDepth {
            count: missing,
            first: first_missing,
        });
    }
    Ok((sum_sq, m))
}

/// RMSE (mm) for one frame.
pub fn rmse(pred: &DepthMap, gt: &DepthMap) -> Result<f64> {
    rmse_pooled(&[(pred, gt)])
}

/// RMSE (mm) pooled over several frames: one mean over every ground-truth
/// pixel, so the result is invariant to how pixels are split into frames.
pub fn rmse_pooled(pairs: &[(&DepthMap, &DepthMap)]) -> Result<f64> {
    let mut sum_sq = 0.0;
    let mut m = 0u64;
    for (pred, gt) in pairs {
        let (s, n) = accumulate(pred, gt)?;
        sum_sq += s;
        m += n;
    }
    if m == 0 {
        return Err(Error::NoValidDepthPixels);
    }
    Ok((sum_sq / m as f64).sqrt())
}
