//! Average precision over forty recall levels for 3D detection.
//!
//! Matching is per frame, greedy in descending score: a prediction takes
//! the not-yet-matched evaluated ground-truth box of highest 3D IOU when
//! that IOU clears the threshold. Predictions that clear the threshold only
//! against ignored ground truth (difficulty-gated boxes or DontCare
//! regions) are discarded from the curve. The precision/recall curve is
//! pooled over all frames jointly, and AP is the mean of the
//! max-interpolated precision at the recall levels k/R, k = 1..R.

use crate::error::{Error, Result};
use crate::geometry::{box_iou_2d, box_iou_3d};
use crate::types::ObjectLabel;

use super::filter::{filter_difficulty, DetectionEvalConfig};

/// Ground truth and predictions for one frame, associated by frame id.
#[derive(Debug, Clone, Default)]
pub struct DetectionFrame {
    pub frame_id: i64,
    pub ground_truth: Vec<ObjectLabel>,
    pub predictions: Vec<ObjectLabel>,
}

#[derive(Debug, Clone, Copy)]
enum Outcome {
    TruePositive,
    FalsePositive,
    Ignored,
}

/// Classifies every class-matching prediction in one frame.
fn match_frame(
    frame: &DetectionFrame,
    config: &DetectionEvalConfig,
) -> Result<(Vec<(f64, Outcome)>, usize)> {
    let (evaluated, ignored) = filter_difficulty(&frame.ground_truth, config);

    let mut order: Vec<usize> = (0..frame.predictions.len())
        .filter(|&i| frame.predictions[i].class == config.class)
        .collect();
    for &i in &order {
        if frame.predictions[i].score.is_none() {
            return Err(Error::MissingLabelField {
                field: "score",
                context: "detection evaluation",
            });
        }
    }
    order.sort_by(|&a, &b| {
        let sa = frame.predictions[a].score.unwrap_or(f64::NEG_INFINITY);
        let sb = frame.predictions[b].score.unwrap_or(f64::NEG_INFINITY);
        sb.total_cmp(&sa)
    });

    let mut gt_matched = vec![false; evaluated.len()];
    let mut outcomes = Vec::with_capacity(order.len());
    for i in order {
        let pred = &frame.predictions[i];
        let score = pred.score.expect("checked above");

        let mut best: Option<(usize, f64)> = None;
        for (g, gt) in evaluated.iter().enumerate() {
            if gt_matched[g] {
                continue;
            }
            let iou = box_iou_3d(pred, gt);
            if best.is_none_or(|(_, b)| iou > b) {
                best = Some((g, iou));
            }
        }
        if let Some((g, iou)) = best {
            if iou >= config.iou_threshold {
                gt_matched[g] = true;
                outcomes.push((score, Outcome::TruePositive));
                continue;
            }
        }

        let hits_ignored = ignored.iter().any(|ig| {
            if ig.dims.0 > 0.0 && ig.dims.1 > 0.0 && ig.dims.2 > 0.0 {
                box_iou_3d(pred, ig) >= config.iou_threshold
            } else {
                // DontCare regions carry no 3D extent; gate on how much of
                // the prediction's 2D box falls inside the region.
                box_iou_2d(&pred.bbox2d, &ig.bbox2d) > 0.0 && {
                    let iw = (pred.bbox2d.right.min(ig.bbox2d.right)
                        - pred.bbox2d.left.max(ig.bbox2d.left))
                        .max(0.0);
                    let ih = (pred.bbox2d.bottom.min(ig.bbox2d.bottom)
                        - pred.bbox2d.top.max(ig.bbox2d.top))
                        .max(0.0);
                    iw * ih / pred.bbox2d.area() > 0.5
                }
            }
        });
        if hits_ignored {
            outcomes.push((score, Outcome::Ignored));
        } else {
            outcomes.push((score, Outcome::FalsePositive));
        }
    }
    Ok((outcomes, evaluated.len()))
}

/// Cumulative (tp, fp) operating points over the pooled curve. Predictions
/// with equal scores enter the curve together, which makes the result
/// independent of frame ordering.
fn operating_points(mut pooled: Vec<(f64, bool)>) -> Vec<(u64, u64)> {
    pooled.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut points = Vec::new();
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
    points
}

/// Mean of max-interpolated precision at recall levels k/R. The recall
/// comparison `tp/total ≥ k/R` is evaluated as `R·tp ≥ k·total`, which is
/// exact in integers.
fn interpolate_ap(points: &[(u64, u64)], total_gt: u64, recall_levels: u32) -> f64 {
    let r = u64::from(recall_levels);
    let mut sum = 0.0;
    for k in 1..=r {
        let mut best = 0.0f64;
        for &(tp, fp) in points {
            if r * tp >= k * total_gt {
                let precision = tp as f64 / (tp + fp) as f64;
                best = best.max(precision);
            }
        }
        sum += best;
    }
    sum / r as f64
}

/// AP over all frames jointly. Errors if no evaluated ground truth exists.
pub fn average_precision(frames: &[DetectionFrame], config: &DetectionEvalConfig) -> Result<f64> {
    let mut pooled: Vec<(f64, bool)> = Vec::new();
    let mut total_gt = 0u64;
    for frame in frames {
        let (outcomes, gt_count) = match_frame(frame, config)?;
        total_gt += gt_count as u64;
        for (score, outcome) in outcomes {
            match outcome {
                Outcome::TruePositive => pooled.push((score, true)),
                Outcome::FalsePositive => pooled.push((score, false)),
                Outcome::Ignored => {}
            }
        }
    }
    if total_gt == 0 {
        return Err(Error::EmptyGroundTruth);
    }
    let points = operating_points(pooled);
    Ok(interpolate_ap(&points, total_gt, config.recall_levels))
}
