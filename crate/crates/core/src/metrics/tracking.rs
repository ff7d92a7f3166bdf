//! CLEAR-MOT tracking accuracy.
//!
//! Per frame, correspondences from the previous frame persist while the
//! pair still overlaps; the remaining boxes are matched by an optimal
//! assignment maximizing total 2D IOU over pairs clearing the threshold.
//! An identity switch is counted when a ground-truth track's matched
//! prediction id changes between its consecutive matched frames.

use std::collections::{BTreeMap, BTreeSet};

use pathfinding::kuhn_munkres::kuhn_munkres;
use pathfinding::matrix::Matrix;

use crate::error::{Error, Result};
use crate::geometry::box_iou_2d;
use crate::types::ObjectLabel;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotaConfig {
    pub iou_threshold: f64,
}

impl Default for MotaConfig {
    fn default() -> Self {
        MotaConfig { iou_threshold: 0.5 }
    }
}

/// One frame of boxes with track ids.
#[derive(Debug, Clone, Default)]
pub struct TrackFrame {
    pub frame_id: i64,
    pub boxes: Vec<ObjectLabel>,
}

/// Error totals over the whole sequence.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MotCounts {
    pub false_negatives: u64,
    pub false_positives: u64,
    pub id_switches: u64,
    pub ground_truth: u64,
}

fn unique_ids(boxes: &[ObjectLabel], frame: i64) -> Result<BTreeMap<i64, usize>> {
    let mut ids = BTreeMap::new();
    for (i, b) in boxes.iter().enumerate() {
        let id = b.track_id.ok_or(Error::MissingLabelField {
            field: "track_id",
            context: "tracking evaluation",
        })?;
        if ids.insert(id, i).is_some() {
            return Err(Error::DuplicateTrackId {
                frame,
                track_id: id,
            });
        }
    }
    Ok(ids)
}

/// Weights scaled to integers for the assignment solver; IOUs below the
/// threshold weigh nothing and are discarded from the result.
const IOU_SCALE: f64 = 1e9;

fn optimal_assignment(weights: &[Vec<i64>]) -> Vec<(usize, usize)> {
    let rows = weights.len();
    let cols = weights.first().map_or(0, |r| r.len());
    if rows == 0 || cols == 0 {
        return Vec::new();
    }
    // kuhn_munkres needs rows ≤ columns; transpose if needed
    let transposed = rows > cols;
    let matrix = if transposed {
        Matrix::from_fn(cols, rows, |(r, c)| weights[c][r])
    } else {
        Matrix::from_fn(rows, cols, |(r, c)| weights[r][c])
    };
    let (_, assignment) = kuhn_munkres(&matrix);
    assignment
        .into_iter()
        .enumerate()
        .filter_map(|(r, c)| {
            let (gt, pred) = if transposed { (c, r) } else { (r, c) };
            (weights[gt][pred] > 0).then_some((gt, pred))
        })
        .collect()
}

/// Runs the CLEAR-MOT protocol and returns `(MOTA, counts)`.
///
/// Frames present in only one of the inputs still count (all misses or all
/// false positives). Errors on duplicate track ids within a frame and on an
/// empty ground-truth sequence.
pub fn mota(
    pred_frames: &[TrackFrame],
    gt_frames: &[TrackFrame],
    config: &MotaConfig,
) -> Result<(f64, MotCounts)> {
    let mut gt_by_frame: BTreeMap<i64, &TrackFrame> = BTreeMap::new();
    for f in gt_frames {
        gt_by_frame.insert(f.frame_id, f);
    }
    let mut pred_by_frame: BTreeMap<i64, &TrackFrame> = BTreeMap::new();
    for f in pred_frames {
        pred_by_frame.insert(f.frame_id, f);
    }
    let frame_ids: BTreeSet<i64> = gt_by_frame
        .keys()
        .chain(pred_by_frame.keys())
        .copied()
        .collect();

    let empty = TrackFrame::default();
    let mut counts = MotCounts::default();
    // gt track id → last matched prediction track id (persists across gaps)
    let mut last_match: BTreeMap<i64, i64> = BTreeMap::new();

    for &t in &frame_ids {
        let gts = gt_by_frame.get(&t).copied().unwrap_or(&empty);
        let preds = pred_by_frame.get(&t).copied().unwrap_or(&empty);
        let gt_ids = unique_ids(&gts.boxes, t)?;
        let pred_ids = unique_ids(&preds.boxes, t)?;
        counts.ground_truth += gts.boxes.len() as u64;

        let mut gt_free: BTreeSet<i64> = gt_ids.keys().copied().collect();
        let mut pred_free: BTreeSet<i64> = pred_ids.keys().copied().collect();
        let mut matches: Vec<(i64, i64)> = Vec::new();

        // 1. persist surviving correspondences
        for (&gt_id, &gt_idx) in &gt_ids {
            if let Some(&pred_id) = last_match.get(&gt_id) {
                if pred_free.contains(&pred_id) {
                    let pred_idx = pred_ids[&pred_id];
                    let iou = box_iou_2d(
                        &gts.boxes[gt_idx].bbox2d,
                        &preds.boxes[pred_idx].bbox2d,
                    );
                    if iou >= config.iou_threshold {
                        gt_free.remove(&gt_id);
                        pred_free.remove(&pred_id);
                        matches.push((gt_id, pred_id));
                    }
                }
            }
        }

        // 2. optimal assignment over the rest
        let gt_rest: Vec<i64> = gt_free.iter().copied().collect();
        let pred_rest: Vec<i64> = pred_free.iter().copied().collect();
        let weights: Vec<Vec<i64>> = gt_rest
            .iter()
            .map(|gid| {
                pred_rest
                    .iter()
                    .map(|pid| {
                        let iou = box_iou_2d(
                            &gts.boxes[gt_ids[gid]].bbox2d,
                            &preds.boxes[pred_ids[pid]].bbox2d,
                        );
                        if iou >= config.iou_threshold {
                            (iou * IOU_SCALE) as i64
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect();
        for (gi, pi) in optimal_assignment(&weights) {
            let (gt_id, pred_id) = (gt_rest[gi], pred_rest[pi]);
            gt_free.remove(&gt_id);
            pred_free.remove(&pred_id);
            matches.push((gt_id, pred_id));
        }

        // 3. count errors
        counts.false_negatives += gt_free.len() as u64;
        counts.false_positives += pred_free.len() as u64;
        for (gt_id, pred_id) in matches {
            if let Some(&previous) = last_match.get(&gt_id) {
                if previous != pred_id {
                    counts.id_switches += 1;
                }
            }
            last_match.insert(gt_id, pred_id);
        }
    }

    if counts.ground_truth == 0 {
        return Err(Error::EmptyGroundTruth);
    }
    let errors = counts.false_negatives + counts.false_positives + counts.id_switches;
    Ok((1.0 - errors as f64 / counts.ground_truth as f64, counts))
}
