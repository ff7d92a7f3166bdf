//! KITTI difficulty gating for detection evaluation.

use crate::types::{ObjectClass, ObjectLabel};

/// Detection evaluation settings. The defaults are the benchmark's: Car
/// class, 3D IOU ≥ 0.7, moderate difficulty (2D box height ≥ 25 px,
/// occlusion ≤ 1, truncation ≤ 0.30), forty recall levels.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionEvalConfig {
    pub class: ObjectClass,
    pub iou_threshold: f64,
    pub min_bbox_height: f64,
    pub max_occlusion: i32,
    pub max_truncation: f64,
    pub recall_levels: u32,
}

impl Default for DetectionEvalConfig {
    fn default() -> Self {
        DetectionEvalConfig {
            class: ObjectClass::Car,
            iou_threshold: 0.7,
            min_bbox_height: 25.0,
            max_occlusion: 1,
            max_truncation: 0.30,
            recall_levels: 40,
        }
    }
}

impl DetectionEvalConfig {
    /// Whether a ground-truth label counts toward recall. Labels that fail
    /// the gates (or are DontCare / another class) are "ignored": matches
    /// against them are neither true nor false positives.
    pub fn is_evaluated(&self, label: &ObjectLabel) -> bool {
        label.class == self.class
            && label.bbox_height() >= self.min_bbox_height
            && label.occlusion >= 0
            && label.occlusion <= self.max_occlusion
            && label.truncation >= 0.0
            && label.truncation <= self.max_truncation
    }
}

/// Splits ground truth into (evaluated, ignored) per the config gates.
pub fn filter_difficulty(
    labels: &[ObjectLabel],
    config: &DetectionEvalConfig,
) -> (Vec<ObjectLabel>, Vec<ObjectLabel>) {
    labels
        .iter()
        .cloned()
        .partition(|label| config.is_evaluated(label))
}
