//! Task metrics: average precision for 3D detection, CLEAR-MOT tracking
//! accuracy, and depth-completion RMSE, with KITTI-style filtering.

mod depth;
mod detection;
mod filter;
mod tracking;

pub use depth::{rmse, rmse_pooled};
pub use detection::{average_precision, DetectionFrame};
pub use filter::{filter_difficulty, DetectionEvalConfig};
pub use tracking::{mota, MotCounts, MotaConfig, TrackFrame};

use serde::{Deserialize, Serialize};

/// The three perception tasks the benchmark scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Detection,
    Tracking,
    Depth,
}

impl Task {
    pub fn metric_name(&self) -> &'static str {
        match self {
            Task::Detection => "AP",
            Task::Tracking => "MOTA",
            Task::Depth => "RMSE",
        }
    }

    /// Error metrics degrade upward; score metrics degrade downward.
    pub fn is_error_metric(&self) -> bool {
        matches!(self, Task::Depth)
    }

    pub fn parse(s: &str) -> Option<Task> {
        match s.to_ascii_lowercase().as_str() {
            "detection" => Some(Task::Detection),
            "tracking" => Some(Task::Tracking),
            "depth" => Some(Task::Depth),
            _ => None,
        }
    }
}

impl std::fmt::Display for Task {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Task::Detection => "detection",
            Task::Tracking => "tracking",
            Task::Depth => "depth",
        })
    }
}

/// One scored run: the task metric obtained on a clean or corrupted
/// dataset. `pattern` is a corruption code or the literal `"clean"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub task: Task,
    pub pattern: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub severity: Option<u8>,
    pub metric_value: f64,
}

impl RunResult {
    pub fn clean(task: Task, metric_value: f64) -> Self {
        RunResult {
            task,
            pattern: "clean".to_string(),
            severity: None,
            metric_value,
        }
    }

    pub fn corrupted(task: Task, pattern: &str, severity: u8, metric_value: f64) -> Self {
        RunResult {
            task,
            pattern: pattern.to_string(),
            severity: Some(severity),
            metric_value,
        }
    }

    pub fn is_clean(&self) -> bool {
        self.pattern == "clean"
    }
}
