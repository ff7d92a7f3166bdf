//! KITTI label files.
//!
//! Detection rows have 15 fields (ground truth) or 16 (predictions with a
//! trailing score). Tracking rows prepend `frame track_id`, giving 17 or 18
//! fields. `DontCare` rows are preserved as parsed; metric filters decide
//! what to do with them.

use std::fs;
use std::path::Path;

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::types::{BBox2D, ObjectClass, ObjectLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelTask {
    Detection,
    Tracking,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::LabelParse {
        line,
        message: message.into(),
    }
}

fn parse_f64(token: &str, line: usize, field: &str) -> Result<f64> {
    token
        .parse::<f64>()
        .map_err(|_| parse_err(line, format!("field {field}: bad number {token:?}")))
}

fn parse_i64(token: &str, line: usize, field: &str) -> Result<i64> {
    token
        .parse::<i64>()
        .map_err(|_| parse_err(line, format!("field {field}: bad integer {token:?}")))
}

fn validate(label: &ObjectLabel, line: usize) -> Result<()> {
    // DontCare rows carry sentinel values (-1 dims, -1000 location, -10
    // rotation) and are exempt from the geometric invariants.
    if label.class == ObjectClass::DontCare {
        return Ok(());
    }
    let all = [
        label.truncation,
        label.alpha,
        label.bbox2d.left,
        label.bbox2d.top,
        label.bbox2d.right,
        label.bbox2d.bottom,
        label.dims.0,
        label.dims.1,
        label.dims.2,
        label.location.x,
        label.location.y,
        label.location.z,
        label.rotation_y,
    ];
    if all.iter().any(|v| !v.is_finite()) {
        return Err(parse_err(line, "non-finite value"));
    }
    if label.bbox2d.right <= label.bbox2d.left || label.bbox2d.bottom <= label.bbox2d.top {
        return Err(parse_err(line, "degenerate 2D box"));
    }
    if label.dims.0 <= 0.0 || label.dims.1 <= 0.0 || label.dims.2 <= 0.0 {
        return Err(parse_err(line, "non-positive box dimensions"));
    }
    if label.rotation_y.abs() > std::f64::consts::PI + 1e-6 {
        return Err(parse_err(
            line,
            format!("rotation_y {} outside [-pi, pi]", label.rotation_y),
        ));
    }
    // -1 is the "unknown" sentinel predictions use.
    if !(-1.0..=1.0).contains(&label.truncation) {
        return Err(parse_err(line, "truncation outside [0, 1]"));
    }
    if !(-1..=3).contains(&label.occlusion) {
        return Err(parse_err(line, "occlusion outside 0..=3"));
    }
    if let Some(score) = label.score {
        if !score.is_finite() {
            return Err(parse_err(line, "non-finite score"));
        }
    }
    Ok(())
}

fn parse_line(fields: &[&str], task: LabelTask, line: usize) -> Result<ObjectLabel> {
    let (frame, track_id, rest) = match task {
        LabelTask::Detection => {
            if !(fields.len() == 15 || fields.len() == 16) {
                return Err(parse_err(
                    line,
                    format!("expected 15 or 16 fields, found {}", fields.len()),
                ));
            }
            (None, None, fields)
        }
        LabelTask::Tracking => {
            if !(fields.len() == 17 || fields.len() == 18) {
                return Err(parse_err(
                    line,
                    format!("expected 17 or 18 fields, found {}", fields.len()),
                ));
            }
            (
                Some(parse_i64(fields[0], line, "frame")?),
                Some(parse_i64(fields[1], line, "track_id")?),
                &fields[2..],
            )
        }
    };

    let class = ObjectClass::parse(rest[0])
        .ok_or_else(|| parse_err(line, format!("unknown class {:?}", rest[0])))?;
    let truncation = parse_f64(rest[1], line, "truncation")?;
    let occlusion_raw = parse_f64(rest[2], line, "occlusion")?;
    if occlusion_raw.fract() != 0.0 {
        return Err(parse_err(line, "occlusion is not an integer"));
    }
    let label = ObjectLabel {
        class,
        truncation,
        occlusion: occlusion_raw as i32,
        alpha: parse_f64(rest[3], line, "alpha")?,
        bbox2d: BBox2D::new(
            parse_f64(rest[4], line, "left")?,
            parse_f64(rest[5], line, "top")?,
            parse_f64(rest[6], line, "right")?,
            parse_f64(rest[7], line, "bottom")?,
        ),
        dims: (
            parse_f64(rest[8], line, "height")?,
            parse_f64(rest[9], line, "width")?,
            parse_f64(rest[10], line, "length")?,
        ),
        location: Vector3::new(
            parse_f64(rest[11], line, "x")?,
            parse_f64(rest[12], line, "y")?,
            parse_f64(rest[13], line, "z")?,
        ),
        rotation_y: parse_f64(rest[14], line, "rotation_y")?,
        score: match rest.get(15) {
            Some(token) => Some(parse_f64(token, line, "score")?),
            None => None,
        },
        track_id,
        frame,
    };
    validate(&label, line)?;
    Ok(label)
}

pub fn parse_labels(text: &str, task: LabelTask) -> Result<Vec<ObjectLabel>> {
    let mut labels = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let fields: Vec<&str> = raw.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        labels.push(parse_line(&fields, task, i + 1)?);
    }
    Ok(labels)
}

pub fn load_labels(path: impl AsRef<Path>, task: LabelTask) -> Result<Vec<ObjectLabel>> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let text = std::str::from_utf8(&bytes)?;
    parse_labels(text, task)
}

/// Renders one row. Floats use shortest round-trip formatting so a
/// write→load cycle reproduces values exactly.
pub fn format_label(label: &ObjectLabel, task: LabelTask) -> Result<String> {
    let mut fields: Vec<String> = Vec::with_capacity(18);
    if task == LabelTask::Tracking {
        let frame = label.frame.ok_or(Error::MissingLabelField {
            field: "frame",
            context: "tracking output",
        })?;
        let track_id = label.track_id.ok_or(Error::MissingLabelField {
            field: "track_id",
            context: "tracking output",
        })?;
        fields.push(frame.to_string());
        fields.push(track_id.to_string());
    }
    fields.push(label.class.as_str().to_string());
    fields.push(label.truncation.to_string());
    fields.push(label.occlusion.to_string());
    for v in [
        label.alpha,
        label.bbox2d.left,
        label.bbox2d.top,
        label.bbox2d.right,
        label.bbox2d.bottom,
        label.dims.0,
        label.dims.1,
        label.dims.2,
        label.location.x,
        label.location.y,
        label.location.z,
        label.rotation_y,
    ] {
        fields.push(v.to_string());
    }
    if let Some(score) = label.score {
        fields.push(score.to_string());
    }
    Ok(fields.join(" "))
}

pub fn labels_text(labels: &[ObjectLabel], task: LabelTask) -> Result<String> {
    let mut out = String::new();
    for label in labels {
        out.push_str(&format_label(label, task)?);
        out.push('\n');
    }
    Ok(out)
}

pub fn write_labels(labels: &[ObjectLabel], task: LabelTask, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, labels_text(labels, task)?).map_err(|e| Error::io(path, e))
}
