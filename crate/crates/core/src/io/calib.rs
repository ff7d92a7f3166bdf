//! KITTI calibration text: `KEY: v0 v1 …` lines. The toolkit reads and
//! writes the three keys it consumes (`P2`, `R0_rect`, `Tr_velo_to_cam`);
//! unknown keys are ignored on input.

use std::fs;
use std::path::Path;

use nalgebra::{Matrix3, Matrix3x4};

use crate::error::{Error, Result};
use crate::types::CalibrationSet;

const KEY_P2: &str = "P2";
const KEY_R0: &str = "R0_rect";
const KEY_TR: &str = "Tr_velo_to_cam";

/// KITTI files carry rounded text; deviations beyond this are reported.
const ROTATION_WARN_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub enum CalibrationWarning {
    /// A rotation block deviates from orthonormality by more than the file
    /// rounding budget.
    NonOrthonormal { key: &'static str, deviation: f64 },
}

impl std::fmt::Display for CalibrationWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CalibrationWarning::NonOrthonormal { key, deviation } => write!(
                f,
                "{key}: rotation block deviates from orthonormality by {deviation:.3e}"
            ),
        }
    }
}

/// A parsed calibration plus any validation warnings.
#[derive(Debug, Clone)]
pub struct CalibrationFile {
    pub calibration: CalibrationSet,
    pub warnings: Vec<CalibrationWarning>,
}

fn parse_values(line: &str) -> Result<Vec<f64>> {
    line.split_whitespace()
        .map(|token| {
            token.parse::<f64>().map_err(|source| Error::BadNumber {
                token: token.to_string(),
                source,
            })
        })
        .collect()
}

fn find_key<'a>(text: &'a str, key: &'static str) -> Result<&'a str> {
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix(key) {
            if let Some(values) = rest.strip_prefix(':') {
                return Ok(values);
            }
        }
    }
    Err(Error::MissingCalibKey { key })
}

fn matrix_values(text: &str, key: &'static str, expected: usize) -> Result<Vec<f64>> {
    let values = parse_values(find_key(text, key)?)?;
    if values.len() != expected {
        return Err(Error::CalibValueCount {
            key,
            expected,
            found: values.len(),
        });
    }
    Ok(values)
}

pub fn parse_calibration(text: &str) -> Result<CalibrationFile> {
    let p2 = matrix_values(text, KEY_P2, 12)?;
    let r0 = matrix_values(text, KEY_R0, 9)?;
    let tr = matrix_values(text, KEY_TR, 12)?;

    let calibration = CalibrationSet {
        projection: Matrix3x4::from_row_slice(&p2),
        rectification: Matrix3::from_row_slice(&r0),
        velo_to_cam: Matrix3x4::from_row_slice(&tr),
    };

    let mut warnings = Vec::new();
    let (tr_dev, r0_dev) = calibration.rotation_deviations();
    if tr_dev > ROTATION_WARN_TOLERANCE {
        warnings.push(CalibrationWarning::NonOrthonormal {
            key: KEY_TR,
            deviation: tr_dev,
        });
    }
    if r0_dev > ROTATION_WARN_TOLERANCE {
        warnings.push(CalibrationWarning::NonOrthonormal {
            key: KEY_R0,
            deviation: r0_dev,
        });
    }

    Ok(CalibrationFile {
        calibration,
        warnings,
    })
}

pub fn load_calibration(path: impl AsRef<Path>) -> Result<CalibrationFile> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let text = std::str::from_utf8(&bytes)?;
    parse_calibration(text)
}

/// C-style `%.12e` (13 significant digits): enough for a 1e-9-exact round
/// trip on every magnitude KITTI calibration carries.
fn sci(v: f64) -> String {
    let formatted = format!("{v:.12e}");
    let (mantissa, exponent) = formatted
        .split_once('e')
        .expect("float e-format always has an exponent");
    let exp: i32 = exponent.parse().expect("exponent is an integer");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

fn key_line(key: &str, values: impl IntoIterator<Item = f64>) -> String {
    let rendered: Vec<String> = values.into_iter().map(sci).collect();
    format!("{key}: {}", rendered.join(" "))
}

pub fn calibration_text(calib: &CalibrationSet) -> String {
    let mut out = String::new();
    out.push_str(&key_line(KEY_P2, calib.projection.transpose().iter().copied()));
    out.push('\n');
    out.push_str(&key_line(
        KEY_R0,
        calib.rectification.transpose().iter().copied(),
    ));
    out.push('\n');
    out.push_str(&key_line(KEY_TR, calib.velo_to_cam.transpose().iter().copied()));
    out.push('\n');
    out
}

pub fn write_calibration(calib: &CalibrationSet, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, calibration_text(calib)).map_err(|e| Error::io(path, e))
}
