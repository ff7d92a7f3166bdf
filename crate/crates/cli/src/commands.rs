use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use msfbench_core::corrupt::{
    corrupt_dataset, Axis, Branch, CorruptionSpec, Pattern, SeverityTable, ALL_PATTERNS,
};
use msfbench_core::io::{load_depth_map, load_labels, LabelTask};
use msfbench_core::metrics::{
    average_precision, mota, rmse_pooled, DetectionEvalConfig, DetectionFrame, MotCounts,
    MotaConfig, RunResult, Task, TrackFrame,
};
use msfbench_core::report::{
    build_report, render, severity_config_hash, ReportFormat, ReportMeta,
};
use msfbench_core::types::{DepthMap, ObjectClass, ObjectLabel};

use crate::exit::CliError;
use crate::{CorruptArgs, EvaluateArgs, ReportArgs};

const CONFIG_ENV: &str = "MSF_BENCH_CONFIG";

fn pattern_list() -> String {
    ALL_PATTERNS
        .iter()
        .map(|p| p.code())
        .collect::<Vec<_>>()
        .join(" ")
}

fn parse_pattern(code: &str) -> Result<Pattern, CliError> {
    Pattern::parse_code(code).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown pattern {code:?}; valid patterns: {}",
            pattern_list()
        ))
    })
}

/// Severity table from --config, else $MSF_BENCH_CONFIG, else defaults.
fn load_severity_table(config: Option<&Path>) -> Result<SeverityTable, CliError> {
    let path = match config {
        Some(p) => Some(p.to_path_buf()),
        None => std::env::var_os(CONFIG_ENV).map(PathBuf::from),
    };
    match path {
        Some(p) => {
            let text = fs::read_to_string(&p)
                .map_err(|e| CliError::from(e))
                .map_err(|e| match e {
                    CliError::MissingInput(_) => {
                        CliError::MissingInput(format!("severity config {}: not found", p.display()))
                    }
                    other => other,
                })?;
            Ok(SeverityTable::from_toml_str(&text)?)
        }
        None => Ok(SeverityTable::default()),
    }
}

pub fn corrupt(args: CorruptArgs) -> Result<(), CliError> {
    let pattern = parse_pattern(&args.pattern)?;
    let mut spec = CorruptionSpec::new(pattern, args.severity, args.seed)?;
    if let Some(axis) = &args.axis {
        let axis = Axis::parse(axis)
            .ok_or_else(|| CliError::Usage(format!("unknown axis {axis:?}; expected x, y, or z")))?;
        spec = spec.with_axis(axis);
    }
    if let Some(branch) = &args.branch {
        let branch = Branch::parse(branch).ok_or_else(|| {
            CliError::Usage(format!("unknown branch {branch:?}; expected camera or lidar"))
        })?;
        spec = spec.with_branch(branch);
    }
    if let Some(param) = args.param {
        spec = spec.with_param(param);
    }
    let table = load_severity_table(args.config.as_deref())?;

    if let Some(jobs) = args.jobs {
        // Determinism does not depend on the pool size; this only bounds
        // parallelism. A second init attempt (e.g. in tests) is harmless.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }

    if !args.input.is_dir() {
        return Err(CliError::MissingInput(format!(
            "dataset directory {} does not exist",
            args.input.display()
        )));
    }
    eprintln!(
        "corrupting {} -> {} with {} severity {} (seed {})",
        args.input.display(),
        args.output.display(),
        pattern.code(),
        args.severity,
        args.seed
    );
    let manifest = corrupt_dataset(&args.input, &spec, &table, &args.output)?;
    let failed = manifest.failed_frames().count();
    let total = manifest.frames.len();
    eprintln!("wrote {} frames ({failed} failed)", total - failed);
    println!("{}", args.output.join("manifest.json").display());
    if failed > 0 {
        return Err(CliError::PartialFailure { failed, total });
    }
    Ok(())
}

/// Text files in a directory keyed by stem.
fn stems_of(dir: &Path, extension: &str) -> Result<BTreeMap<String, PathBuf>, CliError> {
    if !dir.is_dir() {
        return Err(CliError::MissingInput(format!(
            "{} is not a directory",
            dir.display()
        )));
    }
    let mut out = BTreeMap::new();
    for entry in fs::read_dir(dir).map_err(CliError::from)? {
        let path = entry.map_err(CliError::from)?.path();
        if path.extension().and_then(|e| e.to_str()) == Some(extension) {
            if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                out.insert(stem.to_string(), path);
            }
        }
    }
    Ok(out)
}

fn data_err(path: &Path, e: msfbench_core::Error) -> CliError {
    CliError::Data(format!("{}: {e}", path.display()))
}

fn evaluate_detection(args: &EvaluateArgs) -> Result<f64, CliError> {
    let gt_files = stems_of(&args.gt, "txt")?;
    if gt_files.is_empty() {
        return Err(CliError::Data(format!(
            "no ground-truth label files under {}",
            args.gt.display()
        )));
    }
    if !args.pred.is_dir() {
        return Err(CliError::MissingInput(format!(
            "prediction directory {} does not exist",
            args.pred.display()
        )));
    }
    let mut config = DetectionEvalConfig::default();
    if let Some(threshold) = args.iou_threshold {
        config.iou_threshold = threshold;
    }
    let mut frames = Vec::with_capacity(gt_files.len());
    for (index, (stem, gt_path)) in gt_files.iter().enumerate() {
        let ground_truth =
            load_labels(gt_path, LabelTask::Detection).map_err(|e| data_err(gt_path, e))?;
        let pred_path = args.pred.join(format!("{stem}.txt"));
        let predictions = if pred_path.is_file() {
            load_labels(&pred_path, LabelTask::Detection).map_err(|e| data_err(&pred_path, e))?
        } else {
            Vec::new()
        };
        frames.push(DetectionFrame {
            frame_id: stem.parse().unwrap_or(index as i64),
            ground_truth,
            predictions,
        });
    }
    Ok(average_precision(&frames, &config)?)
}

/// Car boxes grouped by frame; DontCare and other classes are excluded
/// from tracking evaluation.
fn track_frames(labels: Vec<ObjectLabel>, path: &Path) -> Result<Vec<TrackFrame>, CliError> {
    let mut by_frame: BTreeMap<i64, TrackFrame> = BTreeMap::new();
    for label in labels {
        if label.class != ObjectClass::Car {
            continue;
        }
        let frame = label.frame.ok_or_else(|| {
            CliError::Data(format!("{}: tracking row without frame id", path.display()))
        })?;
        by_frame
            .entry(frame)
            .or_insert_with(|| TrackFrame {
                frame_id: frame,
                boxes: vec![],
            })
            .boxes
            .push(label);
    }
    Ok(by_frame.into_values().collect())
}

fn evaluate_tracking(args: &EvaluateArgs) -> Result<f64, CliError> {
    let sequences: Vec<(PathBuf, PathBuf)> = if args.gt.is_dir() {
        let gt_files = stems_of(&args.gt, "txt")?;
        if gt_files.is_empty() {
            return Err(CliError::Data(format!(
                "no ground-truth sequence files under {}",
                args.gt.display()
            )));
        }
        gt_files
            .into_iter()
            .map(|(stem, gt)| (gt, args.pred.join(format!("{stem}.txt"))))
            .collect()
    } else {
        vec![(args.gt.clone(), args.pred.clone())]
    };

    let mut config = MotaConfig::default();
    if let Some(threshold) = args.iou_threshold {
        config.iou_threshold = threshold;
    }

    let mut totals = MotCounts::default();
    for (gt_path, pred_path) in &sequences {
        let gt_labels =
            load_labels(gt_path, LabelTask::Tracking).map_err(|e| data_err(gt_path, e))?;
        let pred_labels = if pred_path.is_file() {
            load_labels(pred_path, LabelTask::Tracking).map_err(|e| data_err(pred_path, e))?
        } else {
            Vec::new()
        };
        let gt = track_frames(gt_labels, gt_path)?;
        let preds = track_frames(pred_labels, pred_path)?;
        let (_, counts) = mota(&preds, &gt, &config)?;
        totals.false_negatives += counts.false_negatives;
        totals.false_positives += counts.false_positives;
        totals.id_switches += counts.id_switches;
        totals.ground_truth += counts.ground_truth;
    }
    if totals.ground_truth == 0 {
        return Err(CliError::Data("no ground-truth boxes".to_string()));
    }
    let errors = totals.false_negatives + totals.false_positives + totals.id_switches;
    Ok(1.0 - errors as f64 / totals.ground_truth as f64)
}

fn evaluate_depth(args: &EvaluateArgs) -> Result<f64, CliError> {
    let gt_files = stems_of(&args.gt, "png")?;
    if gt_files.is_empty() {
        return Err(CliError::Data(format!(
            "no ground-truth depth maps under {}",
            args.gt.display()
        )));
    }
    let mut pairs: Vec<(DepthMap, DepthMap)> = Vec::with_capacity(gt_files.len());
    for (stem, gt_path) in &gt_files {
        let gt = load_depth_map(gt_path).map_err(|e| data_err(gt_path, e))?;
        let pred_path = args.pred.join(format!("{stem}.png"));
        if !pred_path.is_file() {
            return Err(CliError::Data(format!(
                "{}: prediction missing",
                pred_path.display()
            )));
        }
        let pred = load_depth_map(&pred_path).map_err(|e| data_err(&pred_path, e))?;
        pairs.push((pred, gt));
    }
    let borrowed: Vec<(&DepthMap, &DepthMap)> = pairs.iter().map(|(p, g)| (p, g)).collect();
    Ok(rmse_pooled(&borrowed)?)
}

pub fn evaluate(args: EvaluateArgs) -> Result<(), CliError> {
    let task = Task::parse(&args.task).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown task {:?}; expected detection, tracking, or depth",
            args.task
        ))
    })?;

    let result = if args.pattern == "clean" {
        if args.severity.is_some() {
            return Err(CliError::Usage(
                "--severity makes no sense with --pattern clean".to_string(),
            ));
        }
        None
    } else {
        let pattern = parse_pattern(&args.pattern)?;
        let severity = args.severity.ok_or_else(|| {
            CliError::Usage("--severity is required for a corrupted run".to_string())
        })?;
        // range check
        CorruptionSpec::new(pattern, severity, 0)?;
        Some((pattern, severity))
    };

    let value = match task {
        Task::Detection => evaluate_detection(&args)?,
        Task::Tracking => evaluate_tracking(&args)?,
        Task::Depth => evaluate_depth(&args)?,
    };

    let run = match result {
        None => RunResult::clean(task, value),
        Some((pattern, severity)) => RunResult::corrupted(task, pattern.code(), severity, value),
    };
    let json = serde_json::to_string_pretty(&run).expect("run result serializes");
    fs::write(&args.out, json)
        .map_err(|e| CliError::Data(format!("{}: {e}", args.out.display())))?;

    println!("{} {}", task.metric_name(), value);
    println!("{}", args.out.display());
    Ok(())
}

fn read_run_result(path: &Path) -> Result<RunResult, CliError> {
    let text = fs::read_to_string(path).map_err(|e| match CliError::from(e) {
        CliError::MissingInput(_) => {
            CliError::MissingInput(format!("{}: not found", path.display()))
        }
        other => other,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

pub fn report(args: ReportArgs) -> Result<(), CliError> {
    let formats: Vec<ReportFormat> = args
        .format
        .split(',')
        .map(|f| ReportFormat::parse(f.trim()).map_err(|e| CliError::Usage(e.to_string())))
        .collect::<Result<_, _>>()?;

    let clean = read_run_result(&args.clean)?;
    if !clean.is_clean() {
        return Err(CliError::Data(format!(
            "{}: expected a clean baseline, found pattern {:?}",
            args.clean.display(),
            clean.pattern
        )));
    }
    let corrupted: Vec<RunResult> = args
        .corrupted
        .iter()
        .map(|p| read_run_result(p))
        .collect::<Result<_, _>>()?;

    let table = load_severity_table(args.config.as_deref())?;
    let meta = ReportMeta {
        config_hash: severity_config_hash(&table),
        seed: args.seed,
        ..ReportMeta::default()
    };
    let report = build_report(&clean, &corrupted, meta)?;
    for warning in &report.warnings {
        eprintln!("warning: {warning}");
    }

    fs::create_dir_all(&args.out_dir)
        .map_err(|e| CliError::Data(format!("{}: {e}", args.out_dir.display())))?;
    for format in formats {
        let path = args.out_dir.join(format!("report.{}", format.extension()));
        fs::write(&path, render(&report, format))
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        println!("{}", path.display());
    }
    Ok(())
}
