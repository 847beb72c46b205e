//! Grid expansion, parallel evaluation, and artifact assembly.
//!
//! Grid points are evaluated in parallel but collected in declaration
//! order (first axis slowest, last fastest), so the CSV byte stream is a
//! pure function of the config and seed. The manifest additionally records
//! wall time and is therefore excluded from byte-identity comparisons.

use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::config::{AxisSpec, ConfigFailure, Mode, SweepConfig};
use crate::modes::{self, ColumnDoc, Point};
use crate::output::{self, OutputPaths};

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Config(#[from] ConfigFailure),
    #[error("evaluation failed at {context}: {message}")]
    Eval { context: String, message: String },
    #[error("could not write output: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug)]
pub struct RunSummary {
    pub rows: usize,
    pub paths: OutputPaths,
    pub wall_ms: u128,
}

/// Evaluate a validated config and write `<output>.csv`,
/// `<output>.schema.txt`, and `<output>.manifest.json`.
pub fn run_sweep(cfg: &SweepConfig) -> Result<RunSummary, SweepError> {
    let start = Instant::now();
    let rows = evaluate(cfg)?;
    let cols = modes::columns(cfg.mode);
    let csv = render_csv(cols, &rows);
    let schema = render_schema(cfg, cols);
    let paths = output::resolve_paths(&cfg.output);
    let wall_ms = start.elapsed().as_millis();
    let manifest = render_manifest(cfg, cols, rows.len(), wall_ms, &paths);
    output::write_atomic(&paths.csv, csv.as_bytes())?;
    output::write_atomic(&paths.schema, schema.as_bytes())?;
    output::write_atomic(&paths.manifest, manifest.as_bytes())?;
    Ok(RunSummary {
        rows: rows.len(),
        paths,
        wall_ms,
    })
}

/// Produce all CSV rows for `cfg` without touching the filesystem.
pub fn evaluate(cfg: &SweepConfig) -> Result<Vec<Vec<String>>, SweepError> {
    match cfg.mode {
        Mode::MetaGame => modes::meta_game_rows(cfg).map_err(|message| SweepError::Eval {
            context: "the configured point".to_string(),
            message,
        }),
        Mode::CopulaCheck => modes::copula_rows(cfg).map_err(|message| SweepError::Eval {
            context: "the configured point".to_string(),
            message,
        }),
        Mode::Empirical => modes::empirical_rows(cfg).map_err(|message| SweepError::Eval {
            context: "the configured log".to_string(),
            message,
        }),
        _ => {
            let lens: Vec<usize> = cfg.axes.iter().map(|a| a.len()).collect();
            let total: usize = lens.iter().product();
            (0..total)
                .into_par_iter()
                .map(|i| {
                    let values = axis_values(cfg, &lens, i);
                    modes::grid_row(&Point::new(cfg, &values)).map_err(|message| SweepError::Eval {
                        context: point_context(cfg, &values, i),
                        message,
                    })
                })
                .collect()
        }
    }
}

/// Axis values of flat grid index `i`, first axis varying slowest.
fn axis_values(cfg: &SweepConfig, lens: &[usize], i: usize) -> Vec<f64> {
    let mut values = Vec::with_capacity(lens.len());
    let mut stride: usize = lens.iter().product();
    let mut rest = i;
    for (axis, &len) in cfg.axes.iter().zip(lens) {
        stride /= len;
        values.push(axis.value(rest / stride));
        rest %= stride;
    }
    values
}

fn point_context(cfg: &SweepConfig, values: &[f64], i: usize) -> String {
    let coords: Vec<String> = cfg
        .axes
        .iter()
        .zip(values)
        .map(|(a, v)| format!("{}={}", a.name, v))
        .collect();
    format!("row {} ({})", i, coords.join(", "))
}

fn render_csv(cols: &[ColumnDoc], rows: &[Vec<String>]) -> String {
    let header: Vec<&str> = cols.iter().map(|c| c.name).collect();
    let mut out = String::with_capacity(rows.len() * 64 + 256);
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), cols.len());
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn render_schema(cfg: &SweepConfig, cols: &[ColumnDoc]) -> String {
    let mut out = String::new();
    out.push_str(&format!("# columns written by mode {}\n", cfg.mode));
    if !cfg.axes.is_empty() {
        let order: Vec<&str> = cfg.axes.iter().map(|a| a.name.as_str()).collect();
        out.push_str(&format!(
            "# rows iterate axes in declaration order ({}), first axis slowest\n",
            order.join(", ")
        ));
    }
    let width = cols.iter().map(|c| c.name.len()).max().unwrap_or(0);
    for c in cols {
        out.push_str(&format!("{:width$}  {}\n", c.name, c.desc));
    }
    out
}

fn render_manifest(
    cfg: &SweepConfig,
    cols: &[ColumnDoc],
    rows: usize,
    wall_ms: u128,
    paths: &OutputPaths,
) -> String {
    let params: serde_json::Map<String, serde_json::Value> = cfg
        .fixed
        .iter()
        .map(|(name, value)| {
            let v = match value {
                crate::config::FixedValue::Number(x) => serde_json::json!(x),
                crate::config::FixedValue::Count(c) => serde_json::json!(c),
                crate::config::FixedValue::Text(s) => serde_json::json!(s),
            };
            (name.clone(), v)
        })
        .collect();
    let axes: Vec<serde_json::Value> = cfg
        .axes
        .iter()
        .map(|a| match &a.spec {
            AxisSpec::Linspace { min, max, steps } => serde_json::json!({
                "name": a.name, "min": min, "max": max, "steps": steps,
            }),
            AxisSpec::Values(values) => serde_json::json!({
                "name": a.name, "values": values,
            }),
        })
        .collect();
    let manifest = serde_json::json!({
        "mode": cfg.mode.name(),
        "output": cfg.output,
        "seed": cfg.seed,
        "params": params,
        "axes": axes,
        "columns": cols.iter().map(|c| c.name).collect::<Vec<_>>(),
        "rows": rows,
        "wall_time_ms": wall_ms,
        "versions": { "sweep-cli": env!("CARGO_PKG_VERSION") },
        "files": {
            "csv": paths.csv.to_string_lossy(),
            "schema": paths.schema.to_string_lossy(),
        },
    });
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest is plain data");
    text.push('\n');
    text
}
