// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::{Path, PathBuf};

use holoq_model::TwoQubitParams;
use holoq_qcore::fmt_sig15;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::{ExperimentConfig, RunnerError};

/// Extension of result tables.
pub const CSV_EXTENSION: &str = "csv";
/// Extension of metadata siblings (`<stem>.meta.json`).
pub const META_EXTENSION: &str = "meta.json";

/// One CSV cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => fmt_sig15(*x),
            Cell::Text(s) => s.clone(),
        }
    }

    /// Numeric value, if any.
    pub fn num(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Text(_) => None,
        }
    }
}

/// A target-versus-achieved comparison reported alongside a result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    /// Acceptance criterion number (1–10), if the check belongs to one.
    pub criterion: Option<u8>,
    /// What is compared, e.g. `B_NHQC F_T`.
    pub label: String,
    /// Target, e.g. `0.9990 ± 0.0015` or `< 1e-6`.
    pub target: String,
    /// Achieved value.
    pub achieved: f64,
    pub pass: bool,
}

impl Check {
    /// |achieved − target| ≤ tol.
    pub fn within(criterion: Option<u8>, label: impl Into<String>, achieved: f64, target: f64, tol: f64) -> Self {
        Self {
            criterion,
            label: label.into(),
            target: format!("{target} ± {tol}"),
            achieved,
            pass: (achieved - target).abs() <= tol,
        }
    }

    /// achieved < bound.
    pub fn below(criterion: Option<u8>, label: impl Into<String>, achieved: f64, bound: f64) -> Self {
        Self { criterion, label: label.into(), target: format!("< {bound:e}"), achieved, pass: achieved < bound }
    }

    /// achieved > bound (or ≥ when `inclusive`).
    pub fn above(criterion: Option<u8>, label: impl Into<String>, achieved: f64, bound: f64, inclusive: bool) -> Self {
        let (sym, pass) = if inclusive { ("≥", achieved >= bound) } else { (">", achieved > bound) };
        let shown = if bound != 0.0 && bound.abs() < 1e-3 { format!("{bound:e}") } else { bound.to_string() };
        Self { criterion, label: label.into(), target: format!("{sym} {shown}"), achieved, pass }
    }

    /// One summary line, e.g. `B_NHQC F_T target 0.999 ± 0.0015 achieved 0.99955 PASS`.
    pub fn line(&self) -> String {
        format!(
            "{} target {} achieved {} {}",
            self.label,
            self.target,
            fmt_sig15(self.achieved),
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

/// Convention choices recorded with every result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConventionFlags {
    /// How the drive phase relates to the auxiliary angles.
    pub sign_resolution: String,
    /// Collapse operators of the decoherence model.
    pub collapse_set: String,
    /// Modulation index of the two-qubit coupler.
    pub beta_mod: f64,
    /// Ledger of all conventions.
    pub ledger: String,
}

impl ConventionFlags {
    /// Flags of this build.
    pub fn current(beta_mod: f64) -> Self {
        Self {
            sign_resolution: "drive phase φ(t) = −η₂(t) = 2(π−γ)t/τ; bright-state angles (θ, π−φ₁)".into(),
            collapse_set: "√Γ|0⟩⟨e|, √Γ|1⟩⟨e|, √Γ|e⟩⟨e|, √Γ|k−1⟩⟨k| above the Λ system".into(),
            beta_mod,
            ledger: "docs/CONVENTIONS.md".into(),
        }
    }
}

/// Metadata written next to each CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    /// Experiment tag.
    pub experiment: String,
    /// SHA-256 of the canonical config JSON.
    pub config_hash: String,
    /// Canonical config JSON.
    pub config: serde_json::Value,
    /// Number of data rows.
    pub rows: usize,
    /// Time steps per segment.
    pub steps_per_segment: usize,
    /// Input states of single-qubit fidelities.
    pub n_states: usize,
    /// Seed of randomised checks, when any ran.
    pub seed: Option<u64>,
    pub conventions: ConventionFlags,
    /// Target-versus-achieved checks.
    pub checks: Vec<Check>,
    /// Experiment-specific scalars (e.g. calibrated parameters).
    pub extras: serde_json::Map<String, serde_json::Value>,
}

/// A result table with its metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    /// Output file stem.
    pub stem: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub meta: Metadata,
}

impl SweepResult {
    /// Empty result for `cfg` with the given header.
    pub fn new(cfg: &ExperimentConfig, experiment: &str, header: Vec<String>) -> Self {
        let canonical = cfg.canonical_json();
        Self {
            stem: cfg.stem(),
            header,
            rows: Vec::new(),
            meta: Metadata {
                experiment: experiment.to_string(),
                config_hash: config_hash(&canonical),
                config: serde_json::from_str(&canonical).expect("canonical JSON parses"),
                rows: 0,
                steps_per_segment: cfg.grid.steps_per_segment,
                n_states: cfg.grid.n_states,
                seed: None,
                conventions: ConventionFlags::current(TwoQubitParams::reference().beta_mod),
                checks: Vec::new(),
                extras: serde_json::Map::new(),
            },
        }
    }

    /// Appends a row; its length must match the header.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width must match the header");
        self.rows.push(row);
        self.meta.rows = self.rows.len();
    }

    /// Index of a header column.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Numeric values of a column.
    pub fn numbers(&self, name: &str) -> Vec<f64> {
        let c = self.column(name).unwrap_or_else(|| panic!("no column `{name}`"));
        self.rows.iter().map(|r| r[c].num().unwrap_or(f64::NAN)).collect()
    }

    /// CSV text: header line, then one line per row, `\n` line endings and
    /// 15 significant digits.
    pub fn csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Whether every check passed.
    pub fn all_pass(&self) -> bool {
        self.meta.checks.iter().all(|c| c.pass)
    }
}

/// Hex SHA-256 of `text`.
pub fn config_hash(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes `<dir>/<stem>.csv` and `<dir>/<stem>.meta.json`, creating `dir`.
/// Returns the two paths.
pub fn write_result(dir: &Path, result: &SweepResult) -> Result<(PathBuf, PathBuf), RunnerError> {
    fs::create_dir_all(dir).map_err(|e| RunnerError::io(dir, e))?;
    let csv = dir.join(format!("{}.{CSV_EXTENSION}", result.stem));
    let meta = dir.join(format!("{}.{META_EXTENSION}", result.stem));
    fs::write(&csv, result.csv()).map_err(|e| RunnerError::io(&csv, e))?;
    let mut json = serde_json::to_string_pretty(&result.meta).expect("metadata serialises");
    json.push('\n');
    fs::write(&meta, json).map_err(|e| RunnerError::io(&meta, e))?;
    Ok((csv, meta))
}
