// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

//! The convention ledger: every sign, branch and normalisation choice made
//! where the source formulas are ambiguous or inconsistent, each with the
//! check that pins it down. The ledger is machine-readable
//! (`docs/ledger.json`), rendered to `docs/CONVENTIONS.md`, and tied to the
//! code by `CONVENTION(<id>)` markers at the implementing sites.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The ledger shipped with the workspace.
pub const LEDGER_JSON: &str = include_str!("../../../docs/ledger.json");

/// Marker prefix tying an implementing site to a ledger entry.
pub const MARKER_PREFIX: &str = "CONVENTION(";

/// How a ledger entry relates to the printed source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LedgerStatus {
    /// The printed form admits several readings; one is fixed here.
    Interpretation,
    /// The printed form is inconsistent; the consistent form is used.
    Correction,
    /// A suggested value is replaced for a stated numerical reason.
    Deviation,
}

impl LedgerStatus {
    fn label(self) -> &'static str {
        match self {
            LedgerStatus::Interpretation => "interpretation",
            LedgerStatus::Correction => "correction",
            LedgerStatus::Deviation => "deviation",
        }
    }
}

/// One convention decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConventionLedgerEntry {
    /// Stable kebab-case identifier, referenced by `CONVENTION(<id>)`.
    pub id: String,
    /// Verbatim phrase locating the decision in the source text.
    pub source_anchor: String,
    /// The form as printed.
    pub printed_form: String,
    /// The form implemented.
    pub adopted_form: String,
    /// The test or acceptance criterion that verifies the adopted form.
    pub verifying_oracle: String,
    /// Kind of decision.
    pub status: LedgerStatus,
}

/// Ledger validation and scanning failures.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum DocsError {
    /// No entries to render.
    #[error("the convention ledger is empty")]
    EmptyLedger,
    /// A required field is blank.
    #[error("ledger entry `{id}` has an empty `{field}` field")]
    MissingField { id: String, field: &'static str },
    /// Two entries share an id.
    #[error("ledger id `{0}` appears more than once")]
    DuplicateId(String),
    /// The embedded ledger is not valid JSON for the schema.
    #[error("ledger JSON is malformed: {0}")]
    Malformed(String),
    /// Markers and ledger ids are not in one-to-one correspondence.
    #[error("marker/ledger mismatch: {0}")]
    Incomplete(String),
    /// A source file could not be read.
    #[error("cannot read `{path}`: {reason}")]
    Io { path: PathBuf, reason: String },
}

/// Parses a ledger from JSON.
pub fn parse_ledger(json: &str) -> Result<Vec<ConventionLedgerEntry>, DocsError> {
    serde_json::from_str(json).map_err(|e| DocsError::Malformed(e.to_string()))
}

/// The ledger shipped with the workspace.
pub fn ledger() -> Result<Vec<ConventionLedgerEntry>, DocsError> {
    parse_ledger(LEDGER_JSON)
}

/// Checks that the ledger is non-empty, every field is filled and ids are
/// unique.
pub fn validate_ledger(entries: &[ConventionLedgerEntry]) -> Result<(), DocsError> {
    if entries.is_empty() {
        return Err(DocsError::EmptyLedger);
    }
    let mut seen = BTreeSet::new();
    for e in entries {
        let fields: [(&'static str, &str); 5] = [
            ("id", &e.id),
            ("source_anchor", &e.source_anchor),
            ("printed_form", &e.printed_form),
            ("adopted_form", &e.adopted_form),
            ("verifying_oracle", &e.verifying_oracle),
        ];
        for (field, value) in fields {
            if value.trim().is_empty() {
                return Err(DocsError::MissingField { id: e.id.clone(), field });
            }
        }
        if !seen.insert(e.id.as_str()) {
            return Err(DocsError::DuplicateId(e.id.clone()));
        }
    }
    Ok(())
}

fn cell(s: &str) -> String {
    s.replace('\\', "\\\\").replace('|', "\\|").replace('\n', " ")
}

/// Renders the ledger as a Markdown document with one table row per entry,
/// in ledger order.
pub fn render_ledger(entries: &[ConventionLedgerEntry]) -> Result<String, DocsError> {
    validate_ledger(entries)?;
    let mut out = String::new();
    out.push_str("# Convention ledger\n\n");
    out.push_str(
        "Each row records a sign, branch or normalisation choice where the printed formulas are \
         ambiguous or inconsistent, the form implemented, and the check that verifies it. The \
         source anchor is a verbatim phrase near the decision. Implementing sites carry a \
         `CONVENTION(<id>)` marker. This file is generated from `docs/ledger.json`; edit the \
         JSON and re-render.\n\n",
    );
    out.push_str("| id | source anchor | printed form | adopted form | verifying oracle | status |\n");
    out.push_str("|---|---|---|---|---|---|\n");
    for e in entries {
        let _ = writeln!(
            out,
            "| `{}` | \"{}\" | {} | {} | {} | {} |",
            e.id,
            cell(&e.source_anchor),
            cell(&e.printed_form),
            cell(&e.adopted_form),
            cell(&e.verifying_oracle),
            e.status.label()
        );
    }
    Ok(out)
}

/// Location of one marker.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MarkerSite {
    pub path: PathBuf,
    pub line: usize,
}

/// Extracts the ids of all `CONVENTION(<id>)` markers in `text`, with
/// 1-based line numbers.
pub fn markers_in(text: &str) -> Vec<(String, usize)> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let mut rest = line;
        while let Some(pos) = rest.find(MARKER_PREFIX) {
            let after = &rest[pos + MARKER_PREFIX.len()..];
            match after.find(')') {
                Some(end) => {
                    let id = &after[..end];
                    if !id.is_empty() && id.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '-') {
                        out.push((id.to_string(), i + 1));
                    }
                    rest = &after[end..];
                }
                None => break,
            }
        }
    }
    out
}

fn collect_rs(dir: &Path, out: &mut Vec<PathBuf>) -> Result<(), DocsError> {
    let io = |e: std::io::Error| DocsError::Io { path: dir.to_path_buf(), reason: e.to_string() };
    let mut entries: Vec<PathBuf> = fs::read_dir(dir).map_err(io)?.map(|d| d.map(|d| d.path())).collect::<Result<_, _>>().map_err(io)?;
    entries.sort();
    for p in entries {
        if p.is_dir() {
            collect_rs(&p, out)?;
        } else if p.extension().is_some_and(|x| x == "rs") {
            out.push(p);
        }
    }
    Ok(())
}

/// Scans the `src/` and `tests/` trees of every crate under
/// `workspace_root/crates` for markers, grouped by id.
pub fn scan_markers(workspace_root: &Path) -> Result<BTreeMap<String, Vec<MarkerSite>>, DocsError> {
    let crates = workspace_root.join("crates");
    let mut files = Vec::new();
    let io = |e: std::io::Error| DocsError::Io { path: crates.clone(), reason: e.to_string() };
    let mut crate_dirs: Vec<PathBuf> = fs::read_dir(&crates).map_err(io)?.map(|d| d.map(|d| d.path())).collect::<Result<_, _>>().map_err(io)?;
    crate_dirs.sort();
    for c in crate_dirs {
        for sub in ["src", "tests"] {
            let d = c.join(sub);
            if d.is_dir() {
                collect_rs(&d, &mut files)?;
            }
        }
    }
    let mut map: BTreeMap<String, Vec<MarkerSite>> = BTreeMap::new();
    for path in files {
        let text = fs::read_to_string(&path).map_err(|e| DocsError::Io { path: path.clone(), reason: e.to_string() })?;
        for (id, line) in markers_in(&text) {
            map.entry(id).or_default().push(MarkerSite { path: path.clone(), line });
        }
    }
    Ok(map)
}

/// Checks that every ledger id has exactly one marker and every marker
/// names a ledger id.
pub fn check_completeness(
    entries: &[ConventionLedgerEntry],
    markers: &BTreeMap<String, Vec<MarkerSite>>,
) -> Result<(), DocsError> {
    validate_ledger(entries)?;
    let ids: BTreeSet<&str> = entries.iter().map(|e| e.id.as_str()).collect();
    let mut problems = Vec::new();
    for id in &ids {
        match markers.get(*id).map(Vec::len) {
            None => problems.push(format!("`{id}` has no marker")),
            Some(1) => {}
            Some(n) => problems.push(format!("`{id}` has {n} markers")),
        }
    }
    for (id, sites) in markers {
        if !ids.contains(id.as_str()) {
            let site = &sites[0];
            problems.push(format!("marker `{id}` at {}:{} has no ledger entry", site.path.display(), site.line));
        }
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(DocsError::Incomplete(problems.join("; ")))
    }
}
