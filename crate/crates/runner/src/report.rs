// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::{Metadata, RunnerError, META_EXTENSION};

/// File written by [`emit_report`] inside the results directory.
pub const REPORT_FILE: &str = "report.md";

/// Reads every `*.meta.json` in `dir`, sorted by file name.
pub fn load_results(dir: &Path) -> Result<Vec<(String, Metadata)>, RunnerError> {
    let suffix = format!(".{META_EXTENSION}");
    let entries = fs::read_dir(dir).map_err(|e| RunnerError::io(dir, e))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.file_name().and_then(|n| n.to_str()).is_some_and(|n| n.ends_with(&suffix)))
        .collect();
    paths.sort();
    let mut out = Vec::with_capacity(paths.len());
    for p in paths {
        let text = fs::read_to_string(&p).map_err(|e| RunnerError::io(&p, e))?;
        let meta: Metadata =
            serde_json::from_str(&text).map_err(|e| RunnerError::io(&p, format!("malformed metadata: {e}")))?;
        let stem = p.file_name().and_then(|n| n.to_str()).unwrap_or_default().trim_end_matches(&suffix).to_string();
        out.push((stem, meta));
    }
    Ok(out)
}

/// Summarises the target-versus-achieved checks of every result in `dir`
/// into `dir/report.md`; returns the report text.
pub fn emit_report(dir: &Path) -> Result<String, RunnerError> {
    let results = load_results(dir)?;
    if results.is_empty() {
        return Err(RunnerError::NoResults(dir.to_path_buf()));
    }
    let mut text = String::from("# Results\n");
    let (mut passed, mut total) = (0, 0);
    for (stem, meta) in &results {
        let _ = write!(
            text,
            "\n## {stem} ({})\n\nrows {}, steps per segment {}, states {}, config {}\n\n",
            meta.experiment,
            meta.rows,
            meta.steps_per_segment,
            meta.n_states,
            &meta.config_hash[..12.min(meta.config_hash.len())]
        );
        if meta.checks.is_empty() {
            text.push_str("no checks\n");
        }
        for c in &meta.checks {
            let tag = c.criterion.map_or_else(String::new, |n| format!("[criterion {n}] "));
            let _ = writeln!(text, "- {tag}{}", c.line());
            total += 1;
            passed += usize::from(c.pass);
        }
    }
    let _ = write!(text, "\n{passed} of {total} checks pass\n");
    let path = dir.join(REPORT_FILE);
    fs::write(&path, &text).map_err(|e| RunnerError::io(&path, e))?;
    Ok(text)
}
