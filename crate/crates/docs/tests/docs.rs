// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::{Path, PathBuf};

use holoq_docs::{
    check_completeness, ledger, markers_in, parse_ledger, render_ledger, scan_markers, validate_ledger,
    ConventionLedgerEntry, DocsError, LedgerStatus,
};

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().unwrap()
}

fn entry(id: &str) -> ConventionLedgerEntry {
    ConventionLedgerEntry {
        id: id.to_string(),
        source_anchor: "a phrase".into(),
        printed_form: "x = 1".into(),
        adopted_form: "x = −1".into(),
        verifying_oracle: "some::test".into(),
        status: LedgerStatus::Correction,
    }
}

fn row_for<'a>(doc: &'a str, id: &str) -> &'a str {
    doc.lines().find(|l| l.starts_with(&format!("| `{id}` |"))).unwrap_or_else(|| panic!("no row for {id}"))
}

#[test]
fn shipped_ledger_is_valid() {
    let entries = ledger().unwrap();
    validate_ledger(&entries).unwrap();
    assert!(entries.len() >= 20);
}

#[test]
fn closure_entry_cites_its_anchor_and_adopted_form() {
    let doc = render_ledger(&ledger().unwrap()).unwrap();
    let row = row_for(&doc, "eta-closure");
    assert!(row.contains("\"control parameters of microwave pulses\""), "{row}");
    assert!(row.contains("η₂ = η₁cos η₃"), "{row}");
}

#[test]
fn mu_entry_cites_minimum_gate_time() {
    let doc = render_ledger(&ledger().unwrap()).unwrap();
    assert!(row_for(&doc, "mu-seed").contains("\"with a minimum gate time\""));
}

#[test]
fn empty_ledger_is_rejected() {
    assert_eq!(render_ledger(&[]), Err(DocsError::EmptyLedger));
}

#[test]
fn missing_oracle_is_rejected() {
    let mut e = entry("a");
    e.verifying_oracle = "  ".into();
    assert_eq!(render_ledger(&[e]), Err(DocsError::MissingField { id: "a".into(), field: "verifying_oracle" }));
    assert!(matches!(
        parse_ledger(r#"[{"id":"a","source_anchor":"s","printed_form":"p","adopted_form":"q","status":"correction"}]"#),
        Err(DocsError::Malformed(_))
    ));
}

#[test]
fn duplicate_ids_are_rejected() {
    assert_eq!(render_ledger(&[entry("a"), entry("a")]), Err(DocsError::DuplicateId("a".into())));
}

#[test]
fn table_cells_escape_pipes() {
    let mut e = entry("ket");
    e.adopted_form = "|ψ⟩⟨e|".into();
    let doc = render_ledger(&[e]).unwrap();
    let row = row_for(&doc, "ket");
    assert!(row.contains("\\|ψ⟩⟨e\\|"), "{row}");
    // Six columns: seven unescaped separators.
    assert_eq!(row.replace("\\|", "").matches('|').count(), 7);
}

#[test]
fn marker_extraction() {
    // Built from the prefix so the workspace scan does not see these samples.
    let m = holoq_docs::MARKER_PREFIX;
    let text = format!("a\n// {m}foo-bar): x\nlet y = 1; // {m}baz) and {m}q2)\n`{m}<id>)`\n");
    let text = text.as_str();
    assert_eq!(
        markers_in(text),
        vec![("foo-bar".to_string(), 2), ("baz".to_string(), 3), ("q2".to_string(), 3)]
    );
}

#[test]
fn completeness_reports_missing_and_unknown_markers() {
    let mut markers = std::collections::BTreeMap::new();
    markers.insert("b".to_string(), vec![holoq_docs::MarkerSite { path: "x.rs".into(), line: 3 }]);
    let err = check_completeness(&[entry("a")], &markers).unwrap_err().to_string();
    assert!(err.contains("`a` has no marker") && err.contains("marker `b` at x.rs:3"), "{err}");
}

#[test]
fn every_ledger_entry_has_exactly_one_marker() {
    let markers = scan_markers(&workspace_root()).unwrap();
    check_completeness(&ledger().unwrap(), &markers).unwrap();
}

#[test]
fn conventions_document_is_up_to_date() {
    let rendered = render_ledger(&ledger().unwrap()).unwrap();
    let path = workspace_root().join("docs/CONVENTIONS.md");
    if std::env::var_os("HOLOQ_BLESS").is_some() {
        fs::write(&path, &rendered).unwrap();
    }
    let on_disk = fs::read_to_string(&path).unwrap_or_default();
    assert!(on_disk == rendered, "docs/CONVENTIONS.md is stale; re-run with HOLOQ_BLESS=1");
}

#[test]
fn documentation_files_exist_and_are_neutral() {
    let root = workspace_root();
    for name in ["CONVENTIONS.md", "CONFIG.md", "SCHEMES.md", "FIGURES.md", "ledger.json"] {
        let text = fs::read_to_string(root.join("docs").join(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
        let lower = text.to_lowercase();
        for word in ["paper", "eq.", "appendix", "arxiv"] {
            assert!(!lower.contains(word), "{name} mentions `{word}`");
        }
    }
}
