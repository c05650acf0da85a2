use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use bredon_cli::Output as Report;
use bredon_core::FgAbGroup;

fn bredon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bredon"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn spec_file(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn vafa_witten() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs/vafa-witten.json")
}

fn machine(out: &Output) -> Report {
    serde_json::from_slice(&out.stdout).expect("machine output parses")
}

fn error_object(out: &Output) -> serde_json::Value {
    let v: serde_json::Value = serde_json::from_slice(&out.stderr).expect("error object");
    v["error"].clone()
}

#[test]
fn blocks_lists_the_catalog() {
    let out = bredon(&["blocks"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["line-minus", "plane-i", "point"] {
        assert!(text.contains(name), "{text}");
    }
    let Report::Blocks(cat) = machine(&bredon(&["blocks", "--format", "machine"])) else {
        panic!("wrong report kind");
    };
    let ranks: Vec<_> = cat
        .blocks
        .iter()
        .map(|b| b.summary.cochain_ranks.clone())
        .collect();
    assert_eq!(ranks, vec![vec![8, 2], vec![10, 2, 1], vec![4]]);
    assert!(cat.blocks.iter().all(|b| b.findings.is_empty()));
}

#[test]
fn cohomology_of_a_single_line() {
    let dir = tempfile::tempdir().unwrap();
    let p = spec_file(
        dir.path(),
        "line.json",
        r#"{"point_group_order": 4, "blocks": ["line-minus"]}"#,
    );
    let out = bredon(&["cohomology", p.to_str().unwrap(), "--format", "machine"]);
    assert_eq!(out.status.code(), Some(0));
    let Report::Cohomology(r) = machine(&out) else {
        panic!("wrong report kind");
    };
    assert_eq!(r.cohomology[&0], FgAbGroup::free(6));
    assert_eq!(r.cohomology[&1], FgAbGroup::zero());
}

#[test]
fn ktheory_report_round_trips_and_is_deterministic() {
    let spec = vafa_witten();
    let args = ["ktheory", spec.to_str().unwrap(), "--format", "machine"];
    let first = bredon(&args);
    assert_eq!(first.status.code(), Some(0));
    let second = bredon(&args);
    assert_eq!(first.stdout, second.stdout);
    let report = machine(&first);
    let again = serde_json::to_vec_pretty(&report).unwrap();
    assert_eq!(serde_json::from_slice::<Report>(&again).unwrap(), report);
    let Report::Ktheory(k) = report else {
        panic!("wrong report kind");
    };
    assert!(k.k_theory.collapsed);
    assert_eq!(k.k_theory.k1, Some(FgAbGroup::zero()));
    assert_eq!(k.k_theory.k0.unwrap().free_rank(), 45);
    assert_eq!(k.assumptions.len(), 1);

    let human = bredon(&["ktheory", spec.to_str().unwrap()]);
    let text = String::from_utf8(human.stdout).unwrap();
    assert!(text.contains("K^0 = Z^45"), "{text}");
    assert!(text.contains("Higson-Kasparov"), "{text}");
}

#[test]
fn output_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = spec_file(
        dir.path(),
        "point.json",
        r#"{"point_group_order": 4, "blocks": ["point"]}"#,
    );
    let target = dir.path().join("report.json");
    let out = bredon(&[
        "ktheory",
        p.to_str().unwrap(),
        "--format",
        "machine",
        "--output",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written: Report = serde_json::from_slice(&std::fs::read(&target).unwrap()).unwrap();
    let Report::Ktheory(k) = written else {
        panic!("wrong report kind");
    };
    assert_eq!(k.k_theory.k0, Some(FgAbGroup::free(4)));
}

#[test]
fn spec_format_option_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let p = spec_file(
        dir.path(),
        "point.json",
        r#"{"point_group_order": 4, "blocks": ["point"], "options": {"format": "machine"}}"#,
    );
    let out = bredon(&["cohomology", p.to_str().unwrap()]);
    assert!(matches!(machine(&out), Report::Cohomology(_)));
    let out = bredon(&["cohomology", p.to_str().unwrap(), "--format", "human"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("H^0 = Z^4"));
}

#[test]
fn e2_reports_every_fold() {
    let dir = tempfile::tempdir().unwrap();
    let p = spec_file(
        dir.path(),
        "ll.json",
        r#"{"point_group_order": 4, "blocks": ["line-minus", "line-minus"]}"#,
    );
    let out = bredon(&["e2", p.to_str().unwrap(), "--format", "machine"]);
    assert_eq!(out.status.code(), Some(0));
    let Report::E2(r) = machine(&out) else {
        panic!("wrong report kind");
    };
    assert_eq!(r.tor_depth, 2);
    assert_eq!(r.folds.len(), 1);
    assert_eq!(r.folds[0].e2.get(0, 0), FgAbGroup::free(10));
}

#[test]
fn verify_passes_for_points() {
    let dir = tempfile::tempdir().unwrap();
    let p = spec_file(
        dir.path(),
        "pp.json",
        r#"{"point_group_order": 4, "blocks": ["point", "point", "point"]}"#,
    );
    let out = bredon(&[
        "verify",
        p.to_str().unwrap(),
        "--full-product-oracle",
        "--format",
        "machine",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let Report::Verify(r) = machine(&out) else {
        panic!("wrong report kind");
    };
    assert!(r.passed);
    assert_eq!(r.folds.len(), 2);
    assert_eq!(r.full_product.unwrap().flat_ranks, vec![4]);
}

#[test]
fn failed_certificate_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let p = spec_file(
        dir.path(),
        "ll.json",
        r#"{"point_group_order": 4, "blocks": ["line-minus", "line-minus"]}"#,
    );
    let out = bredon(&["verify", p.to_str().unwrap(), "--format", "machine"]);
    assert_eq!(out.status.code(), Some(3));
    let Report::Verify(r) = machine(&out) else {
        panic!("wrong report kind");
    };
    assert!(!r.passed);
    assert!(r.folds[0].oracle.agrees());
    assert!(!r.folds[0].collapses);
    assert_eq!(error_object(&out)["kind"], "computation");

    let out = bredon(&[
        "cohomology",
        p.to_str().unwrap(),
        "--tor-depth",
        "1",
        "--format",
        "machine",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    assert_eq!(error_object(&out)["exit_code"], 3);
}

#[test]
fn missing_file_is_a_usage_error() {
    let out = bredon(&[
        "cohomology",
        "/definitely/not/here.json",
        "--format",
        "machine",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_object(&out)["kind"], "usage");
}

#[test]
fn bad_arguments_are_usage_errors() {
    assert_eq!(bredon(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        bredon(&["e2", "x.json", "--tor-depth", "many"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(bredon(&["--help"]).status.code(), Some(0));
}

#[test]
fn parse_errors_exit_two_with_a_location() {
    let dir = tempfile::tempdir().unwrap();
    let p = spec_file(
        dir.path(),
        "broken.json",
        "{\n  \"point_group_order\": 4,\n  \"blocks\": [\n",
    );
    let out = bredon(&["cohomology", p.to_str().unwrap(), "--format", "machine"]);
    assert_eq!(out.status.code(), Some(2));
    let err = error_object(&out);
    assert_eq!(err["kind"], "parse");
    assert!(err["line"].as_u64().is_some());

    let p = spec_file(
        dir.path(),
        "empty.json",
        r#"{"point_group_order": 4, "blocks": []}"#,
    );
    let out = bredon(&["cohomology", p.to_str().unwrap(), "--format", "machine"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_object(&out)["field"], "blocks");

    let p = spec_file(
        dir.path(),
        "unknown.json",
        r#"{"point_group_order": 4, "blocks": ["torus"]}"#,
    );
    let out = bredon(&["ktheory", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("torus"));
}

#[test]
fn invalid_custom_block_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = spec_file(
        dir.path(),
        "square.json",
        r#"{"point_group_order": 4,
            "blocks": [{"name": "bad", "cells": [[4], [1], [1]],
                        "differentials": [[[1, 1, 1, 1]], [[1]]]}]}"#,
    );
    let out = bredon(&["cohomology", p.to_str().unwrap(), "--format", "machine"]);
    assert_eq!(out.status.code(), Some(2));
    let err = error_object(&out);
    assert_eq!(err["field"], "blocks[0]");
    assert!(err["message"]
        .as_str()
        .unwrap()
        .contains("degree 0 to degree 2"));
}

#[test]
fn custom_block_matches_builtin() {
    let dir = tempfile::tempdir().unwrap();
    let p = spec_file(
        dir.path(),
        "custom.json",
        r#"{"point_group_order": 4,
            "blocks": [{"name": "my-line", "cells": [[4, 4], [2]],
                        "differentials": [[[-1, 0, -1, 0, 1, 0, 1, 0],
                                           [0, -1, 0, -1, 0, 1, 0, 1]]]}]}"#,
    );
    let out = bredon(&["cohomology", p.to_str().unwrap(), "--format", "machine"]);
    assert_eq!(out.status.code(), Some(0));
    let Report::Cohomology(r) = machine(&out) else {
        panic!("wrong report kind");
    };
    assert_eq!(r.cohomology[&0], FgAbGroup::free(6));
}
