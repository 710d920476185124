//! End-to-end runs of the `localcolor` binary: exit codes, file formats,
//! verification failures and the report schema.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use proptest::prelude::*;
use serde_json::Value;
use tempfile::TempDir;

use localcolor::io::{parse_graph, write_edge_list, write_graph_json};
use localcolor::report::RUN_REPORT_SCHEMA;
use localcolor_core::Graph;

fn localcolor(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_localcolor"))
        .args(args)
        .current_dir(dir)
        .env_remove("LOCALCOLOR_SEED")
        .env_remove("LOCALCOLOR_PROFILE")
        .env_remove("LOCALCOLOR_REPORT")
        .env_remove("LOCALCOLOR_TRACE")
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("terminated by a signal")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn schema_errors(report: &Value) -> Vec<String> {
    let schema: Value = serde_json::from_str(RUN_REPORT_SCHEMA).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).expect("schema compiles");
    let errors: Vec<String> = match compiled.validate(report) {
        Ok(()) => Vec::new(),
        Err(errs) => errs.map(|e| e.to_string()).collect(),
    };
    errors
}

fn k5(dir: &TempDir) {
    let mut text = String::from("p 5 10\n");
    for u in 1..=5 {
        for v in u + 1..=5 {
            text.push_str(&format!("{u} {v}\n"));
        }
    }
    fs::write(dir.path().join("k5.txt"), text).unwrap();
}

#[test]
fn chain_file_has_the_documented_size() {
    let dir = tempfile::tempdir().unwrap();
    let out = localcolor(dir.path(), &["gen", "chain", "--delta", "12", "--c", "9", "--i", "3", "-o", "g.txt", "--sidecar", "g.json"]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(dir.path().join("g.txt")).unwrap();
    let header = text.lines().find(|l| l.starts_with("p ")).unwrap();
    assert_eq!(header.split_whitespace().nth(1), Some("34"));
    let sidecar = read_json(&dir.path().join("g.json"));
    assert_eq!(sidecar["layers"], 3);
    assert_eq!(sidecar["layer_of"].as_array().unwrap().len(), 34);
}

#[test]
fn odd_hard_instance_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = localcolor(dir.path(), &["gen", "hard", "--delta", "12", "--c", "9", "--i", "3"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("even"));
}

#[test]
fn unknown_flags_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&localcolor(dir.path(), &["color", "--no-such-flag"])), 1);
    assert_eq!(code(&localcolor(dir.path(), &["--help"])), 0);
}

#[test]
fn k5_with_four_colors_yields_a_checkable_certificate() {
    let dir = tempfile::tempdir().unwrap();
    k5(&dir);
    let out = localcolor(dir.path(), &["certify", "k5.txt", "--c", "4", "-o", "cert.json", "--report", "r.json"]);
    assert_eq!(code(&out), 2);
    let cert = read_json(&dir.path().join("cert.json"));
    assert_eq!(cert["kind"], "neighborhood");
    assert_eq!(cert["vertex"], 1);
    assert_eq!(cert["vertices"].as_array().unwrap().len(), 5);
    assert!(schema_errors(&read_json(&dir.path().join("r.json"))).is_empty());

    let ok = localcolor(dir.path(), &["verify", "k5.txt", "--certificate", "cert.json", "--verify", "oracle"]);
    assert_eq!(code(&ok), 0, "{}", String::from_utf8_lossy(&ok.stderr));

    // Five colors are enough, so nothing is certified.
    let none = localcolor(dir.path(), &["certify", "k5.txt", "--c", "5"]);
    assert_eq!(code(&none), 0);
}

#[test]
fn certificate_for_another_graph_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    k5(&dir);
    assert_eq!(code(&localcolor(dir.path(), &["certify", "k5.txt", "--c", "4", "-o", "cert.json"])), 2);
    fs::write(dir.path().join("c5.txt"), "p 5 5\n1 2\n2 3\n3 4\n4 5\n5 1\n").unwrap();
    let out = localcolor(dir.path(), &["verify", "c5.txt", "--certificate", "cert.json"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn tampered_coloring_names_a_monochromatic_edge() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert_eq!(code(&localcolor(p, &["gen", "triangle-free", "--n", "500", "--delta", "50", "--seed", "2", "-o", "g.txt"])), 0);
    assert_eq!(code(&localcolor(p, &["color", "g.txt", "--k", "10", "-o", "col.txt"])), 0);
    assert_eq!(code(&localcolor(p, &["verify", "g.txt", "--coloring", "col.txt", "--palette", "49"])), 0);

    // Give the first edge's lower endpoint the color of its other end.
    let graph = parse_graph(&fs::read_to_string(p.join("g.txt")).unwrap()).unwrap();
    let (u, v) = graph.edges().next().unwrap();
    let text = fs::read_to_string(p.join("col.txt")).unwrap();
    let color_of = |w: u32| {
        text.lines()
            .map(|l| l.split_whitespace().map(|t| t.parse::<u32>().unwrap()).collect::<Vec<_>>())
            .find(|f| f[0] == w)
            .map(|f| f[1])
            .unwrap()
    };
    let target = color_of(v);
    let tampered: String = text
        .lines()
        .map(|l| if l.split_whitespace().next() == Some(&u.to_string()) { format!("{u} {target}\n") } else { format!("{l}\n") })
        .collect();
    fs::write(p.join("bad.txt"), tampered).unwrap();

    let out = localcolor(p, &["verify", "g.txt", "--coloring", "bad.txt", "--report", "r.json"]);
    assert_eq!(code(&out), 1);
    let report = read_json(&p.join("r.json"));
    assert_eq!(report["outcome"], "fail");
    let edge = report["details"]["failing_edge"].as_array().unwrap();
    let (a, b) = (edge[0].as_u64().unwrap() as u32, edge[1].as_u64().unwrap() as u32);
    assert!(graph.has_edge(a, b));
    assert!(a == u || b == u);
    assert!(schema_errors(&report).is_empty());
}

#[test]
fn clique_input_emits_a_clique_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert_eq!(code(&localcolor(p, &["gen", "clique-union", "--count", "2", "--size", "10", "-o", "g.txt"])), 0);
    let out = localcolor(p, &["color", "g.txt", "--k", "2", "--certificate", "cert.json", "--report", "r.json"]);
    assert_eq!(code(&out), 2);
    let cert = read_json(&p.join("cert.json"));
    assert_eq!(cert["kind"], "clique");
    assert_eq!(cert["clique"].as_array().unwrap().len(), 10);
    assert_eq!(code(&localcolor(p, &["verify", "g.txt", "--certificate", "cert.json"])), 0);
    assert!(schema_errors(&read_json(&p.join("r.json"))).is_empty());
}

#[test]
fn preconditions_and_budgets_have_their_own_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert_eq!(code(&localcolor(p, &["gen", "chain", "--delta", "12", "--c", "9", "--i", "3", "-o", "g.txt"])), 0);
    assert_eq!(code(&localcolor(p, &["decompose", "g.txt", "--d", "5"])), 3);
    assert_eq!(code(&localcolor(p, &["decompose", "g.txt", "--d", "5", "--force"])), 0);
    assert_eq!(code(&localcolor(p, &["color", "g.txt", "--k", "100"])), 3);
    assert_eq!(code(&localcolor(p, &["certify", "g.txt", "--c", "9", "--budget", "1"])), 4);
    assert_eq!(code(&localcolor(p, &["verify", "missing.txt", "--coloring", "x.txt"])), 1);
}

#[test]
fn environment_variables_stand_in_for_flags() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert_eq!(code(&localcolor(p, &["gen", "random", "--n", "100", "--delta", "10", "--seed", "9", "-o", "flag.txt"])), 0);
    let out = Command::new(env!("CARGO_BIN_EXE_localcolor"))
        .args(["gen", "random", "--n", "100", "--delta", "10", "-o", "env.txt"])
        .current_dir(p)
        .env("LOCALCOLOR_SEED", "9")
        .env("LOCALCOLOR_REPORT", "env-report.json")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert_eq!(fs::read(p.join("flag.txt")).unwrap(), fs::read(p.join("env.txt")).unwrap());
    let report = read_json(&p.join("env-report.json"));
    assert_eq!(report["seed"], 9);
    assert!(schema_errors(&report).is_empty());
}

#[test]
fn every_command_writes_a_schema_valid_report() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let steps: &[&[&str]] = &[
        &["gen", "triangle-free", "--n", "500", "--delta", "50", "-o", "g.txt"],
        &["decompose", "g.txt", "-o", "dec.json"],
        &["color", "g.txt", "--k", "10", "-o", "col.txt", "--verify", "fast"],
        &["certify", "g.txt", "--c", "49"],
        &["verify", "g.txt", "--coloring", "col.txt", "--decomposition", "dec.json"],
        &["bench", "--runs", "2", "--n", "500", "--delta", "50", "--k", "10", "-o", "bench.jsonl"],
    ];
    for (i, step) in steps.iter().enumerate() {
        let report = format!("r{i}.json");
        let mut args = step.to_vec();
        args.extend(["--report", &report]);
        let out = localcolor(p, &args);
        assert_eq!(code(&out), 0, "{step:?}: {}", String::from_utf8_lossy(&out.stderr));
        let value = read_json(&p.join(&report));
        assert_eq!(value["command"], step[0]);
        let errors = schema_errors(&value);
        assert!(errors.is_empty(), "{step:?}: {errors:?}");
    }
    let bench = fs::read_to_string(p.join("bench.jsonl")).unwrap();
    assert_eq!(bench.lines().count(), 2);
    for line in bench.lines() {
        serde_json::from_str::<Value>(line).unwrap();
    }
}

#[test]
fn trace_lines_are_json_records() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert_eq!(code(&localcolor(p, &["gen", "random", "--n", "200", "--delta", "40", "-o", "g.txt"])), 0);
    assert_eq!(code(&localcolor(p, &["decompose", "g.txt", "--trace", "t.jsonl"])), 0);
    let trace = fs::read_to_string(p.join("t.jsonl")).unwrap();
    assert!(trace.lines().count() >= 200);
    for line in trace.lines() {
        let rec: Value = serde_json::from_str(line).unwrap();
        for key in ["program", "round", "vertex", "received", "sent", "halted"] {
            assert!(rec.get(key).is_some(), "missing {key} in {line}");
        }
    }
}

fn arb_graph() -> impl Strategy<Value = Graph> {
    (1usize..30).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |keep| {
            let all = (1..=n as u32).flat_map(|u| (u + 1..=n as u32).map(move |v| (u, v)));
            Graph::from_edges(n, all.zip(keep).filter(|(_, k)| *k).map(|(e, _)| e)).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn graph_formats_round_trip(g in arb_graph()) {
        prop_assert_eq!(&parse_graph(&write_edge_list(&g)).unwrap(), &g);
        prop_assert_eq!(&parse_graph(&write_graph_json(&g)).unwrap(), &g);
    }
}
