use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

mod dot_grammar;

fn fixture(name: &str) -> String {
    format!("{}/../core/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

fn mvf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mvf")).args(args).output().unwrap()
}

fn mvf_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_mvf"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn morse_on_example1() {
    let out = mvf(&["morse", &fixture("example1")]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["morse_sets"].as_array().unwrap().len(), 3);
    let strict: Vec<&Value> = v["order"].as_array().unwrap().iter().filter(|p| p[0] != p[1]).collect();
    assert_eq!(strict.len(), 2);
    let dot = v["dot"].as_str().unwrap();
    let graph = dot_grammar::parse(dot).unwrap();
    assert!(graph.directed);
    assert_eq!(graph.nodes, ["M0", "M1", "M2"]);
    assert_eq!(graph.edges.len(), 2);
    // the Conley index of each top cell is concentrated in degree 2
    assert_eq!(v["conley_model"][1]["conley_betti"], serde_json::json!([0, 0, 1]));
}

#[test]
fn example2_is_not_a_decomposition() {
    let out = mvf(&["verify", "--decomposition", "--family", "M1", &fixture("example2")]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["passed"], false);
    let kinds: Vec<&str> = v["violations"].as_array().unwrap().iter().map(|x| x["kind"].as_str().unwrap()).collect();
    assert!(kinds.contains(&"preorder not antisymmetric"), "{kinds:?}");

    let out = mvf(&["verify", "--family", "M1", &fixture("example2")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], true);
}

#[test]
fn uncovered_cycle_witness_is_reported() {
    let out = mvf(&["verify", "--family", "top_cells", &fixture("example1")]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let cycle = v["violations"]
        .as_array()
        .unwrap()
        .iter()
        .find(|x| x["kind"] == "cycle hull not covered")
        .expect("an uncovered cycle");
    assert!(cycle["witness"]["cycle"].as_array().unwrap().len() >= 2);
}

#[test]
fn non_convex_multivector_is_an_input_error() {
    let doc = r#"{"complex":{"simplices":[["A","B","C"]]},
        "multivectors":[["A","ABC"],["B"],["C"],["AB"],["AC"],["BC"]]}"#;
    let out = mvf_stdin(&["validate", "-"], doc);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("/multivectors/0"), "{err}");
    assert!(err.contains("[\"A\", \"ABC\"]"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn schema_errors_carry_pointers() {
    let cases = [
        (r#"{"complex":{"simplices":[["A"]]},"extra":1}"#, "/extra"),
        (r#"{"complex":{"simplices":[["A","B"]]},"multivectors":[["A","Q"]]}"#, "/multivectors/0/1"),
        (r#"{"complex":{"cells":[{"id":"x","dim":1,"boundary":["y"]}]}}"#, "/complex/cells/0/boundary/0"),
        ("[1,2", "/"),
    ];
    for (doc, pointer) in cases {
        let out = mvf_stdin(&["validate", "-"], doc);
        assert_eq!(out.status.code(), Some(2), "{doc}");
        assert!(stderr(&out).contains(pointer), "{doc}: {}", stderr(&out));
    }
}

#[test]
fn unknown_family_and_missing_file() {
    let out = mvf(&["verify", "--family", "nope", &fixture("example1")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("nope"));
    let out = mvf(&["morse", "/definitely/not/here.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn export_dot_parses_and_respects_loops() {
    for name in ["example1", "example2", "lorenz"] {
        let with = mvf(&["export-dot", &fixture(name)]);
        let without = mvf(&["export-dot", "--no-loops", &fixture(name)]);
        for out in [&with, &without] {
            assert_eq!(out.status.code(), Some(0));
            let text = String::from_utf8(out.stdout.clone()).unwrap();
            dot_grammar::parse(&text).unwrap_or_else(|e| panic!("{name}: {e}\n{text}"));
        }
        let loops = |o: &Output| {
            let g = dot_grammar::parse(&String::from_utf8_lossy(&o.stdout)).unwrap();
            g.edges.iter().filter(|(a, b)| a == b).count()
        };
        assert!(loops(&with) > 0, "{name}");
        assert_eq!(loops(&without), 0, "{name}");
    }
    let fam = mvf(&["export-dot", "--family", "critical", &fixture("example1")]);
    let text = String::from_utf8(fam.stdout).unwrap();
    assert!(text.starts_with("digraph \"critical\" {"));
    assert!(text.contains("\"M3A\" -> \"M3C\";"));
}

#[test]
fn consolidate_with_document_partition() {
    let out = mvf(&["consolidate", "--family", "critical", &fixture("example1")]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    let labels: Vec<&str> = v["morse_sets"].as_array().unwrap().iter().map(|m| m["label"].as_str().unwrap()).collect();
    assert_eq!(labels, ["M1", "M2", "M3A+M3C+M3E"]);

    let bad = mvf(&["consolidate", "--family", "top_cells", "--by-scc", &fixture("example1")]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(json(&bad)["consolidated"], false);
}

#[test]
fn enumerate_and_oracle_agree() {
    let out = mvf(&["--oracle", "--threads", "2", "enumerate", &fixture("example2")]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["count"], 2);
    assert_eq!(v["oracle"]["disagreements"], serde_json::json!([]));
    assert!(v["oracle"]["checks"].as_u64().unwrap() > 100);

    let sat = mvf(&["enumerate", "--saturated", &fixture("lorenz")]);
    assert_eq!(json(&sat)["count"], 0);
}

#[test]
fn criticality_lists_every_multivector() {
    let out = mvf(&["criticality", &fixture("example1")]);
    let v = json(&out);
    let rows = v["multivectors"].as_array().unwrap();
    assert_eq!(rows.len(), 7);
    let regular: Vec<&str> = rows
        .iter()
        .filter(|r| r["critical"] == false)
        .map(|r| r["multivector"].as_str().unwrap())
        .collect();
    assert_eq!(regular, ["V2", "V5"]);
}

#[test]
fn repeated_runs_are_identical() {
    for args in [
        vec!["morse", "lorenz"],
        vec!["enumerate", "example2"],
        vec!["criticality", "example1"],
    ] {
        let path = fixture(args[1]);
        let a = mvf(&[args[0], &path]);
        let b = mvf(&[args[0], &path]);
        assert_eq!(a.stdout, b.stdout);
    }
}
