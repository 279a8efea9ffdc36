//! End-to-end runs of the `gngroup` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use gngroup::{are_equal, parse_word};
use serde_json::Value;

fn gngroup(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gngroup"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = gngroup(&full);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn schema(name: &str) -> jsonschema::JSONSchema {
    let path =
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../schemas/{name}.schema.json"));
    let value: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::JSONSchema::compile(&value).expect("schema compiles")
}

fn assert_valid(name: &str, doc: &Value) {
    let compiled = schema(name);
    let messages: Vec<String> = match compiled.validate(doc) {
        Ok(()) => return,
        Err(errors) => errors
            .map(|e| format!("{} at {}", e, e.instance_path))
            .collect(),
    };
    panic!("{name} output violates its schema: {messages:?}\n{doc:#}");
}

#[test]
fn word_commands_match_examples_and_schemas() {
    let doc = json(&["wp", "--n", "4", "--word", "a1^3"]);
    assert_eq!(doc["trivial"], true);
    assert_valid("wp", &doc);
    assert_eq!(
        json(&["wp", "--n", "4", "--word", "a1*a2^-1"])["trivial"],
        false
    );

    let doc = json(&["order", "--n", "4", "--word", "a1*a2"]);
    assert_eq!(doc["order"], 6);
    assert_valid("order", &doc);

    let doc = json(&["decompose", "--n", "4", "--word", "a1*a2"]);
    assert_eq!(doc["states"], serde_json::json!(["a1", "1", "1", "a2"]));
    assert_eq!(doc["root_factors"], "(2 3 4)(1 3 4)");
    assert_valid("decompose", &doc);

    let doc = json(&[
        "eq",
        "--n",
        "5",
        "--word",
        "[a1,a2]",
        "--other",
        "a1^-1*a2^-1*a1*a2",
    ]);
    assert_eq!(doc["equal"], true);
    assert_valid("eq", &doc);

    let doc = json(&["invariants", "--n", "5", "--word", "a1*a2^-1*a3"]);
    assert_eq!(doc["epsilon"], 1);
    assert_eq!(doc["in_kn"], false);
    assert_valid("invariants", &doc);
    assert_valid(
        "invariants",
        &json(&["invariants", "--n", "4", "--word", "a1*a2"]),
    );

    assert_valid(
        "portrait",
        &json(&["portrait", "--n", "4", "--word", "a1*a2", "--depth", "3"]),
    );
}

#[test]
fn table_commands_match_schemas() {
    let doc = json(&["hausdorff", "--n", "6"]);
    let closed: f64 = doc["results"][0]["closed_form"]
        .as_str()
        .unwrap()
        .parse()
        .unwrap();
    assert!((closed - 0.894646).abs() < 1e-6);
    assert_valid("hausdorff", &doc);
    let doc = json(&[
        "hausdorff",
        "--n",
        "3..5",
        "--levels",
        "2",
        "--precision-digits",
        "30",
    ]);
    assert_eq!(
        doc["results"][2]["levels"][1]["empirical"],
        doc["results"][2]["levels"][1]["formula"]
    );
    assert_valid("hausdorff", &doc);

    let doc = json(&["quotients", "--n", "4", "--levels", "3"]);
    assert_eq!(doc["tables"][0]["rows"][1]["order"], "82944");
    assert_valid("quotients", &doc);

    let csv = gngroup(&[
        "quotients",
        "--n",
        "3..4",
        "--levels",
        "2",
        "--format",
        "csv",
    ]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text
        .starts_with("n,level,degree,order,index,predicted_index,matches_formula,partial_ratio\n"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn printed_words_reparse_to_equal_elements() {
    for (n, w) in [
        (4, "a1*a2^-1*a3^2"),
        (5, "[a1^a2,a3]*a4"),
        (6, "a1*a3*a5^-1*a2"),
        (4, "a1^3"),
    ] {
        let input = parse_word(n, w).unwrap();
        let doc = json(&["decompose", "--n", &n.to_string(), "--word", w]);
        let printed = parse_word(n, doc["word"].as_str().unwrap()).unwrap();
        assert!(are_equal(&input, &printed).unwrap(), "{w}");
        let redo = json(&[
            "decompose",
            "--n",
            &n.to_string(),
            "--word",
            doc["word"].as_str().unwrap(),
        ]);
        assert_eq!(redo["states"], doc["states"]);
        for state in doc["states"].as_array().unwrap() {
            parse_word(n, state.as_str().unwrap()).unwrap();
        }
    }
}

#[test]
fn exit_codes() {
    assert_eq!(
        gngroup(&["wp", "--n", "4", "--word", "a7"]).status.code(),
        Some(2)
    );
    assert_eq!(
        gngroup(&["wp", "--n", "4", "--word", "a1*"]).status.code(),
        Some(2)
    );
    assert_eq!(gngroup(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        gngroup(&["quotients", "--n", "2..4"]).status.code(),
        Some(2)
    );
    let refused = gngroup(&["quotients", "--n", "5", "--levels", "5"]);
    assert_eq!(refused.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&refused.stderr).contains("budget"));
    assert_eq!(
        gngroup(&[
            "quotients",
            "--n",
            "5",
            "--levels",
            "5",
            "--budget-degree",
            "100"
        ])
        .status
        .code(),
        Some(3)
    );
}

#[test]
fn verify_report_with_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("gngroup.toml");
    std::fs::write(
        &config,
        "seed = 11\nlevels = 2\n[verify]\ncontraction_words = 100\nparity_words = 100\noracle_words = 50\n",
    )
    .unwrap();
    let report = dir.path().join("report.json");
    let run = |n: &str| {
        gngroup(&[
            "--config",
            config.to_str().unwrap(),
            "verify",
            "--n",
            n,
            "--report",
            report.to_str().unwrap(),
        ])
    };
    // every check passes or is recomputed for n = 4
    assert_eq!(run("4").status.code(), Some(0));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(doc["seed"], 11);
    assert_valid("verify", &doc);
    // odd-n element orders fail, so the run exits 1
    assert_eq!(run("5").status.code(), Some(1));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_valid("verify", &doc);
    assert!(doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["status"] == "fail"));
}

#[test]
fn outputs_are_deterministic() {
    let args = [
        "invariants",
        "--n",
        "7",
        "--word",
        "a1*a5^-2",
        "--format",
        "json",
    ];
    assert_eq!(gngroup(&args).stdout, gngroup(&args).stdout);
    let bad = gngroup(&[
        "--config",
        "/nonexistent/x.toml",
        "wp",
        "--n",
        "4",
        "--word",
        "a1",
    ]);
    assert_eq!(bad.status.code(), Some(2));
}
