use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn blowup(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blowup"))
        .args(args)
        .env_remove("BLOWUP_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.push("--json");
    let out = blowup(&full);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    serde_json::from_slice(&out.stdout).unwrap()
}

const CUBIC: &str = "3:4:3,3,3,1,1,1,1,1,1";

#[test]
fn pairing_of_quartic_with_itself() {
    let out = blowup(&["pair", "--a", CUBIC, "--b", CUBIC]);
    assert_eq!(out.status.code(), Some(0));
    assert!(
        stdout(&out).trim_end().ends_with("= -1"),
        "{}",
        stdout(&out)
    );
    assert_eq!(json(&["pair", "--a", CUBIC, "--b", CUBIC])["value"], -1);
}

#[test]
fn classify_reports_witness() {
    let v = json(&["classify", "--divisor", "4:3:2,2,2,2,2,2,2"]);
    assert_eq!(v["verdict"], "MinusOneClass");
    assert_eq!(v["witness"].as_array().unwrap().len(), 3);
    assert_eq!(v["steps"], 3);

    let v = json(&["classify", "--divisor", "2:2:2,2"]);
    assert_eq!(v["verdict"], "NotNumerical");
    assert!(v.get("witness").is_none());
}

#[test]
fn mismatched_dimensions_are_domain_errors() {
    let out = blowup(&["pair", "--a", "2:1:1", "--b", "3:1:1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("dimension mismatch"));
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_errors_exit_two_with_grammar() {
    for args in [
        vec!["pair", "--a", "2:x:1", "--b", "2:1:1"],
        vec!["pair", "--a", "2:1:1"],
        vec!["frobnicate"],
        vec!["orbit", "--n", "2"],
        vec!["expdim", "--divisor", "2:2:1", "--method", "bogus"],
        vec![
            "expdim",
            "--divisor",
            "2:2:1",
            "--method",
            "ghh",
            "--strata",
        ],
    ] {
        let out = blowup(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(stderr(&out).contains("n:d:m1,m2,...,ms"), "{args:?}");
    }
}

#[test]
fn bad_index_sets_are_domain_errors() {
    let out = blowup(&["cremona", "--divisor", "2:2:1,1,1", "--indices", "1,2,2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn cremona_prints_both_formats() {
    let out = blowup(&["cremona", "--divisor", "2:2:1,1,1", "--indices", "1,2,3"]);
    let text = stdout(&out);
    assert!(text.contains("\n2:1:0,0,0\n"), "{text}");
    assert!(text.contains(r#"{"n":2,"d":1,"m":[0,0,0]}"#), "{text}");
}

#[test]
fn word_and_inverse_round_trip() {
    let w = "[[1,2,3],[1,4,5]]";
    let image = json(&["word", "--divisor", "2:5:2,2,2,1,1", "--word", w]);
    let literal = image["image"]["literal"].as_str().unwrap().to_string();
    let back = json(&["word", "--divisor", &literal, "--word", w, "--invert"]);
    assert_eq!(back["image"]["literal"], "2:5:2,2,2,1,1");
}

#[test]
fn fixtures_summary() {
    let v = json(&["fixtures"]);
    assert_eq!(v["failed"], 0);
    assert_eq!(v["passed"], v["total"]);
    assert!(v["total"].as_u64().unwrap() > 30);
    let text = stdout(&blowup(&["fixtures"]));
    assert!(text.trim_end().ends_with("0 failed, 36 total"), "{text}");
}

#[test]
fn conjectural_outputs_are_labelled() {
    let v = json(&["expdim", "--divisor", "2:4:3,3", "--strata"]);
    assert_eq!(
        (v["value"].as_i64(), v["conjectural"].as_bool()),
        (Some(4), Some(true))
    );
    assert_eq!(v["strata"].as_array().unwrap().len(), 17);
    let v = json(&[
        "expdim",
        "--divisor",
        "2:6:2,2,2,2,2,2,2,2,2",
        "--method",
        "ghh",
    ]);
    assert_eq!(
        (v["value"].as_i64(), v["conjectural"].as_bool()),
        (Some(1), Some(true))
    );
    assert!(stdout(&blowup(&["expdim", "--divisor", "2:4:3,3"])).contains("conjectural"));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = [
        "oracle",
        "--divisor",
        "3:4:2,2,2,2,2,2,2,2,2",
        "--seed",
        "7",
        "--json",
    ];
    let a = blowup(&args);
    let b = blowup(&args);
    assert_eq!(a.stdout, b.stdout);
    let one = Command::new(env!("CARGO_BIN_EXE_blowup"))
        .args(args)
        .env("BLOWUP_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, one.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!((v["h0"].as_i64(), v["seed"].as_u64()), (Some(1), Some(7)));
}

#[test]
fn census_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x28.jsonl");
    let file = path.to_str().unwrap();
    let v = json(&[
        "orbit",
        "--n",
        "2",
        "--s",
        "8",
        "--max-degree",
        "6",
        "--out",
        file,
    ]);
    assert_eq!(v["total"], 240);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(
        text.starts_with(r#"{"n":2,"s":8,"max_degree":6,"complete":true}"#),
        "{text}"
    );

    assert_eq!(json(&["orbit", "verify", "--in", file])["valid"], true);
    assert_eq!(json(&["orbit-verify", "--in", file])["valid"], true);

    let tampered = text.replacen(r#""perms":8"#, r#""perms":9"#, 1);
    assert_ne!(tampered, text);
    std::fs::write(&path, tampered).unwrap();
    assert_eq!(
        blowup(&["orbit", "verify", "--in", file]).status.code(),
        Some(1)
    );

    let missing = dir.path().join("missing.jsonl");
    let out = blowup(&["orbit-verify", "--in", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

fn schema_validator_available() -> bool {
    Command::new("python3")
        .args(["-c", "import jsonschema"])
        .stderr(Stdio::null())
        .status()
        .map(|s| s.success())
        .unwrap_or(false)
}

#[test]
fn json_outputs_match_schema() {
    if !schema_validator_available() {
        eprintln!("python3 with jsonschema not found; skipping schema validation");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let census = dir.path().join("c.jsonl");
    let census = census.to_str().unwrap();
    let commands: Vec<Vec<&str>> = vec![
        vec!["pair", "--a", CUBIC, "--b", CUBIC],
        vec!["adeg", "--divisor", CUBIC],
        vec!["chi", "--divisor", "2:6:2,2,2,2,2,2,2,2,2"],
        vec!["chi", "--divisor", CUBIC],
        vec!["cremona", "--divisor", CUBIC, "--indices", "1,2,3,4"],
        vec![
            "word",
            "--divisor",
            "4:0:0,0,-1,0,0,0,0",
            "--word",
            "[[1,2,3,4,5],[1,2,3,6,7],[3,4,5,6,7]]",
        ],
        vec!["classify", "--divisor", "4:3:2,2,2,2,2,2,2"],
        vec!["classify", "--divisor", "2:3:2,2,2"],
        vec!["peel", "--divisor", "2:4:3,3", "--max-degree", "3"],
        vec!["reduce", "--divisor", "2:5:2,2,2,2,2,1,1"],
        vec!["reduce", "--divisor", "2:2:1,1,1,1,1"],
        vec![
            "orbit",
            "--n",
            "2",
            "--s",
            "7",
            "--max-degree",
            "3",
            "--out",
            census,
        ],
        vec!["orbit-verify", "--in", census],
        vec!["expdim", "--divisor", "3:2:2,2,2", "--strata"],
        vec![
            "expdim",
            "--divisor",
            "2:4:3,3",
            "--method",
            "ghh",
            "--max-degree",
            "3",
        ],
        vec!["oracle", "--divisor", "2:2:1,1,1,1,1"],
        vec!["fixtures"],
    ];
    let docs: Vec<Value> = commands.iter().map(|c| json(c)).collect();
    let schema = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/output.schema.json");
    let script = "import json, sys, jsonschema\n\
        schema = json.load(open(sys.argv[1]))\n\
        for doc in json.load(sys.stdin):\n    jsonschema.validate(doc, schema)\n";
    let mut child = Command::new("python3")
        .args(["-c", script, schema.to_str().unwrap()])
        .stdin(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(serde_json::to_string(&docs).unwrap().as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
}
