use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use qs_core::skein::braid_to_pd;
use qs_core::tangle::{closure_tape, parse_braid};
use qs_core::{make_spec, Family, RingElement};

fn qs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qs"))
        .args(args)
        .env_remove("QS_RECURSION_LIMIT")
        .output()
        .expect("binary runs")
}

fn qs_env(args: &[&str], key: &str, val: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qs")).args(args).env(key, val).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json_out(o: &Output) -> Value {
    assert_eq!(o.status.code(), Some(0), "stderr: {}", stderr(o));
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn poly(v: &Value) -> RingElement {
    RingElement::from_json(v).expect("polynomial json")
}

#[test]
fn verify_passes_and_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("reports.json");
    let o = qs(&["verify", "--family", "B", "--ranks", "1..3", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.contains("PASS")).count(), 3);
    let reports: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let reports = reports.as_array().unwrap();
    assert_eq!(reports.len(), 3);
    for r in reports {
        assert!(r["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    }
    assert_eq!(qs(&["verify", "--family", "C", "--ranks", "1..=3"]).status.code(), Some(0));
    assert_eq!(qs(&["verify", "--family", "D", "--ranks", "3"]).status.code(), Some(0));
}

#[test]
fn single_rank_json_is_still_a_list() {
    let v = json_out(&qs(&["verify", "--family", "C", "--ranks", "2", "--format", "json"]));
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert_eq!(v[0]["spec"], "C2");
}

#[test]
fn tampering_is_reported() {
    for fam in ["B", "C", "D"] {
        let rank = if fam == "D" { "3" } else { "1" };
        let o = qs(&["verify", "--family", fam, "--ranks", rank, "--tamper"]);
        assert_eq!(o.status.code(), Some(1), "{fam}");
        assert!(stdout(&o).contains("FAIL"));
        assert!(stderr(&o).contains("yang_baxter"), "{}", stderr(&o));
    }
}

#[test]
fn invariant_examples() {
    let s = make_spec(Family::B, 1).unwrap();
    let v = json_out(&qs(&["invariant", "--family", "B", "--rank", "1", "--braid", "", "--strands", "1", "--format", "json"]));
    assert_eq!(poly(&v["raw"]), s.delta);
    assert_eq!(poly(&v["normalized"]), s.delta);

    let v = json_out(&qs(&["invariant", "--family", "B", "--rank", "1", "--braid", "1", "--strands", "2", "--format", "json"]));
    assert_eq!(poly(&v["raw"]), &RingElement::q_pow(1, 1).unwrap() * &s.delta);
    assert_eq!(poly(&v["normalized"]), s.delta);
    assert_eq!(v["writhe"], 1);

    let o = qs(&["invariant", "--family", "B", "--rank", "1", "--braid", "1", "--strands", "2"]);
    assert_eq!(stdout(&o), format!("raw: {}\nnormalized: {}\n", &s.alpha * &s.delta, s.delta));
}

#[test]
fn negative_generators_are_not_flags() {
    let o = qs(&["invariant", "--family", "C", "--rank", "1", "--braid", "-1 -1", "--strands", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn tape_input_matches_braid_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig8.tape");
    let b = parse_braid("1 -2 1 -2", 3).unwrap();
    fs::write(&path, closure_tape(&b).to_text()).unwrap();
    let t = json_out(&qs(&["invariant", "--family", "C", "--rank", "2", "--tape", path.to_str().unwrap(), "--format", "json"]));
    let w = json_out(&qs(&["invariant", "--family", "C", "--rank", "2", "--braid", "1 -2 1 -2", "--strands", "3", "--format", "json"]));
    assert_eq!(t["raw"], w["raw"]);
    assert!(t.get("normalized").is_none());
}

#[test]
fn compare_examples_agree() {
    for (fam, rank, word, k) in [("B", "1", "1 1 1", "2"), ("C", "2", "1 -2 1 -2", "3"), ("D", "3", "1 1", "2")] {
        let o = qs(&["compare", "--family", fam, "--rank", rank, "--braid", word, "--strands", k]);
        assert_eq!(o.status.code(), Some(0), "{fam}{rank} {word}: {}", stderr(&o));
        assert_eq!(stdout(&o).lines().last(), Some("equal"));
    }
}

#[test]
fn oracle_from_pd_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trefoil.json");
    let b = parse_braid("1 1 1", 2).unwrap();
    fs::write(&path, braid_to_pd(&b).to_json().to_string()).unwrap();
    let from_pd = json_out(&qs(&["oracle", "--family", "D", "--rank", "3", "--pd", path.to_str().unwrap(), "--format", "json"]));
    let tensor = json_out(&qs(&["invariant", "--family", "D", "--rank", "3", "--braid", "1 1 1", "--strands", "2", "--format", "json"]));
    assert_eq!(from_pd["value"], tensor["raw"]);
    assert_eq!(from_pd["crossings"], 3);
}

#[test]
fn recursion_limit_from_env() {
    let args = ["oracle", "--family", "B", "--rank", "1", "--braid", "1 1 1", "--strands", "2"];
    let o = qs_env(&args, "QS_RECURSION_LIMIT", "2");
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("limit of 2"));
    assert_eq!(qs_env(&args, "QS_RECURSION_LIMIT", "3").status.code(), Some(0));
    assert_eq!(qs_env(&args, "QS_RECURSION_LIMIT", "many").status.code(), Some(2));
}

#[test]
fn exit_codes() {
    // usage
    assert_eq!(qs(&["verify", "--family", "E", "--ranks", "1"]).status.code(), Some(2));
    assert_eq!(qs(&["verify", "--family", "B", "--ranks", "3..1"]).status.code(), Some(2));
    assert_eq!(qs(&["invariant", "--family", "D", "--rank", "1", "--braid", "1", "--strands", "2"]).status.code(), Some(2));
    assert_eq!(qs(&["invariant", "--family", "B", "--rank", "1"]).status.code(), Some(2));
    assert_eq!(qs(&["frobnicate"]).status.code(), Some(2));
    // parse
    assert_eq!(qs(&["invariant", "--family", "B", "--rank", "1", "--braid", "1 x", "--strands", "2"]).status.code(), Some(3));
    assert_eq!(qs(&["invariant", "--family", "B", "--rank", "1", "--braid", "3", "--strands", "2"]).status.code(), Some(3));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "[[1,2,3]]").unwrap();
    assert_eq!(qs(&["oracle", "--family", "B", "--rank", "1", "--pd", bad.to_str().unwrap()]).status.code(), Some(3));
    let tape = dir.path().join("bad.tape");
    fs::write(&tape, "cup 0\npos 0\n").unwrap();
    assert_eq!(qs(&["invariant", "--family", "B", "--rank", "1", "--tape", tape.to_str().unwrap()]).status.code(), Some(3));
    let missing = dir.path().join("missing.tape");
    assert_eq!(qs(&["invariant", "--family", "B", "--rank", "1", "--tape", missing.to_str().unwrap()]).status.code(), Some(3));
}

fn store_lines(p: &Path) -> Vec<Value> {
    fs::read_to_string(p).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn tabulate_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("knots.tsv");
    let store = dir.path().join("store.jsonl");
    fs::write(&input, "0_1\t1\t\n3_1\t2\t1 1 1\n4_1\t3\t1 -2 1 -2\n").unwrap();
    let args = |fam: &'static str| {
        vec![
            "tabulate".to_string(),
            "--family".into(),
            fam.into(),
            "--rank".into(),
            "1".into(),
            "--input".into(),
            input.to_str().unwrap().into(),
            "--out".into(),
            store.to_str().unwrap().into(),
        ]
    };
    let run = |fam| {
        let a = args(fam);
        qs(&a.iter().map(String::as_str).collect::<Vec<_>>())
    };
    let o = run("B");
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let recs = store_lines(&store);
    assert_eq!(recs.len(), 3);
    assert_eq!(recs[1]["name"], "3_1");
    assert_eq!(recs[1]["family"], "B");
    assert_eq!(recs[1]["rank"], 1);
    assert_eq!(recs[1]["writhe"], 3);
    let s = make_spec(Family::B, 1).unwrap();
    assert_eq!(poly(&recs[0]["raw"]), s.delta);

    let before = fs::read(&store).unwrap();
    let o = run("B");
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("appended 0"));
    assert_eq!(fs::read(&store).unwrap(), before);

    // a different spec is a different key
    assert_eq!(run("C").status.code(), Some(0));
    assert_eq!(store_lines(&store).len(), 6);
}

#[test]
fn tabulate_skips_bad_lines() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("knots.tsv");
    let store = dir.path().join("store.jsonl");
    fs::write(&input, "hopf\t2\t1 1\nbroken\t2\t1 q\nwide\t2\t5\nno-tabs\n# comment\n\ntrefoil\t2\t1 1 1\n").unwrap();
    let o = qs(&["tabulate", "--family", "C", "--rank", "2", "--input", input.to_str().unwrap(), "--out", store.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let warnings = stderr(&o);
    assert_eq!(warnings.matches("warning").count(), 3, "{warnings}");
    assert!(warnings.contains("line 2"));
    let names: Vec<Value> = store_lines(&store).iter().map(|r| r["name"].clone()).collect();
    assert_eq!(names, ["hopf", "trefoil"]);
}

#[test]
fn tabulate_recovers_from_a_torn_line() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("knots.tsv");
    let store = dir.path().join("store.jsonl");
    fs::write(&input, "hopf\t2\t1 1\n").unwrap();
    fs::write(&store, "{\"name\": \"half").unwrap();
    let o = qs(&["tabulate", "--family", "B", "--rank", "1", "--input", input.to_str().unwrap(), "--out", store.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&store).unwrap();
    let last: Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(last["name"], "hopf");
}

#[test]
fn tabulate_needs_a_store() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("knots.tsv");
    fs::write(&input, "hopf\t2\t1 1\n").unwrap();
    assert_eq!(qs(&["tabulate", "--family", "B", "--rank", "1", "--input", input.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn thimble_csv() {
    let o = qs(&["thimble", "--b", "1", "--from", "-1", "--to", "1", "--steps", "21"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("a,connected,j_plus,j_minus,max_im_drift"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 21);
    let connected: Vec<&str> = rows.iter().filter(|r| r[1] == "true").map(|r| r[0]).collect();
    assert_eq!(connected, ["0"]);
    for r in &rows {
        assert!(r[4].parse::<f64>().unwrap() < 1e-6);
    }
    assert_ne!(rows[0][2], rows[20][2]);
}

#[test]
fn thimble_json_with_wall() {
    let v = json_out(&qs(&["thimble", "--b", "-1", "--from", "-0.7", "--to", "1.3", "--steps", "3", "--wall", "--format", "json"]));
    assert!(v["wall"].as_f64().unwrap().abs() < 1e-3);
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn output_is_deterministic() {
    let args = ["invariant", "--family", "D", "--rank", "3", "--braid", "1 -2 1 -2", "--strands", "3", "--format", "jsonl"];
    let a = qs(&args);
    let b = qs(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 1);
}
