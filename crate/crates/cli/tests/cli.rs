use std::process::{Command, Output};

fn cartan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cartan"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn body_lines(o: &Output) -> usize {
    // title and header rows precede the listing
    stdout(o).lines().count() - 2
}

#[test]
fn basis_counts() {
    let w = cartan(&["basis", "--algebra", "W", "--n", "2", "--degree", "0"]);
    assert_eq!(w.status.code(), Some(0));
    assert_eq!(body_lines(&w), 4);
    let h = cartan(&["basis", "--algebra", "H", "--n", "2", "--degree", "1"]);
    assert_eq!(body_lines(&h), 4);
    let s = cartan(&["basis", "--algebra", "S", "--n", "2", "--degree", "-1"]);
    assert_eq!(body_lines(&s), 2);
    let text = stdout(&s);
    assert!(text.contains("x^(0,0)d 1") && text.contains("x^(0,0)d 2"));
}

#[test]
fn verify_exit_codes() {
    assert_eq!(cartan(&["verify", "si", "--algebra", "W", "--n", "2"]).status.code(), Some(0));
    assert_eq!(cartan(&["verify", "si", "--algebra", "H", "--n", "3"]).status.code(), Some(2));
    assert_eq!(cartan(&["verify", "generation", "--algebra", "S", "--n", "3"]).status.code(), Some(0));
    let axioms = cartan(&["verify", "module-axioms", "--algebra", "W", "--n", "2", "--weight=-2,1", "--trunc", "3", "--depth", "2"]);
    assert_eq!(axioms.status.code(), Some(0));
    let missing = cartan(&["verify", "module-axioms", "--algebra", "W", "--n", "2"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn complex_failure_prints_witness() {
    let o = cartan(&["verify", "complex", "--algebra", "W", "--n", "2", "--trunc", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("injectivity fails at V(ω_0) in degree 0"));
}

#[test]
fn pi_json_degree_one() {
    let o = cartan(&["char", "pi", "--algebra", "W", "--n", "2", "--trunc", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["truncation"], 1);
    let deg1 = &v["degrees"][1];
    assert_eq!(deg1["total_dim"], 6);
    let pairs: Vec<(Vec<i64>, i64)> = deg1["weights"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (serde_json::from_value(e["coords"].clone()).unwrap(), e["mult"].as_i64().unwrap()))
        .collect();
    assert_eq!(pairs, vec![(vec![-1, 2], 1), (vec![0, 1], 2), (vec![1, 0], 2), (vec![2, -1], 1)]);
}

#[test]
fn json_round_trips_and_is_deterministic() {
    let args = ["char", "delta", "--algebra", "S", "--n", "3", "--weight=-1,0,0", "--trunc", "2", "--format", "json"];
    let a = stdout(&cartan(&args));
    let b = stdout(&cartan(&args));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(format!("{}\n", serde_json::to_string_pretty(&v).unwrap()), a);
}

#[test]
fn simple_trivial_character() {
    let o = cartan(&["char", "simple", "--algebra", "W", "--n", "2", "--weight", "0,0", "--trunc", "4", "--format", "csv"]);
    assert_eq!(stdout(&o), "degree,w1,w2,mult\n0,0,0,1\n");
}

#[test]
fn tilting_character_runs() {
    let o = cartan(&["char", "tilting", "--algebra", "H", "--n", "2", "--weight=-1", "--trunc", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("H(2) tilting(-1), truncation 4"));
}

#[test]
fn bad_weights_exit_2() {
    let o = cartan(&["char", "delta", "--algebra", "W", "--n", "2", "--weight", "0,-1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("λ1 ≤ λ2"));
    let o = cartan(&["char", "delta", "--algebra", "W", "--n", "2", "--weight", "a,b"]);
    assert_eq!(o.status.code(), Some(2));
    let o = cartan(&["char", "delta", "--algebra", "W", "--n", "2", "--weight=-1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sl_canonicalization_notice() {
    let o = cartan(&["tiltmult", "--algebra", "S", "--n", "2", "--lambda", "1,2", "--mu", "1,2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8(o.stderr).unwrap().contains("canonicalized to (-1,0)"));
}

#[test]
fn compmult_two_rows() {
    let o = cartan(&["compmult", "--algebra", "W", "--n", "2", "--weight", "0,0", "--trunc", "5", "--format", "csv"]);
    assert_eq!(stdout(&o), "simple,shift,mult\n\"L(0,0)\",0,1\n\"L(0,1)\",1,1\n");
}

#[test]
fn tiltmult_h_diagonal() {
    let o = cartan(&["tiltmult", "--algebra", "H", "--n", "2", "--lambda=-1", "--mu=-1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["multiplicity"], 2);
}

#[test]
fn soergel_agreement_and_disagreement() {
    let ok = cartan(&["soergel", "--algebra", "W", "--n", "2", "--lambda=-2,-1", "--mu=-1,-1", "--trunc", "6"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("true"));
    let bad = cartan(&["soergel", "--algebra", "H", "--n", "2", "--lambda", "0", "--mu", "0", "--trunc", "4"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("cartan-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("pi.csv");
    let o = cartan(&["char", "pi", "--algebra", "W", "--n", "2", "--trunc", "1", "--format", "csv", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 6);
    std::fs::remove_dir_all(&dir).unwrap();
}
