use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn toric(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric")).args(args).output().expect("spawn toric")
}

fn stdout_json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("json output")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn resolve_point_in_p2() {
    let o = toric(&["resolve", "--fan", path_str(&data("p2.json")), "--sub", path_str(&data("point.json"))]);
    let v = stdout_json(&o);
    assert_eq!(v["header"]["ranks"], serde_json::json!([[0, 1], [1, 3], [2, 2]]));
}

#[test]
fn frobenius_on_p1() {
    let o = toric(&["frobenius", "--fan", path_str(&data("p1.json")), "--divisor", "0", "--ell", "2"]);
    let v = stdout_json(&o);
    let summands = v["decomposition"]["summands"].as_array().unwrap();
    let got: Vec<(i64, u64)> = summands
        .iter()
        .map(|s| (s["class"]["pic"][0].as_i64().unwrap(), s["multiplicity"].as_u64().unwrap()))
        .collect();
    assert_eq!(got, vec![(-1, 1), (0, 1)]);
}

#[test]
fn frobenius_accepts_divisor_vectors_and_rejects_bad_lengths() {
    let a = stdout_json(&toric(&["frobenius", "--fan", path_str(&data("p2.json")), "--divisor", "-1", "--ell", "3"]));
    let b = stdout_json(&toric(&["frobenius", "--fan", path_str(&data("p2.json")), "--divisor", "0,0,-1", "--ell", "3"]));
    assert_eq!(a["decomposition"], b["decomposition"]);
    let o = toric(&["frobenius", "--fan", path_str(&data("p2.json")), "--divisor", "1,2", "--ell", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error[INVALID_ARGUMENT]"));
}

#[test]
fn verify_accepts_goldens_and_rejects_mutations() {
    let dir = tempfile::tempdir().unwrap();
    let golden = dir.path().join("golden.json");
    for (fan, sub) in [("p1.json", None), ("p2.json", Some("point.json")), ("p2xp2.json", Some("p2_diagonal.json"))] {
        let fan = data(fan);
        let mut args = vec!["resolve", "--fan", path_str(&fan), "--out", path_str(&golden)];
        let sub = sub.map(data);
        if let Some(s) = &sub {
            args.extend(["--sub", path_str(s)]);
        }
        assert!(toric(&args).status.success());
        let o = toric(&["verify", "--complex", path_str(&golden), "--trials", "100", "--seed", "0"]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    }

    // scale one coefficient of d_1 in the P^2 golden
    let fan = data("p2.json");
    assert!(toric(&["resolve", "--fan", path_str(&fan), "--out", path_str(&golden)]).status.success());
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&golden).unwrap()).unwrap();
    v["differential"]["1"][0][2][0][0] = serde_json::json!(2);
    let mutated = dir.path().join("mutated.json");
    std::fs::write(&mutated, serde_json::to_string(&v).unwrap()).unwrap();
    let o = toric(&["verify", "--complex", path_str(&mutated), "--trials", "100", "--seed", "0"]);
    assert_eq!(o.status.code(), Some(1));

    // change the exponent so that the entry is no longer homogeneous
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&golden).unwrap()).unwrap();
    let e = &mut v["differential"]["1"][0][2][0][1];
    let first = e.as_array().unwrap().iter().position(|x| x.as_u64() == Some(1)).unwrap();
    e[first] = serde_json::json!(2);
    std::fs::write(&mutated, serde_json::to_string(&v).unwrap()).unwrap();
    let o = toric(&["verify", "--complex", path_str(&mutated)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn outputs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let fan = data("p2xp2.json");
    let sub = data("p2_diagonal.json");
    let c = dir.path().join("c.json");
    assert!(toric(&["resolve", "--fan", path_str(&fan), "--sub", path_str(&sub), "--out", path_str(&c)]).status.success());
    let first = std::fs::read(&c).unwrap();
    assert!(toric(&["resolve", "--fan", path_str(&fan), "--sub", path_str(&sub), "--out", path_str(&c)]).status.success());
    assert_eq!(first, std::fs::read(&c).unwrap());

    let run = || toric(&["verify", "--complex", path_str(&c), "--trials", "30", "--seed", "7"]).stdout;
    let a = run();
    assert_eq!(a, run());
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["header"]["seed"], 7);
}

#[test]
fn render_point_in_p2() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("p2.svg");
    let o = toric(&["render", "--fan", path_str(&data("p2.json")), "--sub", path_str(&data("point.json")), "--svg", path_str(&svg)]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("<path class=\"hyperplane\"").count(), 3);
    assert_eq!(text.matches("<text class=\"cell\"").count(), 6);
}

#[test]
fn render_p1_is_an_interval_with_identified_ends() {
    let o = toric(&["render", "--fan", path_str(&data("p1.json"))]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.matches("<path class=\"identify\"").count(), 2);
    // both rays cut the circle at the identified endpoint
    assert_eq!(text.matches("<path class=\"hyperplane\"").count(), 2);
    assert_eq!(text.matches("<text class=\"cell\"").count(), 2);
}

#[test]
fn render_diagonal_has_doubled_hairs() {
    let o = toric(&["render", "--fan", path_str(&data("p2xp2.json")), "--sub", path_str(&data("p2_diagonal.json"))]);
    let text = String::from_utf8(o.stdout).unwrap();
    let paths: Vec<&str> = text.lines().filter(|l| l.starts_with("<path class=\"hyperplane\"")).collect();
    assert_eq!(paths.len(), 6);
    let geometry = |l: &str| l.split(" d=").nth(1).unwrap().to_string();
    // rays ρ and ρ + 3 cut the same line; their hairs point to opposite sides
    for r in 0..3 {
        assert_eq!(geometry(paths[r]), geometry(paths[r + 3]));
    }
    let hairs: Vec<&str> = text.lines().filter(|l| l.starts_with("<path class=\"hair\"")).collect();
    assert_eq!(hairs.len(), 6);
    for r in 0..3 {
        assert_ne!(geometry(hairs[r]), geometry(hairs[r + 3]));
    }
}

#[test]
fn input_errors_exit_with_two() {
    let o = toric(&["render", "--fan", path_str(&data("p3.json"))]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.starts_with("error[DIM_TOO_HIGH]"), "{err}");
    assert_eq!(err.lines().count(), 1);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"rank_L\": 1").unwrap();
    let o = toric(&["validate", "--fan", path_str(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().starts_with("error[PARSE]"));

    let missing = dir.path().join("missing.json");
    let o = toric(&["thomsen", "--fan", path_str(&missing)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invalid_fans_fail_validation() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.json");
    // overlapping cones
    std::fs::write(&f, r#"{"rank_L":1,"rank_N":1,"beta":[[1]],"rays":[[1],[2]],"cones":[[0],[1]]}"#).unwrap();
    let o = toric(&["validate", "--fan", path_str(&f)]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["valid"], false);
}

#[test]
fn thomsen_of_p2() {
    let v = stdout_json(&toric(&["thomsen", "--fan", path_str(&data("p2.json"))]));
    assert_eq!(v["count"], 3);
}

#[test]
fn restrict_and_pushforward() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("c.json");
    assert!(toric(&["resolve", "--fan", path_str(&data("p2.json")), "--out", path_str(&c)]).status.success());
    let v = stdout_json(&toric(&["restrict", "--complex", path_str(&c), "--cone", "0,2"]));
    assert_eq!(v["koszul"], true);
    assert_eq!(v["reduced_ranks"], serde_json::json!([[0, 1], [1, 2], [2, 1]]));
    let o = toric(&["restrict", "--complex", path_str(&c), "--cone", "0"]);
    assert_eq!(o.status.code(), Some(2));

    assert!(toric(&["resolve", "--fan", path_str(&data("a1.json")), "--out", path_str(&c)]).status.success());
    let v = stdout_json(&toric(&["pushforward", "--complex", path_str(&c), "--morphism", path_str(&data("a1_to_orbifold_line.json"))]));
    let comps = v["components"].as_array().unwrap();
    assert_eq!(comps.len(), 1);
    assert_eq!(comps[0]["ranks"], serde_json::json!([[0, 2], [1, 2]]));
}

#[test]
fn genreport_on_the_double_blow_up_class() {
    let fan = data("p2_blown_up_twice.json");
    let o = toric(&["genreport", "--fan", path_str(&fan), "--divisor", "-1,1,-1", "--basis", "0,1,3"]);
    let v = stdout_json(&o);
    assert_eq!(v["obstructions"], serde_json::json!([[0, 4], [2, 3]]));
    assert_eq!(v["unobstructed"], false);
}
