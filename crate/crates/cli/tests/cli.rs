use std::path::Path;
use std::process::Command;

use qps_cli::io::{load_pointset, parse_pointset, save_pointset};
use qps_core::forms::{Form, PolarKind};
use qps_core::pg::ProjSpace;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn qps(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_qps"))
        .args(args)
        .env_remove("QPS_THREADS")
        .output()
        .unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn canonical_file(dir: &Path, kind: &str, m: usize, q: usize) -> String {
    let path = dir.join(format!("{kind}-{m}-{q}.qps"));
    let r = qps(&["construct", "canonical", "--kind", kind, "--m", &m.to_string(), "--q", &q.to_string(), "--out", p(&path)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    p(&path).to_string()
}

#[test]
fn canonical_parabolic_is_verified() {
    let dir = tempfile::tempdir().unwrap();
    let f = canonical_file(dir.path(), "parabolic", 4, 2);
    let r = qps(&["spectrum", "--in", &f, "--kind", "parabolic"]);
    assert_eq!(r.code, 0);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["format"], "qps-report/1");
    assert_eq!(v["verdict"], "quasi-parabolic");
    assert_eq!(v["size"], 15);
    assert_eq!(v["nucleus"]["point"], serde_json::json!([1, 0, 0, 0, 0]));
}

#[test]
fn report_keys_and_spectrum_are_fixed() {
    let dir = tempfile::tempdir().unwrap();
    let f = canonical_file(dir.path(), "hyperbolic", 3, 2);
    let r = qps(&["spectrum", "--in", &f, "--kind", "hyperbolic"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with(
        r#"{"format":"qps-report/1","space":{"m":3,"q":2},"size":9,"spectrum":[{"size":3,"count":6},{"size":5,"count":9}],"verdict":"quasi-hyperbolic","#
    ));
    let keys: Vec<String> = serde_json::from_str::<serde_json::Map<String, Value>>(&r.stdout).unwrap().keys().cloned().collect();
    assert!(keys.contains(&"hyperplane_types".to_string()) && keys.contains(&"nucleus".to_string()));
}

#[test]
fn random_set_is_rejected_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let space = ProjSpace::of(4, 2).unwrap();
    let mut pts: Vec<usize> = (0..space.num_points()).collect();
    pts.shuffle(&mut ChaCha8Rng::seed_from_u64(15));
    let s = qps_core::pg::PointSet::from_indices(space.num_points(), pts.into_iter().take(15));
    let path = dir.path().join("random.qps");
    save_pointset(&space, &s, &path).unwrap();
    let r = qps(&["spectrum", "--in", p(&path), "--kind", "parabolic"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains(r#""verdict":"not-quasi-parabolic""#));
}

#[test]
fn malformed_input_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in [
        ("magic", "QPS 2\nPG 2 2\n1 0 0\n"),
        ("dup", "QPS 1\nPG 2 3\n1 0 0\n2 0 0\n"),
        ("range", "QPS 1\nPG 2 3\n1 0 7\n"),
    ] {
        let path = dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        let r = qps(&["spectrum", "--in", p(&path), "--kind", "parabolic"]);
        assert_eq!(r.code, 3, "{name}");
        assert_eq!(r.stderr.lines().count(), 1, "{name}: {}", r.stderr);
    }
    assert_eq!(qps(&["spectrum", "--in", p(&dir.path().join("missing")), "--kind", "parabolic"]).code, 3);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(qps(&["spectrum", "--kind", "parabolic"]).code, 2);
    assert_eq!(qps(&["frobnicate"]).code, 2);
    assert_eq!(qps(&["roots", "--kind", "parabolic", "--m", "4", "--q", "3"]).code, 2);
    assert_eq!(qps(&["roots", "--kind", "conic", "--m", "4", "--q", "3"]).code, 2);
    assert_eq!(qps(&["--threads", "0", "roots", "--kind", "elliptic", "--m", "3", "--q", "3"]).code, 2);
    let dir = tempfile::tempdir().unwrap();
    let f = canonical_file(dir.path(), "parabolic", 4, 2);
    let r = qps(&["surgery", "cone-swap", "--in", &f, "--hyperplane", "1,0,0"]);
    assert_eq!(r.code, 2);
    assert_eq!(qps(&["surgery", "cone-swap", "--in", &f, "--hyperplane", "1,0,0,0,5"]).code, 2);
    assert_eq!(qps(&["--help"]).code, 0);
}

#[test]
fn roots_report_the_second_root() {
    let r = qps(&["roots", "--kind", "elliptic", "--m", "3", "--q", "3"]);
    assert_eq!(r.code, 0);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["classical"], 10);
    assert_eq!(v["other"], "4");
    assert_eq!(v["integral"], true);
    let v: Value = serde_json::from_str(&qps(&["roots", "--kind", "hermitian", "--m", "2", "--q", "9"]).stdout).unwrap();
    assert_eq!(v["other"], "13");
}

#[test]
fn files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let space = ProjSpace::of(4, 2).unwrap();
    let s = Form::canonical(PolarKind::parabolic(4, 2).unwrap(), &space).unwrap().point_set(&space);
    let path = dir.path().join("q42.qps");
    save_pointset(&space, &s, &path).unwrap();
    save_pointset(&space, &s, &path).unwrap();
    let (back_space, back) = load_pointset(&path).unwrap();
    assert_eq!((back_space.dim(), back_space.q()), (4, 2));
    assert_eq!(back, s);
    save_pointset(&space, &space.empty_set(), &path).unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "QPS 1\nPG 4 2\n");

    let (sp, t) = parse_pointset("QPS 1\nPG 2 3\n0 2 1\n").unwrap();
    assert_eq!(sp.point(t.first().unwrap()), &[0, 1, 2]);
}

#[test]
fn surgery_writes_a_verified_set() {
    let dir = tempfile::tempdir().unwrap();
    let f = canonical_file(dir.path(), "parabolic", 4, 2);
    let out = dir.path().join("pivot.qps");
    let r = qps(&["surgery", "pivot", "--in", &f, "--kind", "parabolic", "--variant", "2", "--out", p(&out)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["surgery"]["construction"], "pivot");
    let r = qps(&["spectrum", "--in", p(&out), "--kind", "parabolic"]);
    assert_eq!(r.code, 0);

    let hyp = canonical_file(dir.path(), "hyperbolic", 3, 2);
    let r = qps(&["surgery", "affine-switch", "--in", &hyp]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["size"], 5);
    assert_eq!(v["verdict"], "quasi-elliptic");
}

#[test]
fn census_breakdowns_sum_to_the_total() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("c.json");
    let csv = dir.path().join("c.csv");
    let r = qps(&["census", "nucleus-pivot", "--m", "4", "--q", "2", "--json", p(&json), "--csv", p(&csv)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let census = &v["census"];
    let sum: u64 = census["breakdown"].as_object().unwrap().values().map(|x| x.as_u64().unwrap()).sum();
    assert_eq!(sum, census["total_candidates"].as_u64().unwrap());
    assert_eq!(census["breakdown"]["hyperbolic/no-nucleus"], 270);
    let csv = std::fs::read_to_string(&csv).unwrap();
    assert!(csv.starts_with("label,count\n"));
    assert!(csv.contains("elliptic/no-nucleus,162\n"));
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let f = canonical_file(dir.path(), "parabolic", 4, 4);
    let commands: Vec<Vec<&str>> = vec![
        vec!["spectrum", "--in", &f, "--kind", "parabolic"],
        vec!["verify", "conditions", "--in", &f],
        vec!["surgery", "cone-swap", "--in", &f],
        vec!["census", "two-secants", "--m", "4", "--q", "4"],
        vec!["census", "quadrics", "--kind", "elliptic", "--m", "3", "--q", "3"],
    ];
    for c in commands {
        let one = qps(&[&["--threads", "1"][..], &c].concat());
        let eight = qps(&[&["--threads", "8"][..], &c].concat());
        assert_eq!(one.code, eight.code, "{c:?}");
        assert_eq!(one.stdout, eight.stdout, "{c:?}");
    }
}
