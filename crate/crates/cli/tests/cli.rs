use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use lebesgue_core::io::{read_grid_csv, read_json, read_samples_csv};
use lebesgue_core::lebesgue2d::ZeroCurve;
use lebesgue_core::nodes1d::NodeSet1D;
use lebesgue_core::nodes2d::NodeSet2D;
use serde_json::Value;

fn lebesgue(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lebesgue")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn maxset_of_first_kind_nodes_is_the_endpoints() {
    let v = json_of(&lebesgue(&["maxset", "--family", "chebyshev1", "--degree", "10"]));
    assert_eq!(v["points"], serde_json::json!([-1.0, 1.0]));
    assert!(v["constant"].as_f64().unwrap() > 2.0);
}

#[test]
fn convexity_first_row() {
    let v = json_of(&lebesgue(&["convexity", "--family", "chebyshev2", "--m", "1"]));
    assert_eq!(v["min_degree"], 8);
    assert_eq!(v["decisions"].as_array().unwrap().len(), 1);
}

#[test]
fn padua_degree_four_counts() {
    let v = json_of(&lebesgue(&["maxima2d", "--family", "padua", "--degree", "4"]));
    assert_eq!((v["interior"].as_u64(), v["total"].as_u64()), (Some(13), Some(27)));
    assert_eq!(v["stable"], true);
    assert_eq!(v["bounds_check"]["total_ok"], true);
}

#[test]
fn files_are_deterministic_and_readable() {
    let dir = tempfile::tempdir().unwrap();
    let p = |s: &str| dir.path().join(s);
    let run = |args: &[&str], file: &Path| {
        let mut a: Vec<&str> = args.to_vec();
        let f = file.to_str().unwrap();
        a.extend(["--output", f]);
        let out = lebesgue(&a);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    };

    let args = ["nodes2d", "--family", "mp", "--degree", "5"];
    run(&args, &p("a.json"));
    run(&args, &p("b.json"));
    assert_eq!(fs::read(p("a.json")).unwrap(), fs::read(p("b.json")).unwrap());
    let meta: Value = serde_json::from_str(&fs::read_to_string(p("a.json.meta.json")).unwrap()).unwrap();
    assert!(meta["generated"].as_u64().is_some());
    let ns: NodeSet2D = read_json(&p("a.json")).unwrap();
    assert_eq!(ns.len(), 21);

    run(&["nodes", "--family", "lobatto", "--degree", "6"], &p("n.json"));
    let ns: NodeSet1D = read_json(&p("n.json")).unwrap();
    assert_eq!(ns.nodes()[0], -1.0);

    run(&["eval", "--family", "chebyshev1", "--degree", "5", "--grid-size", "41"], &p("e.csv"));
    let s = read_samples_csv(fs::File::open(p("e.csv")).unwrap()).unwrap();
    assert_eq!(s.len(), 41);
    assert!(s.iter().all(|&(_, l)| l >= 1.0 - 1e-12));

    run(&["surface2d", "--family", "padua", "--degree", "3", "--res", "10"], &p("s.csv"));
    let g = read_grid_csv(fs::File::open(p("s.csv")).unwrap()).unwrap();
    assert_eq!(g.len(), 121);

    run(&["curves", "--family", "padua", "--degree", "3", "--res", "40", "--node", "2"], &p("c.json"));
    let c: Vec<ZeroCurve> = read_json(&p("c.json")).unwrap();
    assert_eq!(c.len(), 1);
    assert!(c[0].vertex_count() > 0);
}

#[test]
fn extended_precision_nodes_are_strings() {
    let v = json_of(&lebesgue(&["nodes", "--family", "chebyshev1", "--degree", "4", "--precision", "120"]));
    let first = v["nodes"][0].as_str().unwrap();
    let digits = first.split('e').next().unwrap().chars().filter(char::is_ascii_digit).count();
    assert_eq!(digits, 40);
}

#[test]
fn custom_and_random_nodes() {
    let v = json_of(&lebesgue(&["maxset", "--family", "custom", "--nodes", "-1,-0.4,0,0.4,1"]));
    assert_eq!(v["kind"], "discrete");
    let a = json_of(&lebesgue(&["nodes", "--family", "random", "--degree", "5", "--seed", "3"]));
    let b = json_of(&lebesgue(&["nodes", "--family", "random", "--degree", "5", "--seed", "3"]));
    assert_eq!(a, b);
}

#[test]
fn check_theorem_at_threshold() {
    let v = json_of(&lebesgue(&["check-theorem", "--family", "lobatto", "--degree", "12", "--at-threshold"]));
    assert_eq!(v["report"]["endpoint_excluded_left"], true);
    assert_eq!(v["report"]["endpoint_excluded_right"], true);
    let v = json_of(&lebesgue(&["check-theorem", "--family", "chebyshev1", "--degree", "12"]));
    assert_eq!(v["report"]["endpoint_excluded_left"], false);
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["nodes", "--family", "bogus", "--degree", "3"][..],
        &["convexity", "--family", "chebyshev2", "--m", "1", "--n-max", "700"],
        &["maxset", "--family", "chebyshev1", "--degree", "5", "--format", "csv"],
        &["nodes", "--family", "lobatto", "--degree", "0"],
        &["frobnicate"],
        &["maxima2d", "--family", "padua"],
    ] {
        assert_eq!(lebesgue(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn computation_errors_exit_with_one() {
    let out = lebesgue(&["convexity", "--family", "chebyshev2", "--m", "2", "--n-max", "10"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn long_rows_are_gated() {
    let out = lebesgue(&["reproduce", "--table", "2"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[2]["skipped"], true);
    assert!(rows[2]["computed"].is_null());
    assert_eq!(v["skipped"], 1);
}
