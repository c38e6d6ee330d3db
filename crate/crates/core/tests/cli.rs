//! The binary end to end: reports, exit codes, emitted files.

use std::path::PathBuf;
use std::process::{Command, Output};

use covermip::exact::{exact_p, DEFAULT_P_CAP};
use covermip::instance::CoverInstance;
use serde_json::Value;

fn covermip(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_covermip")).args(args).output().expect("binary runs")
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).to_string_lossy().into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn worked_example_through_every_method() {
    for input in ["worked_p.json", "worked_mkc.json"] {
        for method in ["exact", "ptas", "fptas"] {
            let out =
                covermip(&["solve", "--input", &data(input), "--method", method, "--epsilon", "1/2", "--no-timing"]);
            assert_eq!(out.status.code(), Some(0), "{input} {method}");
            let report = json(&out);
            assert_eq!(report["method"], method);
            assert_eq!(report["value"]["num"], "2", "{input} {method}");
            assert_eq!(report["value"]["den"], "1");
            assert_eq!(report["wall_time_ms"], 0);
        }
    }
}

#[test]
fn uncertified_fptas_says_so() {
    // An item with zero cost leaves the cost spread unbounded.
    let out = covermip(&["solve", "--input", &data("worked_p.json"), "--method", "fptas", "--epsilon", "1/2"]);
    let report = json(&out);
    assert!(report["certified_ratio"].is_null());
    assert_eq!(report["warnings"].as_array().unwrap().len(), 1);
}

#[test]
fn generated_instance_solves_to_the_library_optimum() {
    let gen = covermip(&["gen", "--n", "5", "--m", "2", "--seed", "42"]);
    assert_eq!(gen.status.code(), Some(0));
    let inst = CoverInstance::from_json(std::str::from_utf8(&gen.stdout).unwrap()).unwrap();
    let want = exact_p(&inst, DEFAULT_P_CAP).unwrap().unwrap().value;
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("inst.json");
    std::fs::write(&path, &gen.stdout).unwrap();
    let out = covermip(&["solve", "--input", path.to_str().unwrap(), "--method", "exact"]);
    assert_eq!(json(&out)["solution"]["value"], want.to_string());
}

#[test]
fn check_reports_every_method() {
    let out = covermip(&["check", "--input", &data("worked_p.json"), "--epsilon", "1", "--no-timing"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["all_hold"], true);
    assert_eq!(v["reports"].as_array().unwrap().len(), 3);
}

#[test]
fn infeasible_instance_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let text = r#"{"sense":"cover","n":1,"m":1,"v":[[1]],"l":[[0]],"c":[[2]],"d":[5],"f":[1]}"#;
    std::fs::write(&path, text).unwrap();
    for method in ["exact", "ptas", "fptas"] {
        let out = covermip(&["solve", "--input", path.to_str().unwrap(), "--method", method, "--epsilon", "1"]);
        assert_eq!(out.status.code(), Some(2), "{method}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn usage_and_input_errors_exit_1() {
    let cases: Vec<Vec<String>> = vec![
        vec![
            "solve".into(),
            "--input".into(),
            data("worked_p.json"),
            "--method".into(),
            "ptas".into(),
            "--epsilon".into(),
            "0".into(),
        ],
        vec!["solve".into(), "--input".into(), data("worked_p.json"), "--method".into(), "ptas".into()],
        vec!["solve".into(), "--input".into(), data("missing.json"), "--method".into(), "exact".into()],
        vec!["solve".into(), "--input".into(), data("worked_p.json"), "--method".into(), "simplex".into()],
        vec![
            "emit".into(),
            "--kind".into(),
            "hull-y".into(),
            "--delta".into(),
            "9".into(),
            "--sigma".into(),
            "1/2".into(),
            "--nu".into(),
            "2".into(),
            "--output".into(),
            "/dev/null".into(),
        ],
        vec!["frobnicate".into()],
    ];
    for args in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = covermip(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn invalid_instance_names_the_violation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"sense":"cover","n":1,"m":1,"v":[[1]],"l":[[3]],"c":[[2]],"d":[1],"f":[1]}"#).unwrap();
    let out = covermip(&["solve", "--input", path.to_str().unwrap(), "--method", "exact"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid instance"));
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(covermip(&["--help"]).status.code(), Some(0));
    assert_eq!(covermip(&["--version"]).status.code(), Some(0));
}

#[test]
fn emit_writes_a_readable_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hull.lp");
    let out = covermip(&[
        "emit",
        "--kind",
        "hull-y",
        "--delta",
        "5/2",
        "--sigma",
        "7/10",
        "--nu",
        "3",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let golden =
        std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/hull_y_5_2_7_10_3.lp"))
            .unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), golden);
    assert!(String::from_utf8_lossy(&out.stdout).contains("4 variables, 3 constraints"));

    let out = covermip(&[
        "emit",
        "--kind",
        "approx",
        "--input",
        &data("worked_mkc.json"),
        "--epsilon",
        "1",
        "--output",
        dir.path().join("a.lp").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

fn value_of(report: &Value) -> covermip::Rational {
    format!("{}/{}", report["value"]["num"].as_str().unwrap(), report["value"]["den"].as_str().unwrap())
        .parse()
        .unwrap()
}

#[test]
fn fptas_against_exact_on_generated_rows() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..10 {
        let gen = covermip(&["gen", "--n", "6", "--m", "1", "--seed", &seed.to_string()]);
        let path = dir.path().join(format!("g{seed}.json"));
        std::fs::write(&path, &gen.stdout).unwrap();
        let p = path.to_str().unwrap();
        let exact = value_of(&json(&covermip(&["solve", "--input", p, "--method", "exact"])));
        let fptas = value_of(&json(&covermip(&["solve", "--input", p, "--method", "fptas", "--epsilon", "1/2"])));
        assert!(fptas <= covermip::Rational::new(3, 2) * exact, "seed {seed}");
    }
}

#[test]
fn check_passes_on_seeded_instances() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..20 {
        let m = if seed % 2 == 0 { "1" } else { "2" };
        let sense = if seed % 3 == 0 { "pack" } else { "cover" };
        let gen = covermip(&["gen", "--n", "5", "--m", m, "--seed", &seed.to_string(), "--sense", sense]);
        let path = dir.path().join(format!("c{seed}.json"));
        std::fs::write(&path, &gen.stdout).unwrap();
        let out = covermip(&["check", "--input", path.to_str().unwrap(), "--epsilon", "1/2", "--no-timing"]);
        assert_eq!(out.status.code(), Some(0), "seed {seed}: {}", String::from_utf8_lossy(&out.stdout));
        assert_eq!(json(&out)["all_hold"], true);
    }
}

#[test]
fn perfect_emit_stays_within_the_cubic_count() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("u.json");
    let text = r#"{"sense":"cover","n":5,"m":1,"v":[[9],[7],[5],[3],[1]],"l":[[1],[1],[1],[1],[1]],"c":[[3],[3],[3],[3],[3]],"d":[7],"f":[2,4,1,3,5]}"#;
    std::fs::write(&input, text).unwrap();
    let out = covermip(&[
        "emit",
        "--kind",
        "perfect",
        "--input",
        input.to_str().unwrap(),
        "--output",
        dir.path().join("p.lp").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let line = String::from_utf8_lossy(&out.stdout).into_owned();
    let vars: usize = line.split(": ").nth(1).unwrap().split(' ').next().unwrap().parse().unwrap();
    let u = covermip::formulation::UniformInstance {
        n: 5,
        v: vec![9, 7, 5, 3, 1],
        f: vec![2, 4, 1, 3, 5],
        ell: 1,
        cap: 3,
        d: 7,
    };
    assert_eq!(vars, covermip::formulation::PieceIndex::new(&u).variable_count(5));
    assert!(vars <= 2 * 5 + 7 * 5 * 5);
}

#[test]
fn approx_emit_on_four_items_sandwiches_the_optimum() {
    use covermip::exact::{exact_mkc, DEFAULT_MKC_CAP};
    use covermip::formulation::{build_eps_1mkc, DEFAULT_PIECE_CAP};
    use covermip::instance::MkcInstance;

    let text = r#"{"sense":"cover","eta":4,"mu":1,"fbar":[5,9,3,4],"vbar":[2],"cbar":[3],"wbar":[[2],[4],[1],[3]],"dbar":[6],"fixed":[]}"#;
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("k.json");
    std::fs::write(&input, text).unwrap();
    let lp = dir.path().join("k.lp");
    let out = covermip(&[
        "emit",
        "--kind",
        "approx",
        "--input",
        input.to_str().unwrap(),
        "--epsilon",
        "9/10",
        "--output",
        lp.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let inst = MkcInstance::from_json(text).unwrap();
    let eps = covermip::Rational::new(9, 10);
    let f = build_eps_1mkc(&inst, &eps, DEFAULT_PIECE_CAP).unwrap();
    assert_eq!(std::fs::read_to_string(&lp).unwrap(), covermip::formulation::emit_lp(&f.model).unwrap());
    let relax = covermip::lp::solve(&f.model).unwrap().objective;
    let opt = exact_mkc(&inst, DEFAULT_MKC_CAP).unwrap().unwrap().value;
    assert!(relax <= opt && opt <= (covermip::Rational::one() + eps) * relax);
}
