use std::path::Path;
use std::process::Command;

use serde_json::Value;
use skewtent_cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let full = std::iter::once("skewtent").chain(args.iter().copied());
    let code = run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn stdout_of(args: &[&str]) -> String {
    let (code, out, err) = call(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    out
}

/// Parses CSV rows of numbers, skipping the header.
fn numeric_rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines().skip(1).map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect()
}

#[test]
fn classify_examples() {
    let out = stdout_of(&["classify", "--k", "3.5", "--r", "0.5"]);
    assert_eq!(out.lines().next().unwrap(), "Window m=2 sub=R1 (attracting period-3 orbit)");

    let rec: Value = serde_json::from_str(&stdout_of(&["classify", "--k", "0.5", "--r", "9", "--json"])).unwrap();
    assert_eq!(rec["region"], serde_json::json!({ "tag": "FixedPoint" }));
    assert!((rec["x_star"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);

    let (code, out, _) = call(&["classify", "--k", "1", "--r", "1"]);
    assert_eq!(code, 2);
    assert!(out.starts_with("Boundary k=1"));
}

#[test]
fn attractor_examples() {
    let first = |k: &str, r: &str| stdout_of(&["attractor", "--k", k, "--r", r]).lines().next().unwrap().to_string();
    assert_eq!(first("1.5", "1"), "Bands p=1: [-0.5,0.25] [0.5,1]; unstable fixed point 0.4");
    assert_eq!(first("3", "0.25"), "Cycle period 2: -1.142857, 0.714286; multiplier -0.75");
    assert_eq!(first("3", "2"), "NoneEscape; Cantor repeller on [-1, 0.6667]");
    let (code, _, err) = call(&["attractor", "--k", "1", "--r", "0.5"]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn orbit_rows() {
    let out = stdout_of(&["orbit", "--k", "1.5", "--r", "1", "--x0", "1", "--n", "2"]);
    assert_eq!(out, "step,x,branch\n0,1,\n1,-0.5,R\n2,0.5,L\n");
    let out = stdout_of(&["orbit", "--k", "3", "--r", "2", "--x0", "5", "--n", "100"]);
    assert!(out.trim_end().ends_with(",ESC"));
}

#[test]
fn verify_examples() {
    let (code, out, _) = call(&["verify", "--k", "3.5", "--r", "0.5", "--suite", "basin", "--samples", "10000", "--seed", "7"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("basin: PASS"));
    for (k, r) in [("2", "0.8"), ("3", "0.25")] {
        let (code, out, _) = call(&["verify", "--k", k, "--r", r, "--suite", "lyapunov", "--iterations", "100000"]);
        assert_eq!(code, 0, "{out}");
    }
    let (code, _, _) = call(&["verify", "--k", "3", "--r", "2", "--suite", "lyapunov"]);
    assert_eq!(code, 2);
    for suite in ["invariance", "covering"] {
        let (code, out, _) = call(&["verify", "--k", "4.3", "--r", "0.5", "--suite", suite]);
        assert_eq!(code, 0, "{suite}: {out}");
    }
}

#[test]
fn boundaries_examples() {
    let rows = numeric_rows(&stdout_of(&["boundaries", "--curve", "rho", "--p", "0", "--samples", "3"]));
    assert!(rows.iter().any(|r| r[0] == 2.0 && (r[1] - 0.666667).abs() < 1e-6));

    let rows = numeric_rows(&stdout_of(&["boundaries", "--curve", "Lm", "--m", "2"]));
    assert!(rows.iter().any(|r| r[0] == 0.5 && (r[1] - 4.44949).abs() < 1e-5));

    let rows = numeric_rows(&stdout_of(&["boundaries", "--curve", "alpha", "--m", "2..5"]));
    assert_eq!(rows.len(), 4);
    assert!(rows.windows(2).all(|w| w[1][1] < w[0][1]));
    assert!(rows.iter().all(|r| 0.5 < r[1] && r[1] < 1.0));

    let (code, _, _) = call(&["boundaries", "--curve", "nope"]);
    assert_eq!(code, 1);
    let (code, _, _) = call(&["boundaries", "--curve", "Lm"]);
    assert_eq!(code, 1);
}

#[test]
fn boundaries_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("kp.csv");
    let (code, out, _) = call(&["boundaries", "--curve", "Kp", "--p", "2..4", "--out", path.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (0, ""));
    let rows = numeric_rows(&std::fs::read_to_string(path).unwrap());
    assert_eq!(rows.iter().map(|r| r[0]).collect::<Vec<_>>(), vec![2.0, 3.0, 4.0]);
}

#[test]
fn json_records_round_trip_byte_identical() {
    let records = [
        vec!["classify", "--k", "4.1", "--r", "0.5", "--json"],
        vec!["classify", "--k", "1.2", "--r", "0.9", "--json"],
        vec!["attractor", "--k", "4.1", "--r", "0.5", "--json"],
        vec!["attractor", "--k", "1.2", "--r", "0.9", "--json"],
        vec!["verify", "--k", "5", "--r", "0.5", "--suite", "basin", "--samples", "200", "--json"],
    ];
    for args in records {
        let text = stdout_of(&args);
        let value: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string(&value).unwrap(), text.trim_end(), "{args:?}");
    }
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["classify", "--k", "x", "--r", "1"],
        vec!["classify", "--k", "-1", "--r", "1"],
        vec!["classify", "--k", "2", "--r", "0.5", "--tau", "-1"],
        vec!["frobnicate"],
        vec!["raster", "--kmin", "2", "--kmax", "1", "--rmin", "0", "--rmax", "1", "--width", "2", "--height", "2", "--out", "x"],
        vec!["raster", "--kmin", "0", "--kmax", "1", "--rmin", "0", "--rmax", "1", "--width", "0", "--height", "2", "--out", "x"],
    ] {
        let (code, _, err) = call(&args);
        assert_eq!(code, 1, "{args:?}");
        assert!(!err.is_empty());
    }
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("raster"));
}

fn raster_args<'a>(out: &'a str, format: &'a str) -> Vec<&'a str> {
    vec![
        "raster", "--kmin", "0", "--kmax", "8", "--rmin", "0", "--rmax", "3", "--width", "64", "--height", "48", "--out", out,
        "--format", format,
    ]
}

#[test]
fn raster_is_deterministic_with_legend() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.ppm");
    let b = dir.path().join("b.ppm");
    stdout_of(&raster_args(a.to_str().unwrap(), "ppm"));
    stdout_of(&raster_args(b.to_str().unwrap(), "ppm"));
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    assert!(bytes.starts_with(b"P6\n64 48\n255\n"));
    assert_eq!(bytes.len(), "P6\n64 48\n255\n".len() + 64 * 48 * 3);
    let legend = std::fs::read_to_string(dir.path().join("a.ppm.legend.txt")).unwrap();
    assert!(legend.starts_with("skewtent raster palette v1\n"));

    let csv = dir.path().join("a.csv");
    stdout_of(&raster_args(csv.to_str().unwrap(), "csv"));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some("k,r,tag,m_or_p,sub"));
    assert_eq!(text.lines().count(), 1 + 64 * 48);
}

#[test]
fn raster_to_unwritable_path_fails() {
    let (code, _, err) = call(&raster_args("/nonexistent-dir/x.ppm", "ppm"));
    assert_eq!(code, 1);
    assert!(err.contains("cannot write"));
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_skewtent"))
}

#[test]
fn binary_exit_codes() {
    let ok = binary().args(["classify", "--k", "3.5", "--r", "0.5"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).starts_with("Window m=2 sub=R1"));
    let boundary = binary().args(["classify", "--k", "1", "--r", "1"]).output().unwrap();
    assert_eq!(boundary.status.code(), Some(2));
    let usage = binary().args(["classify", "--k", "1"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(1));
    let version = binary().arg("--version").output().unwrap();
    assert_eq!(version.status.code(), Some(0));
}

#[test]
fn binary_raster_ignores_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let render = |threads: &str, name: &str| {
        let path = dir.path().join(name);
        let status = binary()
            .env("SKEWTENT_THREADS", threads)
            .args(raster_args(path.to_str().unwrap(), "ppm"))
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(path).unwrap()
    };
    assert_eq!(render("1", "one.ppm"), render("3", "three.ppm"));
    assert!(Path::new(&dir.path().join("three.ppm.legend.txt")).exists());
}

#[test]
fn verify_failure_exits_three() {
    // multiplier 1 - 2.5e-6: orbits creep towards the cycle far slower than the horizon allows
    let (code, out, _) = call(&["verify", "--k", "3.99999", "--r", "0.5", "--suite", "basin", "--samples", "200"]);
    assert_eq!(code, 3, "{out}");
    assert!(out.starts_with("basin: FAIL"));
}
