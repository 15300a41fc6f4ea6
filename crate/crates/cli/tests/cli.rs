use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spd-fw")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn gen(dir: &Path) -> String {
    let path = dir.join("ensemble.json");
    let path = path.to_str().unwrap().to_string();
    let out = run(&[
        "gen",
        "--dim",
        "4",
        "--count",
        "5",
        "--seed",
        "3",
        "--weights",
        "random-simplex",
        "--out",
        &path,
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn gen_writes_a_loadable_ensemble() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen(dir.path());
    let ens = spd_fw::karcher::WeightedEnsemble::load(Path::new(&path)).unwrap();
    assert_eq!((ens.dim(), ens.len()), (4, 5));
    // stdout mode prints the same document
    let out = run(&[
        "gen",
        "--dim",
        "4",
        "--count",
        "5",
        "--seed",
        "3",
        "--weights",
        "random-simplex",
    ]);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim_end(),
        std::fs::read_to_string(&path).unwrap()
    );
}

#[test]
fn mean_writes_result_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let ens = gen(dir.path());
    let out_dir = dir.path().join("mean");
    for (method, init) in [("rfw", "H"), ("efw", "mid"), ("rsd", "H"), ("richardson", "mid")] {
        let out = run(&[
            "mean",
            &ens,
            "--method",
            method,
            "--init",
            init,
            "--max-iter",
            "50",
            "--gap-tol",
            "1e-10",
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "{method}: {}", String::from_utf8_lossy(&out.stderr));
        let mean: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(out_dir.join("mean.json")).unwrap()).unwrap();
        assert_eq!(mean["method"], method);
        assert_eq!(mean["mean"]["dim"], 4);
        let csv = std::fs::read_to_string(out_dir.join("trace.csv")).unwrap();
        assert!(csv.starts_with("k,cost,fw_gap,step_size,oracle_time_s,iter_time_s"));
        assert!(out_dir.join("trace.json").is_file());
    }
}

#[test]
fn bench_runs_from_config_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bench.json");
    std::fs::write(&config, r#"{"dim": 5, "count": 4, "max_iter": 20, "seed": 2}"#).unwrap();
    let out_dir = dir.path().join("bench");
    let out = run(&[
        "bench",
        "--config",
        config.to_str().unwrap(),
        "--method",
        "rfw,efw",
        "--init",
        "mid",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("method"));
    assert!(stdout.contains("rfw") && stdout.contains("efw") && !stdout.contains("richardson"));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["config"]["dim"], 5);
    assert_eq!(summary["config"]["init"], "midpoint");
    assert!(out_dir.join("rfw.csv").is_file() && out_dir.join("report.csv").is_file());
}

#[test]
fn invalid_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let ens = gen(dir.path());
    assert_eq!(code(&run(&["mean", &ens, "--method", "newton"])), 2);
    assert_eq!(code(&run(&["mean", &ens, "--init", "G"])), 2);
    assert_eq!(code(&run(&["mean", &ens, "--gap-tol", "-1"])), 2);
    assert_eq!(code(&run(&["mean", "/nonexistent/ensemble.json"])), 2);
    assert_eq!(code(&run(&["gen", "--cond", "0.5"])), 2);
    assert_eq!(code(&run(&["bench", "--dim", "0"])), 2);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"dim": 2, "weights": [1.0], "matrices": [[1, 2, 2, 1]]}"#).unwrap();
    assert_eq!(code(&run(&["mean", bad.to_str().unwrap()])), 2);
    let config = dir.path().join("config.json");
    std::fs::write(&config, "{not json").unwrap();
    assert_eq!(code(&run(&["bench", "--config", config.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

#[test]
fn oracle_check_reports_pass_and_fail() {
    let dir = tempfile::tempdir().unwrap();
    let summary = dir.path().join("oracle.json");
    let out = run(&[
        "oracle-check",
        "--dim",
        "1",
        "--count",
        "5",
        "--out",
        summary.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8(out.stdout).unwrap().contains("PASS"));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(json["rows"].as_array().unwrap().len(), 2);
    // the closed-form Riemannian candidate is beaten on generic 3x3 data
    let out = run(&["oracle-check", "--dim", "3", "--count", "5"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8(out.stdout).unwrap().contains("FAIL"));
    assert_eq!(code(&run(&["oracle-check", "--dim", "5", "--count", "1"])), 2);
}
