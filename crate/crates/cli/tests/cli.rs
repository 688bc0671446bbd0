use std::process::Command;

use porient_cli::{cmd_enumerate, cmd_montecarlo, cmd_table1, cmd_verify, ExperimentConfig, RunRecord, TableFormat};

fn porient() -> Command {
    Command::new(env!("CARGO_BIN_EXE_porient"))
}

fn config(seed: u64, workers: usize) -> ExperimentConfig {
    ExperimentConfig {
        command: "montecarlo".into(),
        d: 6,
        p: 1,
        n: 12,
        trials: 24,
        seed,
        workers,
        out: None,
        precision: 128,
    }
}

#[test]
fn table1_csv_shape() {
    let out = porient().args(["table1", "--format", "csv"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("p,d,label,note"));
    assert!(text.contains("1,8,N,equality"));
    assert!(text.contains("2,14,N*,maxcut"));
    assert!(text.contains("3,3,#,"));
    assert_eq!(text, cmd_table1(20, 4).render(TableFormat::Csv));
}

#[test]
fn verify_exit_codes() {
    let ok = porient().args(["verify", "--d", "10", "--p", "2"]).output().unwrap();
    assert!(ok.status.success(), "{}", String::from_utf8_lossy(&ok.stdout));
    let text = String::from_utf8(ok.stdout).unwrap();
    assert!(text.contains("overall: PASS"));
    assert!(text.contains("verdict: true"));
    let bad = porient().args(["verify", "--d", "8", "--p", "1"]).output().unwrap();
    assert!(!bad.status.success());
    let text = String::from_utf8(bad.stdout).unwrap();
    assert!(text.contains("condition_one                FAIL"));
    assert!(text.contains("det(-H) non-positive"));
}

#[test]
fn verify_reads_precision_from_environment() {
    let out = porient().args(["verify", "--d", "6", "--p", "1"]).env("PORIENT_PRECISION", "200").output().unwrap();
    assert!(out.status.success());
    let bad = porient().args(["verify", "--d", "6", "--p", "1"]).env("PORIENT_PRECISION", "lots").output().unwrap();
    assert!(!bad.status.success());
}

#[test]
fn verify_report_for_certified_pair() {
    let report = cmd_verify(13, 3, 128, 0).unwrap();
    assert!(report.passed());
    assert!(report.check("boundary_mvt").is_some());
}

#[test]
fn enumerate_matches_formulas() {
    let report = cmd_enumerate(3, 4, None).unwrap();
    assert!(report.passed());
    let report = cmd_enumerate(4, 4, Some(2)).unwrap();
    assert!(report.passed());
    assert!(report.rows[0].second_formula.is_none());
    assert!(cmd_enumerate(1, 2, None).is_err());
    assert!(cmd_enumerate(3, 8, Some(1)).is_err());
    let out = porient().args(["enumerate", "--d", "3", "--n", "2"]).output().unwrap();
    assert!(out.status.success());
}

#[test]
fn montecarlo_is_deterministic() {
    let a = cmd_montecarlo(&config(9, 1)).unwrap();
    let b = cmd_montecarlo(&config(9, 1)).unwrap();
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
    let parallel = cmd_montecarlo(&config(9, 4)).unwrap();
    assert_eq!(a.trials, parallel.trials);
    assert_eq!(a.summary, parallel.summary);
    assert!(a.trials.iter().all(|t| t.method == "exact"));
    assert!(cmd_montecarlo(&ExperimentConfig { n: 11, ..config(9, 1) }).is_err());
}

#[test]
fn run_record_round_trips() {
    let record = cmd_montecarlo(&config(3, 2)).unwrap();
    let json = record.to_json().unwrap();
    assert!(json.contains("\"schema\": 1"));
    let back = RunRecord::from_json(&json).unwrap();
    assert_eq!(back, record);
    assert_eq!(back.resummarize(), record.summary);
    let s = &record.summary;
    assert!(s.ci_low <= s.fraction && s.fraction <= s.ci_high);
    assert!(RunRecord::from_json(&json.replace("\"schema\": 1", "\"schema\": 2")).is_err());
}

#[test]
fn montecarlo_binary_writes_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    let path = dir.path().join("run.json");
    for _ in 0..2 {
        let status = porient()
            .args(["montecarlo", "--d", "5", "--p", "2", "--n", "10", "--trials", "10", "--seed", "42"])
            .arg("--out")
            .arg(&path)
            .status()
            .unwrap();
        assert!(status.success());
        outputs.push(std::fs::read(&path).unwrap());
        let csv = std::fs::read_to_string(path.with_extension("csv")).unwrap();
        assert!(csv.starts_with("d,p,n,trials,found"));
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn maxbis_reports_and_rejects() {
    let dir = tempfile::tempdir().unwrap();
    let k4 = dir.path().join("k4.txt");
    std::fs::write(&k4, "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n").unwrap();
    let out = porient().args(["maxbis", "--p", "1", "--graph"]).arg(&k4).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("max_bisection: 4"));
    assert!(text.contains("threshold: 2"));
    assert!(text.contains("obstruction: false"));

    let c4 = dir.path().join("c4.txt");
    std::fs::write(&c4, "4 4\n0 1\n1 2\n2 3\n3 0\n").unwrap();
    let out = porient().args(["maxbis", "--p", "1", "--graph"]).arg(&c4).output().unwrap();
    assert!(String::from_utf8(out.stdout).unwrap().contains("threshold: 0"));

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "4 2\n0 1\n1 x\n").unwrap();
    let out = porient().args(["maxbis", "--p", "1", "--graph"]).arg(&bad).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 3"));
}
