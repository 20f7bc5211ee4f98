use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ddos-sim"))
}

#[test]
fn run_writes_csv_and_log() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("run.csv");
    let log = dir.path().join("run.log");
    let status = bin()
        .args(["run", "--preset", "sim2", "--seed", "4", "--out"])
        .arg(&csv)
        .arg("--log")
        .arg(&log)
        .output()
        .unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.starts_with("seed,correctly_identified_attackers,"));
    let log = std::fs::read_to_string(&log).unwrap();
    assert!(log.lines().any(|l| l.split('\t').nth(1) == Some("attack_detected")));
}

#[test]
fn batch_writes_rows_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("b.csv");
    let out = bin().args(["batch", "--preset", "sim2", "--runs", "3", "--out"]).arg(&csv).output().unwrap();
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 4);
    let summary = std::fs::read_to_string(dir.path().join("b.csv.summary.csv")).unwrap();
    assert!(summary.starts_with("metric,count,min,mean,max,ci95_halfwidth"));
}

#[test]
fn sweep_prints_to_stdout() {
    let out = bin().args(["sweep", "--preset", "sim2", "--ws", "5,10"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("w_s,"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn config_file_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("s.cfg");
    std::fs::write(&cfg, "preset = sim2\n# quiet run\nattack_len = 0\n").unwrap();
    let out = bin().args(["run", "--config"]).arg(&cfg).output().unwrap();
    assert!(out.status.success());
    let row = String::from_utf8(out.stdout).unwrap().lines().nth(1).unwrap().to_string();
    assert!(row.ends_with(",,"), "{row}");
}

#[test]
fn exit_codes() {
    let bad_key = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(bad_key.path(), "no_such_key = 1\n").unwrap();
    let out = bin().args(["run", "--config"]).arg(bad_key.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no_such_key"));

    let out = bin().args(["run", "--preset", "nope"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    let out = bin().args(["batch", "--preset", "sim2", "--runs", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    let out = bin().args(["run", "--preset", "sim2", "--out", "/nonexistent-dir/x.csv"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
