use std::path::Path;
use std::process::{Command, Output};

fn bench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_daplsr-bench"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, data: &Path) -> std::path::PathBuf {
    let cfg = dir.join("config.json");
    let body = format!(
        r#"{{"dataset": {{"format": "csv", "path": {data:?}}},
            "augment": {{"percent": 100, "k": 3}},
            "methods": ["simpls", "daplsr"], "components": [1, 2], "repeats": 2,
            "output_dir": {:?}}}"#,
        dir.join("out")
    );
    std::fs::write(&cfg, body).unwrap();
    cfg
}

#[test]
fn synth_run_report_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("blobs.csv");
    let out = bench(&[
        "synth", "--counts", "40,15,15", "--dims", "4", "--spread", "0.6", "--seed", "3", "--out",
        data.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(std::fs::read_to_string(&data).unwrap().lines().count(), 70);

    let cfg = write_config(dir.path(), &data);
    let out = bench(&["run", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("out/results.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);
    assert!(csv.starts_with("method,components,error_mean,error_std,accuracy,g_mean,precision,recall,f_measure\n"));

    let json = dir.path().join("out/results.json");
    let out = bench(&["report", "--input", json.to_str().unwrap(), "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), csv);
}

#[test]
fn overrides_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("blobs.csv");
    assert!(bench(&["synth", "--counts", "30,12", "--dims", "3", "--spread", "0.5", "--out", data.to_str().unwrap()])
        .status
        .success());
    let cfg = write_config(dir.path(), &data);
    let mut outputs = Vec::new();
    for (sub, seed) in [("a", "11"), ("b", "11"), ("c", "12")] {
        let target = dir.path().join(sub);
        let out = bench(&[
            "run", "--config", cfg.to_str().unwrap(), "--out", target.to_str().unwrap(), "--format", "json",
            "--seed", seed,
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        assert!(!target.join("results.csv").exists());
        outputs.push(std::fs::read(target.join("results.json")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_ne!(outputs[0], outputs[2]);
}

#[test]
fn errors_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"dataset": {"format": "csv", "path": "x.csv"}, "methods": [], "components": [1]}"#).unwrap();
    let out = bench(&["run", "--config", cfg.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("methods list is empty"));

    let out = bench(&["run", "--config", dir.path().join("missing.json").to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(!bench(&["synth", "--counts", "3", "--dims", "0", "--spread", "1"]).status.success());
}

#[test]
fn failed_run_flushes_partial_results() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(
        &cfg,
        format!(
            r#"{{"dataset": {{"format": "synthetic", "counts": [20, 20], "dims": 3, "spread": 0.5}},
                "augment": {{"percent": 0}}, "methods": ["simpls", "daplsr"], "components": [1, 5],
                "repeats": 1, "output_dir": {:?}}}"#,
            dir.path().join("out")
        ),
    )
    .unwrap();
    let out = bench(&["run", "--config", cfg.to_str().unwrap()]);
    assert!(!out.status.success());
    let partial = std::fs::read_to_string(dir.path().join("out/partial/results.csv")).unwrap();
    assert!(partial.lines().any(|l| l.starts_with("simpls,1,")));
}

#[test]
fn empty_report() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("empty.json");
    std::fs::write(&input, "{}").unwrap();
    let out = bench(&["report", "--input", input.to_str().unwrap(), "--format", "json"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "{}");
}
