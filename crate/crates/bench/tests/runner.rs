use daplsr::{Dataset, Method};
use daplsr_bench::{emit, run, synth_dataset, ExperimentConfig, SynthSpec};

fn config(json: &str) -> ExperimentConfig {
    ExperimentConfig::from_json(json).unwrap()
}

/// Fraction of rows whose nearest class centroid is their own class.
fn nearest_centroid_accuracy(ds: &Dataset) -> f64 {
    let x = ds.features();
    let q = ds.num_classes();
    let centroids: Vec<Vec<f64>> = (0..q)
        .map(|c| {
            let idx = ds.class_indices(c);
            (0..x.cols())
                .map(|j| idx.iter().map(|&i| x[(i, j)]).sum::<f64>() / idx.len() as f64)
                .collect()
        })
        .collect();
    let hits = (0..ds.len())
        .filter(|&i| {
            let d2 = |c: &Vec<f64>| x.row(i).iter().zip(c).map(|(a, b)| (a - b).powi(2)).sum::<f64>();
            let best = (0..q).min_by(|&a, &b| d2(&centroids[a]).total_cmp(&d2(&centroids[b]))).unwrap();
            best == ds.labels()[i]
        })
        .count();
    hits as f64 / ds.len() as f64
}

#[test]
fn single_row_table() {
    let table = run(&config(
        r#"{"dataset": {"format": "synthetic", "counts": [30, 20, 20], "dims": 4, "spread": 0.5},
            "methods": ["simpls"], "components": [1], "repeats": 1}"#,
    ))
    .unwrap();
    assert_eq!(table.rows.len(), 1);
    let e = table.rows[0].error.mean;
    assert!((0.0..=1.0).contains(&e));
    assert_eq!(emit::to_csv(&table).lines().count(), 2);
}

#[test]
fn separable_blobs_give_zero_error() {
    let spec = SynthSpec {
        counts: vec![40, 40],
        dims: 3,
        spread: 0.01,
        seed: Some(4),
    };
    let ds = synth_dataset(&spec, 4).unwrap();
    assert_eq!(nearest_centroid_accuracy(&ds), 1.0);
    let table = run(&config(
        r#"{"dataset": {"format": "synthetic", "counts": [40, 40], "dims": 3, "spread": 0.01, "seed": 4},
            "augment": {"percent": 0}, "methods": ["nipals", "simpls", "daplsr"], "components": [2],
            "repeats": 3}"#,
    ))
    .unwrap();
    for row in &table.rows {
        assert_eq!(row.error.mean, 0.0, "{}", row.method);
    }
}

#[test]
fn error_rate_is_one_minus_accuracy() {
    let table = run(&config(
        r#"{"dataset": {"format": "synthetic", "counts": [60, 15, 15], "dims": 5, "spread": 0.9},
            "augment": {"percent": 200, "k": 3}, "methods": ["nipals", "daplsr"], "components": [1, 2],
            "repeats": 3, "base_seed": 7}"#,
    ))
    .unwrap();
    assert_eq!(table.rows.len(), 4);
    for row in &table.rows {
        assert_eq!(row.runs.len(), 3);
        for r in &row.runs {
            assert_eq!(r.error_rate, 1.0 - r.accuracy);
        }
        let seeds: Vec<u64> = row.runs.iter().map(|r| r.seed).collect();
        assert_eq!(seeds, vec![7, 8, 9]);
    }
}

#[test]
fn dropping_a_method_leaves_other_rows_unchanged() {
    let body = r#""dataset": {"format": "synthetic", "counts": [50, 12, 12], "dims": 6, "spread": 0.8},
                  "augment": {"percent": 300, "k": 4}, "components": [1, 2], "repeats": 2"#;
    let all = run(&config(&format!(r#"{{{body}, "methods": ["nipals", "simpls", "daplsr"]}}"#))).unwrap();
    let some = run(&config(&format!(r#"{{{body}, "methods": ["daplsr", "nipals"]}}"#))).unwrap();
    for row in &some.rows {
        assert_eq!(Some(row), all.get(row.method, row.components));
    }
    assert!(some.get(Method::Simpls, 1).is_none());
}

#[test]
fn failure_reports_context_and_partial_results() {
    // 4 features cannot support 6 jointly extracted components
    let cfg = config(
        r#"{"dataset": {"format": "synthetic", "counts": [20, 20], "dims": 4, "spread": 0.5},
            "augment": {"percent": 0}, "methods": ["simpls", "daplsr"], "components": [2, 6], "repeats": 1}"#,
    );
    let failure = run(&cfg).unwrap_err();
    let msg = failure.error.to_string();
    assert!(msg.contains("daplsr") && msg.contains("6 components"), "{msg}");
    assert!(failure.partial.get(Method::Simpls, 2).is_some());
    assert!(failure.partial.get(Method::Daplsr, 6).is_none());
}

#[test]
fn csv_dataset_source() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("data.csv");
    let spec = SynthSpec {
        counts: vec![30, 30],
        dims: 3,
        spread: 0.3,
        seed: None,
    };
    std::fs::write(&path, synth_dataset(&spec, 1).unwrap().to_csv_string(true)).unwrap();
    let cfg = config(&format!(
        r#"{{"dataset": {{"format": "csv", "path": {:?}, "has_header": true}},
            "methods": ["simpls"], "components": [1, 2], "repeats": 2}}"#,
        path
    ));
    let table = run(&cfg).unwrap();
    assert_eq!(table.rows.len(), 2);

    let missing = config(r#"{"dataset": {"format": "csv", "path": "/nonexistent/x.csv"}, "methods": ["simpls"], "components": [1]}"#);
    assert!(run(&missing).is_err());
}
