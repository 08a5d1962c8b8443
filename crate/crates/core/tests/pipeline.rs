//! Stage orchestration, artifact layout and reproducibility.

use std::fs;
use std::path::Path;

use qgaa::adversarial::TrainRecord;
use qgaa::hamiltonian::MoleculeDataset;
use qgaa::pipeline::{
    export_artifact, read_metrics, recompute_metrics, run_experiment, ExperimentConfig, MetricRow, Problem, Stage,
};
use serde_json::{json, Value};

const H2: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/h2_sto3g_jw_4q.ham");

/// Entangled demo on a 3 × 4 grid with a short game.
fn entangled(stages: &[&str], seed: u64) -> Value {
    json!({
        "id": "small",
        "seed": seed,
        "stages": stages,
        "experiment": {
            "kind": "entangled",
            "grid": { "k0_center_pi": 0.5, "k0_halfwidth_pi": 0.06, "k0_count": 3, "k1_count": 4, "min_entropy": 0.97 }
        },
        "qae": {
            "n_qubits": 2,
            "latent_qubits": 1,
            "encoder": { "family": "entangled_qae", "n_qubits": 2, "depth": 1 },
            "decoder": { "family": "entangled_qae", "n_qubits": 2, "depth": 1 },
            "optimizer": { "kind": "cobyla", "rho_begin": 0.5, "rho_end": 1e-6, "budget": 2000 }
        },
        "qgan": {
            "generator": { "family": "entangled_generator", "n_qubits": 1, "depth": 1 },
            "discriminator": { "family": "entangled_discriminator", "n_qubits": 2, "depth": 1 },
            "label_encoding": "none",
            "init": { "kind": "normal", "generator_mean": [1.5707963267948966, 0.0], "std": 1.0 },
            "training": { "max_iter": 40, "generator": { "lr": 0.1 }, "discriminator": { "lr": 0.01 } }
        }
    })
}

/// H2 with a short autoencoder and game on a reduced grid.
fn h2(stages: &[&str]) -> Value {
    let agent = json!({
        "generator": { "family": "generator_meta", "n_qubits": 1, "depth": 1 },
        "discriminator": { "family": "compact_discriminator", "n_qubits": 2, "depth": 1 },
        "label_encoding": "affine",
        "init": { "kind": "uniform" },
        "training": { "max_iter": 15, "generator": { "lr": 0.1 }, "discriminator": { "lr": 0.01 } }
    });
    let mut baseline = agent.clone();
    baseline["generator"] = json!({ "family": "generator_meta", "n_qubits": 4, "depth": 1 });
    baseline["discriminator"] = json!({ "family": "circular_entangling", "n_qubits": 5, "depth": 1 });
    json!({
        "id": "h2_small",
        "seed": 3,
        "stages": stages,
        "experiment": { "kind": "molecule", "dataset": H2, "train_r": [0.3, 0.9, 1.5, 2.1], "test_r": [0.3, 0.6, 1.2, 1.5, 9.9] },
        "qae": {
            "n_qubits": 4,
            "latent_qubits": 1,
            "encoder": { "family": "linear_entangling", "n_qubits": 4, "depth": 1 },
            "decoder": { "family": "linear_entangling", "n_qubits": 4, "depth": 1 },
            "optimizer": { "kind": "cobyla", "rho_begin": 0.5, "rho_end": 1e-4, "budget": 300 }
        },
        "qgan": agent,
        "baseline": baseline
    })
}

fn config(v: &Value) -> ExperimentConfig {
    ExperimentConfig::from_json(&v.to_string()).unwrap()
}

fn header(path: &Path) -> Vec<String> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.headers().unwrap().iter().map(str::to_owned).collect()
}

fn stage_rows<'a>(rows: &'a [MetricRow], stage: &str) -> Vec<&'a MetricRow> {
    rows.iter().filter(|r| r.stage == stage).collect()
}

#[test]
fn empty_run_writes_only_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let art = run_experiment(&config(&entangled(&[], 1))).unwrap();
    assert!(art.params.is_empty() && art.metrics.is_empty());
    export_artifact(&art, dir.path()).unwrap();
    let names: Vec<String> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    assert_eq!(names, vec!["config.json".to_string()]);
}

#[test]
fn exported_files_follow_the_schema() {
    let dir = tempfile::tempdir().unwrap();
    let art = run_experiment(&config(&entangled(&["qae", "qgan", "generate"], 1))).unwrap();
    export_artifact(&art, dir.path()).unwrap();
    let d = dir.path();
    for f in ["config.json", "params.json", "metrics.csv", "series/qae.csv", "series/qgan.csv"] {
        assert!(d.join(f).is_file(), "missing {f}");
    }
    assert_eq!(header(&d.join("series/qgan.csv")), TrainRecord::HEADER.to_vec());
    assert_eq!(header(&d.join("series/qae.csv")), ["restart", "iter", "loss", "best_loss"]);
    assert_eq!(
        header(&d.join("metrics.csv")),
        ["stage", "label0", "label1", "train", "fidelity", "purity", "energy_exact", "energy_model", "abs_delta_e"]
    );
    for table in ["latent_real", "latent_fake", "trajectory"] {
        assert_eq!(header(&d.join(format!("bloch/{table}.csv"))), ["iter", "label0", "label1", "x", "y", "z"]);
    }
    let qgan_rows = csv::Reader::from_path(d.join("series/qgan.csv")).unwrap().records().count();
    assert_eq!(qgan_rows, art.qgan.as_ref().unwrap().record.len());
    assert_eq!(read_metrics(d.join("metrics.csv")).unwrap(), art.metrics);
}

#[test]
fn same_seed_gives_identical_files() {
    let run = |seed| {
        let dir = tempfile::tempdir().unwrap();
        export_artifact(&run_experiment(&config(&entangled(&["qae", "qgan", "generate"], seed))).unwrap(), dir.path()).unwrap();
        (fs::read(dir.path().join("metrics.csv")).unwrap(), fs::read(dir.path().join("series/qgan.csv")).unwrap())
    };
    let a = run(11);
    assert_eq!(a, run(11));
    assert_ne!(a, run(12));
}

/// Generation resumed from stored parameters matches the in-process run.
#[test]
fn stages_communicate_only_through_stored_params() {
    let dir = tempfile::tempdir().unwrap();
    let full = run_experiment(&config(&entangled(&["qae", "qgan", "generate"], 5))).unwrap();
    export_artifact(&full, dir.path()).unwrap();

    let mut v = entangled(&["generate"], 999);
    v["resume_from"] = json!(dir.path());
    let resumed = run_experiment(&config(&v)).unwrap();
    assert!(resumed.qgan.is_none() && resumed.qae_series.is_empty());
    assert_eq!(resumed.params, full.params);
    let (a, b) = (stage_rows(&full.metrics, "generate"), stage_rows(&resumed.metrics, "generate"));
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert_eq!((x.label0, x.label1), (y.label0, y.label1));
        assert!((x.fidelity - y.fidelity).abs() < 1e-12);
    }
}

#[test]
fn stored_run_recomputes_its_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let art = run_experiment(&config(&h2(&["qae", "qgan", "generate"]))).unwrap();
    export_artifact(&art, dir.path()).unwrap();
    let again = recompute_metrics(dir.path()).unwrap();
    let stored = read_metrics(dir.path().join("metrics.csv")).unwrap();
    assert_eq!(again.len(), stored.len());
    for (x, y) in again.iter().zip(&stored) {
        assert_eq!((&x.stage, x.label0, x.train), (&y.stage, y.label0, y.train));
        assert!((x.fidelity - y.fidelity).abs() < 1e-9);
        assert!((x.energy_model.unwrap() - y.energy_model.unwrap()).abs() < 1e-9);
    }
}

#[test]
fn generation_covers_labels_outside_training() {
    let art = run_experiment(&config(&entangled(&["qae", "qgan", "generate"], 2))).unwrap();
    let gen = stage_rows(&art.metrics, "generate");
    let train: Vec<_> = gen.iter().filter(|r| r.train).map(|r| (r.label0, r.label1)).collect();
    let held_out: Vec<_> = gen.iter().filter(|r| !r.train).collect();
    assert_eq!(train.len(), 12);
    assert_eq!(held_out.len(), 12);
    assert!(held_out.iter().all(|r| !train.contains(&(r.label0, r.label1))));
    // autoencoder rows cover the training grid only
    assert!(stage_rows(&art.metrics, "qae").iter().all(|r| r.train));
}

#[test]
fn molecule_grid_skips_missing_test_points() {
    let ds = MoleculeDataset::load(H2).unwrap();
    let p = Problem::molecule(&ds, &[0.3, 1.5], Some(&[0.3, 0.6, 9.9])).unwrap();
    let labels: Vec<f64> = p.eval.iter().map(|e| e.label[0]).collect();
    assert_eq!(labels, vec![0.3, 0.6]);
    assert_eq!(p.eval.iter().map(|e| e.train).collect::<Vec<_>>(), vec![true, false]);
    assert!(Problem::molecule(&ds, &[0.33], None).is_err());
}

#[test]
fn baseline_reports_energies_on_the_full_register() {
    let art = run_experiment(&config(&h2(&["baseline"]))).unwrap();
    assert!(art.params.qae.is_none() && art.params.baseline_generator.is_some());
    let rows = stage_rows(&art.metrics, "baseline");
    assert_eq!(rows.len(), 4);
    for r in rows {
        assert!((r.purity - 1.0).abs() < 1e-9);
        let (e, m) = (r.energy_exact.unwrap(), r.energy_model.unwrap());
        assert!(m >= e - 1e-9, "variational bound broken at r {}", r.label0);
        assert!((r.abs_delta_e.unwrap() - (m - e).abs()).abs() < 1e-12);
    }
    let game = art.baseline.unwrap();
    assert_eq!(game.restart_scores.len(), 1);
}

#[test]
fn invalid_configs_are_rejected() {
    let bad = |v: Value| ExperimentConfig::from_json(&v.to_string()).is_err();
    assert!(bad(entangled(&["qgan"], 0)));
    assert!(bad(entangled(&["qae", "generate"], 0)));
    assert!(bad(entangled(&["baseline"], 0)));
    let mut v = entangled(&["qae"], 0);
    v.as_object_mut().unwrap().remove("qae");
    assert!(bad(v));
    let mut v = entangled(&["qae", "qgan"], 0);
    v["qgan"]["training"]["generator"]["lr"] = json!(-1.0);
    assert!(bad(v));
    let mut v = h2(&["qae"]);
    v["experiment"]["train_r"] = json!([]);
    assert!(bad(v));
    assert!(ExperimentConfig::from_json("{ not json").is_err());
    // a missing resume directory surfaces at run time
    let mut v = entangled(&["generate"], 0);
    v["resume_from"] = json!("/nonexistent/run");
    assert!(run_experiment(&config(&v)).is_err());
}

#[test]
fn stage_order_is_fixed() {
    assert!(Stage::Qae < Stage::Qgan && Stage::Qgan < Stage::Generate && Stage::Generate < Stage::Baseline);
    let mut v = entangled(&["generate", "qgan", "qae"], 4);
    let a = run_experiment(&config(&v)).unwrap();
    v["stages"] = json!(["qae", "qgan", "generate"]);
    assert_eq!(a.metrics, run_experiment(&config(&v)).unwrap().metrics);
}
