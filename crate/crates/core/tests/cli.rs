//! The `qgaa` binary: verbs, exit codes and the seed override.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qgaa::hamiltonian::{ground_state, MoleculeDataset};
use serde_json::{json, Value};

const H2: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/h2_sto3g_jw_4q.ham");

fn qgaa(args: &[&str]) -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_qgaa"));
    c.args(args).env_remove("QGAA_SEED");
    c
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn small_entangled(gates: Value) -> Value {
    json!({
        "id": "cli",
        "seed": 1,
        "stages": ["qae", "qgan", "generate"],
        "experiment": {
            "kind": "entangled",
            "grid": { "k0_center_pi": 0.5, "k0_halfwidth_pi": 0.06, "k0_count": 2, "k1_count": 3, "min_entropy": 0.97 }
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
            "training": { "max_iter": 20, "generator": { "lr": 0.1 }, "discriminator": { "lr": 0.01 } }
        },
        "gates": gates
    })
}

fn write_config(dir: &Path, v: &Value) -> PathBuf {
    let p = dir.join("config.json");
    std::fs::write(&p, v.to_string()).unwrap();
    p
}

fn stored_seed(run_dir: &Path) -> u64 {
    let v: Value = serde_json::from_str(&std::fs::read_to_string(run_dir.join("config.json")).unwrap()).unwrap();
    v["seed"].as_u64().unwrap()
}

#[test]
fn ground_state_verb_prints_energies() {
    let o = qgaa(&["ham", "ground-state", "--file", H2, "--r", "0.3,0.75"]).output().unwrap();
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "r,energy");
    assert_eq!(lines.len(), 3);
    let ds = MoleculeDataset::load(H2).unwrap();
    for (line, r) in lines[1..].iter().zip([0.3, 0.75]) {
        let (rs, es) = line.split_once(',').unwrap();
        assert_eq!(rs.parse::<f64>().unwrap(), r);
        let exact = ground_state(&ds.at(r).unwrap().hamiltonian).unwrap().0;
        assert!((es.parse::<f64>().unwrap() - exact).abs() < 1e-9);
    }
}

#[test]
fn rank_verb_reports_two_for_the_h2_training_set() {
    let o = qgaa(&["rank", "--file", H2, "--r", "0.3,0.6,0.9,1.2,1.5,1.8,2.1"]).output().unwrap();
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "2");
}

#[test]
fn successful_run_exports_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &small_entangled(json!({})));
    let out = dir.path().join("run");
    let o = qgaa(&["entangled", "-c", cfg.to_str().unwrap(), "-o", out.to_str().unwrap()]).output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("generate:"));
    for f in ["params.json", "metrics.csv", "series/qgan.csv", "bloch/trajectory.csv"] {
        assert!(out.join(f).is_file(), "missing {f}");
    }
}

#[test]
fn missed_gate_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &small_entangled(json!({ "qae_min_fidelity": 1.5 })));
    let o = qgaa(&["qae", "-c", cfg.to_str().unwrap()]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("gate missed"));
}

#[test]
fn bad_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = small_entangled(json!({}));
    v.as_object_mut().unwrap().remove("qgan");
    let cfg = write_config(dir.path(), &v);
    let o = qgaa(&["generate", "-c", cfg.to_str().unwrap()]).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));

    let o = qgaa(&["qae", "-c", "/nonexistent.json"]).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    let o = qgaa(&["rank", "--file", H2, "--r", "0.31"]).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn seed_comes_from_environment_unless_given() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &small_entangled(json!({})));
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let o = qgaa(&["qae", "-c", cfg.to_str().unwrap(), "-o", a.to_str().unwrap()]).env("QGAA_SEED", "77").output().unwrap();
    assert!(o.status.success());
    assert_eq!(stored_seed(&a), 77);
    let o = qgaa(&["qae", "-c", cfg.to_str().unwrap(), "-o", b.to_str().unwrap(), "--seed", "5"])
        .env("QGAA_SEED", "77")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(stored_seed(&b), 5);
    let o = qgaa(&["qae", "-c", cfg.to_str().unwrap()]).env("QGAA_SEED", "x").output().unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn later_verbs_resume_from_a_run_directory() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &small_entangled(json!({})));
    let (q, g, x) = (dir.path().join("q"), dir.path().join("g"), dir.path().join("x"));
    let c = cfg.to_str().unwrap();
    assert!(qgaa(&["qae", "-c", c, "-o", q.to_str().unwrap()]).output().unwrap().status.success());
    assert!(qgaa(&["qgan", "-c", c, "-o", g.to_str().unwrap(), "--from", q.to_str().unwrap()]).output().unwrap().status.success());
    assert!(g.join("series/qgan.csv").is_file());
    assert!(!g.join("series/qae.csv").exists());
    let o = qgaa(&["generate", "-c", c, "-o", x.to_str().unwrap(), "--from", g.to_str().unwrap()]).output().unwrap();
    assert!(o.status.success());
    assert!(!x.join("series").exists());
    let stored: Value = serde_json::from_str(&std::fs::read_to_string(g.join("params.json")).unwrap()).unwrap();
    let resumed: Value = serde_json::from_str(&std::fs::read_to_string(x.join("params.json")).unwrap()).unwrap();
    assert_eq!(stored, resumed);
}
