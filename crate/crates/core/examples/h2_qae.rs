//! Autoencode H2 ground states onto one qubit and check the energies survive.
//!
//! `cargo run --release --example h2_qae`

use qgaa::pipeline::{run_experiment, ExperimentConfig, Stage};

fn main() -> qgaa::Result<()> {
    let mut cfg = ExperimentConfig::load(concat!(env!("CARGO_MANIFEST_DIR"), "/configs/h2.json"))?;
    cfg.stages = vec![Stage::Qae];
    let art = run_experiment(&cfg)?;
    for row in art.metrics.iter().filter(|r| r.stage == "qae") {
        println!(
            "r {:.2} Å  F {:.6}  E {:.6} vs {:.6} Ha",
            row.label0,
            row.fidelity,
            row.energy_model.unwrap_or(f64::NAN),
            row.energy_exact.unwrap_or(f64::NAN)
        );
    }
    let s = art.summary("qae").expect("autoencoder rows");
    println!("mean F {:.6}  mean |ΔE| {:.2e} Ha", s.mean_fidelity, s.mean_abs_de.unwrap_or(f64::NAN));
    Ok(())
}
