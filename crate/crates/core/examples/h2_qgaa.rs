//! H2 dissociation curve from the latent game, next to the full-register
//! baseline trained with the same seed and iteration budget.
//!
//! `cargo run --release --example h2_qgaa [seed]`

use qgaa::pipeline::{run_experiment, ExperimentConfig, Stage};

fn main() -> qgaa::Result<()> {
    let mut cfg = ExperimentConfig::load(concat!(env!("CARGO_MANIFEST_DIR"), "/configs/h2.json"))?;
    cfg.stages = vec![Stage::Qae, Stage::Qgan, Stage::Generate, Stage::Baseline];
    if let Some(seed) = std::env::args().nth(1).and_then(|s| s.parse().ok()) {
        cfg.seed = seed;
    }
    let art = run_experiment(&cfg)?;
    let rows = |stage: &'static str| art.metrics.iter().filter(move |r| r.stage == stage);
    println!("{:>6} {:>6} {:>11} {:>11} {:>11} {:>8} {:>8}", "r", "train", "E exact", "E qgaa", "E baseline", "F qgaa", "F base");
    for (g, b) in rows("generate").zip(rows("baseline")) {
        println!(
            "{:>6.3} {:>6} {:>11.6} {:>11.6} {:>11.6} {:>8.4} {:>8.4}",
            g.label0,
            g.train,
            g.energy_exact.unwrap_or(f64::NAN),
            g.energy_model.unwrap_or(f64::NAN),
            b.energy_model.unwrap_or(f64::NAN),
            g.fidelity,
            b.fidelity
        );
    }
    for stage in ["generate", "baseline"] {
        let s = art.summary(stage).expect("stage ran");
        println!("{stage}: mean F {:.4}  mean |ΔE| {:.4} Ha", s.mean_fidelity, s.mean_abs_de.unwrap_or(f64::NAN));
    }
    Ok(())
}
