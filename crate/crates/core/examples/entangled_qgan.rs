//! Full entangled demo: autoencoder, latent game and a generation sweep that
//! includes labels never seen in training.
//!
//! `cargo run --release --example entangled_qgan [seed]`

use qgaa::pipeline::{run_experiment, ExperimentConfig};

fn main() -> qgaa::Result<()> {
    let mut cfg = ExperimentConfig::load(concat!(env!("CARGO_MANIFEST_DIR"), "/configs/entangled.json"))?;
    if let Some(seed) = std::env::args().nth(1).and_then(|s| s.parse().ok()) {
        cfg.seed = seed;
    }
    let art = run_experiment(&cfg)?;
    let game = art.qgan.as_ref().expect("config trains the game");
    for r in game.record.iter().step_by(50) {
        println!("iter {:>4}  loss {:.4}  p_real {:.3}  p_fake {:.3}  latent overlap {:.4}", r.iter, r.loss, r.p_real, r.p_fake, r.mean_fidelity);
    }
    println!("{:?} after {} iterations", game.status, game.record.len());
    for (label, train) in [("training labels", Some(true)), ("held-out labels", Some(false))] {
        if let Some(s) = qgaa::pipeline::summarize(&art.metrics, "generate", train) {
            println!("{label}: n {}  fidelity {:.4} (min {:.4})", s.n, s.mean_fidelity, s.min_fidelity);
        }
    }
    Ok(())
}
