//! LiH on six qubits. Runs the reduced smoke config by default; pass `full`
//! for the four-qubit latent run (about a quarter of an hour on one core).
//!
//! `cargo run --release --example lih_qgaa [full]`

use qgaa::pipeline::{run_experiment, ExperimentConfig};

fn main() -> qgaa::Result<()> {
    let full = std::env::args().nth(1).is_some_and(|a| a == "full");
    let name = if full { "lih.json" } else { "lih_smoke.json" };
    let cfg = ExperimentConfig::load(format!("{}/configs/{name}", env!("CARGO_MANIFEST_DIR")))?;
    let t = std::time::Instant::now();
    let art = run_experiment(&cfg)?;
    if let (Some(first), Some(last)) = (art.qae_series.first(), art.qae_series.last()) {
        println!("autoencoder loss {:.4} -> {:.4} over {} steps", first.loss, last.loss, art.qae_series.len());
    }
    for stage in ["qae", "generate"] {
        if let Some(s) = art.summary(stage) {
            println!("{stage}: n {}  F {:.4}  |ΔE| {:.4} Ha", s.n, s.mean_fidelity, s.mean_abs_de.unwrap_or(f64::NAN));
        }
    }
    if let Some(g) = &art.qgan {
        println!("game kept restart {} of scores {:?}", g.restart, g.restart_scores);
    }
    println!("{:.1?}", t.elapsed());
    Ok(())
}
