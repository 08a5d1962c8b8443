//! Compress the two-qubit entangled family to one latent qubit.
//!
//! `cargo run --release --example entangled_qae`

use std::f64::consts::PI;

use qgaa::circuit::{AnsatzFamily, AnsatzSpec};
use qgaa::optim::CobylaConfig;
use qgaa::pipeline::{entangled_ensemble, EntangledGrid};
use qgaa::qae::{train_qae, DecoderLayout, QaeConfig, QaeOptimizer};

fn main() -> qgaa::Result<()> {
    let grid = EntangledGrid::default();
    let states = entangled_ensemble(&grid)?;
    let spec = AnsatzSpec::new(AnsatzFamily::EntangledQae, 2, 1);
    let cfg = QaeConfig {
        n_qubits: 2,
        latent_qubits: 1,
        encoder: spec,
        decoder: spec,
        optimizer: QaeOptimizer::Cobyla(CobylaConfig::default()),
        seed: 0,
        restarts: 1,
        decoder_layout: DecoderLayout::Mirrored,
        init: None,
    };
    let (qae, record) = train_qae(&cfg, &states)?;
    println!("{} training states, {} loss evaluations, final loss {:.2e}", states.len(), record.len(), qae.final_loss);
    println!("mean reconstruction fidelity {:.6}", qae.mean_fidelity());
    let latents = qae.latent_ensemble(&states)?;
    for e in latents.iter().step_by(16) {
        println!("k0 = {:.3}π  latent purity {:.6}", e.label[0] / PI, e.rho.purity());
    }
    Ok(())
}
