//! Parameter-shift gradients against central differences on a labelled
//! generator circuit, where label-scaled slots need scaled shifts.
//!
//! `cargo run --release --example gradients`

use qgaa::circuit::{build_conditioned, shift_gradient, AnsatzFamily, AnsatzSpec};
use qgaa::linalg::StateVector;

fn main() -> qgaa::Result<()> {
    let spec = AnsatzSpec::new(AnsatzFamily::GeneratorMeta, 2, 2);
    let circuit = build_conditioned(&spec, &[1.3])?;
    let params: Vec<f64> = (0..spec.param_count()?).map(|i| 0.37 * i as f64 - 1.0).collect();
    // probability of |00⟩ after the circuit
    let loss = |p: &[f64]| -> qgaa::Result<f64> { Ok(circuit.apply_to_state(p, &StateVector::zero(2))?.amplitudes()[0].norm_sqr()) };
    let shift = shift_gradient(loss, &circuit.slot_scales()?, &params)?;
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    for (i, g) in shift.iter().enumerate() {
        let (mut up, mut down) = (params.clone(), params.clone());
        up[i] += h;
        down[i] -= h;
        let fd = (loss(&up)? - loss(&down)?) / (2.0 * h);
        worst = worst.max((g - fd).abs());
        println!("slot {i:>2}  shift {g:+.8}  difference {fd:+.8}");
    }
    println!("largest disagreement {worst:.2e}");
    Ok(())
}
