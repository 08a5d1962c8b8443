//! State metrics on a few hand-built states: fidelity, the SWAP test against
//! its closed form, trace distance, entropies and Bloch vectors.
//!
//! `cargo run --release --example metrics_tour`

use std::f64::consts::PI;

use qgaa::linalg::{partial_trace, DensityMatrix};
use qgaa::metrics::{
    bloch_vector, entanglement_entropy, fidelity, swap_overlap, swap_overlap_circuit, trace_distance, von_neumann_entropy,
};
use qgaa::pipeline::entangled_state;

fn main() -> qgaa::Result<()> {
    let bell = entangled_state(PI / 2.0, 0.0);
    let tilted = entangled_state(0.44 * PI, 1.1);
    let (a, b) = (DensityMatrix::from_pure(&bell), DensityMatrix::from_pure(&tilted));
    println!("fidelity          {:.6}", fidelity(&a, &b)?);
    println!("trace distance    {:.6}", trace_distance(&a, &b)?);
    println!("SWAP test circuit {:.12}", swap_overlap_circuit(&a, &b)?);
    println!("Tr(ρσ)            {:.12}", swap_overlap(&a, &b)?);
    for (name, psi) in [("centre", &bell), ("edge", &tilted)] {
        let reduced = partial_trace(&DensityMatrix::from_pure(psi), &[0])?;
        let v = bloch_vector(&reduced)?;
        println!(
            "{name}: entanglement entropy {:.4}, reduced entropy {:.4}, Bloch ({:.3}, {:.3}, {:.3})",
            entanglement_entropy(psi, &[0])?,
            von_neumann_entropy(&reduced)?,
            v.x,
            v.y,
            v.z
        );
    }
    Ok(())
}
