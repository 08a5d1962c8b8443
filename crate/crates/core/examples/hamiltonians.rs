//! Read the Hamiltonian fixtures, diagonalise them and report how many
//! latent qubits each ground-state family needs.
//!
//! `cargo run --release --example hamiltonians`

use qgaa::hamiltonian::{dataset_to_ensemble, MoleculeDataset};
use qgaa::metrics::{ensemble_rank, DEFAULT_RANK_TOL};

fn main() -> qgaa::Result<()> {
    for file in ["h2_sto3g_jw_4q.ham", "lih_6q.ham"] {
        let ds = MoleculeDataset::load(format!("{}/data/{file}", env!("CARGO_MANIFEST_DIR")))?;
        let rank = ensemble_rank(&dataset_to_ensemble(&ds)?, DEFAULT_RANK_TOL)?;
        let latent = rank.next_power_of_two().trailing_zeros();
        println!("{file}: {} bond lengths, mixture rank {rank}, {latent} latent qubits suffice", ds.len());
        let (mut lowest, mut at) = (f64::INFINITY, 0.0);
        for e in ds.entries() {
            let (energy, _) = e.ground()?;
            if *energy < lowest {
                (lowest, at) = (*energy, e.r);
            }
        }
        println!("  equilibrium near r = {at:.2} Å, E = {lowest:.6} Ha");
    }
    Ok(())
}
