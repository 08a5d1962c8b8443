//! Dense complex linear algebra and quantum-state containers.

pub mod eigen;
pub mod kernel;
pub mod matrix;
pub mod state;

pub use eigen::{eig_hermitian, sqrt_psd, HermitianEigen};
pub use matrix::{CMatrix, C64, I, ONE, ZERO};
pub use state::{partial_trace, purity, tensor_product, DensityMatrix, StateVector, TensorProduct, UnitaryMatrix};
