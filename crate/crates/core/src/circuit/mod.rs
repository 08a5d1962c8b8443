//! Gates, parameterized circuits, ansatz families and parameter-shift gradients.

pub mod ansatz;
#[allow(clippy::module_inception)]
pub mod circuit;
pub mod gate;
pub mod grad;

pub use ansatz::{build_ansatz, build_conditioned, AnsatzFamily, AnsatzSpec, LabelEncoding};
pub use circuit::{apply_to_density, circuit_unitary, ParamCircuit};
pub use gate::{gate_matrix, single_qubit, Angle, Gate, GateKind};
pub use grad::{param_shift_grad, shift_gradient, try_param_shift_grad};
