pub mod adversarial;
pub mod circuit;
pub mod ensemble;
pub mod error;
pub mod hamiltonian;
pub mod linalg;
pub mod metrics;
pub mod optim;
pub mod pipeline;
pub mod qae;

pub use error::{QgaaError, Result};
