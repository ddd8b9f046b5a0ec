//! Lower bounds on localizable entanglement between qubit pairs of noisy
//! stabilizer states, with topological color codes as the main workload.

pub mod codes;
pub mod dense;
pub mod error;
pub mod gf2;
pub mod graph;
pub mod le;
pub mod noise;
pub mod stab;

pub use error::{Error, Result};
