//! Rotated concatenated stabilizer codes and the eight-qubit constant-excitation
//! amplitude-damping code.
//!
//! Qubits are 0-indexed in the API. Textual Pauli strings and bitstrings list
//! qubit 0 leftmost.

pub mod analytics;
pub mod cli;
pub mod concat;
pub mod eightqubit;
pub mod error;
pub mod pauli;
pub mod sim;
pub mod stabilizer;

pub use error::{Error, Result};
pub use pauli::{Pauli, PauliString};
