//! Encoded selective recoupling for exchange-only spin qubits.
//!
//! Logical qubits are stored in pairs of spins; gates are realized by
//! switching exchange couplings on and off so that unwanted terms of the
//! Hamiltonian cancel by conjugation. The crate builds the Hamiltonians,
//! compiles logical gates to pulse schedules, simulates them exactly and
//! checks the result against the intended logical action.

pub mod compiler;
pub mod encoding;
pub mod error;
pub mod evolution;
pub mod model;
pub mod pauli;
pub mod verifier;

pub use error::{Error, Result};
