//! Phase-exact Pauli algebra and its dense realization.
//!
//! Basis convention: spin `k` (1-based) is bit `k - 1` of the basis index,
//! spin 1 least significant, and `|↑⟩ = |0⟩` is the `+1` eigenvector of σᶻ.

mod conjugate;
mod dense;
mod string;
mod sum;

pub use conjugate::{conjugate, conjugate_dense};
pub use dense::{max_spins, CMatrix, DenseOperator, DEFAULT_MAX_SPINS};
pub use string::{Pauli, PauliString, Phase};
pub use sum::{to_matrix, PauliSum, CANONICAL_THRESHOLD};

pub(crate) use dense::check_capacity;
