//! Dense complex matrices on the full 2^N-dimensional spin space.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default spin-count cap; overridden by `RECOUPLER_MAX_SPINS`.
pub const DEFAULT_MAX_SPINS: usize = 12;

/// Current spin-count cap.
pub fn max_spins() -> usize {
    std::env::var("RECOUPLER_MAX_SPINS").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_MAX_SPINS)
}

pub(crate) fn check_capacity(n: usize) -> Result<()> {
    let max = max_spins();
    if n > max {
        Err(Error::Capacity { n, max })
    } else {
        Ok(())
    }
}

pub type CMatrix = DMatrix<Complex64>;

/// A `2^n × 2^n` complex operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    n: usize,
    m: CMatrix,
}

impl DenseOperator {
    pub fn new(n: usize, m: CMatrix) -> Result<Self> {
        let dim = 1usize << n;
        if m.nrows() != dim || m.ncols() != dim {
            return Err(Error::Dimension { expected: dim, found: m.nrows().max(m.ncols()) });
        }
        Ok(DenseOperator { n, m })
    }

    pub fn identity(n: usize) -> Self {
        let dim = 1usize << n;
        DenseOperator { n, m: CMatrix::identity(dim, dim) }
    }

    pub fn n_spins(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    /// `self · rhs`
    pub fn compose(&self, rhs: &DenseOperator) -> Result<DenseOperator> {
        if self.n != rhs.n {
            return Err(Error::Dimension { expected: self.n, found: rhs.n });
        }
        Ok(DenseOperator { n: self.n, m: &self.m * &rhs.m })
    }

    pub fn adjoint(&self) -> DenseOperator {
        DenseOperator { n: self.n, m: self.m.adjoint() }
    }

    pub fn scale(&self, c: Complex64) -> DenseOperator {
        DenseOperator { n: self.n, m: &self.m * c }
    }

    /// `‖self − other‖_F`
    pub fn distance(&self, other: &DenseOperator) -> f64 {
        (&self.m - &other.m).norm()
    }

    /// `‖U†U − I‖_F`
    pub fn unitarity_defect(&self) -> f64 {
        let dim = self.dim();
        (self.m.adjoint() * &self.m - CMatrix::identity(dim, dim)).norm()
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// `e^{-iA θ} · self · e^{+iA θ}` for a given unitary `e^{-iAθ}`.
    pub fn conjugated_by(&self, u: &DenseOperator) -> Result<DenseOperator> {
        u.compose(self)?.compose(&u.adjoint())
    }
}
