//! Two-spin logical codes.
//!
//! Logical qubit `m` (1-based) lives on spins `(2m−1, 2m)`. In the axially
//! symmetric code `|0_L⟩ = |↑↓⟩`, `|1_L⟩ = |↓↑⟩`; in the antisymmetric code
//! `|0_L⟩ = |↑↑⟩`, `|1_L⟩ = |↓↓⟩`. Logical qubit 1 is the least significant
//! bit of the logical basis index.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{build_r, build_t};
use crate::pauli::{check_capacity, CMatrix, DenseOperator, Pauli, PauliSum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sector {
    AxialSymmetric,
    AxialAntisymmetric,
}

impl Sector {
    pub fn family(self) -> Family {
        match self {
            Sector::AxialSymmetric => Family::T,
            Sector::AxialAntisymmetric => Family::R,
        }
    }

    pub fn other(self) -> Sector {
        match self {
            Sector::AxialSymmetric => Sector::AxialAntisymmetric,
            Sector::AxialAntisymmetric => Sector::AxialSymmetric,
        }
    }

    /// Two-spin basis index of `|0_L⟩` and `|1_L⟩` (spin `2m−1` is bit 0).
    fn pair_states(self) -> [usize; 2] {
        match self {
            // |↑↓⟩ = 0b10, |↓↑⟩ = 0b01
            Sector::AxialSymmetric => [0b10, 0b01],
            // |↑↑⟩ = 0b00, |↓↓⟩ = 0b11
            Sector::AxialAntisymmetric => [0b00, 0b11],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    T,
    R,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Z,
}

/// A code sector on a fixed number of spins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CodeSpec {
    sector: Sector,
    n_spins: usize,
}

impl CodeSpec {
    pub fn new(sector: Sector, n_spins: usize) -> Result<Self> {
        if n_spins == 0 || !n_spins.is_multiple_of(2) {
            return Err(Error::Validation(format!("code needs an even spin count, got {n_spins}")));
        }
        check_capacity(n_spins)?;
        Ok(CodeSpec { sector, n_spins })
    }

    pub fn symmetric(n_spins: usize) -> Result<Self> {
        CodeSpec::new(Sector::AxialSymmetric, n_spins)
    }

    pub fn antisymmetric(n_spins: usize) -> Result<Self> {
        CodeSpec::new(Sector::AxialAntisymmetric, n_spins)
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn n_logical(&self) -> usize {
        self.n_spins / 2
    }

    pub fn logical_dim(&self) -> usize {
        1 << self.n_logical()
    }

    /// Physical basis index of each logical basis state.
    pub fn basis(&self) -> Vec<usize> {
        let states = self.sector.pair_states();
        (0..self.logical_dim())
            .map(|l| (0..self.n_logical()).map(|q| states[(l >> q) & 1] << (2 * q)).fold(0, |acc, b| acc | b))
            .collect()
    }

    /// `V`: columns are the encoded logical basis states.
    pub fn isometry(&self) -> CMatrix {
        let dim = 1 << self.n_spins;
        let mut v = CMatrix::zeros(dim, self.logical_dim());
        for (l, p) in self.basis().into_iter().enumerate() {
            v[(p, l)] = Complex64::new(1.0, 0.0);
        }
        v
    }

    /// `V†UV`.
    pub fn compress(&self, op: &DenseOperator) -> Result<CMatrix> {
        self.check_dim(op)?;
        let basis = self.basis();
        let m = op.matrix();
        Ok(CMatrix::from_fn(basis.len(), basis.len(), |r, c| m[(basis[r], basis[c])]))
    }

    fn check_dim(&self, op: &DenseOperator) -> Result<()> {
        if op.n_spins() != self.n_spins {
            Err(Error::Dimension { expected: self.n_spins, found: op.n_spins() })
        } else {
            Ok(())
        }
    }

    /// `‖(I−P)UP‖_F / ‖P‖_F`.
    pub fn leakage(&self, op: &DenseOperator) -> Result<f64> {
        self.check_dim(op)?;
        let basis = self.basis();
        let m = op.matrix();
        let mut in_code = vec![false; m.nrows()];
        for &b in &basis {
            in_code[b] = true;
        }
        let mut sq = 0.0;
        for &c in &basis {
            for r in (0..m.nrows()).filter(|&r| !in_code[r]) {
                sq += m[(r, c)].norm_sqr();
            }
        }
        Ok((sq / basis.len() as f64).sqrt())
    }

    pub fn encode(&self, logical: &DVector<Complex64>) -> Result<DVector<Complex64>> {
        if logical.len() != self.logical_dim() {
            return Err(Error::Dimension { expected: self.logical_dim(), found: logical.len() });
        }
        let mut out = DVector::zeros(1 << self.n_spins);
        for (l, p) in self.basis().into_iter().enumerate() {
            out[p] = logical[l];
        }
        Ok(out)
    }

    pub fn decode(&self, physical: &DVector<Complex64>) -> Result<Decoded> {
        let dim = 1 << self.n_spins;
        if physical.len() != dim {
            return Err(Error::Dimension { expected: dim, found: physical.len() });
        }
        let total = physical.norm();
        let inner = DVector::from_iterator(self.logical_dim(), self.basis().into_iter().map(|p| physical[p]));
        let kept = inner.norm();
        if total == 0.0 {
            return Err(Error::Validation("cannot decode the zero vector".into()));
        }
        let basis = self.basis();
        let outside: f64 =
            physical.iter().enumerate().filter(|(k, _)| !basis.contains(k)).map(|(_, a)| a.norm_sqr()).sum();
        let leaked = outside.sqrt() / total;
        if kept / total <= 1e-14 {
            return Ok(Decoded { logical: None, leakage: 1.0 });
        }
        Ok(Decoded { logical: Some(inner / Complex64::from(kept)), leakage: leaked })
    }
}

/// Result of projecting a physical state onto the code.
#[derive(Debug, Clone, PartialEq)]
pub struct Decoded {
    /// Renormalized in-code component; `None` when the state lies fully outside.
    pub logical: Option<DVector<Complex64>>,
    /// `‖(I−P)ψ‖ / ‖ψ‖`.
    pub leakage: f64,
}

/// Orthogonal projector onto the code space.
pub fn code_projector(c: &CodeSpec) -> DenseOperator {
    let dim = 1 << c.n_spins;
    let mut p = CMatrix::zeros(dim, dim);
    for b in c.basis() {
        p[(b, b)] = Complex64::new(1.0, 0.0);
    }
    DenseOperator::new(c.n_spins, p).expect("projector has code dimension")
}

fn pair(m: usize, n: usize) -> Result<(usize, usize)> {
    if m == 0 || 2 * m > n {
        Err(Error::IndexOutOfRange(format!("logical qubit {m} on {n} spins")))
    } else {
        Ok((2 * m - 1, 2 * m))
    }
}

/// `T_m^x = T_{2m−1,2m}^x`
pub fn t_x(m: usize, n: usize) -> Result<PauliSum> {
    let (i, j) = pair(m, n)?;
    build_t(i, j, n)
}

/// `T_m^z = ½(σ_{2m−1}^z − σ_{2m}^z)`
pub fn t_z(m: usize, n: usize) -> Result<PauliSum> {
    let (i, j) = pair(m, n)?;
    PauliSum::term(n, &[(i, Pauli::Z)], 0.5)?.try_add(&PauliSum::term(n, &[(j, Pauli::Z)], -0.5)?)
}

/// `R_m^x = R_{2m−1,2m}^x`
pub fn r_x(m: usize, n: usize) -> Result<PauliSum> {
    let (i, j) = pair(m, n)?;
    build_r(i, j, n)
}

/// `R_m^z = ½(σ_{2m−1}^z + σ_{2m}^z)`
pub fn r_z(m: usize, n: usize) -> Result<PauliSum> {
    let (i, j) = pair(m, n)?;
    PauliSum::term(n, &[(i, Pauli::Z)], 0.5)?.try_add(&PauliSum::term(n, &[(j, Pauli::Z)], 0.5)?)
}

/// An encoded generator `T_m^α` or `R_m^α`, `m` 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LogicalOperator {
    pub family: Family,
    pub axis: Axis,
    pub m: usize,
}

impl LogicalOperator {
    pub fn new(family: Family, axis: Axis, m: usize) -> Self {
        LogicalOperator { family, axis, m }
    }

    pub fn to_pauli_sum(&self, n: usize) -> Result<PauliSum> {
        match (self.family, self.axis) {
            (Family::T, Axis::X) => t_x(self.m, n),
            (Family::T, Axis::Z) => t_z(self.m, n),
            (Family::R, Axis::X) => r_x(self.m, n),
            (Family::R, Axis::Z) => r_z(self.m, n),
        }
    }
}

/// The operator compressed to the logical basis of `c`.
pub fn logical_matrix(op: &LogicalOperator, c: &CodeSpec) -> Result<CMatrix> {
    if op.family != c.sector.family() {
        return Err(Error::Sector(format!("{:?} operators do not act on the {:?} code", op.family, c.sector)));
    }
    c.compress(&op.to_pauli_sum(c.n_spins)?.to_matrix()?)
}

/// `a ⊗ b` with `b` on the less significant index (Kronecker order).
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Embed a 2×2 matrix on logical qubit `m` (1-based) of `n_logical`.
pub fn embed_single(u: &CMatrix, m: usize, n_logical: usize) -> Result<CMatrix> {
    if m == 0 || m > n_logical || u.shape() != (2, 2) {
        return Err(Error::IndexOutOfRange(format!("logical qubit {m} of {n_logical}")));
    }
    let mut out = CMatrix::identity(1, 1);
    for q in (1..=n_logical).rev() {
        let f = if q == m { u.clone() } else { CMatrix::identity(2, 2) };
        out = kron(&out, &f);
    }
    Ok(out)
}

/// Diagonal logical operator `exp(iφ Z_m Z_{m+1})`.
pub fn zz_phase(phi: f64, m: usize, n_logical: usize) -> Result<CMatrix> {
    if m == 0 || m + 1 > n_logical {
        return Err(Error::IndexOutOfRange(format!("logical pair ({m},{}) of {n_logical}", m + 1)));
    }
    let dim = 1 << n_logical;
    Ok(CMatrix::from_fn(dim, dim, |r, c| {
        if r != c {
            return Complex64::new(0.0, 0.0);
        }
        let parity = ((r >> (m - 1)) ^ (r >> m)) & 1;
        let s = if parity == 0 { 1.0 } else { -1.0 };
        Complex64::from_polar(1.0, s * phi)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn symmetric_basis_on_four_spins() {
        let code = CodeSpec::symmetric(4).unwrap();
        // |↑↓↑↓⟩: spins 2 and 4 down → bits 1 and 3
        assert_eq!(code.basis(), vec![0b1010, 0b1001, 0b0110, 0b0101]);
        let anti = CodeSpec::antisymmetric(4).unwrap();
        assert_eq!(anti.basis(), vec![0b0000, 0b0011, 0b1100, 0b1111]);
    }

    #[test]
    fn projector_rank_and_idempotence() {
        for code in [CodeSpec::symmetric(2).unwrap(), CodeSpec::antisymmetric(4).unwrap()] {
            let p = code_projector(&code);
            let trace: Complex64 = p.matrix().trace();
            assert_eq!(trace.re as usize, code.logical_dim());
            assert!((p.matrix() * p.matrix() - p.matrix()).norm() < 1e-15);
        }
    }

    #[test]
    fn logical_paulis() {
        let code = CodeSpec::symmetric(2).unwrap();
        let z = logical_matrix(&LogicalOperator::new(Family::T, Axis::Z, 1), &code).unwrap();
        assert_eq!(z, CMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]));
        let x = logical_matrix(&LogicalOperator::new(Family::T, Axis::X, 1), &code).unwrap();
        assert_eq!(x, CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]));
    }

    #[test]
    fn family_must_match_sector() {
        let code = CodeSpec::antisymmetric(2).unwrap();
        let err = logical_matrix(&LogicalOperator::new(Family::T, Axis::X, 1), &code);
        assert!(matches!(err, Err(Error::Sector(_))));
    }

    #[test]
    fn middle_zz_is_minus_zz_on_symmetric_code() {
        let code = CodeSpec::symmetric(4).unwrap();
        let zz = PauliSum::term(4, &[(2, Pauli::Z), (3, Pauli::Z)], 1.0).unwrap();
        let got = code.compress(&zz.to_matrix().unwrap()).unwrap();
        let zl = CMatrix::from_diagonal(&DVector::from_vec(vec![c(1.0), c(-1.0)]));
        assert!((got + kron(&zl, &zl)).norm() < 1e-15);
    }

    #[test]
    fn encode_decode_round_trip() {
        let code = CodeSpec::symmetric(4).unwrap();
        let mut psi = DVector::zeros(4);
        psi[0] = c(1.0);
        let phys = code.encode(&psi).unwrap();
        assert_eq!(phys[0b1010], c(1.0));
        let d = code.decode(&phys).unwrap();
        assert_eq!(d.leakage, 0.0);
        assert_eq!(d.logical.unwrap(), psi);
    }

    #[test]
    fn fully_leaked_state() {
        let code = CodeSpec::symmetric(4).unwrap();
        // |↑↑↑↓⟩: spin 4 down
        let mut phys = DVector::zeros(16);
        phys[0b1000] = c(1.0);
        let d = code.decode(&phys).unwrap();
        assert_eq!(d.leakage, 1.0);
        assert!(d.logical.is_none());
    }

    #[test]
    fn t_x_squared_is_pair_projector() {
        let tx = t_x(1, 2).unwrap();
        let sq = tx.try_mul(&tx).unwrap().to_matrix().unwrap();
        let p = code_projector(&CodeSpec::symmetric(2).unwrap());
        assert!(sq.distance(&p) < 1e-15);
        assert!(sq.distance(&DenseOperator::identity(2)) > 1.0);
    }

    #[test]
    fn zz_phase_diagonal() {
        let u = zz_phase(0.3, 1, 2).unwrap();
        assert!((u[(0, 0)] - Complex64::from_polar(1.0, 0.3)).norm() < 1e-15);
        assert!((u[(1, 1)] - Complex64::from_polar(1.0, -0.3)).norm() < 1e-15);
        assert!((u[(3, 3)] - Complex64::from_polar(1.0, 0.3)).norm() < 1e-15);
    }
}
