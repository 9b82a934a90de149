//! Complex-weighted sums of Pauli strings.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::dense::{check_capacity, DenseOperator};
use super::string::{Pauli, PauliString};
use crate::error::{Error, Result};

/// Coefficients with magnitude below this are dropped.
pub const CANONICAL_THRESHOLD: f64 = 1e-14;

/// A finite linear combination of Pauli strings on `n` spins.
///
/// Phases of the strings are folded into the coefficients, so every key is
/// a bare letter sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n: usize,
    terms: BTreeMap<Vec<Pauli>, Complex64>,
}

impl PauliSum {
    pub fn zero(n: usize) -> Self {
        PauliSum { n, terms: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_string(&PauliString::identity(n), Complex64::new(1.0, 0.0))
    }

    pub fn from_string(p: &PauliString, coeff: Complex64) -> Self {
        let mut s = Self::zero(p.len());
        s.add_term(p.letters().to_vec(), coeff * p.phase().to_complex());
        s
    }

    /// Real-weighted string built from 1-based `(spin, letter)` pairs.
    pub fn term(n: usize, sites: &[(usize, Pauli)], coeff: f64) -> Result<Self> {
        let p = PauliString::from_sites(n, sites)?;
        Ok(Self::from_string(&p, Complex64::new(coeff, 0.0)))
    }

    pub fn n_spins(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[Pauli], Complex64)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), *v))
    }

    pub fn coefficient(&self, letters: &[Pauli]) -> Complex64 {
        self.terms.get(letters).copied().unwrap_or_default()
    }

    fn add_term(&mut self, letters: Vec<Pauli>, coeff: Complex64) {
        match self.terms.entry(letters) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().norm() < CANONICAL_THRESHOLD {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                if coeff.norm() >= CANONICAL_THRESHOLD {
                    e.insert(coeff);
                }
            }
        }
    }

    fn check_same(&self, other: &PauliSum) -> Result<()> {
        if self.n != other.n {
            Err(Error::Dimension { expected: self.n, found: other.n })
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &PauliSum) -> Result<PauliSum> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), *v);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &PauliSum) -> Result<PauliSum> {
        self.check_same(other)?;
        let mut out = PauliSum::zero(self.n);
        for (ka, va) in &self.terms {
            let a = PauliString::new(Default::default(), ka.clone());
            for (kb, vb) in &other.terms {
                let b = PauliString::new(Default::default(), kb.clone());
                let ab = a.mul(&b)?;
                out.add_term(ab.letters().to_vec(), va * vb * ab.phase().to_complex());
            }
        }
        Ok(out)
    }

    /// `[self, other]`
    pub fn commutator(&self, other: &PauliSum) -> Result<PauliSum> {
        let ab = self.try_mul(other)?;
        let ba = other.try_mul(self)?;
        ab.try_add(&-ba)
    }

    pub fn scale(&self, c: Complex64) -> PauliSum {
        let mut out = PauliSum::zero(self.n);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    pub fn scale_real(&self, c: f64) -> PauliSum {
        self.scale(Complex64::new(c, 0.0))
    }

    pub fn adjoint(&self) -> PauliSum {
        PauliSum { n: self.n, terms: self.terms.iter().map(|(k, v)| (k.clone(), v.conj())).collect() }
    }

    /// Largest imaginary part among the coefficients.
    pub fn max_imaginary(&self) -> f64 {
        self.terms.values().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    /// Hermitian iff every coefficient is real (within `tol`).
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_imaginary() <= tol
    }

    /// Largest coefficient magnitude, ignoring the identity term.
    pub fn max_non_identity_magnitude(&self) -> f64 {
        self.terms.iter().filter(|(k, _)| k.iter().any(|&p| p != Pauli::I)).map(|(_, c)| c.norm()).fold(0.0, f64::max)
    }

    /// The same sum with its identity component removed.
    pub fn without_identity(&self) -> PauliSum {
        PauliSum {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.iter().any(|&p| p != Pauli::I))
                .map(|(k, v)| (k.clone(), *v))
                .collect(),
        }
    }

    /// Spins touched by any term.
    pub fn support(&self) -> Vec<usize> {
        let mut used = vec![false; self.n];
        for k in self.terms.keys() {
            for (i, &p) in k.iter().enumerate() {
                used[i] |= p != Pauli::I;
            }
        }
        used.iter().enumerate().filter(|(_, &u)| u).map(|(i, _)| i + 1).collect()
    }

    /// Single Pauli string with coefficient ±1, if that is what this sum is.
    pub fn as_signed_string(&self) -> Option<PauliString> {
        if self.terms.len() != 1 {
            return None;
        }
        let (k, c) = self.terms.iter().next().unwrap();
        let unit = |x: f64| (x.abs() - 1.0).abs() < 1e-12;
        if c.im.abs() < 1e-12 && unit(c.re) {
            let phase = if c.re > 0.0 { super::Phase::ONE } else { super::Phase::MINUS_ONE };
            Some(PauliString::new(phase, k.clone()))
        } else {
            None
        }
    }

    /// Dense matrix in the computational basis (spin `k` on bit `k - 1`).
    pub fn to_matrix(&self) -> Result<DenseOperator> {
        to_matrix(self, self.n)
    }
}

/// Dense realization of `s` on `n` spins.
pub fn to_matrix(s: &PauliSum, n: usize) -> Result<DenseOperator> {
    check_capacity(n)?;
    if s.n != n {
        return Err(Error::Dimension { expected: n, found: s.n });
    }
    let dim = 1usize << n;
    let mut m = nalgebra::DMatrix::<Complex64>::zeros(dim, dim);
    for (letters, coeff) in &s.terms {
        let p = PauliString::new(Default::default(), letters.clone());
        let (x, z) = p.masks();
        let n_y = letters.iter().filter(|&&l| l == Pauli::Y).count() as u8;
        let base = coeff * super::Phase::from_exponent(n_y).to_complex();
        for col in 0..dim {
            let sign = if (col & z).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            m[(col ^ x, col)] += base * sign;
        }
    }
    DenseOperator::new(n, m)
}

impl Add for &PauliSum {
    type Output = PauliSum;
    /// Panics on mismatched spin counts; use [`PauliSum::try_add`] otherwise.
    fn add(self, rhs: &PauliSum) -> PauliSum {
        self.try_add(rhs).expect("spin-count mismatch in PauliSum addition")
    }
}

impl Add for PauliSum {
    type Output = PauliSum;
    fn add(self, rhs: PauliSum) -> PauliSum {
        &self + &rhs
    }
}

impl Sub for PauliSum {
    type Output = PauliSum;
    fn sub(self, rhs: PauliSum) -> PauliSum {
        &self + &(-rhs)
    }
}

impl Neg for PauliSum {
    type Output = PauliSum;
    fn neg(self) -> PauliSum {
        self.scale_real(-1.0)
    }
}

impl Mul for &PauliSum {
    type Output = PauliSum;
    fn mul(self, rhs: &PauliSum) -> PauliSum {
        self.try_mul(rhs).expect("spin-count mismatch in PauliSum product")
    }
}

impl Mul<f64> for PauliSum {
    type Output = PauliSum;
    fn mul(self, rhs: f64) -> PauliSum {
        self.scale_real(rhs)
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (k, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                f.write_str(" + ")?;
            }
            let letters: String = k
                .iter()
                .map(|p| match p {
                    Pauli::I => 'I',
                    Pauli::X => 'X',
                    Pauli::Y => 'Y',
                    Pauli::Z => 'Z',
                })
                .collect();
            if c.im == 0.0 {
                write!(f, "{}*{}", c.re, letters)?;
            } else {
                write!(f, "({})*{}", c, letters)?;
            }
        }
        Ok(())
    }
}
