use num_complex::Complex64;

use super::{DenseOperator, PauliString, PauliSum};
use crate::error::{Error, Result};
use crate::evolution::propagator;

/// `e^{-iAθ} · B · e^{+iAθ}` computed symbolically.
///
/// `a` must be a single Pauli string with coefficient ±1, so that `A² = I`.
/// Terms of `b` commuting with `A` are unchanged; anticommuting terms `t`
/// map to `cos(2θ)·t − i·sin(2θ)·A·t`. At `θ = π/2` they flip sign.
pub fn conjugate(a: &PauliSum, theta: f64, b: &PauliSum) -> Result<PauliSum> {
    let gen = a
        .as_signed_string()
        .ok_or_else(|| Error::UnsupportedGenerator(format!("`{a}` is not a single ±1-weighted Pauli string")))?;
    if gen.len() != b.n_spins() {
        return Err(Error::Dimension { expected: gen.len(), found: b.n_spins() });
    }
    let a_sum = PauliSum::from_string(&gen, Complex64::new(1.0, 0.0));
    let (c, s) = ((2.0 * theta).cos(), (2.0 * theta).sin());
    let mut out = PauliSum::zero(b.n_spins());
    for (letters, coeff) in b.terms() {
        let t = PauliString::new(Default::default(), letters.to_vec());
        let t_sum = PauliSum::from_string(&t, coeff);
        if gen.commutes(&t)? {
            out = out.try_add(&t_sum)?;
        } else {
            let rotated = a_sum.try_mul(&t_sum)?.scale(Complex64::new(0.0, -s));
            out = out.try_add(&t_sum.scale_real(c))?.try_add(&rotated)?;
        }
    }
    Ok(out)
}

/// Dense fallback for arbitrary Hermitian generators.
pub fn conjugate_dense(a: &PauliSum, theta: f64, b: &PauliSum) -> Result<DenseOperator> {
    let n = b.n_spins();
    let u = propagator(a, theta, n)?;
    b.to_matrix()?.conjugated_by(&u)
}
