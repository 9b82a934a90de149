//! Single-qubit rotations and X–Z–X angle extraction.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::CMatrix;

/// `exp(−iθX/2)`
pub fn rx_matrix(theta: f64) -> CMatrix {
    let (s, c) = (theta / 2.0).sin_cos();
    let d = Complex64::new(c, 0.0);
    let o = Complex64::new(0.0, -s);
    CMatrix::from_row_slice(2, 2, &[d, o, o, d])
}

/// `exp(−iθZ/2)`
pub fn rz_matrix(theta: f64) -> CMatrix {
    let z = Complex64::new(0.0, 0.0);
    CMatrix::from_row_slice(
        2,
        2,
        &[Complex64::from_polar(1.0, -theta / 2.0), z, z, Complex64::from_polar(1.0, theta / 2.0)],
    )
}

/// `Rx(α)·Rz(β)·Rx(γ)`; `γ` acts first.
pub fn xzx_matrix(alpha: f64, beta: f64, gamma: f64) -> CMatrix {
    rx_matrix(alpha) * rz_matrix(beta) * rx_matrix(gamma)
}

/// Angles `(α, β, γ)` with `u = e^{iφ} Rx(α)Rz(β)Rx(γ)` for a 2×2 unitary `u`.
///
/// Conjugating by the Hadamard swaps X and Z, so this is the Z–X–Z
/// decomposition of `HuH`. `β ∈ [0, π]`.
pub fn xzx_angles(u: &CMatrix) -> Result<(f64, f64, f64)> {
    if u.shape() != (2, 2) {
        return Err(Error::Dimension { expected: 2, found: u.nrows() });
    }
    let defect = (u.adjoint() * u - CMatrix::identity(2, 2)).norm();
    if defect > 1e-8 {
        return Err(Error::Validation(format!("matrix is not unitary (defect {defect:.2e})")));
    }
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let had = CMatrix::from_row_slice(2, 2, &[h, h, h, -h]);
    let w = &had * u * &had;
    let w = &w / w.determinant().sqrt();
    // w = [[e^{-i(α+γ)/2} cos(β/2), -i e^{-i(α-γ)/2} sin(β/2)], ...]
    let a = w[(0, 0)];
    let b = w[(0, 1)];
    let beta = 2.0 * b.norm().atan2(a.norm());
    let sum = if a.norm() > 1e-12 { -2.0 * a.arg() } else { 0.0 };
    let diff = if b.norm() > 1e-12 { -2.0 * (Complex64::i() * b).arg() } else { 0.0 };
    Ok(((sum + diff) / 2.0, beta, (sum - diff) / 2.0))
}

/// Phase-invariant distance `min_φ ‖a − e^{iφ} b‖_F`.
pub fn phase_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    let overlap = (b.adjoint() * a).trace();
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { Complex64::new(1.0, 0.0) };
    (a - b * phase).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rotations_are_hadamard_conjugates() {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let had = CMatrix::from_row_slice(2, 2, &[h, h, h, -h]);
        let t = 0.83;
        assert!((&had * rx_matrix(t) * &had - rz_matrix(t)).norm() < 1e-15);
    }

    #[test]
    fn extracts_known_angles() {
        for &(a, b, g) in &[(0.3, 1.1, -0.7), (2.0, 0.4, 1.0), (-1.2, 2.9, 0.2)] {
            let (x, y, z) = xzx_angles(&xzx_matrix(a, b, g)).unwrap();
            assert!(phase_distance(&xzx_matrix(x, y, z), &xzx_matrix(a, b, g)) < 1e-12);
        }
    }

    #[test]
    fn pure_x_rotation_has_zero_beta() {
        let (_, beta, _) = xzx_angles(&rx_matrix(1.3)).unwrap();
        assert!(beta.abs() < 1e-12);
    }

    #[test]
    fn hadamard_needs_three_factors() {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let had = CMatrix::from_row_slice(2, 2, &[h, h, h, -h]);
        let (a, b, g) = xzx_angles(&had).unwrap();
        assert!((b - PI / 2.0).abs() < 1e-12);
        assert!(a.abs() > 1e-3 && g.abs() > 1e-3);
        assert!(phase_distance(&xzx_matrix(a, b, g), &had) < 1e-12);
    }

    #[test]
    fn rejects_non_unitary() {
        let m = CMatrix::identity(2, 2) * Complex64::new(2.0, 0.0);
        assert!(xzx_angles(&m).is_err());
    }
}
