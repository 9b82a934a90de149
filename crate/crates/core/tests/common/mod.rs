//! Independent dense reference: Kronecker-built operators and a
//! scaling-and-squaring Taylor exponential.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type M = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn single(letter: char) -> M {
    let o = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    match letter {
        'I' => M::identity(2, 2),
        'X' => M::from_row_slice(2, 2, &[o, one, one, o]),
        'Y' => M::from_row_slice(2, 2, &[o, -i, i, o]),
        'Z' => M::from_row_slice(2, 2, &[one, o, o, -one]),
        _ => panic!("bad letter {letter}"),
    }
}

/// Product of single-site Paulis; spin 1 is the least significant factor.
pub fn op(n: usize, sites: &[(usize, char)]) -> M {
    let mut out = M::identity(1, 1);
    for spin in (1..=n).rev() {
        let letter = sites.iter().find(|(s, _)| *s == spin).map_or('I', |(_, l)| *l);
        out = out.kronecker(&single(letter));
    }
    out
}

pub fn zero(n: usize) -> M {
    M::zeros(1 << n, 1 << n)
}

/// `½(XX + YY)`
pub fn t(n: usize, i: usize, j: usize) -> M {
    (op(n, &[(i, 'X'), (j, 'X')]) + op(n, &[(i, 'Y'), (j, 'Y')])) * c(0.5, 0.0)
}

/// `½(XX − YY)`
pub fn r(n: usize, i: usize, j: usize) -> M {
    (op(n, &[(i, 'X'), (j, 'X')]) - op(n, &[(i, 'Y'), (j, 'Y')])) * c(0.5, 0.0)
}

pub fn zz(n: usize, i: usize, j: usize) -> M {
    op(n, &[(i, 'Z'), (j, 'Z')])
}

pub fn one_norm(a: &M) -> f64 {
    (0..a.ncols()).map(|j| a.column(j).iter().map(|x| x.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// `exp(a)` by scaling and squaring with a degree-30 Taylor polynomial.
pub fn expm(a: &M) -> M {
    let norm = one_norm(a);
    let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = a * c(0.5f64.powi(s), 0.0);
    let n = a.nrows();
    let mut term = M::identity(n, n);
    let mut sum = M::identity(n, n);
    for k in 1..=30 {
        term = &term * &scaled * c(1.0 / k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

/// `exp(−i h t)`
pub fn evolve(h: &M, t: f64) -> M {
    expm(&(h * c(0.0, -t)))
}

pub fn phase_distance(a: &M, b: &M) -> f64 {
    let overlap = (b.adjoint() * a).trace();
    let ph = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { c(1.0, 0.0) };
    (a - b * ph).norm()
}

/// `‖(I−P)UP‖_F / ‖P‖_F` for a code given by its basis indices.
pub fn leakage(u: &M, basis: &[usize]) -> f64 {
    let mut sq = 0.0;
    for &col in basis {
        for row in 0..u.nrows() {
            if !basis.contains(&row) {
                sq += u[(row, col)].norm_sqr();
            }
        }
    }
    (sq / basis.len() as f64).sqrt()
}

/// Symmetric-code basis: each pair in `|↑↓⟩` (0b10) or `|↓↑⟩` (0b01).
pub fn symmetric_basis(n_logical: usize) -> Vec<usize> {
    (0..1usize << n_logical)
        .map(|l| (0..n_logical).map(|q| (if (l >> q) & 1 == 0 { 0b10 } else { 0b01 }) << (2 * q)).sum())
        .collect()
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize, scale: f64) -> M {
    let a = M::from_fn(dim, dim, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    (&a + a.adjoint()) * c(0.5 * scale, 0.0)
}

/// Antisymmetric-code basis: each pair in `|↑↑⟩` (0b00) or `|↓↓⟩` (0b11).
pub fn antisymmetric_basis(n_logical: usize) -> Vec<usize> {
    (0..1usize << n_logical)
        .map(|l| (0..n_logical).map(|q| (if (l >> q) & 1 == 0 { 0b00 } else { 0b11 }) << (2 * q)).sum())
        .collect()
}

/// The block `⟨b_r|U|b_c⟩` over two lists of basis indices.
pub fn block(u: &M, rows: &[usize], cols: &[usize]) -> M {
    M::from_fn(rows.len(), cols.len(), |r, k| u[(rows[r], cols[k])])
}

/// `|Tr(T†B)| / d` for the block `B` of `u` on `basis`.
pub fn fidelity(u: &M, target: &M, basis: &[usize]) -> f64 {
    (target.adjoint() * block(u, basis, basis)).trace().norm() / basis.len() as f64
}
