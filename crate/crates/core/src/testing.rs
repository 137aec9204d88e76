//! Dense reference implementations used only by unit tests.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::pauli::{Letter, PauliString};
use crate::state::PureState;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn letter_matrix(l: Letter) -> DMatrix<Complex64> {
    let z = c(0.0, 0.0);
    let entries = match l {
        Letter::I => [c(1.0, 0.0), z, z, c(1.0, 0.0)],
        Letter::X => [z, c(1.0, 0.0), c(1.0, 0.0), z],
        Letter::Y => [z, c(0.0, -1.0), c(0.0, 1.0), z],
        Letter::Z => [c(1.0, 0.0), z, z, c(-1.0, 0.0)],
    };
    DMatrix::from_row_slice(2, 2, &entries)
}

/// Kronecker product with qubit 1 as the leftmost factor.
pub fn dense_pauli(p: &PauliString) -> DMatrix<Complex64> {
    p.letters()
        .iter()
        .fold(DMatrix::from_element(1, 1, c(1.0, 0.0)), |acc, &l| {
            acc.kronecker(&letter_matrix(l))
        })
}

pub fn dense_expectation(psi: &PureState, p: &PauliString) -> f64 {
    let v = DVector::from_column_slice(psi.amplitudes());
    (v.adjoint() * dense_pauli(p) * &v)[(0, 0)].re
}

/// Brute-force partial trace: sum over all basis pairs of the full density
/// matrix that agree on the traced-out qubits.
pub fn brute_partial_trace(psi: &PureState, keep: &[usize]) -> DMatrix<Complex64> {
    let n = psi.num_qubits();
    let rho = psi.density();
    let k = keep.len();
    let mut out = DMatrix::from_element(1 << k, 1 << k, c(0.0, 0.0));
    let bit = |idx: usize, q: usize| (idx >> (n - q)) & 1;
    for i in 0..(1usize << n) {
        for j in 0..(1usize << n) {
            let same_env = (1..=n).filter(|q| !keep.contains(q)).all(|q| bit(i, q) == bit(j, q));
            if !same_env {
                continue;
            }
            let sub = |idx: usize| keep.iter().fold(0usize, |acc, &q| (acc << 1) | bit(idx, q));
            out[(sub(i), sub(j))] += rho.matrix()[(i, j)];
        }
    }
    out
}
