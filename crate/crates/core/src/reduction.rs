//! Partial traces, purities and the spin-flip transform.
//!
//! Reduced matrices list the kept qubits in ascending label order, lowest
//! label as most significant bit, mirroring the convention of the full
//! register.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{qubit_bit, MixedState, PureState};
use crate::subset::QubitSet;

/// Splits full basis indices into (kept, traced) coordinates.
struct IndexSplit {
    kept_dim: usize,
    rest_dim: usize,
    kept: Vec<usize>,
    rest: Vec<usize>,
}

impl IndexSplit {
    fn new(n: usize, keep: QubitSet) -> Self {
        let bits_keep: Vec<usize> = keep.qubits().map(|q| qubit_bit(n, q)).collect();
        let bits_rest: Vec<usize> = keep.complement(n).qubits().map(|q| qubit_bit(n, q)).collect();
        let gather = |idx: usize, bits: &[usize]| {
            bits.iter()
                .fold(0usize, |acc, &b| (acc << 1) | usize::from(idx & b != 0))
        };
        let dim = 1usize << n;
        IndexSplit {
            kept_dim: 1 << bits_keep.len(),
            rest_dim: 1 << bits_rest.len(),
            kept: (0..dim).map(|i| gather(i, &bits_keep)).collect(),
            rest: (0..dim).map(|i| gather(i, &bits_rest)).collect(),
        }
    }
}

fn check_keep(n: usize, keep: QubitSet) -> Result<()> {
    if keep.is_empty() {
        return Err(Error::EmptySubset);
    }
    if !keep.is_subset_of(QubitSet::full(n)) {
        let bad = keep.qubits().find(|&q| q > n).unwrap_or(0);
        return Err(Error::QubitOutOfRange { qubit: bad, qubits: n });
    }
    Ok(())
}

/// Amplitudes reshaped as a kept × traced matrix.
fn bipartite_matrix(psi: &PureState, keep: QubitSet) -> DMatrix<Complex64> {
    let split = IndexSplit::new(psi.num_qubits(), keep);
    let mut m = DMatrix::from_element(split.kept_dim, split.rest_dim, Complex64::new(0.0, 0.0));
    for (j, a) in psi.amplitudes().iter().enumerate() {
        m[(split.kept[j], split.rest[j])] = *a;
    }
    m
}

/// States that can be reduced to a subset of their qubits.
pub trait Reducible {
    fn num_qubits(&self) -> usize;
    fn partial_trace(&self, keep: QubitSet) -> Result<MixedState>;
}

impl Reducible for PureState {
    fn num_qubits(&self) -> usize {
        PureState::num_qubits(self)
    }

    fn partial_trace(&self, keep: QubitSet) -> Result<MixedState> {
        check_keep(self.num_qubits(), keep)?;
        let m = bipartite_matrix(self, keep);
        Ok(MixedState::from_matrix_unchecked(keep.len(), &m * m.adjoint()))
    }
}

impl Reducible for MixedState {
    fn num_qubits(&self) -> usize {
        MixedState::num_qubits(self)
    }

    fn partial_trace(&self, keep: QubitSet) -> Result<MixedState> {
        let n = self.num_qubits();
        check_keep(n, keep)?;
        if keep == QubitSet::full(n) {
            return Ok(self.clone());
        }
        let split = IndexSplit::new(n, keep);
        let src = self.matrix();
        let mut out = DMatrix::from_element(split.kept_dim, split.kept_dim, Complex64::new(0.0, 0.0));
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if split.rest[i] == split.rest[j] {
                    out[(split.kept[i], split.kept[j])] += src[(i, j)];
                }
            }
        }
        Ok(MixedState::from_matrix_unchecked(keep.len(), out))
    }
}

/// Reduced density matrix over `keep`.
pub fn partial_trace<S: Reducible + ?Sized>(source: &S, keep: QubitSet) -> Result<MixedState> {
    source.partial_trace(keep)
}

/// `tr(rho^2)`, computed as the squared Frobenius norm of a Hermitian matrix.
pub fn purity(rho: &MixedState) -> f64 {
    rho.matrix().iter().map(|z| z.norm_sqr()).sum()
}

/// `tr(rho_S^2)` for a pure state without materializing `rho_S` on the
/// larger side of the cut. The empty and full subsets have purity 1.
pub fn subset_purity(psi: &PureState, s: QubitSet) -> f64 {
    let n = psi.num_qubits();
    if s.is_empty() || s == QubitSet::full(n) {
        return 1.0;
    }
    let m = bipartite_matrix(psi, s);
    let gram = if m.nrows() <= m.ncols() {
        &m * m.adjoint()
    } else {
        m.adjoint() * &m
    };
    gram.iter().map(|z| z.norm_sqr()).sum()
}

/// `(σy ⊗ … ⊗ σy) rho* (σy ⊗ … ⊗ σy)` with conjugation in the computational basis.
///
/// Entrywise this is `rho~[a, b] = (-1)^{|a| + |b|} conj(rho[!a, !b])`.
pub fn spin_flip(rho: &MixedState) -> MixedState {
    let dim = rho.dim();
    let all = dim - 1;
    let src = rho.matrix();
    let parity = |i: usize| if i.count_ones() & 1 == 0 { 1.0 } else { -1.0 };
    let out = DMatrix::from_fn(dim, dim, |a, b| {
        src[(a ^ all, b ^ all)].conj() * (parity(a) * parity(b))
    });
    MixedState::from_matrix_unchecked(rho.num_qubits(), out)
}

/// `tr(rho rho~)`.
pub fn tilde_overlap(rho: &MixedState) -> f64 {
    let flipped = spin_flip(rho);
    // tr(AB) = sum_ij A_ij B_ji
    let a = rho.matrix();
    let b = flipped.matrix();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..rho.dim() {
        for j in 0..rho.dim() {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    debug_assert!(acc.im.abs() < 1e-10);
    acc.re
}
