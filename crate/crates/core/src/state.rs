//! Pure states and density matrices.
//!
//! Basis indices are big-endian in the qubit labels: qubit 1 is the most
//! significant bit, so `|q1 q2 ... qn>` is basis index `q1*2^(n-1) + ... + qn`.
//! With this ordering `(|000> + |111>)/sqrt(2)` has amplitudes at indices 0 and 7.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subset::QubitSet;

/// Largest register accepted for pure states.
pub const MAX_QUBITS: usize = 14;
/// Largest register accepted for dense density matrices.
pub const MAX_MIXED_QUBITS: usize = 7;

/// Tolerance on the norm of user-supplied amplitudes.
pub const INGEST_NORM_TOL: f64 = 1e-6;
/// Norm invariant maintained by every constructed [`PureState`].
pub const NORM_TOL: f64 = 1e-12;
/// Hermiticity, trace and positivity tolerance for [`MixedState`].
pub const DENSITY_TOL: f64 = 1e-10;

const UNIT_NORM_SLACK: f64 = 1e-14;

/// Bit of the basis index that holds qubit `qubit` (1-based) in an `n`-qubit register.
#[inline]
pub fn qubit_bit(n: usize, qubit: usize) -> usize {
    1 << (n - qubit)
}

/// Basis-index mask covering every qubit of `set`.
pub fn index_mask(n: usize, set: QubitSet) -> usize {
    set.qubits().fold(0, |m, q| m | qubit_bit(n, q))
}

fn check_qubits(n: usize, max: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::NoQubits);
    }
    if n > max {
        return Err(Error::TooManyQubits { qubits: n, max });
    }
    Ok(())
}

/// Normalized amplitude vector over `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    n: usize,
    amps: Vec<Complex64>,
}

/// Named state families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Ghz,
    W,
    BasisProduct,
    BellPhiPlus,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ghz" => Ok(Family::Ghz),
            "w" => Ok(Family::W),
            "basis-product" | "product" | "zero" => Ok(Family::BasisProduct),
            "bell-phi-plus" | "bell" => Ok(Family::BellPhiPlus),
            _ => Err(Error::UnsupportedFamily {
                family: s.to_string(),
                qubits: 0,
            }),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Ghz => "ghz",
            Family::W => "w",
            Family::BasisProduct => "basis-product",
            Family::BellPhiPlus => "bell-phi-plus",
        })
    }
}

impl PureState {
    /// Validates user amplitudes. Without `renormalize` the norm must already
    /// be 1 within [`INGEST_NORM_TOL`]; the stored vector is rescaled to unit
    /// norm either way.
    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>, renormalize: bool) -> Result<Self> {
        check_qubits(n, MAX_QUBITS)?;
        let expected = 1usize << n;
        if amps.len() != expected {
            return Err(Error::WrongLength {
                qubits: n,
                expected,
                got: amps.len(),
            });
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroNorm);
        }
        if !renormalize && (norm - 1.0).abs() > INGEST_NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self::normalized(n, amps, norm))
    }

    fn normalized(n: usize, mut amps: Vec<Complex64>, norm: f64) -> Self {
        // vectors already unit to rounding are kept bit-for-bit so exports reload exactly
        if (norm - 1.0).abs() > UNIT_NORM_SLACK {
            let inv = 1.0 / norm;
            amps.iter_mut().for_each(|a| *a *= inv);
        }
        PureState { n, amps }
    }

    /// Real-amplitude convenience constructor.
    pub fn from_real(n: usize, amps: &[f64]) -> Result<Self> {
        Self::from_amplitudes(n, amps.iter().map(|&a| Complex64::new(a, 0.0)).collect(), false)
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        check_qubits(n, MAX_QUBITS)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(PureState { n, amps })
    }

    pub fn named(family: Family, n: usize) -> Result<Self> {
        let unsupported = || Error::UnsupportedFamily {
            family: family.to_string(),
            qubits: n,
        };
        if n == 0 || n > MAX_QUBITS {
            return Err(unsupported());
        }
        let dim = 1usize << n;
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        match family {
            Family::Ghz => {
                if n < 2 {
                    return Err(unsupported());
                }
                let a = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                amps[0] = a;
                amps[dim - 1] = a;
            }
            Family::W => {
                if n < 2 {
                    return Err(unsupported());
                }
                let a = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
                for q in 1..=n {
                    amps[qubit_bit(n, q)] = a;
                }
            }
            Family::BasisProduct => amps[0] = Complex64::new(1.0, 0.0),
            Family::BellPhiPlus => {
                if n != 2 {
                    return Err(unsupported());
                }
                let a = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                amps[0] = a;
                amps[3] = a;
            }
        }
        Ok(PureState { n, amps })
    }

    /// Haar-random state: `2^n` standard complex Gaussians, normalized.
    pub fn random(n: usize, seed: u64) -> Result<Self> {
        check_qubits(n, MAX_QUBITS)?;
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let amps = gaussian_vector(&mut rng, 1 << n);
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        Ok(Self::normalized(n, amps, norm))
    }

    /// Tensor product `self ⊗ other`; `self` supplies the leading qubits.
    pub fn tensor(&self, other: &PureState) -> Result<Self> {
        let n = self.n + other.n;
        check_qubits(n, MAX_QUBITS)?;
        let mut amps = Vec::with_capacity(1 << n);
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(PureState { n, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `|psi><psi|`.
    pub fn density(&self) -> MixedState {
        let col = nalgebra::DVector::from_column_slice(&self.amps);
        MixedState {
            m: self.n,
            rho: &col * col.adjoint(),
        }
    }

    pub fn to_document(&self) -> StateDocument {
        StateDocument::Pure {
            n: self.n,
            amplitudes: self.amps.iter().map(|a| [a.re, a.im]).collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        crate::json::to_string(&self.to_document())
    }
}

pub(crate) fn gaussian_vector(rng: &mut ChaCha20Rng, len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re, im)
        })
        .collect()
}

/// Hermitian, positive semidefinite, unit-trace matrix over `m` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedState {
    m: usize,
    rho: DMatrix<Complex64>,
}

impl MixedState {
    /// Validates a user-supplied density matrix against [`DENSITY_TOL`].
    pub fn from_matrix(m: usize, rho: DMatrix<Complex64>) -> Result<Self> {
        check_qubits(m, MAX_MIXED_QUBITS)?;
        let dim = 1usize << m;
        if rho.nrows() != dim || rho.ncols() != dim {
            return Err(Error::BadMatrixShape { qubits: m });
        }
        let mut deviation = 0.0f64;
        for i in 0..dim {
            for j in i..dim {
                deviation = deviation.max((rho[(i, j)] - rho[(j, i)].conj()).norm());
            }
        }
        if deviation > DENSITY_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = rho.trace();
        if (trace.re - 1.0).abs() > DENSITY_TOL || trace.im.abs() > DENSITY_TOL {
            return Err(Error::BadTrace { trace: trace.re });
        }
        // symmetrize before the eigen-solve so the solver sees an exactly Hermitian input
        let herm = (&rho + rho.adjoint()).scale(0.5);
        let lowest = herm
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if lowest < -DENSITY_TOL {
            return Err(Error::NotPositive { eigenvalue: lowest });
        }
        Ok(MixedState { m, rho })
    }

    /// Trusted constructor for matrices produced by this crate.
    pub(crate) fn from_matrix_unchecked(m: usize, rho: DMatrix<Complex64>) -> Self {
        debug_assert_eq!(rho.nrows(), 1 << m);
        MixedState { m, rho }
    }

    pub fn maximally_mixed(m: usize) -> Result<Self> {
        check_qubits(m, MAX_MIXED_QUBITS)?;
        let dim = 1usize << m;
        let rho = DMatrix::from_diagonal_element(dim, dim, Complex64::new(1.0 / dim as f64, 0.0));
        Ok(MixedState { m, rho })
    }

    /// Random density matrix of rank at most `rank`: a Haar-random pure state
    /// on system ⊗ environment (environment dimension `rank`) with the
    /// environment traced out.
    pub fn random(m: usize, rank: usize, seed: u64) -> Result<Self> {
        check_qubits(m, MAX_MIXED_QUBITS)?;
        let dim = 1usize << m;
        if rank == 0 || rank > dim {
            return Err(Error::InvalidRank { rank, dim });
        }
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        // row-major system x environment amplitudes, system index most significant
        let amps = gaussian_vector(&mut rng, dim * rank);
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        let joint = DMatrix::from_row_slice(dim, rank, &amps);
        let mut rho = &joint * joint.adjoint();
        rho.unscale_mut(norm_sq);
        Ok(MixedState { m, rho })
    }

    pub fn num_qubits(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.rho
    }

    pub fn trace(&self) -> Complex64 {
        self.rho.trace()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.rho + self.rho.adjoint()).scale(0.5);
        let mut ev: Vec<f64> = herm.symmetric_eigenvalues().iter().cloned().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn to_document(&self) -> StateDocument {
        let dim = self.dim();
        StateDocument::Mixed {
            m: self.m,
            matrix: (0..dim)
                .map(|i| (0..dim).map(|j| [self.rho[(i, j)].re, self.rho[(i, j)].im]).collect())
                .collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        crate::json::to_string(&self.to_document())
    }
}

impl From<&PureState> for MixedState {
    fn from(psi: &PureState) -> Self {
        psi.density()
    }
}

/// On-disk state schema.
///
/// ```json
/// {"kind":"pure","n":2,"amplitudes":[[0.7071,0],[0,0],[0,0],[0.7071,0]]}
/// {"kind":"mixed","m":1,"matrix":[[[0.5,0],[0,0]],[[0,0],[0.5,0]]]}
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StateDocument {
    Pure { n: usize, amplitudes: Vec<[f64; 2]> },
    Mixed { m: usize, matrix: Vec<Vec<[f64; 2]>> },
}

/// A loaded state of either kind.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyState {
    Pure(PureState),
    Mixed(MixedState),
}

impl StateDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Validates the document into a state. Pure amplitudes are accepted
    /// within the ingestion tolerance and renormalized.
    pub fn into_state(self) -> Result<AnyState> {
        match self {
            StateDocument::Pure { n, amplitudes } => {
                let amps = amplitudes.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
                PureState::from_amplitudes(n, amps, false).map(AnyState::Pure)
            }
            StateDocument::Mixed { m, matrix } => {
                check_qubits(m, MAX_MIXED_QUBITS)?;
                let dim = 1usize << m;
                if matrix.len() != dim || matrix.iter().any(|row| row.len() != dim) {
                    return Err(Error::BadMatrixShape { qubits: m });
                }
                let flat: Vec<Complex64> = matrix
                    .into_iter()
                    .flatten()
                    .map(|[re, im]| Complex64::new(re, im))
                    .collect();
                MixedState::from_matrix(m, DMatrix::from_row_slice(dim, dim, &flat)).map(AnyState::Mixed)
            }
        }
    }
}

impl PureState {
    /// Loads a pure state in the JSON schema of [`StateDocument`].
    pub fn from_json(text: &str) -> Result<Self> {
        match StateDocument::from_json(text)?.into_state()? {
            AnyState::Pure(psi) => Ok(psi),
            AnyState::Mixed(_) => Err(Error::Format("expected a pure state".into())),
        }
    }
}

impl MixedState {
    /// Loads a density matrix; pure documents are converted with [`PureState::density`].
    pub fn from_json(text: &str) -> Result<Self> {
        match StateDocument::from_json(text)?.into_state()? {
            AnyState::Mixed(rho) => Ok(rho),
            AnyState::Pure(psi) => {
                check_qubits(psi.num_qubits(), MAX_MIXED_QUBITS)?;
                Ok(psi.density())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn basis_state_from_amplitudes() {
        let psi = PureState::from_amplitudes(1, vec![c(1.0), c(0.0)], false).unwrap();
        assert_eq!(psi.amplitudes(), &[c(1.0), c(0.0)]);
    }

    #[test]
    fn renormalizes_on_request() {
        let psi = PureState::from_amplitudes(1, vec![c(3.0), c(4.0)], true).unwrap();
        assert!((psi.amplitudes()[0].re - 0.6).abs() < 1e-15);
        assert!((psi.amplitudes()[1].re - 0.8).abs() < 1e-15);
        assert!(matches!(
            PureState::from_amplitudes(1, vec![c(3.0), c(4.0)], false),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            PureState::from_amplitudes(2, vec![c(1.0); 3], true),
            Err(Error::WrongLength {
                expected: 4,
                got: 3,
                ..
            })
        ));
        assert!(matches!(
            PureState::from_amplitudes(1, vec![c(0.0), c(0.0)], true),
            Err(Error::ZeroNorm)
        ));
        assert!(PureState::random(15, 0).is_err());
        assert!(PureState::named(Family::BellPhiPlus, 3).is_err());
        assert!(PureState::named(Family::Ghz, 1).is_err());
        assert!(PureState::named(Family::W, 1).is_err());
    }

    #[test]
    fn bell_from_amplitudes() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = PureState::from_real(2, &[h, 0.0, 0.0, h]).unwrap();
        assert_eq!(psi, PureState::named(Family::BellPhiPlus, 2).unwrap());
    }

    #[test]
    fn named_families_use_msb_first_indices() {
        let ghz = PureState::named(Family::Ghz, 3).unwrap();
        for (i, a) in ghz.amplitudes().iter().enumerate() {
            let want = if i == 0 || i == 7 {
                std::f64::consts::FRAC_1_SQRT_2
            } else {
                0.0
            };
            assert_eq!(*a, c(want));
        }
        let w = PureState::named(Family::W, 4).unwrap();
        for (i, a) in w.amplitudes().iter().enumerate() {
            let want = if [1, 2, 4, 8].contains(&i) { 0.5 } else { 0.0 };
            assert_eq!(*a, c(want));
        }
        let prod = PureState::named(Family::BasisProduct, 2).unwrap();
        assert_eq!(prod.amplitudes(), &[c(1.0), c(0.0), c(0.0), c(0.0)]);
        for fam in [Family::Ghz, Family::W] {
            for n in 2..6 {
                let psi = PureState::named(fam, n).unwrap();
                assert!(psi.amplitudes().iter().all(|a| a.im == 0.0 && a.re >= 0.0));
                assert!((psi.norm() - 1.0).abs() < NORM_TOL);
            }
        }
    }

    #[test]
    fn random_pure_is_deterministic_and_normalized() {
        let a = PureState::random(3, 42).unwrap();
        let b = PureState::random(3, 42).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, PureState::random(3, 43).unwrap());
        for seed in 0..20 {
            assert!((PureState::random(2, seed).unwrap().norm() - 1.0).abs() < NORM_TOL);
        }
    }

    #[test]
    fn random_mixed_obeys_invariants() {
        for m in 1..=3 {
            for rank in 1..=(1 << m) {
                let rho = MixedState::random(m, rank, 11 * rank as u64 + m as u64).unwrap();
                let checked = MixedState::from_matrix(m, rho.matrix().clone()).unwrap();
                assert!((checked.trace().re - 1.0).abs() < DENSITY_TOL);
                assert!(rho.eigenvalues()[0] >= -DENSITY_TOL);
                // numerical rank never exceeds the environment dimension
                let nonzero = rho.eigenvalues().iter().filter(|&&e| e > 1e-9).count();
                assert!(nonzero <= rank);
            }
        }
        assert_eq!(
            MixedState::random(2, 3, 5).unwrap(),
            MixedState::random(2, 3, 5).unwrap()
        );
        assert!(matches!(MixedState::random(2, 0, 1), Err(Error::InvalidRank { .. })));
        assert!(matches!(MixedState::random(2, 5, 1), Err(Error::InvalidRank { .. })));
    }

    #[test]
    fn density_of_pure_states() {
        let zero = PureState::basis(1, 0).unwrap().density();
        assert_eq!(
            zero.matrix(),
            &DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(0.0)])
        );

        let bell = PureState::named(Family::BellPhiPlus, 2).unwrap().density();
        for i in 0..4 {
            for j in 0..4 {
                let corner = (i == 0 || i == 3) && (j == 0 || j == 3);
                let want = if corner { 0.5 } else { 0.0 };
                assert!((bell.matrix()[(i, j)] - c(want)).norm() < 1e-15);
            }
        }
        let rnd = PureState::random(4, 9).unwrap().density();
        assert!((rnd.trace().re - 1.0).abs() < NORM_TOL);
    }

    #[test]
    fn density_validation_errors() {
        let bad_trace = DMatrix::from_diagonal_element(2, 2, c(0.6));
        assert!(matches!(
            MixedState::from_matrix(1, bad_trace),
            Err(Error::BadTrace { .. })
        ));

        let not_psd = DMatrix::from_row_slice(2, 2, &[c(1.5), c(0.0), c(0.0), c(-0.5)]);
        assert!(matches!(
            MixedState::from_matrix(1, not_psd),
            Err(Error::NotPositive { .. })
        ));

        let not_herm = DMatrix::from_row_slice(
            2,
            2,
            &[c(0.5), Complex64::new(0.1, 0.1), Complex64::new(0.1, 0.1), c(0.5)],
        );
        assert!(matches!(
            MixedState::from_matrix(1, not_herm),
            Err(Error::NotHermitian { .. })
        ));

        let wrong_shape = DMatrix::from_diagonal_element(3, 3, c(1.0 / 3.0));
        assert!(matches!(
            MixedState::from_matrix(1, wrong_shape),
            Err(Error::BadMatrixShape { .. })
        ));
    }

    #[test]
    fn json_round_trip_is_exact() {
        let psi = PureState::random(3, 1).unwrap();
        assert_eq!(PureState::from_json(&psi.to_json().unwrap()).unwrap(), psi);

        let rho = MixedState::random(2, 3, 4).unwrap();
        assert_eq!(MixedState::from_json(&rho.to_json().unwrap()).unwrap(), rho);
    }

    #[test]
    fn json_schema_fields() {
        let psi = PureState::basis(1, 1).unwrap();
        assert_eq!(
            psi.to_json().unwrap(),
            r#"{"kind":"pure","n":1,"amplitudes":[[0,0],[1,0]]}"#
        );
        let rho = MixedState::maximally_mixed(1).unwrap();
        assert_eq!(
            rho.to_json().unwrap(),
            r#"{"kind":"mixed","m":1,"matrix":[[[0.5,0],[0,0]],[[0,0],[0.5,0]]]}"#
        );
    }
}
