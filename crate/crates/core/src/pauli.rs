//! Pauli strings and their expectation values.
//!
//! Internally a string is stored as an (x-mask, z-mask) pair over basis-index
//! bits together with the number of `Y` letters, using `Y = i·X·Z`:
//!
//! ```text
//! P|j> = i^{#Y} · (-1)^{popcount(j & z)} · |j ^ x>
//! ```
//!
//! so `Y|0> = i|1>` and `Y|1> = -i|0>`. Expectations never build a dense
//! operator.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{qubit_bit, MixedState, PureState};
use crate::subset::QubitSet;

/// Largest imaginary residue tolerated in an expectation value.
pub const IMAG_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub const NON_IDENTITY: [Letter; 3] = [Letter::X, Letter::Y, Letter::Z];

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }
}

impl TryFrom<char> for Letter {
    type Error = Error;

    fn try_from(c: char) -> Result<Self> {
        match c.to_ascii_uppercase() {
            'I' => Ok(Letter::I),
            'X' => Ok(Letter::X),
            'Y' => Ok(Letter::Y),
            'Z' => Ok(Letter::Z),
            other => Err(Error::InvalidPauliLetter(other)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    letters: Vec<Letter>,
    support: QubitSet,
    x_mask: usize,
    z_mask: usize,
    y_count: u32,
}

impl PauliString {
    /// `letters[0]` acts on qubit 1.
    pub fn new(letters: Vec<Letter>) -> Self {
        let n = letters.len();
        let mut support = 0u32;
        let (mut x_mask, mut z_mask, mut y_count) = (0usize, 0usize, 0u32);
        for (i, &l) in letters.iter().enumerate() {
            let bit = qubit_bit(n, i + 1);
            if l != Letter::I {
                support |= 1 << i;
            }
            match l {
                Letter::I => {}
                Letter::X => x_mask |= bit,
                Letter::Z => z_mask |= bit,
                Letter::Y => {
                    x_mask |= bit;
                    z_mask |= bit;
                    y_count += 1;
                }
            }
        }
        PauliString {
            letters,
            support: QubitSet::from_mask(support),
            x_mask,
            z_mask,
            y_count,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(vec![Letter::I; n])
    }

    /// String with the given letters on the given qubits and identity elsewhere.
    pub fn with_letters(n: usize, placed: &[(usize, Letter)]) -> Result<Self> {
        let mut letters = vec![Letter::I; n];
        for &(q, l) in placed {
            if q == 0 || q > n {
                return Err(Error::QubitOutOfRange { qubit: q, qubits: n });
            }
            letters[q - 1] = l;
        }
        Ok(Self::new(letters))
    }

    /// `Y` on every qubit.
    pub fn all_y(n: usize) -> Self {
        Self::new(vec![Letter::Y; n])
    }

    pub fn num_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn support(&self) -> QubitSet {
        self.support
    }

    #[inline]
    fn global_phase(&self) -> Complex64 {
        match self.y_count % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    #[inline]
    fn sign(&self, index: usize) -> f64 {
        if (index & self.z_mask).count_ones() & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    fn check_dims(&self, qubits: usize) -> Result<()> {
        if self.num_qubits() != qubits {
            return Err(Error::DimensionMismatch {
                operator: self.num_qubits(),
                state: qubits,
            });
        }
        Ok(())
    }

    /// `P|v>` for a raw amplitude vector of matching dimension.
    pub fn apply_to(&self, amps: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(amps.len(), 1 << self.num_qubits());
        let phase = self.global_phase();
        let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
        for (j, a) in amps.iter().enumerate() {
            out[j ^ self.x_mask] = a * phase * self.sign(j);
        }
        out
    }

    /// Raw `<v|P|v>` without any realness assertion.
    pub(crate) fn inner_expectation(&self, amps: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, a) in amps.iter().enumerate() {
            acc += amps[j ^ self.x_mask].conj() * a * self.sign(j);
        }
        acc * self.global_phase()
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// `"XIYZ"` is X on qubit 1, I on 2, Y on 3, Z on 4.
    fn from_str(s: &str) -> Result<Self> {
        let letters = s.chars().map(Letter::try_from).collect::<Result<Vec<_>>>()?;
        Ok(Self::new(letters))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

/// `P|psi>`. The result has unit norm but is only a phase away from a state
/// when `psi` is an eigenvector, so it is returned as a raw vector.
pub fn apply_pure(p: &PauliString, psi: &PureState) -> Result<Vec<Complex64>> {
    p.check_dims(psi.num_qubits())?;
    Ok(p.apply_to(psi.amplitudes()))
}

/// `<psi|P|psi>`.
pub fn expectation_pure(psi: &PureState, p: &PauliString) -> Result<f64> {
    p.check_dims(psi.num_qubits())?;
    let value = p.inner_expectation(psi.amplitudes());
    assert!(value.im.abs() < IMAG_TOL, "non-real Pauli expectation {value}");
    Ok(value.re)
}

/// `tr(rho P)`.
pub fn expectation_mixed(rho: &MixedState, p: &PauliString) -> Result<f64> {
    p.check_dims(rho.num_qubits())?;
    let m = rho.matrix();
    // tr(rho P) = sum_j rho[j, j^x] * phase(j)
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..rho.dim() {
        acc += m[(j, j ^ p.x_mask)] * p.sign(j);
    }
    let value = acc * p.global_phase();
    assert!(value.im.abs() < IMAG_TOL, "non-real Pauli expectation {value}");
    Ok(value.re)
}

/// Every string whose support is exactly `s`: `3^|s|` of them, lexicographic
/// over (qubit, letter) with `X < Y < Z`, the lowest qubit varying slowest.
pub fn strings_on_support(n: usize, s: QubitSet) -> Result<Vec<PauliString>> {
    if s.is_empty() {
        return Err(Error::EmptySubset);
    }
    if !s.is_subset_of(QubitSet::full(n)) {
        let bad = s.qubits().find(|&q| q > n).unwrap_or(0);
        return Err(Error::QubitOutOfRange { qubit: bad, qubits: n });
    }
    let qubits = s.to_vec();
    let k = qubits.len();
    let count = 3usize.pow(k as u32);
    let mut out = Vec::with_capacity(count);
    for code in 0..count {
        let mut letters = vec![Letter::I; n];
        let mut rem = code;
        for &q in qubits.iter().rev() {
            letters[q - 1] = Letter::NON_IDENTITY[rem % 3];
            rem /= 3;
        }
        out.push(PauliString::new(letters));
    }
    Ok(out)
}
