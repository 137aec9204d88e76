//! Qubit subsets as bitmasks.
//!
//! Bit `i` of a [`QubitSet`] stands for qubit `i + 1`. This is a *set*
//! encoding and is independent of where a qubit lives inside a basis index
//! (see [`crate::state`] for that convention).

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct QubitSet(u32);

impl QubitSet {
    pub const EMPTY: QubitSet = QubitSet(0);

    pub fn from_mask(mask: u32) -> Self {
        QubitSet(mask)
    }

    /// Every qubit of an `n`-qubit register.
    pub fn full(n: usize) -> Self {
        QubitSet(((1u64 << n) - 1) as u32)
    }

    pub fn single(qubit: usize) -> Self {
        debug_assert!(qubit >= 1);
        QubitSet(1 << (qubit - 1))
    }

    /// Builds a set from 1-based qubit labels, checking them against `n`.
    pub fn from_qubits(n: usize, qubits: &[usize]) -> Result<Self> {
        let mut mask = 0u32;
        for &q in qubits {
            if q == 0 || q > n {
                return Err(Error::QubitOutOfRange { qubit: q, qubits: n });
            }
            mask |= 1 << (q - 1);
        }
        Ok(QubitSet(mask))
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, qubit: usize) -> bool {
        (1..=32).contains(&qubit) && self.0 & (1 << (qubit - 1)) != 0
    }

    pub fn is_subset_of(self, other: QubitSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: QubitSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn union(self, other: QubitSet) -> Self {
        QubitSet(self.0 | other.0)
    }

    /// Complement relative to an `n`-qubit register.
    pub fn complement(self, n: usize) -> Self {
        QubitSet(!self.0 & Self::full(n).0)
    }

    /// 1-based qubit labels in ascending order.
    pub fn qubits(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..32).filter(move |i| mask & (1 << i) != 0).map(|i| i + 1)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.qubits().collect()
    }

    /// Proper subsets, including the empty set, in descending mask order.
    pub fn proper_subsets(self) -> impl Iterator<Item = QubitSet> {
        let full = self.0;
        let mut cur = if full == 0 { None } else { Some(full) };
        std::iter::from_fn(move || {
            let sub = cur?.wrapping_sub(1) & full;
            cur = if sub == 0 { None } else { Some(sub) };
            Some(QubitSet(sub))
        })
    }

    /// All non-empty subsets of an `n`-qubit register in canonical order:
    /// ascending size, then ascending mask.
    pub fn all_nonempty(n: usize) -> Vec<QubitSet> {
        let mut sets: Vec<QubitSet> = (1..(1u64 << n)).map(|m| QubitSet(m as u32)).collect();
        sets.sort_by_key(|s| (s.len(), s.0));
        sets
    }
}

impl fmt::Debug for QubitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, q) in self.qubits().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{q}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for QubitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for QubitSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.qubits())
    }
}

impl<'de> Deserialize<'de> for QubitSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let qubits = Vec::<usize>::deserialize(deserializer)?;
        let mut mask = 0u32;
        for q in qubits {
            if q == 0 || q > 32 {
                return Err(serde::de::Error::custom(format!("qubit label {q} out of range")));
            }
            mask |= 1 << (q - 1);
        }
        Ok(QubitSet(mask))
    }
}
