//! Local and nonlocal information, linear entropies, n-tangle and concurrence.
//!
//! For a qubit subset `S` let `F_S` be the sum of squared expectations of the
//! `3^|S|` Pauli strings supported exactly on `S`. Then
//!
//! * `I_i = F_i` for a single qubit, and
//! * `I_S = F_S - 1` for `|S| >= 2`.
//!
//! The asymmetry is intentional. Negative `I_S` values are legitimate and are
//! reported without clamping.
//!
//! Two evaluation routes exist. [`info_single`]/[`info_subset`] enumerate
//! Pauli strings directly. [`all_infos_fast`] uses the Bloch identity
//! `sum_{T ⊆ S} F_T = 2^|S| tr(rho_S^2)` (with `F_∅ = 1`) and peels off
//! proper subsets by inclusion–exclusion, which only needs one reduced purity
//! per subset.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{expectation_pure, strings_on_support, PauliString};
use crate::reduction::{partial_trace, purity, subset_purity};
use crate::state::{PureState, MAX_QUBITS};
use crate::subset::QubitSet;

/// `I_S` for every non-empty subset of an `n`-qubit register.
#[derive(Clone, Debug, PartialEq)]
pub struct InfoTable {
    n: usize,
    // indexed by subset mask; slot 0 is unused
    values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InfoEntry {
    pub subset: QubitSet,
    #[serde(rename = "I")]
    pub value: f64,
}

#[derive(Serialize, Deserialize)]
struct InfoTableDocument {
    n: usize,
    entries: Vec<InfoEntry>,
}

impl InfoTable {
    pub(crate) fn from_values(n: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), 1 << n);
        InfoTable { n, values }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// Value for `s`.
    ///
    /// # Panics
    /// If `s` is empty or not inside the register.
    pub fn get(&self, s: QubitSet) -> f64 {
        assert!(
            !s.is_empty() && s.is_subset_of(QubitSet::full(self.n)),
            "subset {s} outside table"
        );
        self.values[s.mask() as usize]
    }

    pub fn len(&self) -> usize {
        self.values.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Entries in canonical order: ascending size, then ascending mask.
    pub fn entries(&self) -> impl Iterator<Item = InfoEntry> + '_ {
        QubitSet::all_nonempty(self.n).into_iter().map(|s| InfoEntry {
            subset: s,
            value: self.get(s),
        })
    }

    /// Sum of `I_S` over the subsets accepted by `pred`, in canonical order.
    pub fn sum_where(&self, pred: impl Fn(QubitSet) -> bool) -> f64 {
        self.entries().filter(|e| pred(e.subset)).map(|e| e.value).sum()
    }

    pub fn local(&self) -> f64 {
        self.sum_where(|s| s.len() == 1)
    }

    pub fn nonlocal(&self) -> f64 {
        self.sum_where(|s| s.len() >= 2)
    }

    pub fn total(&self) -> f64 {
        self.entries().map(|e| e.value).sum()
    }

    /// Largest absolute entrywise difference to another table of the same size.
    pub fn max_abs_diff(&self, other: &InfoTable) -> f64 {
        assert_eq!(self.n, other.n);
        self.values[1..]
            .iter()
            .zip(&other.values[1..])
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Result<String> {
        crate::json::to_string(&self.to_document())
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.to_document()).expect("table serializes")
    }

    fn to_document(&self) -> InfoTableDocument {
        InfoTableDocument {
            n: self.n,
            entries: self.entries().collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: InfoTableDocument = serde_json::from_str(text)?;
        let mut values = vec![f64::NAN; 1 << doc.n];
        for e in doc.entries {
            if e.subset.is_empty() || !e.subset.is_subset_of(QubitSet::full(doc.n)) {
                return Err(Error::Format(format!("subset {} outside register", e.subset)));
            }
            values[e.subset.mask() as usize] = e.value;
        }
        if values[1..].iter().any(|v| v.is_nan()) {
            return Err(Error::Format("incomplete info table".into()));
        }
        values[0] = 0.0;
        Ok(InfoTable { n: doc.n, values })
    }

    /// CSV with header `subset,size,I`; subsets are space-separated qubit labels.
    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["subset", "size", "I"])?;
        for e in self.entries() {
            let label = e.subset.qubits().map(|q| q.to_string()).collect::<Vec<_>>().join(" ");
            w.write_record([label, e.subset.len().to_string(), crate::json::format_sig17(e.value)])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn check_qubit(psi: &PureState, i: usize) -> Result<()> {
    if i == 0 || i > psi.num_qubits() {
        return Err(Error::QubitOutOfRange {
            qubit: i,
            qubits: psi.num_qubits(),
        });
    }
    Ok(())
}

fn squared_expectation_sum(psi: &PureState, s: QubitSet) -> Result<f64> {
    let mut sum = 0.0;
    for p in strings_on_support(psi.num_qubits(), s)? {
        let e = expectation_pure(psi, &p)?;
        sum += e * e;
    }
    Ok(sum)
}

/// `I_i = <X_i>^2 + <Y_i>^2 + <Z_i>^2`.
pub fn info_single(psi: &PureState, i: usize) -> Result<f64> {
    check_qubit(psi, i)?;
    squared_expectation_sum(psi, QubitSet::single(i))
}

/// `I_i` through the reduced purity, `2 tr(rho_i^2) - 1`.
pub fn info_single_via_purity(psi: &PureState, i: usize) -> Result<f64> {
    check_qubit(psi, i)?;
    Ok(2.0 * purity(&partial_trace(psi, QubitSet::single(i))?) - 1.0)
}

/// `I_S = F_S - 1` for `|S| >= 2`, by direct enumeration.
pub fn info_subset(psi: &PureState, s: QubitSet) -> Result<f64> {
    if s.len() < 2 {
        return Err(Error::SubsetTooSmall { min: 2, got: s.len() });
    }
    Ok(squared_expectation_sum(psi, s)? - 1.0)
}

/// Complete table by Pauli enumeration: `4^n` expectations. Used as the
/// reference for [`all_infos_fast`].
pub fn all_infos_enumerated(psi: &PureState) -> Result<InfoTable> {
    let n = psi.num_qubits();
    let mut values = vec![0.0; 1 << n];
    for s in QubitSet::all_nonempty(n) {
        values[s.mask() as usize] = if s.len() == 1 {
            info_single(psi, s.qubits().next().unwrap())?
        } else {
            info_subset(psi, s)?
        };
    }
    Ok(InfoTable::from_values(n, values))
}

/// Complete table from reduced purities and inclusion–exclusion.
pub fn all_infos_fast(psi: &PureState) -> Result<InfoTable> {
    let n = psi.num_qubits();
    if n > MAX_QUBITS {
        return Err(Error::TooManyQubits {
            qubits: n,
            max: MAX_QUBITS,
        });
    }
    // F over every subset including the empty one
    let mut f = vec![0.0; 1 << n];
    f[0] = 1.0;
    for s in QubitSet::all_nonempty(n) {
        let g = (1u64 << s.len()) as f64 * subset_purity(psi, s);
        let lower: f64 = s.proper_subsets().map(|t| f[t.mask() as usize]).sum();
        f[s.mask() as usize] = g - lower;
    }
    let mut values = f;
    values[0] = 0.0;
    for s in QubitSet::all_nonempty(n) {
        if s.len() >= 2 {
            values[s.mask() as usize] -= 1.0;
        }
    }
    Ok(InfoTable::from_values(n, values))
}

/// `I_local = sum_i I_i`.
pub fn local_info(psi: &PureState) -> Result<f64> {
    Ok(all_infos_fast(psi)?.local())
}

/// `I_nonlocal = sum_{|S| >= 2} I_S`.
pub fn nonlocal_info(psi: &PureState) -> Result<f64> {
    Ok(all_infos_fast(psi)?.nonlocal())
}

/// Linear entropy `2 (1 - tr(rho_S^2))` of `S` against the rest.
pub fn tau_linear_entropy(psi: &PureState, s: QubitSet) -> Result<f64> {
    let n = psi.num_qubits();
    if s.is_empty() {
        return Err(Error::EmptySubset);
    }
    if !s.is_subset_of(QubitSet::full(n)) {
        let bad = s.qubits().find(|&q| q > n).unwrap_or(0);
        return Err(Error::QubitOutOfRange { qubit: bad, qubits: n });
    }
    if s == QubitSet::full(n) {
        return Err(Error::FullSubset);
    }
    Ok(2.0 * (1.0 - subset_purity(psi, s)))
}

/// `|<psi| σy^{⊗n} |psi*>|^2`, defined here for even `n` only.
pub fn n_tangle(psi: &PureState) -> Result<f64> {
    let n = psi.num_qubits();
    if !n.is_multiple_of(2) {
        return Err(Error::QubitCount {
            requirement: "an even number of qubits",
            qubits: n,
        });
    }
    let conj: Vec<Complex64> = psi.amplitudes().iter().map(|a| a.conj()).collect();
    let flipped = PauliString::all_y(n).apply_to(&conj);
    let overlap: Complex64 = psi.amplitudes().iter().zip(&flipped).map(|(a, b)| a.conj() * b).sum();
    Ok(overlap.norm_sqr())
}

/// Squared concurrence `4 |a0 a3 - a1 a2|^2` of a two-qubit pure state.
pub fn concurrence_sq_2q(psi: &PureState) -> Result<f64> {
    if psi.num_qubits() != 2 {
        return Err(Error::QubitCount {
            requirement: "exactly 2 qubits",
            qubits: psi.num_qubits(),
        });
    }
    let a = psi.amplitudes();
    Ok(4.0 * (a[0] * a[3] - a[1] * a[2]).norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::Family;
    use crate::testing::{dense_expectation, dense_pauli};

    fn set(n: usize, qs: &[usize]) -> QubitSet {
        QubitSet::from_qubits(n, qs).unwrap()
    }

    fn named(f: Family, n: usize) -> PureState {
        PureState::named(f, n).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    /// Dense reference for `F_S`: `3^|S|` operator matrices, no fast kernels.
    fn dense_f(psi: &PureState, s: QubitSet) -> f64 {
        strings_on_support(psi.num_qubits(), s)
            .unwrap()
            .iter()
            .map(|p| dense_expectation(psi, p).powi(2))
            .sum()
    }

    #[test]
    fn single_qubit_values() {
        close(info_single(&named(Family::W, 3), 1).unwrap(), 1.0 / 9.0, 1e-12);
        close(info_single(&named(Family::Ghz, 4), 2).unwrap(), 0.0, 1e-12);
        close(info_single(&PureState::basis(2, 0).unwrap(), 1).unwrap(), 1.0, 1e-12);
        assert!(matches!(
            info_single(&named(Family::W, 3), 4),
            Err(Error::QubitOutOfRange { qubit: 4, .. })
        ));
        assert!(info_single(&named(Family::W, 3), 0).is_err());
    }

    #[test]
    fn subset_values() {
        close(info_subset(&named(Family::W, 4), set(4, &[1, 2])).unwrap(), -0.5, 1e-12);
        close(
            info_subset(&named(Family::Ghz, 4), set(4, &[1, 2, 3])).unwrap(),
            -1.0,
            1e-12,
        );
        close(
            info_subset(&named(Family::Ghz, 3), set(3, &[1, 2, 3])).unwrap(),
            3.0,
            1e-12,
        );
        for s in [set(4, &[1, 2]), set(4, &[2, 3, 4])] {
            let psi = PureState::random(4, 31).unwrap();
            close(info_subset(&psi, s).unwrap(), dense_f(&psi, s) - 1.0, 1e-13);
        }
        assert!(matches!(
            info_subset(&named(Family::W, 4), set(4, &[1])),
            Err(Error::SubsetTooSmall { .. })
        ));
    }

    #[test]
    fn fast_table_golden_values() {
        let ghz3 = all_infos_fast(&named(Family::Ghz, 3)).unwrap();
        assert_eq!(ghz3.len(), 7);
        for e in ghz3.entries() {
            let want = if e.subset.len() == 3 { 3.0 } else { 0.0 };
            close(e.value, want, 1e-12);
        }
        let w4 = all_infos_fast(&named(Family::W, 4)).unwrap();
        for e in w4.entries().filter(|e| e.subset.len() == 3) {
            close(e.value, 0.75, 1e-12);
        }
    }

    #[test]
    fn fast_matches_enumeration() {
        for n in 1..=5 {
            for seed in 0..3 {
                let psi = PureState::random(n, seed).unwrap();
                let fast = all_infos_fast(&psi).unwrap();
                let slow = all_infos_enumerated(&psi).unwrap();
                assert!(fast.max_abs_diff(&slow) < 1e-9, "n={n} seed={seed}");
            }
        }
    }

    #[test]
    fn local_and_nonlocal() {
        for n in 1..=4 {
            let prod = PureState::basis(n, 0).unwrap();
            close(local_info(&prod).unwrap(), n as f64, 1e-12);
            close(nonlocal_info(&prod).unwrap(), 0.0, 1e-12);
        }
        let bell = named(Family::BellPhiPlus, 2);
        close(local_info(&bell).unwrap(), 0.0, 1e-12);
        close(nonlocal_info(&bell).unwrap(), 2.0, 1e-12);
        let w3 = named(Family::W, 3);
        close(local_info(&w3).unwrap(), 1.0 / 3.0, 1e-12);
        close(nonlocal_info(&w3).unwrap(), 8.0 / 3.0, 1e-12);
    }

    #[test]
    fn linear_entropy() {
        close(
            tau_linear_entropy(&named(Family::BellPhiPlus, 2), set(2, &[1])).unwrap(),
            1.0,
            1e-12,
        );
        let prod = PureState::basis(3, 0).unwrap();
        for s in QubitSet::all_nonempty(3).into_iter().filter(|s| s.len() < 3) {
            close(tau_linear_entropy(&prod, s).unwrap(), 0.0, 1e-12);
        }
        close(
            tau_linear_entropy(&named(Family::W, 3), set(3, &[1])).unwrap(),
            8.0 / 9.0,
            1e-12,
        );
        assert!(matches!(
            tau_linear_entropy(&prod, QubitSet::EMPTY),
            Err(Error::EmptySubset)
        ));
        assert!(matches!(
            tau_linear_entropy(&prod, QubitSet::full(3)),
            Err(Error::FullSubset)
        ));
    }

    #[test]
    fn n_tangle_values() {
        let dense = |psi: &PureState| {
            let y = dense_pauli(&PauliString::all_y(psi.num_qubits()));
            let v = nalgebra::DVector::from_column_slice(psi.amplitudes());
            (v.adjoint() * y * v.conjugate())[(0, 0)].norm_sqr()
        };
        for psi in [
            named(Family::Ghz, 4),
            named(Family::W, 4),
            PureState::basis(4, 0).unwrap(),
        ] {
            close(n_tangle(&psi).unwrap(), dense(&psi), 1e-12);
        }
        close(n_tangle(&named(Family::Ghz, 4)).unwrap(), 1.0, 1e-12);
        close(n_tangle(&named(Family::W, 4)).unwrap(), 0.0, 1e-12);
        close(n_tangle(&PureState::basis(4, 0).unwrap()).unwrap(), 0.0, 1e-12);
        let rnd = PureState::random(6, 3).unwrap();
        close(n_tangle(&rnd).unwrap(), dense(&rnd), 1e-14);
        assert!(matches!(
            n_tangle(&named(Family::Ghz, 3)),
            Err(Error::QubitCount { .. })
        ));
    }

    #[test]
    fn concurrence() {
        let bell = named(Family::BellPhiPlus, 2);
        close(concurrence_sq_2q(&bell).unwrap(), 1.0, 1e-12);
        close(info_subset(&bell, QubitSet::full(2)).unwrap(), 2.0, 1e-12);
        close(concurrence_sq_2q(&PureState::basis(2, 0).unwrap()).unwrap(), 0.0, 0.0);

        let t = std::f64::consts::PI / 8.0;
        let psi = PureState::from_real(2, &[t.cos(), 0.0, 0.0, t.sin()]).unwrap();
        close(concurrence_sq_2q(&psi).unwrap(), 0.5, 1e-12);
        close(info_subset(&psi, QubitSet::full(2)).unwrap(), 1.0, 1e-12);
        assert!(concurrence_sq_2q(&named(Family::W, 3)).is_err());
    }

    #[test]
    fn table_json_and_csv() {
        let table = all_infos_fast(&named(Family::BellPhiPlus, 2)).unwrap();
        let text = table.to_json().unwrap();
        assert!(text.starts_with(r#"{"n":2,"entries":[{"subset":[1],"I":"#), "{text}");
        let back = InfoTable::from_json(&text).unwrap();
        assert_eq!(back, table);

        let mut buf = Vec::new();
        table.write_csv(&mut buf).unwrap();
        let csv = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "subset,size,I");
        assert_eq!(lines.len(), 4);
        assert!(lines[3].starts_with("1 2,2,"));
    }
}
