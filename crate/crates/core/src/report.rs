//! Everything computed for a single pure state, in one serializable bundle.

use serde::Serialize;

use crate::error::Result;
use crate::identities::{Identity, IdentityReport, PureChecker, Tolerances};
use crate::measures::{concurrence_sq_2q, n_tangle, tau_linear_entropy, InfoEntry};
use crate::state::{PureState, StateDocument};
use crate::subset::QubitSet;

#[derive(Clone, Debug, Serialize)]
pub struct SingleTau {
    pub qubit: usize,
    pub tau: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairTau {
    pub pair: [usize; 2],
    pub tau: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct InfoSection {
    pub n: usize,
    pub entries: Vec<InfoEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StateReport {
    pub source: String,
    pub n: usize,
    pub info: InfoSection,
    pub local: f64,
    pub nonlocal: f64,
    pub total: f64,
    pub tau_single: Vec<SingleTau>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub tau_pair: Vec<PairTau>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_tangle: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub concurrence_sq: Option<f64>,
    pub identities: Vec<IdentityReport>,
    pub passed: bool,
    pub state: StateDocument,
}

impl StateReport {
    /// Fast-path table, every linear entropy, the n-tangle for even `n`,
    /// and every selected pure-state relation that applies.
    pub fn compute(psi: &PureState, source: &str, selected: &[Identity], tol: Tolerances) -> Result<Self> {
        let n = psi.num_qubits();
        let checker = PureChecker::new(psi, tol)?;
        let table = checker.table();

        let tau_single = if n >= 2 {
            (1..=n)
                .map(|k| {
                    Ok(SingleTau {
                        qubit: k,
                        tau: tau_linear_entropy(psi, QubitSet::single(k))?,
                    })
                })
                .collect::<Result<_>>()?
        } else {
            Vec::new()
        };
        let mut tau_pair = Vec::new();
        if n >= 4 {
            for m in 1..=n {
                for l in (m + 1)..=n {
                    tau_pair.push(PairTau {
                        pair: [m, l],
                        tau: tau_linear_entropy(psi, QubitSet::from_qubits(n, &[m, l])?)?,
                    });
                }
            }
        }

        let mut identities = Vec::new();
        for &id in selected {
            for mut r in checker.reports_for(id)? {
                r.context.state = Some(source.to_string());
                identities.push(r);
            }
        }
        let passed = identities.iter().all(|r| r.passed);

        Ok(StateReport {
            source: source.to_string(),
            n,
            info: InfoSection {
                n,
                entries: table.entries().collect(),
            },
            local: table.local(),
            nonlocal: table.nonlocal(),
            total: table.total(),
            tau_single,
            tau_pair,
            n_tangle: if n.is_multiple_of(2) {
                Some(n_tangle(psi)?)
            } else {
                None
            },
            concurrence_sq: if n == 2 { Some(concurrence_sq_2q(psi)?) } else { None },
            identities,
            passed,
            state: psi.to_document(),
        })
    }
}
