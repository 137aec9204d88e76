//! Residual and margin checkers for the complementarity and monogamy
//! relations, plus a seeded fuzz driver that hunts for counterexamples.
//!
//! Pure-state relations (n qubits, `I_S` from an [`InfoTable`], linear
//! entropies `τ` from reduced purities):
//!
//! | identity | relation |
//! |---|---|
//! | complementarity | `Σ_S I_S = n` |
//! | single-partition | `(2^{n-2} + 1) τ_{k|rest} = Σ_{S ∋ k, |S| ≥ 2} I_S` |
//! | pair-partition | `2 (2^{n-4} + 1) τ_{ml|rest} = Σ_{S crossing {m,l}} I_S`, n ≥ 4 |
//! | tangle-relation | `Σ_{i<j} I_ij - Σ_i I_i = 4 (τ_1234 - 1)`, n = 4 |
//! | partition-combination | `5 Σ_k τ_{k|rest} - 4 Σ_{pairs} τ_{pair|rest} = I_1234`, n = 4 |
//!
//! In the pair-partition sum a subset "crosses" `{m,l}` when it meets both
//! the pair and its complement. The combination relation sums over the three
//! bipartitions `{1,2}|{3,4}`, `{1,3}|{2,4}`, `{1,4}|{2,3}`.
//!
//! Mixed-state relations use the spin-flipped matrix `ρ~`:
//!
//! | identity | relation |
//! |---|---|
//! | mixed-pair | `tr ρ1² + tr ρ2² - tr ρ12² = 1 - tr(ρ12 ρ~12)`, with bound `lhs ≤ 1` |
//! | mixed-triple | `tr ρ123² - ½ Σ_pairs (tr ρij² + tr(ρij ρ~ij)) + 3/2 = 1 - tr(ρ123 ρ~123)`, with bound `lhs ≥ 0` |
//! | mixed-total-info | `Σ_S I_S ≤ m` |

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{all_infos_fast, n_tangle, tau_linear_entropy, InfoTable};
use crate::pauli::{expectation_mixed, strings_on_support};
use crate::reduction::{partial_trace, purity, tilde_overlap};
use crate::state::{MixedState, PureState, StateDocument};
use crate::subset::QubitSet;

/// Largest register for which the mixed-state information table is built.
pub const MAX_MIXED_INFO_QUBITS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Identity {
    Complementarity,
    SinglePartition,
    PairPartition,
    TangleRelation,
    PartitionCombination,
    MixedPair,
    MixedTriple,
    MixedTotalInfo,
}

impl Identity {
    pub const ALL: [Identity; 8] = [
        Identity::Complementarity,
        Identity::SinglePartition,
        Identity::PairPartition,
        Identity::TangleRelation,
        Identity::PartitionCombination,
        Identity::MixedPair,
        Identity::MixedTriple,
        Identity::MixedTotalInfo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::Complementarity => "complementarity",
            Identity::SinglePartition => "single-partition",
            Identity::PairPartition => "pair-partition",
            Identity::TangleRelation => "tangle-relation",
            Identity::PartitionCombination => "partition-combination",
            Identity::MixedPair => "mixed-pair",
            Identity::MixedTriple => "mixed-triple",
            Identity::MixedTotalInfo => "mixed-total-info",
        }
    }

    /// Short selector accepted alongside the long name.
    pub fn alias(self) -> &'static str {
        match self {
            Identity::Complementarity => "eq1b",
            Identity::SinglePartition => "eq14",
            Identity::PairPartition => "eq20",
            Identity::TangleRelation => "eq12",
            Identity::PartitionCombination => "eq26",
            Identity::MixedPair => "eq24",
            Identity::MixedTriple => "eq25",
            Identity::MixedTotalInfo => "eq23",
        }
    }

    pub fn is_mixed(self) -> bool {
        matches!(
            self,
            Identity::MixedPair | Identity::MixedTriple | Identity::MixedTotalInfo
        )
    }

    /// Whether the identity is defined for a register of `n` qubits.
    pub fn applies_to(self, n: usize) -> bool {
        match self {
            Identity::Complementarity => n >= 1,
            Identity::SinglePartition => n >= 2,
            Identity::PairPartition => n >= 4,
            Identity::TangleRelation | Identity::PartitionCombination => n == 4,
            Identity::MixedPair => n == 2,
            Identity::MixedTriple => n == 3,
            Identity::MixedTotalInfo => (1..=MAX_MIXED_INFO_QUBITS).contains(&n),
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, thiserror::Error)]
#[error("unknown identity `{0}`")]
pub struct UnknownIdentity(pub String);

impl FromStr for Identity {
    type Err = UnknownIdentity;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase();
        Identity::ALL
            .into_iter()
            .find(|id| id.name() == key || id.alias() == key)
            .ok_or_else(|| UnknownIdentity(s.to_string()))
    }
}

/// Parses `"all"` or a comma-separated list of identity names.
pub fn parse_selector(s: &str) -> std::result::Result<Vec<Identity>, UnknownIdentity> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(Identity::ALL.to_vec());
    }
    let mut out: Vec<Identity> = s.split(',').map(str::parse).collect::<std::result::Result<_, _>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    Equality,
    AtMost,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub equality: f64,
    pub inequality: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            equality: 1e-9,
            inequality: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn uniform(tol: f64) -> Self {
        Tolerances {
            equality: tol,
            inequality: tol,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportContext {
    pub n: usize,
    pub relation: Option<Relation>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub qubit: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pair: Option<[usize; 2]>,
    /// Slack of the accompanying inequality; negative means violated.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub state: Option<String>,
}

/// Outcome of evaluating one relation on one state.
///
/// `residual` is always `lhs - rhs`. Equalities pass when
/// `|residual| <= tolerance` and, if a `margin` is attached, the margin is at
/// least `-inequality tolerance`. Pure inequalities pass on the margin alone.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: Identity,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub context: ReportContext,
}

impl IdentityReport {
    fn equality(identity: Identity, lhs: f64, rhs: f64, tol: f64, context: ReportContext) -> Self {
        let residual = lhs - rhs;
        IdentityReport {
            identity,
            lhs,
            rhs,
            residual,
            tolerance: tol,
            passed: residual.abs() <= tol,
            context: ReportContext {
                relation: Some(Relation::Equality),
                ..context
            },
        }
    }

    fn with_margin(mut self, margin: f64, tol: f64) -> Self {
        self.context.margin = Some(margin);
        self.passed &= margin >= -tol;
        self
    }

    fn at_most(identity: Identity, lhs: f64, rhs: f64, tol: f64, context: ReportContext) -> Self {
        let margin = rhs - lhs;
        IdentityReport {
            identity,
            lhs,
            rhs,
            residual: lhs - rhs,
            tolerance: tol,
            passed: margin >= -tol,
            context: ReportContext {
                relation: Some(Relation::AtMost),
                margin: Some(margin),
                ..context
            },
        }
    }

    pub fn relation(&self) -> Relation {
        self.context.relation.unwrap_or(Relation::Equality)
    }

    pub fn margin(&self) -> Option<f64> {
        self.context.margin
    }

    /// `|residual|` for equalities; `None` for pure inequalities.
    pub fn abs_residual(&self) -> Option<f64> {
        match self.relation() {
            Relation::Equality => Some(self.residual.abs()),
            Relation::AtMost => None,
        }
    }

    /// Distance past tolerance, as a multiple of the tolerance. Values above
    /// 1 fail.
    fn severity(&self, tol: Tolerances) -> f64 {
        let eq = self.abs_residual().map_or(0.0, |r| r / tol.equality);
        let ineq = self.margin().map_or(0.0, |m| -m / tol.inequality);
        eq.max(ineq)
    }
}

fn expect_qubits(n: usize, ok: bool, requirement: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::QubitCount { requirement, qubits: n })
    }
}

/// Evaluates the pure-state relations against one precomputed table.
pub struct PureChecker<'a> {
    psi: &'a PureState,
    table: InfoTable,
    tol: Tolerances,
}

impl<'a> PureChecker<'a> {
    /// Builds the table with the fast inclusion–exclusion path.
    pub fn new(psi: &'a PureState, tol: Tolerances) -> Result<Self> {
        Ok(PureChecker {
            psi,
            table: all_infos_fast(psi)?,
            tol,
        })
    }

    /// Uses a caller-supplied table, e.g. from Pauli enumeration.
    pub fn with_table(psi: &'a PureState, table: InfoTable, tol: Tolerances) -> Self {
        assert_eq!(table.num_qubits(), psi.num_qubits());
        PureChecker { psi, table, tol }
    }

    pub fn table(&self) -> &InfoTable {
        &self.table
    }

    fn n(&self) -> usize {
        self.psi.num_qubits()
    }

    fn ctx(&self) -> ReportContext {
        ReportContext {
            n: self.n(),
            ..Default::default()
        }
    }

    pub fn complementarity(&self) -> IdentityReport {
        IdentityReport::equality(
            Identity::Complementarity,
            self.table.total(),
            self.n() as f64,
            self.tol.equality,
            self.ctx(),
        )
    }

    pub fn single_partition(&self, k: usize) -> Result<IdentityReport> {
        let n = self.n();
        expect_qubits(n, n >= 2, "at least 2 qubits")?;
        if k == 0 || k > n {
            return Err(Error::QubitOutOfRange { qubit: k, qubits: n });
        }
        let weight = (1u64 << (n - 2)) as f64 + 1.0;
        let lhs = weight * tau_linear_entropy(self.psi, QubitSet::single(k))?;
        let rhs = self.table.sum_where(|s| s.contains(k) && s.len() >= 2);
        Ok(IdentityReport::equality(
            Identity::SinglePartition,
            lhs,
            rhs,
            self.tol.equality,
            ReportContext {
                qubit: Some(k),
                ..self.ctx()
            },
        ))
    }

    pub fn pair_partition(&self, m: usize, l: usize) -> Result<IdentityReport> {
        let n = self.n();
        expect_qubits(n, n >= 4, "at least 4 qubits")?;
        let pair = QubitSet::from_qubits(n, &[m, l])?;
        if pair.len() != 2 {
            return Err(Error::SubsetTooSmall {
                min: 2,
                got: pair.len(),
            });
        }
        let rest = pair.complement(n);
        let weight = 2.0 * ((1u64 << (n - 4)) as f64 + 1.0);
        let lhs = weight * tau_linear_entropy(self.psi, pair)?;
        let rhs = self.table.sum_where(|s| s.intersects(pair) && s.intersects(rest));
        let [a, b] = [m.min(l), m.max(l)];
        Ok(IdentityReport::equality(
            Identity::PairPartition,
            lhs,
            rhs,
            self.tol.equality,
            ReportContext {
                pair: Some([a, b]),
                ..self.ctx()
            },
        ))
    }

    pub fn tangle_relation(&self) -> Result<IdentityReport> {
        let n = self.n();
        expect_qubits(n, n == 4, "exactly 4 qubits")?;
        let lhs = self.table.sum_where(|s| s.len() == 2) - self.table.local();
        let rhs = 4.0 * (n_tangle(self.psi)? - 1.0);
        Ok(IdentityReport::equality(
            Identity::TangleRelation,
            lhs,
            rhs,
            self.tol.equality,
            self.ctx(),
        ))
    }

    pub fn partition_combination(&self) -> Result<IdentityReport> {
        let n = self.n();
        expect_qubits(n, n == 4, "exactly 4 qubits")?;
        let mut singles = 0.0;
        for k in 1..=4 {
            singles += tau_linear_entropy(self.psi, QubitSet::single(k))?;
        }
        let mut pairs = 0.0;
        for other in 2..=4 {
            pairs += tau_linear_entropy(self.psi, QubitSet::from_qubits(4, &[1, other])?)?;
        }
        let lhs = 5.0 * singles - 4.0 * pairs;
        let rhs = self.table.get(QubitSet::full(4));
        Ok(IdentityReport::equality(
            Identity::PartitionCombination,
            lhs,
            rhs,
            self.tol.equality,
            self.ctx(),
        ))
    }

    /// Every report for `identity`, one per qubit or pair where the relation
    /// is parameterized. Empty when the identity does not apply to this size.
    pub fn reports_for(&self, identity: Identity) -> Result<Vec<IdentityReport>> {
        let n = self.n();
        if identity.is_mixed() || !identity.applies_to(n) {
            return Ok(Vec::new());
        }
        Ok(match identity {
            Identity::Complementarity => vec![self.complementarity()],
            Identity::SinglePartition => (1..=n).map(|k| self.single_partition(k)).collect::<Result<_>>()?,
            Identity::PairPartition => {
                let mut out = Vec::new();
                for m in 1..=n {
                    for l in (m + 1)..=n {
                        out.push(self.pair_partition(m, l)?);
                    }
                }
                out
            }
            Identity::TangleRelation => vec![self.tangle_relation()?],
            Identity::PartitionCombination => vec![self.partition_combination()?],
            _ => unreachable!(),
        })
    }

    /// Every applicable pure-state report in [`Identity::ALL`] order.
    pub fn all_reports(&self) -> Result<Vec<IdentityReport>> {
        let mut out = Vec::new();
        for id in Identity::ALL {
            out.extend(self.reports_for(id)?);
        }
        Ok(out)
    }
}

pub fn residual_complementarity(psi: &PureState) -> Result<IdentityReport> {
    Ok(PureChecker::new(psi, Tolerances::default())?.complementarity())
}

pub fn residual_single_partition(psi: &PureState, k: usize) -> Result<IdentityReport> {
    PureChecker::new(psi, Tolerances::default())?.single_partition(k)
}

pub fn residual_pair_partition(psi: &PureState, m: usize, l: usize) -> Result<IdentityReport> {
    PureChecker::new(psi, Tolerances::default())?.pair_partition(m, l)
}

pub fn residual_tangle_relation_4q(psi: &PureState) -> Result<IdentityReport> {
    PureChecker::new(psi, Tolerances::default())?.tangle_relation()
}

pub fn residual_combination_4q(psi: &PureState) -> Result<IdentityReport> {
    PureChecker::new(psi, Tolerances::default())?.partition_combination()
}

fn reduced_purity(rho: &MixedState, qubits: &[usize]) -> Result<f64> {
    let keep = QubitSet::from_qubits(rho.num_qubits(), qubits)?;
    Ok(purity(&partial_trace(rho, keep)?))
}

fn reduced_tilde(rho: &MixedState, qubits: &[usize]) -> Result<f64> {
    let keep = QubitSet::from_qubits(rho.num_qubits(), qubits)?;
    Ok(tilde_overlap(&partial_trace(rho, keep)?))
}

/// Two-qubit purity relation; the margin is `1 - lhs`.
pub fn residual_mixed_pair(rho: &MixedState, tol: Tolerances) -> Result<IdentityReport> {
    let m = rho.num_qubits();
    expect_qubits(m, m == 2, "exactly 2 qubits")?;
    let lhs = reduced_purity(rho, &[1])? + reduced_purity(rho, &[2])? - purity(rho);
    let rhs = 1.0 - tilde_overlap(rho);
    let ctx = ReportContext {
        n: m,
        ..Default::default()
    };
    Ok(
        IdentityReport::equality(Identity::MixedPair, lhs, rhs, tol.equality, ctx)
            .with_margin(1.0 - lhs, tol.inequality),
    )
}

/// Three-qubit purity relation; the margin is `lhs` itself (nonnegativity).
pub fn residual_mixed_triple(rho: &MixedState, tol: Tolerances) -> Result<IdentityReport> {
    let m = rho.num_qubits();
    expect_qubits(m, m == 3, "exactly 3 qubits")?;
    let mut pair_terms = 0.0;
    for pair in [[1, 2], [1, 3], [2, 3]] {
        pair_terms += reduced_purity(rho, &pair)? + reduced_tilde(rho, &pair)?;
    }
    let lhs = purity(rho) - 0.5 * pair_terms + 1.5;
    let rhs = 1.0 - tilde_overlap(rho);
    let ctx = ReportContext {
        n: m,
        ..Default::default()
    };
    Ok(IdentityReport::equality(Identity::MixedTriple, lhs, rhs, tol.equality, ctx).with_margin(lhs, tol.inequality))
}

/// `I_S` for a density matrix.
///
/// There is no canonical mixed-state definition, so this applies the
/// pure-state formulas verbatim with `tr(ρP)` in place of `<ψ|P|ψ>`:
/// `I_i = F_i` and `I_S = F_S - 1` for `|S| >= 2`. Every mixed-state
/// information value in the crate comes from here.
pub fn mixed_info_table(rho: &MixedState) -> Result<InfoTable> {
    let m = rho.num_qubits();
    if m > MAX_MIXED_INFO_QUBITS {
        return Err(Error::TooManyQubits {
            qubits: m,
            max: MAX_MIXED_INFO_QUBITS,
        });
    }
    let mut values = vec![0.0; 1 << m];
    for s in QubitSet::all_nonempty(m) {
        let mut f = 0.0;
        for p in strings_on_support(m, s)? {
            let e = expectation_mixed(rho, &p)?;
            f += e * e;
        }
        values[s.mask() as usize] = if s.len() == 1 { f } else { f - 1.0 };
    }
    Ok(InfoTable::from_values(m, values))
}

/// `I_total ≤ m` for a density matrix.
pub fn mixed_total_info_margin(rho: &MixedState, tol: Tolerances) -> Result<IdentityReport> {
    let m = rho.num_qubits();
    let total = mixed_info_table(rho)?.total();
    let ctx = ReportContext {
        n: m,
        ..Default::default()
    };
    Ok(IdentityReport::at_most(
        Identity::MixedTotalInfo,
        total,
        m as f64,
        tol.inequality,
        ctx,
    ))
}

/// Every applicable mixed-state report for a density matrix.
pub fn mixed_reports(rho: &MixedState, selected: &[Identity], tol: Tolerances) -> Result<Vec<IdentityReport>> {
    let m = rho.num_qubits();
    let mut out = Vec::new();
    for &id in selected {
        if !id.is_mixed() || !id.applies_to(m) {
            continue;
        }
        out.push(match id {
            Identity::MixedPair => residual_mixed_pair(rho, tol)?,
            Identity::MixedTriple => residual_mixed_triple(rho, tol)?,
            Identity::MixedTotalInfo => mixed_total_info_margin(rho, tol)?,
            _ => unreachable!(),
        });
    }
    Ok(out)
}

/// SplitMix64 finalizer over (base, trial): per-trial seeds that are
/// independent of worker scheduling.
pub fn derive_seed(base: u64, trial: u64) -> u64 {
    let mut z = base ^ trial.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug)]
pub struct FuzzConfig {
    pub identity: Identity,
    /// Qubit count of the sampled states.
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub tol: Tolerances,
    /// Fixed rank for mixed identities; `None` cycles through every rank.
    pub rank: Option<usize>,
    pub parallel: bool,
}

impl FuzzConfig {
    pub fn new(identity: Identity, n: usize, trials: usize, seed: u64) -> Self {
        FuzzConfig {
            identity,
            n,
            trials,
            seed,
            tol: Tolerances::default(),
            rank: None,
            parallel: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzSummary {
    pub identity: Identity,
    pub n: usize,
    pub trials: usize,
    pub checks: usize,
    /// Largest `|lhs - rhs|` over equality checks.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_abs_residual: Option<f64>,
    /// Smallest inequality margin, when the identity carries one.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub min_margin: Option<f64>,
    /// Trial seed attaining the worst score; reproduce with
    /// `PureState::random(n, worst_seed)` or `MixedState::random(n, worst_rank, worst_seed)`.
    pub worst_seed: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub worst_rank: Option<usize>,
    pub worst_context: ReportContext,
    pub failures: usize,
    pub passed: bool,
    /// The worst state, kept only when some check failed.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<StateDocument>,
}

struct TrialOutcome {
    seed: u64,
    rank: Option<usize>,
    reports: Vec<IdentityReport>,
}

fn run_trial(cfg: &FuzzConfig, trial: usize) -> Result<TrialOutcome> {
    let seed = derive_seed(cfg.seed, trial as u64);
    if cfg.identity.is_mixed() {
        let dim = 1usize << cfg.n;
        let rank = cfg.rank.unwrap_or(1 + trial % dim);
        let rho = MixedState::random(cfg.n, rank, seed)?;
        Ok(TrialOutcome {
            seed,
            rank: Some(rank),
            reports: mixed_reports(&rho, &[cfg.identity], cfg.tol)?,
        })
    } else {
        let psi = PureState::random(cfg.n, seed)?;
        let checker = PureChecker::new(&psi, cfg.tol)?;
        Ok(TrialOutcome {
            seed,
            rank: None,
            reports: checker.reports_for(cfg.identity)?,
        })
    }
}

/// Runs `cfg.trials` seeded random states through one checker.
///
/// Trials may run on several threads; the summary depends only on the
/// configuration because outcomes are reduced in trial order.
pub fn fuzz(cfg: &FuzzConfig) -> Result<FuzzSummary> {
    if cfg.trials == 0 {
        return Err(Error::Format("trials must be at least 1".into()));
    }
    if !cfg.identity.applies_to(cfg.n) {
        return Err(Error::QubitCount {
            requirement: "a register size the identity is defined for",
            qubits: cfg.n,
        });
    }
    let outcomes: Vec<TrialOutcome> = if cfg.parallel {
        (0..cfg.trials)
            .into_par_iter()
            .map(|t| run_trial(cfg, t))
            .collect::<Result<_>>()?
    } else {
        (0..cfg.trials).map(|t| run_trial(cfg, t)).collect::<Result<_>>()?
    };

    let mut max_abs_residual: Option<f64> = None;
    let mut min_margin: Option<f64> = None;
    let mut worst: Option<(f64, &TrialOutcome, &IdentityReport)> = None;
    let mut failures = 0;
    let mut checks = 0;
    for outcome in &outcomes {
        for report in &outcome.reports {
            checks += 1;
            if let Some(r) = report.abs_residual() {
                max_abs_residual = Some(max_abs_residual.map_or(r, |m| m.max(r)));
            }
            if let Some(mg) = report.margin() {
                min_margin = Some(min_margin.map_or(mg, |m| m.min(mg)));
            }
            if !report.passed {
                failures += 1;
            }
            let score = report.severity(cfg.tol);
            if worst.as_ref().is_none_or(|(s, _, _)| score > *s) {
                worst = Some((score, outcome, report));
            }
        }
    }
    let (_, worst_outcome, worst_report) = worst.expect("at least one check ran");
    let witness = if failures > 0 {
        Some(match worst_outcome.rank {
            Some(rank) => MixedState::random(cfg.n, rank, worst_outcome.seed)?.to_document(),
            None => PureState::random(cfg.n, worst_outcome.seed)?.to_document(),
        })
    } else {
        None
    };
    let mut worst_context = worst_report.context.clone();
    worst_context.seed = Some(worst_outcome.seed);
    Ok(FuzzSummary {
        identity: cfg.identity,
        n: cfg.n,
        trials: cfg.trials,
        checks,
        max_abs_residual,
        min_margin,
        worst_seed: worst_outcome.seed,
        worst_rank: worst_outcome.rank,
        worst_context,
        failures,
        passed: failures == 0,
        witness,
    })
}
