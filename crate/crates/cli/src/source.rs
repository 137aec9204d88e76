//! State source descriptors: `ghz:4`, `w:3`, `bell`, `product:2`, `random:5`,
//! `maximally-mixed:3`, `random-mixed:2:4`, `file:path.json`.

use std::path::Path;

use monogamy::{AnyState, Family, MixedState, PureState, StateDocument};

use crate::CliError;

fn parse_count(spec: &str, text: &str) -> Result<usize, CliError> {
    text.parse()
        .map_err(|_| CliError::Input(format!("bad qubit count `{text}` in `{spec}`")))
}

fn load_file(path: &str) -> Result<AnyState, CliError> {
    let text =
        std::fs::read_to_string(Path::new(path)).map_err(|e| CliError::Input(format!("cannot read {path}: {e}")))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{path}: {e}")))?;
    // a saved report carries its state under "state"
    let doc_value = match value.get("state") {
        Some(inner) if value.get("kind").is_none() => inner.clone(),
        _ => value,
    };
    let doc: StateDocument = serde_json::from_value(doc_value).map_err(|e| CliError::Input(format!("{path}: {e}")))?;
    doc.into_state().map_err(|e| CliError::Input(format!("{path}: {e}")))
}

fn file_path(spec: &str) -> Option<&str> {
    spec.strip_prefix("file:")
        .or_else(|| spec.ends_with(".json").then_some(spec))
}

/// Resolves a pure-state descriptor. `seed` feeds `random:n`.
pub fn pure_state(spec: &str, seed: u64) -> Result<PureState, CliError> {
    if let Some(path) = file_path(spec) {
        return match load_file(path)? {
            AnyState::Pure(psi) => Ok(psi),
            AnyState::Mixed(_) => Err(CliError::Input(format!(
                "{path} holds a density matrix, not a pure state"
            ))),
        };
    }
    let (family, count) = match spec.split_once(':') {
        Some((f, c)) => (f, Some(c)),
        None => (spec, None),
    };
    if family == "random" {
        let n = parse_count(spec, count.unwrap_or(""))?;
        return Ok(PureState::random(n, seed)?);
    }
    let family: Family = family.parse()?;
    let n = match (family, count) {
        (_, Some(c)) => parse_count(spec, c)?,
        (Family::BellPhiPlus, None) => 2,
        (_, None) => {
            return Err(CliError::Input(format!(
                "`{spec}` needs a qubit count, e.g. `{spec}:3`"
            )))
        }
    };
    Ok(PureState::named(family, n)?)
}

/// Resolves a density-matrix descriptor; pure descriptors are turned into projectors.
pub fn mixed_state(spec: &str, seed: u64) -> Result<MixedState, CliError> {
    if let Some(path) = file_path(spec) {
        return match load_file(path)? {
            AnyState::Mixed(rho) => Ok(rho),
            AnyState::Pure(psi) if psi.num_qubits() <= monogamy::state::MAX_MIXED_QUBITS => Ok(psi.density()),
            AnyState::Pure(psi) => Err(CliError::Input(format!(
                "{path}: {} qubits is too large for a dense density matrix",
                psi.num_qubits()
            ))),
        };
    }
    let mut parts = spec.split(':');
    match parts.next() {
        Some("maximally-mixed") => {
            let m = parse_count(spec, parts.next().unwrap_or(""))?;
            Ok(MixedState::maximally_mixed(m)?)
        }
        Some("random-mixed") => {
            let m = parse_count(spec, parts.next().unwrap_or(""))?;
            let rank = match parts.next() {
                Some(r) => parse_count(spec, r)?,
                None => 1 << m,
            };
            Ok(MixedState::random(m, rank, seed)?)
        }
        _ => {
            let psi = pure_state(spec, seed)?;
            if psi.num_qubits() > monogamy::state::MAX_MIXED_QUBITS {
                return Err(CliError::Input(format!(
                    "`{spec}` is too large for a dense density matrix"
                )));
            }
            Ok(psi.density())
        }
    }
}

/// Parses `4`, `2,3,5` or `2-8`.
pub fn sizes(text: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::Input(format!("bad size list `{text}`"));
    let mut out = Vec::new();
    for part in text.split(',') {
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b): (usize, usize) = (
                    a.trim().parse().map_err(|_| bad())?,
                    b.trim().parse().map_err(|_| bad())?,
                );
                if a > b {
                    return Err(bad());
                }
                out.extend(a..=b);
            }
            None => out.push(part.trim().parse().map_err(|_| bad())?),
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}
