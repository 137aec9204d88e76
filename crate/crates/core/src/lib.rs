//! Local/nonlocal information measures, linear entropies and the n-tangle of
//! multi-qubit states, with numerical checkers for the complementarity and
//! monogamy relations they satisfy.

pub mod error;
pub mod identities;
pub mod json;
pub mod measures;
pub mod pauli;
pub mod reduction;
pub mod report;
pub mod state;
pub mod subset;

#[cfg(test)]
mod testing;

pub use error::{Error, Result};
pub use identities::{FuzzConfig, FuzzSummary, Identity, IdentityReport, PureChecker, Tolerances};
pub use measures::InfoTable;
pub use pauli::{Letter, PauliString};
pub use reduction::Reducible;
pub use report::StateReport;
pub use state::{AnyState, Family, MixedState, PureState, StateDocument};
pub use subset::QubitSet;
