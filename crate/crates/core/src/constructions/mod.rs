//! Sentence and formula constructions: diagonal fixed points, Gödel and
//! Rosser sentences, Craig's transform, Lindenbaum completion and the
//! formulas defining the completed theory, plus finitary audits.

mod audit;
mod completion;
mod craig;
mod diagonal;
mod omega;

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::hierarchy::{HierarchyError, Level, LevelKind};
use crate::syntax::Formula;
use crate::theories::TheoryError;

pub use audit::{n_consistency_audit, sigma_lift_witness, AuditReport, Violation};
pub use completion::{
    axioms_star_formula, con_prime_formula, lindenbaum_complete, sent_list_formula, CompletionStep, CompletionTrace,
    Decision, EvalOracle, Oracle, SearchOracle,
};
pub use craig::{craig_axiom, craig_transform, CraigResult};
pub use diagonal::{
    fixed_point, godel_sentence, rosser_obligation_two_instance, rosser_obligations, rosser_sentence, FixedPointResult,
    Obligation, RosserResult,
};
pub use omega::omega_con_q_formula;

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("expected exactly one free variable, found {0:?}")]
    FreeVariables(Vec<String>),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error(transparent)]
    Hierarchy(#[from] HierarchyError),
}

/// A constructed formula with its computed level and the codes it embeds,
/// as reported by the command-line front end.
#[derive(Clone, Debug, Serialize)]
pub struct Emission {
    pub construction: String,
    pub formula: String,
    pub level_kind: LevelKind,
    pub level_index: u32,
    /// Named codes, as decimal strings.
    pub codes: Vec<(String, String)>,
}

impl Emission {
    pub fn new(construction: &str, formula: &Formula, level: Level, codes: Vec<(&str, &BigUint)>) -> Emission {
        let level = level.normalized();
        Emission {
            construction: construction.to_string(),
            formula: formula.to_string(),
            level_kind: level.kind,
            level_index: level.index,
            codes: codes.into_iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
        }
    }
}
