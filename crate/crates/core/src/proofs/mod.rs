//! Hilbert-style proofs: objects, checker, codec, text format and a bounded
//! goal-directed search.

mod codec;
mod q;
mod schemes;
mod search;
mod text;

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::syntax::{Formula, Var};

pub use codec::{decode_proof, encode_proof, proof_conclusion_code, proofchk_hook};
pub use q::{pa_induction_instance, q_axioms, q_conj, q_conj_code};
pub use schemes::Scheme;
pub use search::{deduction, search_bounded, search_with, SearchLimits};
pub use text::{parse_proof, parse_proof_with, print_proof};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    Axiom(Scheme, Formula),
    Premise(Formula),
    /// `Mp(i, j)`: step `j` is `step_i -> C`; concludes `C`.
    Mp(usize, usize),
    /// `Gen(i, x)`: concludes `A x. step_i`.
    Gen(usize, Var),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Proof {
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum CheckError {
    #[error("empty proof")]
    Empty,
    #[error("step {step}: formula is not an instance of {scheme}")]
    NotAnInstance { step: usize, scheme: String },
    #[error("step {step}: reference to a later step")]
    ForwardReference { step: usize },
    #[error("step {step}: modus ponens on a non-matching implication")]
    BadModusPonens { step: usize },
    #[error("step {step}: generalized variable is free in a premise it depends on")]
    BadGeneralization { step: usize },
    #[error("step {step}: premise not among the allowed premises")]
    UnknownPremise { step: usize },
    #[error("conclusion does not match")]
    WrongConclusion,
}

impl Proof {
    pub fn new(steps: Vec<Step>) -> Proof {
        Proof { steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Premise formulas cited by the proof.
    pub fn premises(&self) -> Vec<&Formula> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                Step::Premise(f) => Some(f),
                _ => None,
            })
            .collect()
    }

    /// Checks every step and returns each step's conclusion.
    pub fn conclusions(&self) -> Result<Vec<Formula>, CheckError> {
        let mut out: Vec<Formula> = Vec::with_capacity(self.steps.len());
        // Premise formulas each step depends on, for the generalization rule.
        let mut deps: Vec<BTreeSet<usize>> = Vec::with_capacity(self.steps.len());
        for (n, step) in self.steps.iter().enumerate() {
            let (f, d) = match step {
                Step::Axiom(s, f) => {
                    if !s.matches(f) {
                        return Err(CheckError::NotAnInstance { step: n, scheme: s.to_string() });
                    }
                    (f.clone(), BTreeSet::new())
                }
                Step::Premise(f) => (f.clone(), BTreeSet::from([n])),
                Step::Mp(i, j) => {
                    if *i >= n || *j >= n {
                        return Err(CheckError::ForwardReference { step: n });
                    }
                    match &out[*j] {
                        Formula::Implies(a, c) if **a == out[*i] => (c.as_ref().clone(), &deps[*i] | &deps[*j]),
                        _ => return Err(CheckError::BadModusPonens { step: n }),
                    }
                }
                Step::Gen(i, x) => {
                    if *i >= n {
                        return Err(CheckError::ForwardReference { step: n });
                    }
                    let bad = deps[*i].iter().any(|&p| match &self.steps[p] {
                        Step::Premise(pf) => pf.is_free(x),
                        _ => false,
                    });
                    if bad {
                        return Err(CheckError::BadGeneralization { step: n });
                    }
                    (Formula::Forall(x.clone(), Box::new(out[*i].clone())), deps[*i].clone())
                }
            };
            out.push(f);
            deps.push(d);
        }
        Ok(out)
    }

    /// Final formula, if every step checks.
    pub fn conclusion(&self) -> Result<Formula, CheckError> {
        self.conclusions()?.pop().ok_or(CheckError::Empty)
    }

    /// Full check against a conclusion and an allowed premise list.
    pub fn verify(&self, premises: Option<&[Formula]>, conclusion: &Formula) -> Result<(), CheckError> {
        if let Some(allowed) = premises {
            for (n, s) in self.steps.iter().enumerate() {
                if let Step::Premise(f) = s {
                    if !allowed.contains(f) {
                        return Err(CheckError::UnknownPremise { step: n });
                    }
                }
            }
        }
        if &self.conclusion()? != conclusion {
            return Err(CheckError::WrongConclusion);
        }
        Ok(())
    }
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_proof(self))
    }
}

/// True iff every step is locally valid and the last step is `conclusion`.
/// Premise steps may cite any formula.
pub fn check(p: &Proof, conclusion: &Formula) -> bool {
    p.verify(None, conclusion).is_ok()
}

/// Like [`check`] but every premise step must cite a member of `premises`.
pub fn check_from(p: &Proof, premises: &[Formula], conclusion: &Formula) -> bool {
    p.verify(Some(premises), conclusion).is_ok()
}
