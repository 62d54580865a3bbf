use serde::Serialize;

use super::ConstructionError;
use crate::hierarchy::{classify_with, nnf, Level};
use crate::proofs::{check_from, search_bounded, Proof, Scheme, Step};
use crate::semantics::Budget;
use crate::syntax::{numeral_u64, substitute, Formula};
use crate::theories::TheoryDescriptor;

/// A provable `E x. psi(x)` whose numeral instances `~psi(k)` are all
/// provable for `k <= witness_bound`.
#[derive(Clone, Debug)]
pub struct Violation {
    pub sentence: Formula,
    pub existence: Proof,
    pub refutations: Vec<(u64, Proof)>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum AuditReport {
    Violation {
        sentence: String,
        refuted_up_to: u64,
        budget: Budget,
        #[serde(skip)]
        detail: Box<Violation>,
    },
    NoViolationFound {
        candidates: usize,
        budget: Budget,
    },
}

impl AuditReport {
    pub fn budget(&self) -> Budget {
        match self {
            AuditReport::Violation { budget, .. } | AuditReport::NoViolationFound { budget, .. } => *budget,
        }
    }

    pub fn violation(&self) -> Option<&Violation> {
        match self {
            AuditReport::Violation { detail, .. } => Some(detail),
            AuditReport::NoViolationFound { .. } => None,
        }
    }
}

/// Looks for a witness against n-consistency among the axioms of a finite
/// theory: an axiom `E x. psi(x)` with `psi` in Pi(n-1) such that every
/// instance `~psi(k)`, `k <= witness_bound`, has a bounded proof. Absence
/// of a violation is not a certificate of n-consistency.
pub fn n_consistency_audit(t: &TheoryDescriptor, n: u32, budget: Budget) -> AuditReport {
    let axioms = t.axiom_list().unwrap_or_default();
    let inner_level = Level::pi(n.saturating_sub(1));
    let candidates: Vec<&Formula> = axioms
        .iter()
        .filter(|a| match nnf(a) {
            Formula::Exists(_, body) => {
                n > 0 && classify_with(&body, t.registry()).is_ok_and(|c| c.within(inner_level))
            }
            _ => false,
        })
        .collect();
    for sentence in &candidates {
        let Formula::Exists(v, psi) = nnf(sentence) else {
            continue;
        };
        let Some(existence) = search_bounded(axioms, sentence, &budget) else {
            continue;
        };
        let mut refutations = Vec::new();
        for k in 0..=budget.witness_bound {
            let goal = Formula::not(substitute(&psi, &v, &numeral_u64(k)));
            match search_bounded(axioms, &goal, &budget) {
                Some(p) => refutations.push((k, p)),
                None => break,
            }
        }
        if refutations.len() as u64 == budget.witness_bound + 1 {
            let detail = Violation { sentence: (*sentence).clone(), existence, refutations };
            return AuditReport::Violation {
                sentence: sentence.to_string(),
                refuted_up_to: budget.witness_bound,
                budget,
                detail: Box::new(detail),
            };
        }
    }
    AuditReport::NoViolationFound { candidates: candidates.len(), budget }
}

impl Violation {
    /// Whether every cited proof passes the checker against `premises`.
    pub fn replays(&self, premises: &[Formula]) -> bool {
        let Formula::Exists(v, psi) = nnf(&self.sentence) else {
            return false;
        };
        check_from(&self.existence, premises, &self.sentence)
            && self
                .refutations
                .iter()
                .all(|(k, p)| check_from(p, premises, &Formula::not(substitute(&psi, &v, &numeral_u64(*k)))))
    }
}

/// Proves `E x1 ... E xk. theta` from the axioms of `t` by finding a proof
/// of `theta(n1, ..., nk)` and introducing the existentials. `None` when the
/// instance has no proof within the budget.
pub fn sigma_lift_witness(
    t: &TheoryDescriptor,
    sigma: &Formula,
    witnesses: &[u64],
    budget: &Budget,
) -> Result<Option<Proof>, ConstructionError> {
    let mut chain = vec![sigma.clone()];
    let mut cur = sigma.clone();
    for &w in witnesses {
        let Formula::Exists(v, body) = cur else {
            return Err(ConstructionError::Precondition(format!(
                "{} witnesses given but the sentence has fewer leading existentials",
                witnesses.len()
            )));
        };
        cur = substitute(&body, &v, &numeral_u64(w));
        chain.push(cur.clone());
    }
    if matches!(cur, Formula::Exists(..)) {
        return Err(ConstructionError::Precondition(format!(
            "{} witnesses given but the sentence has more leading existentials",
            witnesses.len()
        )));
    }
    let premises = t.axiom_list().unwrap_or_default();
    let Some(instance) = search_bounded(premises, &cur, budget) else {
        return Ok(None);
    };
    let mut steps = instance.steps;
    for pair in chain.windows(2).rev() {
        let (outer, inner) = (&pair[0], &pair[1]);
        let last = steps.len() - 1;
        steps.push(Step::Axiom(Scheme::ExistsIntro, Formula::implies(inner.clone(), outer.clone())));
        steps.push(Step::Mp(last, last + 1));
    }
    let proof = Proof::new(steps);
    debug_assert!(check_from(&proof, premises, sigma));
    Ok(check_from(&proof, premises, sigma).then_some(proof))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proofs::q_axioms;
    use crate::syntax::parse;

    #[test]
    fn lift_examples() {
        let q = TheoryDescriptor::q();
        let b = Budget::with_witness_bound(10);
        let sigma = parse("E x. x + x = S(S(0))").unwrap();
        assert!(sigma_lift_witness(&q, &sigma, &[1], &b).unwrap().is_some());
        assert!(sigma_lift_witness(&q, &sigma, &[0], &b).unwrap().is_none());
        assert!(sigma_lift_witness(&q, &sigma, &[1, 2], &b).is_err());
        let closed = parse("S(0) + S(0) = S(S(0))").unwrap();
        let p = sigma_lift_witness(&q, &closed, &[], &b).unwrap().unwrap();
        assert!(check_from(&p, &q_axioms(), &closed));
    }

    #[test]
    fn audit_examples() {
        let b = Budget::with_witness_bound(8);
        let mut axioms = q_axioms();
        axioms.push(parse("E x. x + x = S(0)").unwrap());
        let t = TheoryDescriptor::finite("bad", axioms.clone()).unwrap();
        let report = n_consistency_audit(&t, 1, b);
        let v = report.violation().expect("violation");
        assert_eq!(v.refutations.len(), 9);
        assert!(v.replays(&axioms));
        let unit = TheoryDescriptor::finite("unit", vec![Formula::verum()]).unwrap();
        assert!(matches!(n_consistency_audit(&unit, 1, b), AuditReport::NoViolationFound { .. }));
        assert_eq!(n_consistency_audit(&unit, 2, b).budget(), b);
    }
}
