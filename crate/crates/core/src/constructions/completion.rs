use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::coding::{decode_formula, encode_formula};
use crate::proofs::{q_conj_code, search_bounded};
use crate::semantics::{Budget, Evaluator, Verdict};
use crate::syntax::{numeral, Formula, Term};
use crate::theories::{Axioms, TheoryDescriptor, CODE_VAR};

/// `SentList(x, u) = (Sent(u) & x = u) | (~Sent(u) & x = ⌜0 = 0⌝)`.
pub fn sent_list_formula() -> Formula {
    sent_list_at(Term::var(CODE_VAR), Term::var("u"))
}

fn sent_list_at(x: Term, u: Term) -> Formula {
    let sent = Formula::pred("Sent", vec![u.clone()]);
    Formula::or(
        Formula::and(sent.clone(), Formula::eq(x.clone(), u)),
        Formula::and(Formula::not(sent), Formula::eq(x, numeral(&encode_formula(&Formula::verum())))),
    )
}

/// Decides whether a sentence may be added to a theory.
pub trait Oracle {
    /// `False` means the extension was judged inconsistent; any other
    /// verdict lets the sentence in. `Err` aborts the completion.
    fn judge(&self, theory: &[Formula], phi: &Formula) -> Result<Verdict, String>;
}

/// Adds a sentence unless it evaluates to `False` in the standard model.
#[derive(Clone, Copy, Debug)]
pub struct EvalOracle {
    pub budget: Budget,
}

impl Oracle for EvalOracle {
    fn judge(&self, _theory: &[Formula], phi: &Formula) -> Result<Verdict, String> {
        let registry = crate::syntax::SymbolRegistry::builtin();
        Evaluator::new(&registry, self.budget).eval(phi).map_err(|e| e.to_string())
    }
}

/// Adds a sentence unless a bounded search refutes it from the theory.
#[derive(Clone, Copy, Debug)]
pub struct SearchOracle {
    pub budget: Budget,
}

impl Oracle for SearchOracle {
    fn judge(&self, theory: &[Formula], phi: &Formula) -> Result<Verdict, String> {
        let refuted = search_bounded(theory, &Formula::not(phi.clone()), &self.budget).is_some();
        Ok(if refuted { Verdict::False } else { Verdict::Unknown })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Added,
    Negated,
}

#[derive(Clone, Debug)]
pub struct CompletionStep {
    /// Position of the sentence in the code enumeration.
    pub u: BigUint,
    pub sentence: Formula,
    pub decision: Decision,
    pub verdict: Verdict,
}

impl CompletionStep {
    /// The sentence that went into the theory.
    pub fn chosen(&self) -> Formula {
        match self.decision {
            Decision::Added => self.sentence.clone(),
            Decision::Negated => Formula::not(self.sentence.clone()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CompletionTrace {
    pub base: TheoryDescriptor,
    pub steps: Vec<CompletionStep>,
    /// Index and message of an oracle failure that ended the trace early.
    pub aborted: Option<(BigUint, String)>,
    pub final_theory: TheoryDescriptor,
}

impl CompletionTrace {
    /// Sentences added on top of the base theory after `k` steps.
    pub fn added_after(&self, k: usize) -> Vec<Formula> {
        self.steps[..k].iter().map(CompletionStep::chosen).collect()
    }
}

/// Runs `steps` stages of the Lindenbaum construction over the sentence
/// codes in ascending order, starting at `⌜0 = 0⌝`. Codes that are not
/// sentences are skipped, so every stage decides a new sentence.
pub fn lindenbaum_complete(s: &TheoryDescriptor, oracle: &dyn Oracle, steps: usize) -> CompletionTrace {
    let base_axioms: Vec<Formula> = s.axiom_list().map(<[Formula]>::to_vec).unwrap_or_default();
    let mut theory = base_axioms.clone();
    let mut trace = Vec::new();
    let mut aborted = None;
    let mut u = encode_formula(&Formula::verum());
    while trace.len() < steps {
        if let Some(phi) = decode_formula(&u).filter(Formula::is_sentence) {
            match oracle.judge(&theory, &phi) {
                Ok(verdict) => {
                    let decision = if verdict == Verdict::False { Decision::Negated } else { Decision::Added };
                    let step = CompletionStep { u: u.clone(), sentence: phi, decision, verdict };
                    theory.push(step.chosen());
                    trace.push(step);
                }
                Err(message) => {
                    aborted = Some((u.clone(), message));
                    break;
                }
            }
        }
        u += BigUint::one();
    }
    let added: Vec<Formula> = trace.iter().map(CompletionStep::chosen).collect();
    let name = format!("{}_star", s.name);
    let final_theory = match &s.axioms {
        Axioms::Finite(_) => TheoryDescriptor::finite(&name, theory),
        Axioms::Defined(_) => {
            let listed = added
                .iter()
                .map(|a| Formula::eq(Term::var(CODE_VAR), numeral(&encode_formula(a))))
                .fold(s.ax_atom(Term::var(CODE_VAR)), Formula::or);
            TheoryDescriptor::defined(&name, listed, s.registry())
        }
    }
    .expect("decided sentences are sentences");
    CompletionTrace { base: s.clone(), steps: trace, aborted, final_theory }
}

/// Code of the conjunction standing for the base theory: the conjunction
/// of a finite axiom list, otherwise that of Q.
fn base_code(s: &TheoryDescriptor) -> BigUint {
    match s.axiom_list().and_then(|l| Formula::conj(l.iter().cloned())) {
        Some(c) => encode_formula(&c),
        None => q_conj_code(),
    }
}

fn and_c(a: Term, b: Term) -> Term {
    Term::fun("AndC", vec![a, b])
}

/// `Con'(S + <y|u> + z)`: no proof of `q & [t &] v & z -> ~(0 = 0)` where
/// `v` is the conjunction of the first `u` entries of `y`. For `n > 0` the
/// conjunct `t` ranges over true Pi(n) sentences.
pub fn con_prime_formula(s: &TheoryDescriptor, n: u32) -> Formula {
    let q = numeral(&base_code(s));
    let v = || Term::var("v");
    let prefix = Term::fun("Prefix", vec![Term::var("y"), Term::var("u")]);
    let conjseq = Formula::pred("ConjSeq", vec![v(), prefix]);
    let bot = numeral(&encode_formula(&Formula::falsum()));
    let (hyp, premises) = if n == 0 {
        (conjseq, and_c(and_c(q, v()), Term::var("z")))
    } else {
        let truth = Formula::pred(&format!("TruePi[{n}]"), vec![Term::var("t")]);
        (Formula::and(truth, conjseq), and_c(and_c(and_c(q, Term::var("t")), v()), Term::var("z")))
    };
    let chk = Formula::pred("ProofChk", vec![Term::var("w"), Term::fun("ImpC", vec![premises, bot])]);
    let body = Formula::forall("v", Formula::forall("w", Formula::implies(hyp, Formula::not(chk))));
    if n == 0 {
        body
    } else {
        Formula::forall("t", body)
    }
}

/// `Axioms_{T*}(x)`: some sequence `y` of sentences ends in `x`, and its
/// entry `u` is the `u`-th sentence when that is consistent with `S` and
/// the earlier entries, and its negation otherwise. Returned together with
/// the `Con'` formula it uses.
pub fn axioms_star_formula(s: &TheoryDescriptor, n: u32) -> (Formula, Formula) {
    let con = con_prime_formula(s, n);
    let (y, u, z) = (|| Term::var("y"), || Term::var("u"), || Term::var("z"));
    let len = || Term::fun("Len", vec![y()]);
    let at = |i: Term| Term::fun("At", vec![y(), i]);
    let last = Formula::bexists(
        "l",
        len(),
        Formula::and(
            Formula::eq(len(), Term::succ(Term::var("l"))),
            Formula::eq(at(Term::var("l")), Term::var(CODE_VAR)),
        ),
    );
    let all_sent = Formula::bforall_lt("u", len(), Formula::pred("Sent", vec![at(u())]));
    let list = || sent_list_at(z(), u());
    let rule = Formula::and(
        Formula::implies(Formula::and(list(), con.clone()), Formula::eq(at(u()), z())),
        Formula::implies(
            Formula::and(list(), Formula::not(con.clone())),
            Formula::eq(at(u()), Term::fun("NegC", vec![z()])),
        ),
    );
    let rules = Formula::bforall_lt("u", len(), Formula::bforall("z", y(), rule));
    let body = Formula::and(Formula::and(Formula::and(Formula::pred("Seq", vec![y()]), last), all_sent), rules);
    (Formula::exists("y", body), con)
}
