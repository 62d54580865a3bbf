//! Bounded goal-directed proof search.
//!
//! The prover works backwards from the goal: it looks the goal up among
//! known facts, premises and axiom instances, runs closed-arithmetic tactics
//! when the axioms of Q are available, splits the goal by its shape
//! (using the deduction theorem for implications) and finally chains
//! backwards through universally quantified implications among the facts.
//! Every result is re-checked before it is returned.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::ToPrimitive;

use super::schemes::{imp, ALL_SCHEMES};
use super::{q_axioms, Proof, Scheme, Step};
use crate::semantics::Budget;
use crate::syntax::{numeral_u64, substitute, Atom, Formula, Term, Var};

/// Default node limit used by [`search_bounded`].
pub const DEFAULT_SEARCH_NODES: usize = 20_000;

/// Largest value the closed-arithmetic tactics will compute with.
const ARITH_LIMIT: u64 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    /// Maximal nesting of goal decompositions.
    pub depth: usize,
    /// Maximal number of goals visited, over all deepening rounds.
    pub nodes: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { depth: 12, nodes: DEFAULT_SEARCH_NODES }
    }
}

/// Search with the depth bound taken from `budget`.
pub fn search_bounded(premises: &[Formula], goal: &Formula, budget: &Budget) -> Option<Proof> {
    search_with(premises, goal, SearchLimits { depth: budget.depth_bound, nodes: DEFAULT_SEARCH_NODES })
}

/// Iterative deepening up to `limits.depth`. A returned proof always passes
/// [`super::check_from`] against `premises`.
pub fn search_with(premises: &[Formula], goal: &Formula, limits: SearchLimits) -> Option<Proof> {
    let mut nodes = limits.nodes;
    let mut prover = Prover::new(premises.to_vec(), &mut nodes);
    for depth in 0..=limits.depth {
        if let Some(i) = prover.prove(goal, depth) {
            let proof = prover.b.extract(i);
            return super::check_from(&proof, premises, goal).then_some(proof);
        }
        if *prover.nodes == 0 {
            break;
        }
    }
    None
}

/// Deduction theorem: turns a proof of `C` that may cite `hyp` as a premise
/// into a proof of `hyp -> C` that does not. Fails when a generalization
/// that depends on `hyp` binds a variable free in `hyp`.
pub fn deduction(p: &Proof, hyp: &Formula) -> Option<Proof> {
    let concl = p.conclusions().ok()?;
    let mut b = Builder::default();
    let mut map: Vec<Lifted> = Vec::with_capacity(p.steps.len());
    for step in &p.steps {
        let lifted = match step {
            Step::Premise(f) if f == hyp => Lifted::Under(b.identity(hyp)),
            Step::Premise(f) => Lifted::Plain(b.premise(f.clone())),
            Step::Axiom(s, f) => Lifted::Plain(b.axiom(*s, f.clone())),
            Step::Mp(i, j) => match (&map[*i], &map[*j]) {
                (Lifted::Plain(a), Lifted::Plain(c)) => Lifted::Plain(b.mp(*a, *c)?),
                (li, lj) => {
                    let ai = lift(&mut b, li, hyp);
                    let aj = lift(&mut b, lj, hyp);
                    Lifted::Under(b.distribute(ai, aj)?)
                }
            },
            Step::Gen(i, x) => match &map[*i] {
                Lifted::Plain(a) => Lifted::Plain(b.gen(*a, x.clone())?),
                Lifted::Under(a) => {
                    if hyp.is_free(x) {
                        return None;
                    }
                    let g = b.gen(*a, x.clone())?;
                    let body = concl[*i].clone();
                    let dist = Formula::implies(
                        b.formula(g).clone(),
                        Formula::implies(hyp.clone(), Formula::Forall(x.clone(), Box::new(body))),
                    );
                    let d = b.axiom(Scheme::ForallDist, dist);
                    Lifted::Under(b.mp(g, d)?)
                }
            },
        };
        map.push(lifted);
    }
    let last = lift(&mut b, map.last()?, hyp);
    Some(b.extract(last))
}

/// Where an original step lives in the transformed proof: either as itself
/// (it does not depend on the hypothesis) or as `hyp -> step`.
enum Lifted {
    Plain(usize),
    Under(usize),
}

fn lift(b: &mut Builder, l: &Lifted, hyp: &Formula) -> usize {
    match *l {
        Lifted::Plain(i) => b.weaken(i, hyp),
        Lifted::Under(i) => i,
    }
}

/// Proof under construction. Formulas are deduplicated: a formula derived
/// twice keeps the derivation that depends on fewer premises.
#[derive(Default)]
pub(crate) struct Builder {
    steps: Vec<Step>,
    formulas: Vec<Formula>,
    deps: Vec<BTreeSet<usize>>,
    index: HashMap<Formula, usize>,
}

impl Builder {
    pub(crate) fn formula(&self, i: usize) -> &Formula {
        &self.formulas[i]
    }

    pub(crate) fn find(&self, f: &Formula) -> Option<usize> {
        self.index.get(f).copied()
    }

    fn push(&mut self, step: Step, f: Formula, deps: BTreeSet<usize>) -> usize {
        if let Some(&old) = self.index.get(&f) {
            if self.deps[old].is_subset(&deps) {
                return old;
            }
        }
        let i = self.steps.len();
        self.steps.push(step);
        self.formulas.push(f.clone());
        let better = self.index.get(&f).is_none_or(|&old| deps.is_subset(&self.deps[old]));
        self.deps.push(deps);
        if better {
            self.index.insert(f, i);
        }
        i
    }

    pub(crate) fn axiom(&mut self, s: Scheme, f: Formula) -> usize {
        debug_assert!(s.matches(&f), "{s}: {f}");
        self.push(Step::Axiom(s, f.clone()), f, BTreeSet::new())
    }

    pub(crate) fn premise(&mut self, f: Formula) -> usize {
        let i = self.steps.len();
        if let Some(&old) = self.index.get(&f) {
            if self.deps[old].is_empty() || matches!(self.steps[old], Step::Premise(_)) {
                return old;
            }
        }
        self.steps.push(Step::Premise(f.clone()));
        self.formulas.push(f.clone());
        self.deps.push(BTreeSet::from([i]));
        self.index.insert(f, i);
        i
    }

    /// Modus ponens: `j` must conclude `formula(i) -> C`.
    pub(crate) fn mp(&mut self, i: usize, j: usize) -> Option<usize> {
        let c = match &self.formulas[j] {
            Formula::Implies(a, c) if **a == self.formulas[i] => c.as_ref().clone(),
            _ => return None,
        };
        let deps = &self.deps[i] | &self.deps[j];
        Some(self.push(Step::Mp(i, j), c, deps))
    }

    pub(crate) fn gen(&mut self, i: usize, x: Var) -> Option<usize> {
        if self.deps[i].iter().any(|&p| self.formulas[p].is_free(&x)) {
            return None;
        }
        let f = Formula::Forall(x.clone(), Box::new(self.formulas[i].clone()));
        let deps = self.deps[i].clone();
        Some(self.push(Step::Gen(i, x), f, deps))
    }

    /// Applies the axiom `formula(i) -> C` of the given scheme.
    pub(crate) fn apply(&mut self, s: Scheme, i: usize, c: Formula) -> usize {
        let ax = self.axiom(s, Formula::implies(self.formulas[i].clone(), c));
        self.mp(i, ax).expect("antecedent matches")
    }

    /// Applies a two-antecedent axiom `formula(i) -> (formula(j) -> C)`.
    pub(crate) fn apply2(&mut self, s: Scheme, i: usize, j: usize, c: Formula) -> usize {
        let inner = Formula::implies(self.formulas[j].clone(), c);
        let k = self.apply(s, i, inner);
        self.mp(j, k).expect("antecedent matches")
    }

    /// `A -> A` from K and S.
    pub(crate) fn identity(&mut self, a: &Formula) -> usize {
        let aa = Formula::implies(a.clone(), a.clone());
        if let Some(i) = self.find(&aa) {
            return i;
        }
        let a_aa_a = Formula::implies(a.clone(), Formula::implies(aa.clone(), a.clone()));
        let a_aa = Formula::implies(a.clone(), aa.clone());
        let s = Formula::implies(a_aa_a.clone(), Formula::implies(Formula::implies(a.clone(), aa.clone()), aa.clone()));
        let s = self.axiom(Scheme::S, s);
        let k1 = self.axiom(Scheme::K, a_aa_a);
        let m = self.mp(k1, s).expect("S instance");
        let k2 = self.axiom(Scheme::K, a_aa);
        self.mp(k2, m).expect("S instance")
    }

    /// From `C` derives `hyp -> C`.
    pub(crate) fn weaken(&mut self, i: usize, hyp: &Formula) -> usize {
        let c = self.formulas[i].clone();
        self.apply(Scheme::K, i, Formula::implies(hyp.clone(), c))
    }

    /// From `A -> B` (at `ab`) and `A -> (B -> C)` (at `abc`) derives `A -> C`.
    pub(crate) fn distribute(&mut self, ab: usize, abc: usize) -> Option<usize> {
        let (a, b) = imp(&self.formulas[ab]).map(|(a, b)| (a.clone(), b.clone()))?;
        let (a2, bc) = imp(&self.formulas[abc])?;
        let (b2, c) = imp(bc)?;
        if *a2 != a || *b2 != b {
            return None;
        }
        let c = c.clone();
        let ac = Formula::implies(a.clone(), c);
        let s = Formula::implies(self.formulas[abc].clone(), Formula::implies(self.formulas[ab].clone(), ac));
        let s = self.axiom(Scheme::S, s);
        let m = self.mp(abc, s)?;
        self.mp(ab, m)
    }

    /// Instantiates a universal fact `A x. B` at `t`.
    pub(crate) fn instantiate(&mut self, i: usize, t: &Term) -> Option<usize> {
        let Formula::Forall(x, body) = &self.formulas[i] else {
            return None;
        };
        let inst = substitute(body, x, t);
        Some(self.apply(Scheme::ForallElim, i, inst))
    }

    /// Copies a checked proof in, returning the index of its last step.
    pub(crate) fn replay(&mut self, p: &Proof) -> Option<usize> {
        let mut map = Vec::with_capacity(p.steps.len());
        for step in &p.steps {
            let i = match step {
                Step::Axiom(s, f) => self.axiom(*s, f.clone()),
                Step::Premise(f) => self.premise(f.clone()),
                Step::Mp(i, j) => self.mp(map[*i], map[*j])?,
                Step::Gen(i, x) => self.gen(map[*i], x.clone())?,
            };
            map.push(i);
        }
        map.last().copied()
    }

    /// The steps `last` depends on, renumbered into a standalone proof.
    pub(crate) fn extract(&self, last: usize) -> Proof {
        let mut needed = BTreeSet::new();
        let mut stack = vec![last];
        while let Some(i) = stack.pop() {
            if !needed.insert(i) {
                continue;
            }
            match &self.steps[i] {
                Step::Mp(a, b) => stack.extend([*a, *b]),
                Step::Gen(a, _) => stack.push(*a),
                _ => {}
            }
        }
        let renumber: BTreeMap<usize, usize> = needed.iter().enumerate().map(|(n, &i)| (i, n)).collect();
        let steps = needed
            .iter()
            .map(|&i| match &self.steps[i] {
                Step::Mp(a, b) => Step::Mp(renumber[a], renumber[b]),
                Step::Gen(a, x) => Step::Gen(renumber[a], x.clone()),
                s => s.clone(),
            })
            .collect();
        Proof { steps }
    }
}

/// Leading universal variables, antecedents and head of a fact
/// `A x1 ... A xk. (A1 -> ... -> An -> C)`.
struct Rule {
    fact: usize,
    vars: Vec<Var>,
    antecedents: Vec<Formula>,
}

pub(crate) struct Prover<'n> {
    pub(crate) b: Builder,
    premises: Vec<Formula>,
    nodes: &'n mut usize,
    /// Goal -> deepest depth at which it failed.
    failed: HashMap<Formula, usize>,
    facts: Vec<usize>,
    q: Option<QFacts>,
}

/// Step indices of the Q axioms used by the arithmetic tactics.
struct QFacts {
    succ_ne_zero: usize,
    succ_inj: usize,
    add_zero: usize,
    add_succ: usize,
    mul_zero: usize,
    mul_succ: usize,
}

impl<'n> Prover<'n> {
    pub(crate) fn new(premises: Vec<Formula>, nodes: &'n mut usize) -> Self {
        let mut b = Builder::default();
        let mut facts = Vec::new();
        for p in &premises {
            let i = b.premise(p.clone());
            decompose(&mut b, i, 3, &mut facts);
        }
        let qs = q_axioms();
        let q = if qs.iter().all(|a| premises.contains(a)) {
            let mut at = |k: usize| b.premise(qs[k].clone());
            Some(QFacts {
                succ_ne_zero: at(0),
                succ_inj: at(1),
                add_zero: at(3),
                add_succ: at(4),
                mul_zero: at(5),
                mul_succ: at(6),
            })
        } else {
            None
        };
        Prover { b, premises, nodes, failed: HashMap::new(), facts, q }
    }

    pub(crate) fn prove(&mut self, goal: &Formula, depth: usize) -> Option<usize> {
        if let Some(i) = self.b.find(goal) {
            return Some(i);
        }
        if *self.nodes == 0 {
            return None;
        }
        *self.nodes -= 1;
        if self.premises.contains(goal) {
            return Some(self.b.premise(goal.clone()));
        }
        if let Some(s) = ALL_SCHEMES.iter().find(|s| s.matches(goal)) {
            return Some(self.b.axiom(*s, goal.clone()));
        }
        if let Some(i) = self.arithmetic(goal) {
            return Some(i);
        }
        if self.failed.get(goal).is_some_and(|&d| d >= depth) || depth == 0 {
            return None;
        }
        let found = self.by_shape(goal, depth).or_else(|| self.by_chaining(goal, depth));
        if found.is_none() {
            let e = self.failed.entry(goal.clone()).or_insert(depth);
            *e = (*e).max(depth);
        }
        found
    }

    fn by_shape(&mut self, goal: &Formula, depth: usize) -> Option<usize> {
        let d = depth - 1;
        match goal {
            Formula::And(a, c) => {
                let i = self.prove(a, d)?;
                let j = self.prove(c, d)?;
                Some(self.b.apply2(Scheme::AndIntro, i, j, goal.clone()))
            }
            Formula::Iff(a, c) => {
                let i = self.prove(&Formula::implies(a.as_ref().clone(), c.as_ref().clone()), d)?;
                let j = self.prove(&Formula::implies(c.as_ref().clone(), a.as_ref().clone()), d)?;
                Some(self.b.apply2(Scheme::IffIntro, i, j, goal.clone()))
            }
            Formula::Or(a, c) => {
                if let Some(i) = self.prove(a, d) {
                    return Some(self.b.apply(Scheme::OrIntroL, i, goal.clone()));
                }
                let j = self.prove(c, d)?;
                Some(self.b.apply(Scheme::OrIntroR, j, goal.clone()))
            }
            Formula::Implies(a, c) => self.by_deduction(a, c, d),
            Formula::Forall(x, body) => {
                if self.premises.iter().any(|p| p.is_free(x)) {
                    return None;
                }
                let i = self.prove(body, d)?;
                self.b.gen(i, x.clone())
            }
            Formula::Exists(x, body) => {
                for t in self.witness_terms(goal) {
                    let inst = substitute(body, x, &t);
                    if let Some(i) = self.prove(&inst, d) {
                        return Some(self.b.apply(Scheme::ExistsIntro, i, goal.clone()));
                    }
                }
                None
            }
            Formula::BForall(x, t, body) | Formula::BExists(x, t, body) => {
                let guard = Formula::le(Term::Var(x.clone()), t.clone());
                let (unfolded, scheme) = if matches!(goal, Formula::BForall(..)) {
                    (
                        Formula::Forall(x.clone(), Box::new(Formula::implies(guard, body.as_ref().clone()))),
                        Scheme::BForallDef,
                    )
                } else {
                    (
                        Formula::Exists(x.clone(), Box::new(Formula::and(guard, body.as_ref().clone()))),
                        Scheme::BExistsDef,
                    )
                };
                let i = self.prove(&unfolded, d)?;
                let def = self.b.axiom(scheme, Formula::iff(goal.clone(), unfolded.clone()));
                let back = Formula::implies(unfolded, goal.clone());
                let r = self.b.apply(Scheme::IffElimR, def, back);
                self.b.mp(i, r)
            }
            Formula::Not(inner) => match inner.as_ref() {
                Formula::Not(a) => {
                    let i = self.prove(a, d)?;
                    Some(self.b.apply(Scheme::DneIntro, i, goal.clone()))
                }
                _ => None,
            },
            Formula::Atom(_) => {
                let nn = Formula::not(Formula::not(goal.clone()));
                let i = self.b.find(&nn)?;
                Some(self.b.apply(Scheme::DneElim, i, goal.clone()))
            }
        }
    }

    /// Proves `a -> c` by searching for `c` with `a` as an extra premise.
    fn by_deduction(&mut self, a: &Formula, c: &Formula, depth: usize) -> Option<usize> {
        let goal = Formula::implies(a.clone(), c.clone());
        if self.premises.contains(a) {
            let i = self.prove(c, depth)?;
            return Some(self.b.weaken(i, a));
        }
        let mut premises = self.premises.clone();
        premises.push(a.clone());
        let sub_proof = {
            let mut sub = Prover::new(premises, &mut *self.nodes);
            let i = sub.prove(c, depth)?;
            sub.b.extract(i)
        };
        let lifted = deduction(&sub_proof, a)?;
        let i = self.b.replay(&lifted)?;
        (self.b.formula(i) == &goal).then_some(i)
    }

    /// Candidate witnesses: small numerals and closed subterms of the goal.
    fn witness_terms(&self, goal: &Formula) -> Vec<Term> {
        let mut out: Vec<Term> = (0..=3).map(numeral_u64).collect();
        let mut closed = BTreeSet::new();
        closed_subterms(goal, &mut closed);
        for t in closed {
            if !out.contains(&t) {
                out.push(t);
            }
        }
        out.truncate(12);
        out
    }

    fn rules(&self) -> Vec<Rule> {
        let mut out = Vec::new();
        for &i in &self.facts {
            let mut f = self.b.formula(i);
            let mut vars = Vec::new();
            while let Formula::Forall(x, body) = f {
                vars.push(x.clone());
                f = body;
            }
            let mut antecedents = Vec::new();
            while let Formula::Implies(a, c) = f {
                antecedents.push(a.as_ref().clone());
                f = c;
            }
            out.push(Rule { fact: i, vars, antecedents });
        }
        out
    }

    /// Backward chaining through the facts, plus double-negation elimination.
    fn by_chaining(&mut self, goal: &Formula, depth: usize) -> Option<usize> {
        let d = depth - 1;
        for rule in self.rules() {
            // Try every split point: the head may itself be an implication.
            for used in (0..=rule.antecedents.len()).rev() {
                let mut head = self.b.formula(rule.fact);
                for _ in &rule.vars {
                    let Formula::Forall(_, body) = head else { unreachable!() };
                    head = body;
                }
                for _ in 0..used {
                    let Formula::Implies(_, c) = head else { unreachable!() };
                    head = c;
                }
                let head = head.clone();
                let mut sigma = BTreeMap::new();
                if !match_formula(&head, goal, &rule.vars, &mut sigma) {
                    continue;
                }
                if rule.vars.iter().any(|v| !sigma.contains_key(v)) {
                    continue;
                }
                if let Some(i) = self.discharge(&rule, &sigma, used, goal, d) {
                    return Some(i);
                }
            }
        }
        None
    }

    fn discharge(
        &mut self,
        rule: &Rule,
        sigma: &BTreeMap<Var, Term>,
        used: usize,
        goal: &Formula,
        depth: usize,
    ) -> Option<usize> {
        let mut cur = rule.fact;
        for v in &rule.vars {
            cur = self.b.instantiate(cur, &sigma[v])?;
        }
        for _ in 0..used {
            let a = imp(self.b.formula(cur))?.0.clone();
            let i = self.prove(&a, depth)?;
            cur = self.b.mp(i, cur)?;
        }
        (self.b.formula(cur) == goal).then_some(cur)
    }

    /// Closed equations and disequations between arithmetic terms, proved
    /// from the recursion axioms of Q.
    fn arithmetic(&mut self, goal: &Formula) -> Option<usize> {
        self.q.as_ref()?;
        match goal {
            Formula::Atom(Atom::Eq(s, t)) => {
                let (vs, vt) = (value(s)?, value(t)?);
                if vs != vt {
                    return None;
                }
                let is = self.eval_eq(s)?;
                let it = self.eval_eq(t)?;
                let ts = self.b.apply(Scheme::EqSym, it, Formula::eq(numeral_u64(vt), t.clone()));
                Some(self.b.apply2(Scheme::EqTrans, is, ts, goal.clone()))
            }
            Formula::Not(inner) => {
                let Formula::Atom(Atom::Eq(s, t)) = inner.as_ref() else {
                    return None;
                };
                let (vs, vt) = (value(s)?, value(t)?);
                if vs == vt {
                    return None;
                }
                let is = self.eval_eq(s)?;
                let it = self.eval_eq(t)?;
                let (ns, nt) = (numeral_u64(vs), numeral_u64(vt));
                let transfer = Formula::implies(inner.as_ref().clone(), Formula::eq(ns.clone(), nt.clone()));
                let tr = self.b.apply2(Scheme::EqCongEq, is, it, transfer);
                let ne = self.neq_numerals(vs, vt)?;
                let cp = Formula::implies(Formula::not(Formula::eq(ns, nt)), goal.clone());
                let c = self.b.apply(Scheme::Contrapos, tr, cp);
                self.b.mp(ne, c)
            }
            _ => None,
        }
    }

    /// Proves `t = n` where `n` is the numeral for the value of `t`.
    fn eval_eq(&mut self, t: &Term) -> Option<usize> {
        let v = value(t)?;
        let n = numeral_u64(v);
        let goal = Formula::eq(t.clone(), n.clone());
        if let Some(i) = self.b.find(&goal) {
            return Some(i);
        }
        match t {
            _ if *t == n => Some(self.b.axiom(Scheme::EqRefl, goal)),
            Term::Succ(u) => {
                let i = self.eval_eq(u)?;
                Some(self.b.apply(Scheme::EqCongSucc, i, goal))
            }
            Term::Add(u, w) | Term::Mul(u, w) => {
                let is_add = matches!(t, Term::Add(..));
                let (a, c) = (value(u)?, value(w)?);
                let iu = self.eval_eq(u)?;
                let iw = self.eval_eq(w)?;
                let mid = if is_add {
                    Term::add(numeral_u64(a), numeral_u64(c))
                } else {
                    Term::mul(numeral_u64(a), numeral_u64(c))
                };
                let scheme = if is_add { Scheme::EqCongAdd } else { Scheme::EqCongMul };
                let step1 = self.b.apply2(scheme, iu, iw, Formula::eq(t.clone(), mid.clone()));
                let step2 = if is_add { self.add_numerals(a, c)? } else { self.mul_numerals(a, c)? };
                Some(self.b.apply2(Scheme::EqTrans, step1, step2, goal))
            }
            _ => None,
        }
    }

    /// `a + b = (a+b)` on numerals, by recursion on `b`.
    fn add_numerals(&mut self, a: u64, c: u64) -> Option<usize> {
        let q = self.q.as_ref()?;
        let (add_zero, add_succ) = (q.add_zero, q.add_succ);
        let (na, nc) = (numeral_u64(a), numeral_u64(c));
        let goal = Formula::eq(Term::add(na.clone(), nc.clone()), numeral_u64(a + c));
        if let Some(i) = self.b.find(&goal) {
            return Some(i);
        }
        if c == 0 {
            return self.b.instantiate(add_zero, &na);
        }
        let pred = numeral_u64(c - 1);
        let i = self.b.instantiate(add_succ, &na)?;
        let rec_eq = self.b.instantiate(i, &pred)?;
        let inner = self.add_numerals(a, c - 1)?;
        let lifted =
            self.b.apply(Scheme::EqCongSucc, inner, Formula::eq(Term::succ(Term::add(na, pred)), numeral_u64(a + c)));
        Some(self.b.apply2(Scheme::EqTrans, rec_eq, lifted, goal))
    }

    /// `a * b = (a*b)` on numerals, by recursion on `b`.
    fn mul_numerals(&mut self, a: u64, c: u64) -> Option<usize> {
        let q = self.q.as_ref()?;
        let (mul_zero, mul_succ) = (q.mul_zero, q.mul_succ);
        let (na, nc) = (numeral_u64(a), numeral_u64(c));
        let goal = Formula::eq(Term::mul(na.clone(), nc.clone()), numeral_u64(a * c));
        if let Some(i) = self.b.find(&goal) {
            return Some(i);
        }
        if c == 0 {
            return self.b.instantiate(mul_zero, &na);
        }
        let pred = numeral_u64(c - 1);
        let i = self.b.instantiate(mul_succ, &na)?;
        // a * S(p) = a * p + a
        let rec_eq = self.b.instantiate(i, &pred)?;
        let inner = self.mul_numerals(a, c - 1)?;
        let refl = self.b.axiom(Scheme::EqRefl, Formula::eq(na.clone(), na.clone()));
        let prod = numeral_u64(a * (c - 1));
        let cong = self.b.apply2(
            Scheme::EqCongAdd,
            inner,
            refl,
            Formula::eq(Term::add(Term::mul(na.clone(), pred), na.clone()), Term::add(prod, na)),
        );
        let sum = self.add_numerals(a * (c - 1), a)?;
        let tail = self.b.apply2(
            Scheme::EqTrans,
            cong,
            sum,
            Formula::eq(self.b.formula(rec_eq).eq_rhs()?.clone(), numeral_u64(a * c)),
        );
        Some(self.b.apply2(Scheme::EqTrans, rec_eq, tail, goal))
    }

    /// `~(a = b)` for distinct numerals.
    fn neq_numerals(&mut self, a: u64, c: u64) -> Option<usize> {
        let q = self.q.as_ref()?;
        let (succ_ne_zero, succ_inj) = (q.succ_ne_zero, q.succ_inj);
        let (na, nc) = (numeral_u64(a), numeral_u64(c));
        let goal = Formula::not(Formula::eq(na.clone(), nc.clone()));
        if let Some(i) = self.b.find(&goal) {
            return Some(i);
        }
        match (a, c) {
            (_, 0) => self.b.instantiate(succ_ne_zero, &numeral_u64(a - 1)),
            (0, _) => {
                let flipped = self.neq_numerals(c, 0)?;
                let sym = Formula::implies(Formula::eq(na.clone(), nc.clone()), Formula::eq(nc.clone(), na.clone()));
                let sym = self.b.axiom(Scheme::EqSym, sym);
                let cp = self.b.apply(Scheme::Contrapos, sym, Formula::implies(self.b.formula(flipped).clone(), goal));
                self.b.mp(flipped, cp)
            }
            _ => {
                let inner = self.neq_numerals(a - 1, c - 1)?;
                let i = self.b.instantiate(succ_inj, &numeral_u64(a - 1))?;
                let inj = self.b.instantiate(i, &numeral_u64(c - 1))?;
                let cp = self.b.apply(Scheme::Contrapos, inj, Formula::implies(self.b.formula(inner).clone(), goal));
                self.b.mp(inner, cp)
            }
        }
    }
}

impl Formula {
    fn eq_rhs(&self) -> Option<&Term> {
        match self {
            Formula::Atom(Atom::Eq(_, t)) => Some(t),
            _ => None,
        }
    }
}

/// Value of a closed term over `0, S, +, *`, if it stays within the
/// arithmetic limit.
fn value(t: &Term) -> Option<u64> {
    let v = match t {
        Term::Zero => 0,
        Term::Succ(u) => value(u)? + 1,
        Term::Add(a, b) => value(a)?.checked_add(value(b)?)?,
        Term::Mul(a, b) => value(a)?.checked_mul(value(b)?)?,
        Term::Num(n) => n.to_u64()?,
        _ => return None,
    };
    (v <= ARITH_LIMIT).then_some(v)
}

/// Adds conjunct and biconditional consequences of fact `i` as facts.
fn decompose(b: &mut Builder, i: usize, depth: usize, facts: &mut Vec<usize>) {
    if facts.contains(&i) {
        return;
    }
    facts.push(i);
    if depth == 0 {
        return;
    }
    match b.formula(i).clone() {
        Formula::And(l, r) => {
            let a = b.apply(Scheme::AndElimL, i, *l);
            let c = b.apply(Scheme::AndElimR, i, *r);
            decompose(b, a, depth - 1, facts);
            decompose(b, c, depth - 1, facts);
        }
        Formula::Iff(l, r) => {
            let a = b.apply(Scheme::IffElimL, i, Formula::implies(*l.clone(), *r.clone()));
            let c = b.apply(Scheme::IffElimR, i, Formula::implies(*r, *l));
            decompose(b, a, depth - 1, facts);
            decompose(b, c, depth - 1, facts);
        }
        _ => {}
    }
}

fn closed_subterms(f: &Formula, out: &mut BTreeSet<Term>) {
    fn term(t: &Term, out: &mut BTreeSet<Term>) {
        if t.is_closed() {
            out.insert(t.clone());
            return;
        }
        match t {
            Term::Succ(u) => term(u, out),
            Term::Add(a, b) | Term::Mul(a, b) => {
                term(a, out);
                term(b, out);
            }
            Term::Fun(_, args) => args.iter().for_each(|a| term(a, out)),
            _ => {}
        }
    }
    match f {
        Formula::Atom(a) => a.terms().into_iter().for_each(|t| term(t, out)),
        Formula::Not(a) => closed_subterms(a, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            closed_subterms(a, out);
            closed_subterms(b, out);
        }
        Formula::Exists(_, a) | Formula::Forall(_, a) => closed_subterms(a, out),
        Formula::BExists(_, t, a) | Formula::BForall(_, t, a) => {
            term(t, out);
            closed_subterms(a, out);
        }
    }
}

/// First-order matching of `pat` against `target`, binding the pattern
/// variables `vars`. Binder names must agree; a binder shadowing a pattern
/// variable makes it rigid below that binder.
fn match_formula(pat: &Formula, target: &Formula, vars: &[Var], sigma: &mut BTreeMap<Var, Term>) -> bool {
    fn term(p: &Term, t: &Term, vars: &[Var], sigma: &mut BTreeMap<Var, Term>) -> bool {
        match (p, t) {
            (Term::Var(v), _) if vars.contains(v) => match sigma.get(v) {
                Some(bound) => bound == t,
                None => {
                    sigma.insert(v.clone(), t.clone());
                    true
                }
            },
            (Term::Succ(a), Term::Succ(b)) => term(a, b, vars, sigma),
            (Term::Add(a1, a2), Term::Add(b1, b2)) | (Term::Mul(a1, a2), Term::Mul(b1, b2)) => {
                term(a1, b1, vars, sigma) && term(a2, b2, vars, sigma)
            }
            (Term::Fun(s, xs), Term::Fun(s2, ys)) => {
                s == s2 && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| term(x, y, vars, sigma))
            }
            _ => p == t,
        }
    }
    fn without(vars: &[Var], x: &Var) -> Vec<Var> {
        vars.iter().filter(|v| *v != x).cloned().collect()
    }
    match (pat, target) {
        (Formula::Atom(a), Formula::Atom(b)) => {
            let same_kind = matches!((a, b), (Atom::Eq(..), Atom::Eq(..)) | (Atom::Le(..), Atom::Le(..)))
                || matches!((a, b), (Atom::Pred(s, xs), Atom::Pred(s2, ys)) if s == s2 && xs.len() == ys.len());
            same_kind && a.terms().into_iter().zip(b.terms()).all(|(x, y)| term(x, y, vars, sigma))
        }
        (Formula::Not(a), Formula::Not(b)) => match_formula(a, b, vars, sigma),
        (Formula::And(a1, a2), Formula::And(b1, b2))
        | (Formula::Or(a1, a2), Formula::Or(b1, b2))
        | (Formula::Implies(a1, a2), Formula::Implies(b1, b2))
        | (Formula::Iff(a1, a2), Formula::Iff(b1, b2)) => {
            match_formula(a1, b1, vars, sigma) && match_formula(a2, b2, vars, sigma)
        }
        (Formula::Exists(x, a), Formula::Exists(y, b)) | (Formula::Forall(x, a), Formula::Forall(y, b)) => {
            x == y && match_formula(a, b, &without(vars, x), sigma)
        }
        (Formula::BExists(x, s, a), Formula::BExists(y, t, b))
        | (Formula::BForall(x, s, a), Formula::BForall(y, t, b)) => {
            x == y && term(s, t, vars, sigma) && match_formula(a, b, &without(vars, x), sigma)
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proofs::{check, check_from};
    use crate::syntax::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn find(premises: &[&str], goal: &str) -> Option<Proof> {
        let ps: Vec<Formula> = premises.iter().map(|p| f(p)).collect();
        search_with(&ps, &f(goal), SearchLimits::default())
    }

    #[test]
    fn trivial_goals() {
        assert_eq!(find(&["0 = 0"], "0 = 0").unwrap().len(), 1);
        let p = find(&["x = 0", "x = 0 -> y = 0"], "y = 0").unwrap();
        assert!(check(&p, &f("y = 0")));
        assert!(find(&[], "0 = 0 -> 0 = 0").is_some());
    }

    #[test]
    fn deduction_transform() {
        let p = Proof::new(vec![Step::Premise(f("a = 0")), Step::Premise(f("a = 0 -> b = 0")), Step::Mp(0, 1)]);
        let d = deduction(&p, &f("a = 0")).unwrap();
        assert!(check_from(&d, &[f("a = 0 -> b = 0")], &f("a = 0 -> b = 0")));
    }

    #[test]
    fn propositional() {
        for (ps, g) in [
            (vec![], "a = 0 & b = 0 -> b = 0 & a = 0"),
            (vec![], "a = 0 -> a = 0 | b = 0"),
            (vec!["a = 0 <-> b = 0", "b = 0"], "a = 0"),
            (vec!["A x. (x = 0 -> x = 1)"], "0 = 0 -> 0 = 1"),
            (vec!["A x. x = x + 0"], "S(0) = S(0) + 0"),
            (vec!["p = 0"], "p = 0 & 3 = 3"),
            (vec!["p = 0 & 3 = 3"], "p = 0"),
        ] {
            let ps: Vec<&str> = ps;
            let p = find(&ps, g).unwrap_or_else(|| panic!("{g}"));
            let prem: Vec<Formula> = ps.iter().map(|s| f(s)).collect();
            assert!(check_from(&p, &prem, &f(g)));
        }
    }

    #[test]
    fn q_arithmetic() {
        let q = q_axioms();
        for g in ["S(0) + S(0) = S(S(0))", "2 * 3 = 6", "~(2 + 2 = 5)", "~(0 = 1)", "E x. x + x = 2"] {
            let p = search_with(&q, &f(g), SearchLimits::default()).unwrap_or_else(|| panic!("{g}"));
            assert!(check_from(&p, &q, &f(g)));
        }
        assert!(search_with(&q, &f("0 + 0 = 2"), SearchLimits { depth: 4, nodes: 2000 }).is_none());
    }
}
