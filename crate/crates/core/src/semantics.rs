//! Budgeted truth in the standard model.
//!
//! Bounded quantifiers are decided exactly when their range fits the scan
//! limit. Unbounded existentials are searched up to the witness bound and
//! come back `Unknown` when nothing is found, unless the body pins the
//! variable to a finite candidate set, in which case the answer is exact.
//! `True` and `False` verdicts are always correct; only `Unknown` depends on
//! the budget.

use std::cell::Cell;
use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::coding::{
    self, bin_code, conjseq, conjseq_decompositions, decode_formula, encode_formula, exists_code, neg_code, numeq_code,
    seq_at, seq_len, seq_prefix, ssub, BinOp,
};
use crate::hierarchy::{classify_with, Level};
use crate::syntax::{Atom, Formula, Symbol, SymbolRegistry, Term, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    True,
    False,
    Unknown,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Verdict {
        match self {
            Verdict::True => Verdict::False,
            Verdict::False => Verdict::True,
            Verdict::Unknown => Verdict::Unknown,
        }
    }

    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::False, _) | (_, Verdict::False) => Verdict::False,
            (Verdict::True, Verdict::True) => Verdict::True,
            _ => Verdict::Unknown,
        }
    }

    pub fn or(self, other: Verdict) -> Verdict {
        self.not().and(other.not()).not()
    }

    pub fn is_decided(self) -> bool {
        self != Verdict::Unknown
    }
}

pub const DEFAULT_WITNESS_BOUND: u64 = 10_000;
pub const DEFAULT_DEPTH_BOUND: usize = 64;
pub const DEFAULT_SCAN_LIMIT: u64 = 1 << 20;
pub const DEFAULT_STEP_LIMIT: u64 = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    /// Largest value tried for an unbounded quantifier without candidates.
    pub witness_bound: u64,
    /// Nesting limit for interpreted predicates that evaluate other sentences.
    pub depth_bound: usize,
    /// Largest bounded-quantifier range scanned exhaustively.
    pub scan_limit: u64,
    /// Total quantifier instances one evaluation may visit.
    pub step_limit: u64,
}

impl Default for Budget {
    /// Default budget; `ARITH_WITNESS_BOUND` overrides the witness bound.
    fn default() -> Budget {
        let witness_bound = std::env::var("ARITH_WITNESS_BOUND")
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or(DEFAULT_WITNESS_BOUND);
        Budget::with_witness_bound(witness_bound)
    }
}

impl Budget {
    pub fn with_witness_bound(witness_bound: u64) -> Budget {
        Budget {
            witness_bound,
            depth_bound: DEFAULT_DEPTH_BOUND,
            scan_limit: DEFAULT_SCAN_LIMIT,
            step_limit: DEFAULT_STEP_LIMIT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("not a sentence: free variables {0:?}")]
    NotASentence(Vec<String>),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("function symbol `{0}` has no interpretation")]
    UnknownFunction(String),
}

pub type Env = BTreeMap<Var, BigUint>;

/// A subformula read with a polarity; `positive = false` means its negation.
#[derive(Clone, Copy)]
struct Part<'f> {
    f: &'f Formula,
    positive: bool,
}

fn split<'f>(f: &'f Formula, positive: bool, out: &mut Vec<Part<'f>>) {
    match f {
        Formula::And(a, b) if positive => {
            split(a, true, out);
            split(b, true, out);
        }
        Formula::Or(a, b) if !positive => {
            split(a, false, out);
            split(b, false, out);
        }
        Formula::Implies(a, b) if !positive => {
            split(a, true, out);
            split(b, false, out);
        }
        Formula::Not(g) => split(g, !positive, out),
        _ => out.push(Part { f, positive }),
    }
}

/// Candidate values for a variable: a superset of the values that can make
/// a formula take the wanted truth value.
#[derive(Clone, Debug, PartialEq)]
enum Cands {
    Finite(BTreeSet<BigUint>),
    UpTo(BigUint),
}

impl Cands {
    fn none() -> Cands {
        Cands::Finite(BTreeSet::new())
    }

    fn single(v: BigUint) -> Cands {
        Cands::Finite([v].into())
    }

    fn size_hint(&self) -> Option<u64> {
        match self {
            Cands::Finite(s) => Some(s.len() as u64),
            Cands::UpTo(n) => n.to_u64().and_then(|n| n.checked_add(1)),
        }
    }
}

fn meet(a: Option<Cands>, b: Option<Cands>) -> Option<Cands> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(Cands::Finite(x)), Some(Cands::Finite(y))) => Some(Cands::Finite(&x & &y)),
        (Some(Cands::Finite(x)), Some(Cands::UpTo(n))) | (Some(Cands::UpTo(n)), Some(Cands::Finite(x))) => {
            Some(Cands::Finite(x.into_iter().filter(|v| *v <= n).collect()))
        }
        (Some(Cands::UpTo(m)), Some(Cands::UpTo(n))) => Some(Cands::UpTo(m.min(n))),
    }
}

fn join(a: Option<Cands>, b: Option<Cands>) -> Option<Cands> {
    match (a?, b?) {
        (Cands::Finite(x), Cands::Finite(y)) => Some(Cands::Finite(&x | &y)),
        (Cands::Finite(x), Cands::UpTo(n)) | (Cands::UpTo(n), Cands::Finite(x)) => {
            let top = x.into_iter().max().map_or(n.clone(), |m| m.max(n));
            Some(Cands::UpTo(top))
        }
        (Cands::UpTo(m), Cands::UpTo(n)) => Some(Cands::UpTo(m.max(n))),
    }
}

/// Whether `v` occurs free in `f`.
pub fn occurs_free(f: &Formula, v: &Var) -> bool {
    match f {
        Formula::Atom(a) => a.terms().into_iter().any(|t| t.contains_var(v)),
        Formula::Not(g) => occurs_free(g, v),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            occurs_free(a, v) || occurs_free(b, v)
        }
        Formula::Exists(w, g) | Formula::Forall(w, g) => w != v && occurs_free(g, v),
        Formula::BExists(w, t, g) | Formula::BForall(w, t, g) => t.contains_var(v) || (w != v && occurs_free(g, v)),
    }
}

type Witness = Vec<(Var, BigUint)>;

/// One quantifier of a block: its variable and optional bound.
type BlockVar<'f> = (&'f Var, Option<&'f Term>);

pub struct Evaluator<'r> {
    registry: &'r SymbolRegistry,
    budget: Budget,
    hints: BTreeMap<Var, Vec<BigUint>>,
    steps: Cell<u64>,
}

impl<'r> Evaluator<'r> {
    pub fn new(registry: &'r SymbolRegistry, budget: Budget) -> Self {
        Evaluator { registry, budget, hints: BTreeMap::new(), steps: Cell::new(0) }
    }

    /// Extra values tried first for unbounded quantifiers over `var`.
    pub fn with_hint(mut self, var: &str, values: impl IntoIterator<Item = BigUint>) -> Self {
        self.hints.entry(Var::new(var)).or_default().extend(values);
        self
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    pub fn registry(&self) -> &SymbolRegistry {
        self.registry
    }

    pub fn eval(&self, f: &Formula) -> Result<Verdict, EvalError> {
        self.eval_with_witness(f).map(|(v, _)| v)
    }

    /// Evaluates a sentence; when it is true with a leading existential block
    /// the witnesses found are returned too.
    pub fn eval_with_witness(&self, f: &Formula) -> Result<(Verdict, Witness), EvalError> {
        let free = f.free_vars();
        if !free.is_empty() {
            return Err(EvalError::NotASentence(free.iter().map(|v| v.to_string()).collect()));
        }
        self.steps.set(0);
        let mut env = Env::new();
        match f {
            Formula::Exists(..) | Formula::BExists(..) => {
                let (block, body) = gather(f, true);
                let mut parts = Vec::new();
                split(body, true, &mut parts);
                let (v, mut w) = self.search(&block, &parts, &mut env, 0)?;
                w.sort_by_key(|(x, _)| block.iter().position(|(b, _)| *b == x));
                Ok((v, w))
            }
            _ => Ok((self.eval_part(f, true, &mut env, 0)?, Vec::new())),
        }
    }

    /// Evaluates a formula whose free variables are all assigned by `env`.
    pub fn eval_open(&self, f: &Formula, env: &Env) -> Result<Verdict, EvalError> {
        if let Some(v) = f.free_vars().into_iter().find(|v| !env.contains_key(v)) {
            return Err(EvalError::UnboundVariable(v.to_string()));
        }
        self.steps.set(0);
        self.eval_part(f, true, &mut env.clone(), 0)
    }

    /// Evaluates at a nesting depth, for predicate hooks that evaluate other
    /// sentences. Does not reset the step counter.
    pub fn eval_nested(&self, f: &Formula, env: &Env, depth: usize) -> Verdict {
        if depth > self.budget.depth_bound {
            return Verdict::Unknown;
        }
        self.eval_part(f, true, &mut env.clone(), depth).unwrap_or(Verdict::Unknown)
    }

    /// Truth of the sentence coded by `c` within class `lvl`: `False` when `c`
    /// is not a sentence code or the sentence is not syntactically in `lvl`.
    pub fn true_level(&self, c: &BigUint, lvl: Level, depth: usize) -> Verdict {
        let Some(f) = decode_formula(c) else {
            return Verdict::False;
        };
        if !f.is_sentence() {
            return Verdict::False;
        }
        match classify_with(&f, self.registry) {
            Ok(cl) if cl.within(lvl) => self.eval_nested(&f, &Env::new(), depth),
            _ => Verdict::False,
        }
    }

    pub fn eval_term(&self, t: &Term, env: &Env) -> Result<BigUint, EvalError> {
        match t {
            Term::Var(v) => env.get(v).cloned().ok_or_else(|| EvalError::UnboundVariable(v.to_string())),
            Term::Zero => Ok(BigUint::zero()),
            Term::Num(n) => Ok(n.clone()),
            Term::Succ(_) => {
                let mut count = 0u64;
                let mut cur = t;
                while let Term::Succ(inner) = cur {
                    count += 1;
                    cur = inner;
                }
                Ok(self.eval_term(cur, env)? + count)
            }
            Term::Add(a, b) => Ok(self.eval_term(a, env)? + self.eval_term(b, env)?),
            Term::Mul(a, b) => Ok(self.eval_term(a, env)? * self.eval_term(b, env)?),
            Term::Fun(s, args) => {
                let vals = args.iter().map(|a| self.eval_term(a, env)).collect::<Result<Vec<_>, _>>()?;
                apply_function(s, &vals)
            }
        }
    }

    fn tick(&self) -> bool {
        let n = self.steps.get() + 1;
        self.steps.set(n);
        n <= self.budget.step_limit
    }

    fn eval_atom(&self, a: &Atom, env: &Env, depth: usize) -> Result<Verdict, EvalError> {
        Ok(match a {
            Atom::Eq(x, y) => Verdict::from_bool(self.eval_term(x, env)? == self.eval_term(y, env)?),
            Atom::Le(x, y) => Verdict::from_bool(self.eval_term(x, env)? <= self.eval_term(y, env)?),
            Atom::Pred(s, args) => {
                let vals = args.iter().map(|t| self.eval_term(t, env)).collect::<Result<Vec<_>, _>>()?;
                self.apply_predicate(s, &vals, depth)
            }
        })
    }

    fn apply_predicate(&self, s: &Symbol, args: &[BigUint], depth: usize) -> Verdict {
        if let Some(decl) = self.registry.lookup(s) {
            if let Some(hook) = decl.hook {
                if depth >= self.budget.depth_bound {
                    return Verdict::Unknown;
                }
                return hook(self, args, depth + 1);
            }
        }
        match (s.as_str(), args) {
            ("ProofChk", [y, x]) => Verdict::from_bool(crate::proofs::proofchk_hook(y, x)),
            ("Seq", [m]) => Verdict::from_bool(coding::is_seq(m)),
            ("Sent", [u]) => Verdict::from_bool(coding::is_sent_code(u)),
            ("ConjSeq", [x, m]) => Verdict::from_bool(conjseq(m).is_ok_and(|c| &c == x)),
            (_, [c]) => {
                let (head, param) = s.split();
                let index = param.and_then(|p| p.parse::<u32>().ok());
                let level = match (head, index) {
                    ("TrueSigma", Some(n)) => Level::sigma(n),
                    ("TruePi", Some(n)) => Level::pi(n),
                    _ => return Verdict::Unknown,
                };
                if depth >= self.budget.depth_bound {
                    return Verdict::Unknown;
                }
                self.true_level(c, level, depth + 1)
            }
            _ => Verdict::Unknown,
        }
    }

    fn eval_part(&self, f: &Formula, positive: bool, env: &mut Env, depth: usize) -> Result<Verdict, EvalError> {
        let v = match f {
            Formula::Atom(a) => self.eval_atom(a, env, depth)?,
            Formula::Not(g) => return self.eval_part(g, !positive, env, depth),
            Formula::And(..) | Formula::Or(..) | Formula::Implies(..) => {
                let conjunctive = match f {
                    Formula::And(..) => positive,
                    _ => !positive,
                };
                let mut parts = Vec::new();
                split(f, conjunctive == positive, &mut parts);
                if conjunctive {
                    return self.conjunction(&parts, env, depth);
                }
                // The parts are already negated: a disjunction is the
                // negation of their conjunction.
                return Ok(self.conjunction(&parts, env, depth)?.not());
            }
            Formula::Iff(a, b) => {
                let va = self.eval_part(a, true, env, depth)?;
                if va == Verdict::Unknown {
                    Verdict::Unknown
                } else {
                    let vb = self.eval_part(b, true, env, depth)?;
                    match (va, vb) {
                        (_, Verdict::Unknown) => Verdict::Unknown,
                        (x, y) => Verdict::from_bool(x == y),
                    }
                }
            }
            Formula::Exists(..) | Formula::BExists(..) => {
                let (block, body) = gather(f, true);
                let mut parts = Vec::new();
                split(body, true, &mut parts);
                self.search(&block, &parts, env, depth)?.0
            }
            Formula::Forall(..) | Formula::BForall(..) => {
                let (block, body) = gather(f, false);
                let mut parts = Vec::new();
                split(body, false, &mut parts);
                self.search(&block, &parts, env, depth)?.0.not()
            }
        };
        Ok(if positive { v } else { v.not() })
    }

    fn conjunction(&self, parts: &[Part], env: &mut Env, depth: usize) -> Result<Verdict, EvalError> {
        let mut acc = Verdict::True;
        for p in parts {
            let v = self.eval_part(p.f, p.positive, env, depth)?;
            if v == Verdict::False {
                return Ok(Verdict::False);
            }
            acc = acc.and(v);
        }
        Ok(acc)
    }

    /// Decides `E block. /\ parts`.
    fn search(
        &self,
        block: &[BlockVar],
        parts: &[Part],
        env: &mut Env,
        depth: usize,
    ) -> Result<(Verdict, Witness), EvalError> {
        if block.is_empty() {
            return Ok((self.conjunction(parts, env, depth)?, Vec::new()));
        }
        let pending: BTreeSet<Var> = block.iter().map(|(v, _)| (*v).clone()).collect();
        let (mut inner, mut outer) = (Vec::new(), Vec::new());
        for p in parts {
            if pending.iter().any(|v| occurs_free(p.f, v)) {
                inner.push(*p);
            } else {
                outer.push(*p);
            }
        }
        let outer_v = self.conjunction(&outer, env, depth)?;
        if outer_v == Verdict::False || inner.is_empty() {
            // Variables no part depends on take any value; report 0.
            let w = if outer_v == Verdict::True {
                block.iter().map(|(v, _)| ((*v).clone(), BigUint::zero())).collect()
            } else {
                Vec::new()
            };
            return Ok((outer_v, w));
        }

        let (pick, cands) = self.choose(block, &inner, &pending, env);
        let (var, bound) = block[pick];
        let rest: Vec<BlockVar> = block.iter().enumerate().filter(|(i, _)| *i != pick).map(|(_, b)| *b).collect();
        let bound_value = match bound {
            Some(t) => Some(self.eval_term(t, env)?),
            None => None,
        };

        let mut values: Vec<BigUint> = Vec::new();
        if bound.is_none() {
            if let Some(h) = self.hints.get(var) {
                values.extend(h.iter().cloned());
            }
        }
        let scan = self.budget.scan_limit;
        let (range_end, complete) = match (&cands, &bound_value) {
            (Some(Cands::Finite(s)), b) => {
                values.extend(s.iter().filter(|v| b.as_ref().is_none_or(|b| *v <= b)).cloned());
                (None, true)
            }
            (Some(Cands::UpTo(n)), b) => {
                let hi = b.as_ref().map_or(n.clone(), |b| b.min(n).clone());
                match hi.to_u64() {
                    Some(h) if h < scan => (Some(h), true),
                    _ => (Some(scan - 1), false),
                }
            }
            (None, Some(b)) => match b.to_u64() {
                Some(h) if h < scan => (Some(h), true),
                _ => (Some(scan - 1), false),
            },
            (None, None) => (Some(self.budget.witness_bound), false),
        };

        let saved = env.get(var).cloned();
        let mut saw_unknown = false;
        let mut exhausted = false;
        let mut found: Option<Witness> = None;
        let mut visit = |value: BigUint, env: &mut Env| -> Result<bool, EvalError> {
            if !self.tick() {
                exhausted = true;
                return Ok(true);
            }
            env.insert(var.clone(), value.clone());
            let (v, mut w) = self.search(&rest, &inner, env, depth)?;
            match v {
                Verdict::True => {
                    w.insert(0, (var.clone(), value));
                    found = Some(w);
                    Ok(true)
                }
                Verdict::Unknown => {
                    saw_unknown = true;
                    Ok(false)
                }
                Verdict::False => Ok(false),
            }
        };
        let mut run = || -> Result<(), EvalError> {
            for value in values.iter().cloned() {
                if visit(value, env)? {
                    return Ok(());
                }
            }
            if let Some(end) = range_end {
                for k in 0..=end {
                    if visit(BigUint::from(k), env)? {
                        return Ok(());
                    }
                }
            }
            Ok(())
        };
        let outcome = run();
        match saved {
            Some(old) => {
                env.insert(var.clone(), old);
            }
            None => {
                env.remove(var);
            }
        }
        outcome?;

        if let Some(w) = found {
            return Ok((outer_v.and(Verdict::True), if outer_v == Verdict::True { w } else { Vec::new() }));
        }
        let inner_v = if complete && !exhausted && !saw_unknown { Verdict::False } else { Verdict::Unknown };
        Ok((outer_v.and(inner_v), Vec::new()))
    }

    /// Picks the next block variable to enumerate: one with a small finite
    /// candidate set if possible, else one constrained by a part of its own.
    fn choose(&self, block: &[BlockVar], inner: &[Part], pending: &BTreeSet<Var>, env: &Env) -> (usize, Option<Cands>) {
        let mut best: Option<(usize, Option<Cands>, (u8, u64))> = None;
        for (i, (var, bound)) in block.iter().enumerate() {
            if bound.is_some_and(|t| pending.iter().any(|p| t.contains_var(p))) {
                continue;
            }
            let mut cands: Option<Cands> = None;
            for p in inner {
                if occurs_free(p.f, var) {
                    cands = meet(cands, self.candidates(p.f, p.positive, var, env, pending));
                }
            }
            let solo = inner
                .iter()
                .any(|p| occurs_free(p.f, var) && pending.iter().all(|w| w == *var || !occurs_free(p.f, w)));
            let hinted = bound.is_none() && self.hints.contains_key(*var);
            let score = match cands.as_ref().and_then(Cands::size_hint) {
                Some(n) => (0, n),
                None if solo || hinted => (1, 0),
                None => (2, 0),
            };
            if best.as_ref().is_none_or(|(_, _, s)| score < *s) {
                best = Some((i, cands, score));
            }
        }
        let (i, cands, _) = best.expect("a block always has an enumerable variable");
        (i, cands)
    }

    fn evaluable(&self, t: &Term, env: &Env, shadow: &BTreeSet<Var>) -> Option<BigUint> {
        let mut vars = BTreeSet::new();
        t.vars_into(&mut vars);
        if vars.iter().any(|v| shadow.contains(v) || !env.contains_key(v)) {
            return None;
        }
        self.eval_term(t, env).ok()
    }

    fn candidates(&self, f: &Formula, positive: bool, var: &Var, env: &Env, shadow: &BTreeSet<Var>) -> Option<Cands> {
        match f {
            Formula::Atom(Atom::Eq(l, r)) if positive => {
                if !l.contains_var(var) && !r.contains_var(var) {
                    return None;
                }
                if let Some(v) = self.evaluable(l, env, shadow) {
                    return self.invert(r, v, var, env, shadow);
                }
                if let Some(v) = self.evaluable(r, env, shadow) {
                    return self.invert(l, v, var, env, shadow);
                }
                None
            }
            Formula::Atom(Atom::Le(l, r)) => match (l, r) {
                (Term::Var(x), r) if positive && x == var => self.evaluable(r, env, shadow).map(Cands::UpTo),
                (l, Term::Var(x)) if !positive && x == var => {
                    let v = self.evaluable(l, env, shadow)?;
                    Some(if v.is_zero() { Cands::none() } else { Cands::UpTo(v - 1u32) })
                }
                _ => None,
            },
            Formula::Atom(Atom::Pred(s, args)) if positive && s.as_str() == "ConjSeq" && args.len() == 2 => {
                if !args[1].contains_var(var) {
                    return None;
                }
                let x = self.evaluable(&args[0], env, shadow)?;
                let mut acc = Some(Cands::none());
                for m in conjseq_decompositions(&x) {
                    acc = join(acc, self.invert(&args[1], m, var, env, shadow));
                }
                acc
            }
            Formula::Atom(Atom::Pred(s, args)) if positive && s.as_str() == "ProofChk" && args.len() == 2 => {
                if !args[1].contains_var(var) || args[0].contains_var(var) {
                    return None;
                }
                let y = self.evaluable(&args[0], env, shadow)?;
                match crate::proofs::proof_conclusion_code(&y) {
                    Some(c) => self.invert(&args[1], c, var, env, shadow),
                    None => Some(Cands::none()),
                }
            }
            Formula::Atom(_) => None,
            Formula::Not(g) => self.candidates(g, !positive, var, env, shadow),
            Formula::And(a, b) | Formula::Or(a, b) => {
                let ca = self.candidates(a, positive, var, env, shadow);
                let cb = self.candidates(b, positive, var, env, shadow);
                if matches!(f, Formula::And(..)) == positive {
                    meet(ca, cb)
                } else {
                    join(ca, cb)
                }
            }
            Formula::Implies(a, b) => {
                let ca = self.candidates(a, !positive, var, env, shadow);
                let cb = self.candidates(b, positive, var, env, shadow);
                if positive {
                    join(ca, cb)
                } else {
                    meet(ca, cb)
                }
            }
            Formula::Iff(..) => None,
            Formula::Exists(w, g) | Formula::Forall(w, g) | Formula::BExists(w, _, g) | Formula::BForall(w, _, g) => {
                // Every quantifier ranges over a non-empty domain, so some
                // instance of the body must take the same truth value.
                if w == var {
                    return None;
                }
                let mut inner = shadow.clone();
                inner.insert(w.clone());
                self.candidates(g, positive, var, env, &inner)
            }
        }
    }

    /// Values of `var` that can make `t` evaluate to `target`.
    fn invert(&self, t: &Term, target: BigUint, var: &Var, env: &Env, shadow: &BTreeSet<Var>) -> Option<Cands> {
        if !t.contains_var(var) {
            let v = self.evaluable(t, env, shadow)?;
            return if v == target { None } else { Some(Cands::none()) };
        }
        match t {
            Term::Var(_) => Some(Cands::single(target)),
            Term::Succ(p) => {
                if target.is_zero() {
                    Some(Cands::none())
                } else {
                    self.invert(p, target - 1u32, var, env, shadow)
                }
            }
            Term::Add(p, q) => {
                if let Some((a, b)) = pairing_parts(t) {
                    return match coding::unpair(&target) {
                        Some((u, v)) => meet(self.invert(a, u, var, env, shadow), self.invert(b, v, var, env, shadow)),
                        None => Some(Cands::none()),
                    };
                }
                for (x, y) in [(p, q), (q, p)] {
                    if let Some(d) = self.evaluable(y, env, shadow) {
                        return if target < d {
                            Some(Cands::none())
                        } else {
                            self.invert(x, target - d, var, env, shadow)
                        };
                    }
                }
                if let Some((a, b)) = self.linear(t, var, env, shadow) {
                    if !a.is_zero() {
                        return Some(if target >= b && ((&target - &b) % &a).is_zero() {
                            Cands::single((target - b) / a)
                        } else {
                            Cands::none()
                        });
                    }
                }
                let direct =
                    matches!(p.as_ref(), Term::Var(x) if x == var) || matches!(q.as_ref(), Term::Var(x) if x == var);
                direct.then_some(Cands::UpTo(target))
            }
            Term::Mul(p, q) if p == q => {
                let root = target.sqrt();
                if &root * &root == target {
                    self.invert(p, root, var, env, shadow)
                } else {
                    Some(Cands::none())
                }
            }
            Term::Mul(p, q) => {
                for (x, y) in [(p, q), (q, p)] {
                    if let Some(d) = self.evaluable(y, env, shadow) {
                        if d.is_zero() {
                            return if target.is_zero() { None } else { Some(Cands::none()) };
                        }
                        if (&target % &d).is_zero() {
                            return self.invert(x, target / d, var, env, shadow);
                        }
                        return Some(Cands::none());
                    }
                }
                None
            }
            Term::Fun(s, args) => self.invert_code_op(s.as_str(), args, target, var, env, shadow),
            Term::Zero | Term::Num(_) => None,
        }
    }

    /// `t` as `a * var + b` with `a` and `b` evaluated, when it is linear in `var`.
    fn linear(&self, t: &Term, var: &Var, env: &Env, shadow: &BTreeSet<Var>) -> Option<(BigUint, BigUint)> {
        if !t.contains_var(var) {
            return Some((BigUint::zero(), self.evaluable(t, env, shadow)?));
        }
        match t {
            Term::Var(_) => Some((BigUint::one(), BigUint::zero())),
            Term::Succ(p) => self.linear(p, var, env, shadow).map(|(a, b)| (a, b + 1u32)),
            Term::Add(p, q) => {
                let (a, b) = self.linear(p, var, env, shadow)?;
                let (c, d) = self.linear(q, var, env, shadow)?;
                Some((a + c, b + d))
            }
            Term::Mul(p, q) => {
                let (a, b) = self.linear(p, var, env, shadow)?;
                let (c, d) = self.linear(q, var, env, shadow)?;
                match (a.is_zero(), c.is_zero()) {
                    (true, _) => Some((&b * c, b * d)),
                    (_, true) => Some((a * &d, b * d)),
                    _ => None,
                }
            }
            _ => None,
        }
    }

    fn invert_code_op(
        &self,
        name: &str,
        args: &[Term],
        target: BigUint,
        var: &Var,
        env: &Env,
        shadow: &BTreeSet<Var>,
    ) -> Option<Cands> {
        let sentinel = if target.is_zero() { None } else { Some(Cands::none()) };
        let decoded = || decode_formula(&target);
        match (name, args) {
            ("NegC", [p]) => match decoded() {
                Some(Formula::Not(a)) => self.invert(p, encode_formula(&a), var, env, shadow),
                _ => sentinel,
            },
            ("AndC" | "OrC" | "ImpC", [p, q]) => {
                let parts = match (name, decoded()) {
                    ("AndC", Some(Formula::And(a, b)))
                    | ("OrC", Some(Formula::Or(a, b)))
                    | ("ImpC", Some(Formula::Implies(a, b))) => Some((a, b)),
                    _ => None,
                };
                match parts {
                    Some((a, b)) => meet(
                        self.invert(p, encode_formula(&a), var, env, shadow),
                        self.invert(q, encode_formula(&b), var, env, shadow),
                    ),
                    None => sentinel,
                }
            }
            ("NumEqC", [p]) => match decoded() {
                Some(Formula::Atom(Atom::Eq(a, b))) if a == b => match a.numeral_value() {
                    Some(k) => self.invert(p, k, var, env, shadow),
                    None => Some(Cands::none()),
                },
                _ => Some(Cands::none()),
            },
            ("ExistsC", [p]) => match decoded() {
                Some(Formula::Exists(v, a)) if a.free_vars() == [v.clone()].into() => {
                    self.invert(p, encode_formula(&a), var, env, shadow)
                }
                _ => sentinel,
            },
            _ => None,
        }
    }
}

/// Recognizes the pairing term `(a+b)*(a+b)+a`.
fn pairing_parts(t: &Term) -> Option<(&Term, &Term)> {
    let Term::Add(m, a) = t else { return None };
    let Term::Mul(s1, s2) = m.as_ref() else {
        return None;
    };
    let Term::Add(x, y) = s1.as_ref() else {
        return None;
    };
    (s1 == s2 && x.as_ref() == a.as_ref()).then_some((x.as_ref(), y.as_ref()))
}

/// Collects a maximal block of like quantifiers starting at `f`.
fn gather(f: &Formula, existential: bool) -> (Vec<BlockVar<'_>>, &Formula) {
    let mut block: Vec<BlockVar> = Vec::new();
    let mut cur = f;
    loop {
        let (v, bound, body) = match (cur, existential) {
            (Formula::Exists(v, g), true) | (Formula::Forall(v, g), false) => (v, None, g),
            (Formula::BExists(v, t, g), true) | (Formula::BForall(v, t, g), false) => (v, Some(t), g),
            _ => break,
        };
        let clash = block.iter().any(|(w, b)| *w == v || b.is_some_and(|t| t.contains_var(v)));
        if clash && !block.is_empty() {
            break;
        }
        block.push((v, bound));
        cur = body;
    }
    (block, cur)
}

fn apply_function(s: &Symbol, vals: &[BigUint]) -> Result<BigUint, EvalError> {
    let zero = BigUint::zero;
    let idx = |v: &BigUint| v.to_usize();
    Ok(match (s.as_str(), vals) {
        ("SSub", [a, m]) => ssub(a, m),
        ("NegC", [a]) => neg_code(a).unwrap_or_else(|_| zero()),
        ("AndC", [a, b]) => bin_code(BinOp::And, a, b).unwrap_or_else(|_| zero()),
        ("OrC", [a, b]) => bin_code(BinOp::Or, a, b).unwrap_or_else(|_| zero()),
        ("ImpC", [a, b]) => bin_code(BinOp::Implies, a, b).unwrap_or_else(|_| zero()),
        ("ExistsC", [a]) => exists_code(a).unwrap_or_else(|_| zero()),
        ("NumEqC", [z]) => numeq_code(z),
        ("Len", [m]) => seq_len(m).map(BigUint::from).unwrap_or_else(|_| zero()),
        ("At", [m, i]) => idx(i).and_then(|i| seq_at(m, i).ok()).unwrap_or_else(zero),
        ("Prefix", [m, k]) => idx(k).and_then(|k| seq_prefix(m, k).ok()).unwrap_or_else(zero),
        _ => return Err(EvalError::UnknownFunction(s.to_string())),
    })
}

/// Evaluates a sentence with the built-in symbols only.
pub fn eval(f: &Formula, budget: Budget) -> Result<Verdict, EvalError> {
    let registry = SymbolRegistry::builtin();
    Evaluator::new(&registry, budget).eval(f)
}

pub fn eval_term(t: &Term, env: &Env) -> Result<BigUint, EvalError> {
    let registry = SymbolRegistry::builtin();
    Evaluator::new(&registry, Budget::default()).eval_term(t, env)
}

pub fn true_level(c: &BigUint, lvl: Level, budget: Budget) -> Verdict {
    let registry = SymbolRegistry::builtin();
    Evaluator::new(&registry, budget).true_level(c, lvl, 0)
}
