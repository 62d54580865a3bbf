//! Independent oracles and generators shared by the integration tests.
//! Nothing here calls into the classifier or the evaluator under test.

#![allow(dead_code)]

use std::collections::HashMap;

use arith_core::syntax::{parse, Atom, Formula, Term, Var};
use num_traits::ToPrimitive;
use rand::Rng;

pub const GOLDEN: &str = include_str!("../data/golden_formulas.txt");

pub fn golden_corpus() -> Vec<Formula> {
    GOLDEN
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| parse(l).unwrap_or_else(|e| panic!("golden line `{l}`: {e}")))
        .collect()
}

fn v(name: &str) -> Term {
    Term::var(name)
}

fn enum_atoms() -> Vec<Formula> {
    vec![
        Formula::eq(v("x"), v("y")),
        Formula::le(v("x"), v("y")),
        Formula::eq(Term::Zero, v("x")),
        Formula::eq(Term::succ(v("x")), v("y")),
    ]
}

fn enum_unary(f: &Formula) -> Vec<Formula> {
    vec![
        Formula::not(f.clone()),
        Formula::exists("x", f.clone()),
        Formula::forall("x", f.clone()),
        Formula::exists("y", f.clone()),
        Formula::forall("y", f.clone()),
        Formula::bexists("x", v("y"), f.clone()),
        Formula::bforall("y", Term::succ(v("x")), f.clone()),
    ]
}

fn enum_binary(a: &Formula, b: &Formula) -> Vec<Formula> {
    vec![
        Formula::and(a.clone(), b.clone()),
        Formula::or(a.clone(), b.clone()),
        Formula::implies(a.clone(), b.clone()),
        Formula::iff(a.clone(), b.clone()),
    ]
}

/// Every formula of depth at most 3 (atoms have depth 1) over four atoms,
/// seven unary and four binary constructors: 37,540 formulas.
pub fn enumerate_depth3() -> Vec<Formula> {
    let mut by_depth: Vec<Vec<Formula>> = vec![enum_atoms()];
    for _ in 1..3 {
        let below: Vec<Formula> = by_depth.iter().flatten().cloned().collect();
        let mut next = below.clone();
        for f in &below {
            next.extend(enum_unary(f));
        }
        for a in &below {
            for b in &below {
                next.extend(enum_binary(a, b));
            }
        }
        // Keep only the new layer so `below` does not double count.
        let prev: std::collections::HashSet<&Formula> = below.iter().collect();
        let layer: Vec<Formula> = next.into_iter().filter(|f| !prev.contains(f)).collect();
        by_depth.push(layer);
    }
    by_depth.into_iter().flatten().collect()
}

// ---------------------------------------------------------------------------
// Minimal-level oracle: the inductive definition of the hierarchy, applied
// literally with polarity tracking and memoized per subformula.

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum K {
    S,
    P,
}

impl K {
    fn dual(self) -> K {
        match self {
            K::S => K::P,
            K::P => K::S,
        }
    }
}

/// Declared level of an atom: `TrueSigma[k]`/`TruePi[k]` are Sigma/Pi(k),
/// everything else is bounded.
fn atom_level(a: &Atom) -> (K, u32) {
    if let Atom::Pred(s, _) = a {
        let name = s.as_str();
        for (prefix, k) in [("TrueSigma[", K::S), ("TruePi[", K::P)] {
            if let Some(rest) = name.strip_prefix(prefix) {
                let n: u32 = rest.trim_end_matches(']').parse().unwrap();
                return (k, n);
            }
        }
    }
    (K::S, 0)
}

struct Oracle {
    memo: HashMap<(usize, bool, K, u32), bool>,
}

impl Oracle {
    fn mem(&mut self, f: &Formula, pos: bool, k: K, n: u32) -> bool {
        let key = (f as *const Formula as usize, pos, k, n);
        if let Some(&r) = self.memo.get(&key) {
            return r;
        }
        let r = (n >= 1 && self.mem(f, pos, k.dual(), n - 1)) || self.direct(f, pos, k, n);
        self.memo.insert(key, r);
        r
    }

    fn direct(&mut self, f: &Formula, pos: bool, k: K, n: u32) -> bool {
        match f {
            Formula::Atom(a) => {
                let (ak, an) = atom_level(a);
                let ak = if pos { ak } else { ak.dual() };
                an == 0 || (ak == k && an <= n)
            }
            Formula::Not(g) => self.mem(g, !pos, k, n),
            Formula::And(a, b) | Formula::Or(a, b) => self.mem(a, pos, k, n) && self.mem(b, pos, k, n),
            Formula::Implies(a, b) => self.mem(a, !pos, k, n) && self.mem(b, pos, k, n),
            Formula::Iff(a, b) => {
                self.mem(a, pos, k, n) && self.mem(a, !pos, k, n) && self.mem(b, pos, k, n) && self.mem(b, !pos, k, n)
            }
            Formula::BExists(_, _, g) | Formula::BForall(_, _, g) => self.mem(g, pos, k, n),
            Formula::Exists(_, g) | Formula::Forall(_, g) => {
                let existential = matches!(f, Formula::Exists(..)) == pos;
                let needed = if existential { K::S } else { K::P };
                n >= 1 && k == needed && self.mem(g, pos, k, n)
            }
        }
    }
}

/// Least `(s, p)` with the formula in Sigma(s) and in Pi(p).
pub fn oracle_indices(f: &Formula) -> (u32, u32) {
    let mut o = Oracle { memo: HashMap::new() };
    let least = |o: &mut Oracle, k: K| (0..64).find(|&n| o.mem(f, true, k, n)).expect("level below 64");
    let s = least(&mut o, K::S);
    let p = least(&mut o, K::P);
    (s, p)
}

// ---------------------------------------------------------------------------
// Direct evaluator for bounded sentences over u64. Returns `None` when a
// term value exceeds `cap` or the formula has an unbounded quantifier.

pub fn brute_term(t: &Term, env: &HashMap<String, u64>, cap: u64) -> Option<u64> {
    let r = match t {
        Term::Var(x) => *env.get(x.as_str())?,
        Term::Zero => 0,
        Term::Succ(a) => brute_term(a, env, cap)? + 1,
        Term::Add(a, b) => brute_term(a, env, cap)?.checked_add(brute_term(b, env, cap)?)?,
        Term::Mul(a, b) => brute_term(a, env, cap)?.checked_mul(brute_term(b, env, cap)?)?,
        Term::Num(n) => n.to_u64()?,
        Term::Fun(..) => return None,
    };
    (r <= cap).then_some(r)
}

pub fn brute_eval(f: &Formula, env: &mut HashMap<String, u64>, cap: u64) -> Option<bool> {
    Some(match f {
        Formula::Atom(Atom::Eq(a, b)) => brute_term(a, env, cap)? == brute_term(b, env, cap)?,
        Formula::Atom(Atom::Le(a, b)) => brute_term(a, env, cap)? <= brute_term(b, env, cap)?,
        Formula::Atom(Atom::Pred(..)) => return None,
        Formula::Not(g) => !brute_eval(g, env, cap)?,
        Formula::And(a, b) => {
            let (x, y) = (brute_eval(a, env, cap)?, brute_eval(b, env, cap)?);
            x && y
        }
        Formula::Or(a, b) => {
            let (x, y) = (brute_eval(a, env, cap)?, brute_eval(b, env, cap)?);
            x || y
        }
        Formula::Implies(a, b) => {
            let (x, y) = (brute_eval(a, env, cap)?, brute_eval(b, env, cap)?);
            !x || y
        }
        Formula::Iff(a, b) => brute_eval(a, env, cap)? == brute_eval(b, env, cap)?,
        Formula::BExists(x, t, g) | Formula::BForall(x, t, g) => {
            let bound = brute_term(t, env, cap)?;
            let exists = matches!(f, Formula::BExists(..));
            let saved = env.get(x.as_str()).copied();
            let mut acc = !exists;
            for i in 0..=bound {
                env.insert(x.as_str().to_string(), i);
                let r = brute_eval(g, env, cap);
                let Some(r) = r else {
                    restore(env, x, saved);
                    return None;
                };
                if exists {
                    acc |= r;
                } else {
                    acc &= r;
                }
            }
            restore(env, x, saved);
            acc
        }
        Formula::Exists(..) | Formula::Forall(..) => return None,
    })
}

fn restore(env: &mut HashMap<String, u64>, x: &Var, saved: Option<u64>) {
    match saved {
        Some(s) => env.insert(x.as_str().to_string(), s),
        None => env.remove(x.as_str()),
    };
}

// ---------------------------------------------------------------------------
// Random generators.

const VARS: [&str; 3] = ["x", "y", "z"];

pub fn random_term<R: Rng>(rng: &mut R, depth: u32, scope: &[&str]) -> Term {
    if depth == 0 || rng.gen_bool(0.35) {
        return match rng.gen_range(0..4) {
            0 if !scope.is_empty() => Term::var(scope[rng.gen_range(0..scope.len())]),
            1 => Term::Zero,
            _ => arith_core::syntax::numeral_u64(rng.gen_range(0..4)),
        };
    }
    match rng.gen_range(0..3) {
        0 => Term::succ(random_term(rng, depth - 1, scope)),
        1 => Term::add(random_term(rng, depth - 1, scope), random_term(rng, depth - 1, scope)),
        _ => Term::mul(random_term(rng, depth - 1, scope), random_term(rng, depth - 1, scope)),
    }
}

/// Random formula of depth at most `depth` over `x, y, z`, using every
/// constructor including the truth predicates.
pub fn random_formula<R: Rng>(rng: &mut R, depth: u32) -> Formula {
    if depth <= 1 || rng.gen_bool(0.15) {
        let a = random_term(rng, 2, &VARS);
        let b = random_term(rng, 2, &VARS);
        return match rng.gen_range(0..10) {
            0..=3 => Formula::eq(a, b),
            4..=6 => Formula::le(a, b),
            7 => Formula::pred(&format!("TrueSigma[{}]", rng.gen_range(0..3)), vec![a]),
            8 => Formula::pred(&format!("TruePi[{}]", rng.gen_range(0..3)), vec![a]),
            _ => Formula::pred("Seq", vec![a]),
        };
    }
    let x = VARS[rng.gen_range(0..VARS.len())];
    let sub = |rng: &mut R| random_formula(rng, depth - 1);
    match rng.gen_range(0..10) {
        0 => Formula::not(sub(rng)),
        1 => Formula::and(sub(rng), sub(rng)),
        2 => Formula::or(sub(rng), sub(rng)),
        3 => Formula::implies(sub(rng), sub(rng)),
        4 => Formula::iff(sub(rng), sub(rng)),
        5 => Formula::exists(x, sub(rng)),
        6 => Formula::forall(x, sub(rng)),
        7 | 8 => {
            let others: Vec<&str> = VARS.iter().copied().filter(|v| *v != x).collect();
            let bound = random_term(rng, 1, &others);
            if rng.gen_bool(0.5) {
                Formula::bexists(x, bound, sub(rng))
            } else {
                Formula::bforall(x, bound, sub(rng))
            }
        }
        _ => sub(rng),
    }
}

/// Random bounded sentence with small quantifier ranges.
pub fn random_bounded_sentence<R: Rng>(rng: &mut R, depth: u32, scope: &mut Vec<&'static str>) -> Formula {
    if depth <= 1 || rng.gen_bool(0.2) {
        let a = random_term(rng, 2, scope);
        let b = random_term(rng, 2, scope);
        return if rng.gen_bool(0.5) { Formula::eq(a, b) } else { Formula::le(a, b) };
    }
    match rng.gen_range(0..7) {
        0 => Formula::not(random_bounded_sentence(rng, depth - 1, scope)),
        1 => {
            Formula::and(random_bounded_sentence(rng, depth - 1, scope), random_bounded_sentence(rng, depth - 1, scope))
        }
        2 => {
            Formula::or(random_bounded_sentence(rng, depth - 1, scope), random_bounded_sentence(rng, depth - 1, scope))
        }
        3 => Formula::implies(
            random_bounded_sentence(rng, depth - 1, scope),
            random_bounded_sentence(rng, depth - 1, scope),
        ),
        4 => {
            Formula::iff(random_bounded_sentence(rng, depth - 1, scope), random_bounded_sentence(rng, depth - 1, scope))
        }
        _ => {
            let x = VARS[rng.gen_range(0..VARS.len())];
            let outer: Vec<&str> = scope.iter().copied().filter(|v| *v != x).collect();
            let bound = random_term(rng, 1, &outer);
            scope.push(x);
            let body = random_bounded_sentence(rng, depth - 1, scope);
            scope.pop();
            if rng.gen_bool(0.5) {
                Formula::bexists(x, bound, body)
            } else {
                Formula::bforall(x, bound, body)
            }
        }
    }
}

/// Sentences with a single unbounded quantifier over a bounded body.
pub fn random_unbounded_sentence<R: Rng>(rng: &mut R) -> Formula {
    let mut scope = vec!["x"];
    let body = random_bounded_sentence(rng, 3, &mut scope);
    if rng.gen_bool(0.5) {
        Formula::exists("x", body)
    } else {
        Formula::forall("x", body)
    }
}
