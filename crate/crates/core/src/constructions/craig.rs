use num_bigint::BigUint;

use super::ConstructionError;
use crate::coding::{decode_formula, encode_formula};
use crate::hierarchy::{classify_with, nnf, Level, LevelKind};
use crate::semantics::{Budget, Env, Verdict};
use crate::syntax::{fresh_var, numeral_u64, substitute, Atom, Formula, Term, Var};
use crate::theories::{Axioms, TheoryDescriptor, CODE_VAR};

#[derive(Clone, Debug)]
pub struct CraigResult {
    pub theory: TheoryDescriptor,
    /// `theta'(x, y)`: the witness block bounded by `y`.
    pub theta_prime: Formula,
    pub witness_var: Var,
    /// Axioms read off the defining formula, each with the least witness
    /// found and its padded counterpart.
    pub materialized: Vec<(Formula, u64, Formula)>,
}

/// `phi & k = k` with `k` as a numeral.
pub fn craig_axiom(phi: &Formula, k: u64) -> Formula {
    Formula::and(phi.clone(), Formula::eq(numeral_u64(k), numeral_u64(k)))
}

/// Replaces a Sigma(n+1) axiom predicate `E x1 ... E xk. theta` (theta in
/// Pi(n)) by the Pi(n) predicate
/// `E a <= x. E b <= x. (theta'(a, b) & x = AndC(a, NumEqC(b)))`, where
/// `theta'(x, y) = E x1 <= y ... E xk <= y. theta`.
pub fn craig_transform(t: &TheoryDescriptor, budget: Budget) -> Result<CraigResult, ConstructionError> {
    let level = t.declared_level.normalized();
    if level.kind != LevelKind::Sigma || level.index == 0 {
        return Err(ConstructionError::Precondition(format!("axiom predicate is {level}, expected Sigma(n+1)")));
    }
    let n = level.index - 1;
    let Axioms::Defined(formula) = &t.axioms else {
        return Err(ConstructionError::Precondition("a finite axiom list has no witness block".into()));
    };
    let mut body = nnf(formula);
    let mut block = Vec::new();
    while let Formula::Exists(v, g) = body {
        block.push(v);
        body = *g;
    }
    if block.is_empty() || !classify_with(&body, t.registry())?.within(Level::pi(n)) {
        return Err(ConstructionError::Precondition(format!(
            "axiom predicate is not an existential block over a Pi({n}) formula"
        )));
    }
    let witness_var = fresh_var(&Var::new("y"), &formula.all_vars());
    let theta_prime = block
        .iter()
        .rev()
        .fold(body, |acc, v| Formula::BExists(v.clone(), Term::Var(witness_var.clone()), Box::new(acc)));

    let (a, b) = (Var::new("a"), Var::new("b"));
    let x = || Term::var(CODE_VAR);
    let renamed = substitute(
        &substitute(&theta_prime, &witness_var, &Term::Var(b.clone())),
        &Var::new(CODE_VAR),
        &Term::Var(a.clone()),
    );
    let tagged = Formula::eq(
        x(),
        Term::fun("AndC", vec![Term::Var(a.clone()), Term::fun("NumEqC", vec![Term::Var(b.clone())])]),
    );
    let axioms = Formula::BExists(a, x(), Box::new(Formula::BExists(b, x(), Box::new(Formula::and(renamed, tagged)))));
    let theory = TheoryDescriptor::defined(&format!("{}_craig", t.name), axioms, t.registry())?;
    debug_assert_eq!(theory.declared_level, Level::pi(n));

    let ev = t.evaluator(budget);
    let mut materialized = Vec::new();
    for phi in candidate_axioms(formula) {
        let code = encode_formula(&phi);
        let witness = (0..=budget.witness_bound).find(|&k| {
            let env = Env::from([(Var::new(CODE_VAR), code.clone()), (witness_var.clone(), BigUint::from(k))]);
            ev.eval_open(&theta_prime, &env) == Ok(Verdict::True)
        });
        if let Some(k) = witness {
            materialized.push((phi.clone(), k, craig_axiom(&phi, k)));
        }
    }
    Ok(CraigResult { theory, theta_prime, witness_var, materialized })
}

/// Sentences whose codes appear as `x = c` in the formula.
fn candidate_axioms(f: &Formula) -> Vec<Formula> {
    let mut out: Vec<Formula> = Vec::new();
    let mut visit = |a: &Atom| {
        if let Atom::Eq(l, r) = a {
            for (v, c) in [(l, r), (r, l)] {
                if matches!(v, Term::Var(v) if v.as_str() == CODE_VAR) {
                    if let Some(phi) = c.numeral_value().as_ref().and_then(decode_formula) {
                        if phi.is_sentence() && !out.contains(&phi) {
                            out.push(phi);
                        }
                    }
                }
            }
        }
    };
    for_each_atom(f, &mut visit);
    out
}

fn for_each_atom(f: &Formula, visit: &mut impl FnMut(&Atom)) {
    match f {
        Formula::Atom(a) => visit(a),
        Formula::Not(g)
        | Formula::Exists(_, g)
        | Formula::Forall(_, g)
        | Formula::BExists(_, _, g)
        | Formula::BForall(_, _, g) => for_each_atom(g, visit),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            for_each_atom(a, visit);
            for_each_atom(b, visit);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, SymbolRegistry};

    fn toy() -> TheoryDescriptor {
        let c = encode_formula(&Formula::verum());
        let f = parse(&format!("E y. (y = y & x = {c})")).unwrap();
        TheoryDescriptor::defined("toy", f, &SymbolRegistry::builtin()).unwrap()
    }

    #[test]
    fn toy_transform() {
        let b = Budget::with_witness_bound(20);
        let r = craig_transform(&toy(), b).unwrap();
        assert_eq!(r.theory.declared_level, Level::pi(0));
        assert_eq!(r.materialized.len(), 1);
        let padded = craig_axiom(&Formula::verum(), 3);
        assert_eq!(padded.to_string(), "0 = 0 & S(S(S(0))) = S(S(S(0)))");
        assert_eq!(r.theory.membership(&encode_formula(&padded), b), Verdict::True);
        assert_eq!(r.theory.membership(&encode_formula(&Formula::verum()), b), Verdict::False);
    }

    #[test]
    fn level_drop() {
        let f = parse("E y. A z. (z = z & x = y)").unwrap();
        let t = TheoryDescriptor::defined("s2", f, &SymbolRegistry::builtin()).unwrap();
        assert_eq!(t.declared_level, Level::sigma(2));
        let r = craig_transform(&t, Budget::with_witness_bound(5)).unwrap();
        assert_eq!(r.theory.declared_level, Level::pi(1));
        assert!(craig_transform(&TheoryDescriptor::q(), Budget::with_witness_bound(5)).is_err());
    }
}
