//! Definable theories and the predicates built from them: `Axioms_T`,
//! `ConjAx_T`, `Prov_T` and `Con(T)`.
//!
//! A theory's axiom predicate enters formulas as the interpreted atom
//! `Ax[name](t)`, declared at the theory's level and evaluated through a
//! hook. The theory's registry carries that symbol together with the
//! symbols of every theory it was built from.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use thiserror::Error;

use crate::coding::encode_formula;
use crate::hierarchy::{classify_with, HierarchyError, Level, LevelKind};
use crate::proofs::q_axioms;
use crate::semantics::{Budget, Env, Evaluator, Verdict};
use crate::syntax::symbols::truth_symbol;
use crate::syntax::{
    numeral, numeral_u64, parse_with, substitute, Atom, Formula, ParseError, Symbol, SymbolDecl, SymbolKind,
    SymbolRegistry, Term, Var,
};

/// Name of the free variable of axiom predicates and provability formulas.
pub const CODE_VAR: &str = "x";

#[derive(Debug, Error)]
pub enum TheoryError {
    #[error("line {line}: {message}")]
    File { line: usize, message: String },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Hierarchy(#[from] HierarchyError),
    #[error("axiom `{0}` is not a sentence")]
    NotASentence(String),
    #[error("axiom predicate must have exactly one free variable, found {0:?}")]
    FreeVariables(Vec<String>),
    #[error("invalid theory name `{0}`")]
    BadName(String),
    #[error("declared level {declared} differs from the computed level {computed}")]
    LevelMismatch { declared: Level, computed: Level },
}

#[derive(Clone, Debug)]
pub enum Axioms {
    /// An explicit list of sentences.
    Finite(Vec<Formula>),
    /// A formula with the single free variable `x` ranging over codes.
    Defined(Formula),
}

#[derive(Clone)]
pub struct TheoryDescriptor {
    pub name: String,
    pub axioms: Axioms,
    pub declared_level: Level,
    registry: SymbolRegistry,
}

impl fmt::Debug for TheoryDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TheoryDescriptor")
            .field("name", &self.name)
            .field("axioms", &self.axioms)
            .field("declared_level", &self.declared_level)
            .finish()
    }
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl TheoryDescriptor {
    /// A finitely axiomatized theory. Its axiom predicate is Sigma(0).
    pub fn finite(name: &str, axioms: Vec<Formula>) -> Result<Self, TheoryError> {
        Self::finite_over(name, axioms, SymbolRegistry::builtin())
    }

    fn finite_over(name: &str, axioms: Vec<Formula>, base: SymbolRegistry) -> Result<Self, TheoryError> {
        if !valid_name(name) {
            return Err(TheoryError::BadName(name.to_string()));
        }
        if let Some(a) = axioms.iter().find(|a| !a.is_sentence()) {
            return Err(TheoryError::NotASentence(a.to_string()));
        }
        let codes: BTreeSet<BigUint> = axioms.iter().map(encode_formula).collect();
        let hook = Arc::new(move |_: &Evaluator<'_>, args: &[BigUint], _: usize| {
            Verdict::from_bool(args.first().is_some_and(|c| codes.contains(c)))
        });
        let decl = SymbolDecl { kind: SymbolKind::Predicate, arity: 1, level: Level::sigma(0), hook: Some(hook) };
        let registry = base.with_symbol(ax_symbol(name), decl);
        Ok(TheoryDescriptor {
            name: name.to_string(),
            axioms: Axioms::Finite(axioms),
            declared_level: Level::sigma(0),
            registry,
        })
    }

    /// A theory given by an axiom predicate. `base` must declare every
    /// interpreted symbol the formula uses.
    pub fn defined(name: &str, formula: Formula, base: &SymbolRegistry) -> Result<Self, TheoryError> {
        if !valid_name(name) {
            return Err(TheoryError::BadName(name.to_string()));
        }
        let free = formula.free_vars();
        if free.len() != 1 {
            return Err(TheoryError::FreeVariables(free.iter().map(|v| v.to_string()).collect()));
        }
        let v = free.into_iter().next().expect("one variable");
        let formula = if v.as_str() == CODE_VAR { formula } else { substitute(&formula, &v, &Term::var(CODE_VAR)) };
        let level = classify_with(&formula, base)?.level;
        let body = formula.clone();
        let hook = Arc::new(move |ev: &Evaluator<'_>, args: &[BigUint], depth: usize| match args.first() {
            Some(c) => ev.eval_nested(&body, &Env::from([(Var::new(CODE_VAR), c.clone())]), depth),
            None => Verdict::False,
        });
        let decl = SymbolDecl { kind: SymbolKind::Predicate, arity: 1, level, hook: Some(hook) };
        let registry = base.clone().with_symbol(ax_symbol(name), decl);
        Ok(TheoryDescriptor {
            name: name.to_string(),
            axioms: Axioms::Defined(formula),
            declared_level: level,
            registry,
        })
    }

    /// Robinson arithmetic.
    pub fn q() -> Self {
        Self::finite("q", q_axioms()).expect("Q axioms are sentences")
    }

    /// Registry declaring this theory's `Ax` symbol and those it depends on.
    pub fn registry(&self) -> &SymbolRegistry {
        &self.registry
    }

    pub fn ax_symbol(&self) -> Symbol {
        ax_symbol(&self.name)
    }

    /// The atom `Ax[name](t)`.
    pub fn ax_atom(&self, t: Term) -> Formula {
        Formula::Atom(Atom::Pred(self.ax_symbol(), vec![t]))
    }

    /// `Axioms_T(x)`: the defining formula, or for a finite theory the
    /// disjunction of `x = c` over the axiom codes.
    pub fn axioms_formula(&self) -> Formula {
        match &self.axioms {
            Axioms::Defined(f) => f.clone(),
            Axioms::Finite(list) => list
                .iter()
                .map(|a| Formula::eq(Term::var(CODE_VAR), numeral(&encode_formula(a))))
                .reduce(Formula::or)
                .unwrap_or_else(|| Formula::not(Formula::eq(Term::var(CODE_VAR), Term::var(CODE_VAR)))),
        }
    }

    /// The explicit axiom list, when there is one.
    pub fn axiom_list(&self) -> Option<&[Formula]> {
        match &self.axioms {
            Axioms::Finite(list) => Some(list),
            Axioms::Defined(_) => None,
        }
    }

    /// Whether the sentence coded by `c` is an axiom, at the given budget.
    pub fn membership(&self, c: &BigUint, budget: Budget) -> Verdict {
        let ev = Evaluator::new(&self.registry, budget);
        ev.eval_open(&self.ax_atom(Term::var(CODE_VAR)), &Env::from([(Var::new(CODE_VAR), c.clone())]))
            .unwrap_or(Verdict::Unknown)
    }

    pub fn evaluator(&self, budget: Budget) -> Evaluator<'_> {
        Evaluator::new(&self.registry, budget)
    }

    /// Level of a formula over this theory's symbols.
    pub fn classify(&self, f: &Formula) -> Result<Level, HierarchyError> {
        Ok(classify_with(f, &self.registry)?.level)
    }
}

fn ax_symbol(name: &str) -> Symbol {
    Symbol::new(&format!("Ax[{name}]"))
}

/// `ConjAx_T(x)`: `x` codes a left-folded conjunction of axioms of `T`.
///
/// `E m <= 2*x*x*x. (Seq(m) & ConjSeq(x, m) & A i < Len(m). Ax[T](At(m, i)))`
///
/// Only bounded quantifiers are added, so the level equals that of the axiom
/// predicate.
pub fn conjax_formula(t: &TheoryDescriptor) -> Formula {
    let x = || Term::var(CODE_VAR);
    let m = || Term::var("m");
    let bound = Term::mul(Term::mul(Term::mul(numeral_u64(2), x()), x()), x());
    let members =
        Formula::bforall_lt("i", Term::fun("Len", vec![m()]), t.ax_atom(Term::fun("At", vec![m(), Term::var("i")])));
    Formula::bexists(
        "m",
        bound,
        Formula::and(Formula::and(Formula::pred("Seq", vec![m()]), Formula::pred("ConjSeq", vec![x(), m()])), members),
    )
}

/// `Prov_T(x) = E y. E z. (ConjAx_T(z) & ProofChk(y, ImpC(z, x)))`.
pub fn prov_formula(t: &TheoryDescriptor) -> Formula {
    let conj = substitute(&conjax_formula(t), &Var::new(CODE_VAR), &Term::var("z"));
    let chk =
        Formula::pred("ProofChk", vec![Term::var("y"), Term::fun("ImpC", vec![Term::var("z"), Term::var(CODE_VAR)])]);
    Formula::exists("y", Formula::exists("z", Formula::and(conj, chk)))
}

/// `Prov_T` applied to the numeral of `code`.
pub fn prov_at(t: &TheoryDescriptor, code: &BigUint) -> Formula {
    substitute(&prov_formula(t), &Var::new(CODE_VAR), &numeral(code))
}

/// `Con(T) = ~Prov_T(⌜~(0 = 0)⌝)`.
pub fn con_sentence(t: &TheoryDescriptor) -> Formula {
    Formula::not(prov_at(t, &encode_formula(&Formula::falsum())))
}

/// `T + Pi(n)-Th(N)`: axioms `Ax[T](x) | TruePi[n](x)`. For `n = 0` the
/// theory is returned unchanged, since true Pi(0) sentences are already
/// decided by Q.
pub fn extend_with_pi_truth(t: &TheoryDescriptor, n: u32) -> TheoryDescriptor {
    if n == 0 {
        return t.clone();
    }
    let formula = Formula::or(
        t.ax_atom(Term::var(CODE_VAR)),
        Formula::pred(truth_symbol(Level::pi(n)).as_str(), vec![Term::var(CODE_VAR)]),
    );
    let name = format!("{}_pi{n}", t.name);
    let out = TheoryDescriptor::defined(&name, formula, t.registry()).expect("well-formed by construction");
    debug_assert_eq!(out.declared_level, t.declared_level.join(Level::pi(n)));
    out
}

/// Parses a theory file:
///
/// ```text
/// theory <name>
/// extends q
/// level Sigma 1
/// axiom <formula>
/// axioms-formula <formula>
/// ```
///
/// `axiom` lines and one `axioms-formula` line are mutually exclusive.
/// `level` is optional and, when present, must equal the computed level.
pub fn parse_theory(text: &str) -> Result<TheoryDescriptor, TheoryError> {
    let err = |line: usize, message: &str| TheoryError::File { line, message: message.to_string() };
    let mut name = None;
    let mut extends_q = false;
    let mut level = None;
    let mut axioms = Vec::new();
    let mut formula: Option<(usize, String)> = None;
    let base = TheoryDescriptor::q();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match key {
            "theory" => name = Some(rest.to_string()),
            "extends" if rest == "q" => extends_q = true,
            "extends" => return Err(err(line_no, "only `extends q` is supported")),
            "level" => {
                let mut it = rest.split_whitespace();
                let kind = match it.next() {
                    Some("Sigma") => LevelKind::Sigma,
                    Some("Pi") => LevelKind::Pi,
                    _ => return Err(err(line_no, "expected `level Sigma <n>` or `level Pi <n>`")),
                };
                let index = it.next().and_then(|s| s.parse().ok()).ok_or_else(|| err(line_no, "bad level index"))?;
                level = Some(Level { kind, index });
            }
            "axiom" => axioms.push(parse_with(rest, base.registry())?),
            "axioms-formula" => {
                if formula.is_some() {
                    return Err(err(line_no, "duplicate axioms-formula"));
                }
                formula = Some((line_no, rest.to_string()));
            }
            _ => return Err(err(line_no, &format!("unknown directive `{key}`"))),
        }
    }
    let name = name.ok_or_else(|| err(1, "missing `theory <name>` line"))?;
    let theory = match formula {
        Some((line_no, _)) if !axioms.is_empty() => {
            return Err(err(line_no, "`axiom` and `axioms-formula` cannot be combined"));
        }
        Some((_, text)) => {
            let f = parse_with(&text, base.registry())?;
            let f = if extends_q { Formula::or(base.ax_atom(Term::var(CODE_VAR)), f) } else { f };
            let reg = if extends_q { base.registry().clone() } else { SymbolRegistry::builtin() };
            TheoryDescriptor::defined(&name, f, &reg)?
        }
        None => {
            if extends_q {
                let mut all = q_axioms();
                all.extend(axioms);
                axioms = all;
            }
            TheoryDescriptor::finite(&name, axioms)?
        }
    };
    if let Some(declared) = level {
        if declared != theory.declared_level {
            return Err(TheoryError::LevelMismatch { declared, computed: theory.declared_level });
        }
    }
    Ok(theory)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::classify_with;
    use crate::proofs::{encode_proof, search_with, SearchLimits};
    use crate::syntax::parse;

    fn unit() -> TheoryDescriptor {
        TheoryDescriptor::finite("unit", vec![Formula::verum()]).unwrap()
    }

    fn at(f: &Formula, c: &BigUint) -> Formula {
        substitute(f, &Var::new(CODE_VAR), &numeral(c))
    }

    #[test]
    fn conjax_accepts_conjunctions_of_axioms() {
        let t = unit();
        let ev = t.evaluator(Budget::with_witness_bound(100));
        let cj = conjax_formula(&t);
        for (s, want) in [("0 = 0", Verdict::True), ("0 = 0 & 0 = 0", Verdict::True), ("0 = 1", Verdict::False)] {
            let c = encode_formula(&parse(s).unwrap());
            assert_eq!(ev.eval(&at(&cj, &c)).unwrap(), want, "{s}");
        }
    }

    #[test]
    fn provability_of_an_axiom() {
        let t = unit();
        let goal = Formula::implies(Formula::verum(), Formula::verum());
        let proof = search_with(&[], &goal, SearchLimits::default()).unwrap();
        let ev = t.evaluator(Budget::with_witness_bound(100)).with_hint("y", [encode_proof(&proof)]);
        let prov = prov_at(&t, &encode_formula(&Formula::verum()));
        assert_eq!(ev.eval(&prov).unwrap(), Verdict::True);
        assert_eq!(t.evaluator(Budget::with_witness_bound(50)).eval(&con_sentence(&t)).unwrap(), Verdict::Unknown);
    }

    #[test]
    fn levels() {
        let t = unit();
        let reg = t.registry();
        assert_eq!(classify_with(&conjax_formula(&t), reg).unwrap().level, Level::sigma(0));
        assert_eq!(classify_with(&prov_formula(&t), reg).unwrap().level, Level::sigma(1));
        assert_eq!(classify_with(&con_sentence(&t), reg).unwrap().level, Level::pi(1));
        let con = con_sentence(&t);
        let Formula::Not(inner) = &con else { panic!("not a negation") };
        assert_eq!(**inner, prov_at(&t, &encode_formula(&Formula::falsum())));
        let q1 = extend_with_pi_truth(&TheoryDescriptor::q(), 1);
        assert_eq!(q1.declared_level, Level::pi(1));
        assert_eq!(q1.classify(&prov_formula(&q1)).unwrap(), Level::sigma(2));
        assert_eq!(extend_with_pi_truth(&t, 0).name, "unit");
    }

    #[test]
    fn pi_truth_membership() {
        let q1 = extend_with_pi_truth(&TheoryDescriptor::q(), 1);
        let b = Budget::with_witness_bound(50);
        let code = |s: &str| encode_formula(&parse(s).unwrap());
        assert_eq!(q1.membership(&code("A x. x + 0 = x"), b), Verdict::True);
        assert_eq!(q1.membership(&code("A x. x = 0"), b), Verdict::False);
        assert_eq!(q1.membership(&code("E x. x = 0"), b), Verdict::False);
        assert_eq!(q1.membership(&code("0 = 0"), b), Verdict::True);
    }

    #[test]
    fn theory_files() {
        let t = parse_theory("theory toy\nextends q\naxiom E x. x + x = S(0)\n").unwrap();
        assert_eq!(t.axiom_list().unwrap().len(), 9);
        let d = parse_theory("theory d\nlevel Sigma 1\naxioms-formula E y. (y = y & x = 210)\n").unwrap();
        assert_eq!(d.declared_level, Level::sigma(1));
        assert_eq!(d.membership(&BigUint::from(210u32), Budget::with_witness_bound(10)), Verdict::True);
        assert!(matches!(
            parse_theory("theory d\nlevel Pi 1\naxioms-formula E y. x = y\n"),
            Err(TheoryError::LevelMismatch { .. })
        ));
        assert!(parse_theory("level Pi 1\n").is_err());
    }
}
