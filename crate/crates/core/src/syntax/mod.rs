//! Abstract syntax for first-order arithmetic over `{0, S, +, *, <=}` plus
//! interpreted extension symbols.

mod parse;
mod print;
mod subst;
pub mod symbols;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero as _};

pub use parse::{parse, parse_term, parse_term_with, parse_with, ParseError};
pub use subst::{fresh_var, substitute, substitute_all};
pub use symbols::{SymbolDecl, SymbolKind, SymbolRegistry};

/// Numerals up to this value are built as explicit `S(...)` chains; larger
/// ones are kept as a compact [`Term::Num`] leaf with the same meaning.
pub const NUMERAL_UNFOLD_LIMIT: u64 = 1024;

/// An interned variable name. Variables are lowercase identifiers.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: &str) -> Self {
        Var(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_valid_name(name: &str) -> bool {
        let mut chars = name.chars();
        matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
            && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var::new(s)
    }
}

/// Name of an interpreted function or predicate symbol, e.g. `TruePi[2]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Symbol names start with an uppercase letter and may carry one
    /// bracketed parameter made of alphanumerics and underscores.
    pub fn is_valid_name(name: &str) -> bool {
        let (head, param) = match name.find('[') {
            Some(i) => {
                if !name.ends_with(']') {
                    return false;
                }
                (&name[..i], Some(&name[i + 1..name.len() - 1]))
            }
            None => (name, None),
        };
        let mut chars = head.chars();
        let head_ok = matches!(chars.next(), Some(c) if c.is_ascii_uppercase())
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
            && !matches!(head, "A" | "E" | "S");
        let param_ok =
            param.is_none_or(|p| !p.is_empty() && p.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'));
        head_ok && param_ok
    }

    /// Splits `Head[param]` into its parts.
    pub fn split(&self) -> (&str, Option<&str>) {
        match self.0.find('[') {
            Some(i) => (&self.0[..i], Some(&self.0[i + 1..self.0.len() - 1])),
            None => (&self.0, None),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    Zero,
    Succ(Box<Term>),
    Add(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
    /// Compact numeral; only ever holds values above [`NUMERAL_UNFOLD_LIMIT`].
    Num(BigUint),
    Fun(Symbol, Vec<Term>),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Eq(Term, Term),
    Le(Term, Term),
    Pred(Symbol, Vec<Term>),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(Var, Box<Formula>),
    Forall(Var, Box<Formula>),
    BExists(Var, Term, Box<Formula>),
    BForall(Var, Term, Box<Formula>),
}

/// The numeral for `n`: `n` successors around zero, or a compact leaf for
/// values too large to unfold.
pub fn numeral(n: &BigUint) -> Term {
    match n.to_u64() {
        Some(small) if small <= NUMERAL_UNFOLD_LIMIT => numeral_u64(small),
        _ => Term::Num(n.clone()),
    }
}

pub fn numeral_u64(n: u64) -> Term {
    if n > NUMERAL_UNFOLD_LIMIT {
        return Term::Num(BigUint::from(n));
    }
    let mut t = Term::Zero;
    for _ in 0..n {
        t = Term::Succ(Box::new(t));
    }
    t
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Var::new(name))
    }

    pub fn succ(t: Term) -> Term {
        Term::Succ(Box::new(t))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(a: Term, b: Term) -> Term {
        Term::Add(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(a: Term, b: Term) -> Term {
        Term::Mul(Box::new(a), Box::new(b))
    }

    pub fn fun(name: &str, args: Vec<Term>) -> Term {
        Term::Fun(Symbol::new(name), args)
    }

    /// The arithmetic pairing term `(a+b)*(a+b)+a`.
    pub fn pair(a: Term, b: Term) -> Term {
        let s = Term::add(a.clone(), b);
        Term::add(Term::mul(s.clone(), s), a)
    }

    /// Number of successor applications this numeral denotes, if the term
    /// is a numeral (a `Num` leaf counts as that many successors).
    pub fn numeral_value(&self) -> Option<BigUint> {
        let mut count = 0u64;
        let mut t = self;
        loop {
            match t {
                Term::Zero => return Some(BigUint::from(count)),
                Term::Num(n) => return Some(n + BigUint::from(count)),
                Term::Succ(inner) => {
                    count += 1;
                    t = inner;
                }
                _ => return None,
            }
        }
    }

    /// Counts `Succ` nodes, expanding compact numerals.
    pub fn succ_count(&self) -> BigUint {
        match self {
            Term::Var(_) | Term::Zero => BigUint::zero(),
            Term::Num(n) => n.clone(),
            Term::Succ(t) => t.succ_count() + 1u32,
            Term::Add(a, b) | Term::Mul(a, b) => a.succ_count() + b.succ_count(),
            Term::Fun(_, args) => args.iter().map(Term::succ_count).sum(),
        }
    }

    pub fn vars_into(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Zero | Term::Num(_) => {}
            Term::Succ(t) => t.vars_into(out),
            Term::Add(a, b) | Term::Mul(a, b) => {
                a.vars_into(out);
                b.vars_into(out);
            }
            Term::Fun(_, args) => args.iter().for_each(|a| a.vars_into(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.vars_into(&mut out);
        out
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        match self {
            Term::Var(w) => w == v,
            Term::Zero | Term::Num(_) => false,
            Term::Succ(t) => t.contains_var(v),
            Term::Add(a, b) | Term::Mul(a, b) => a.contains_var(v) || b.contains_var(v),
            Term::Fun(_, args) => args.iter().any(|a| a.contains_var(v)),
        }
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Zero | Term::Num(_) => true,
            Term::Succ(t) => t.is_closed(),
            Term::Add(a, b) | Term::Mul(a, b) => a.is_closed() && b.is_closed(),
            Term::Fun(_, args) => args.iter().all(Term::is_closed),
        }
    }
}

impl Atom {
    pub fn terms(&self) -> Vec<&Term> {
        match self {
            Atom::Eq(a, b) | Atom::Le(a, b) => vec![a, b],
            Atom::Pred(_, args) => args.iter().collect(),
        }
    }
}

impl Formula {
    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Atom(Atom::Eq(a, b))
    }

    pub fn le(a: Term, b: Term) -> Formula {
        Formula::Atom(Atom::Le(a, b))
    }

    /// `a < b`, sugar for `a <= b & ~(a = b)`.
    pub fn lt(a: Term, b: Term) -> Formula {
        Formula::and(Formula::le(a.clone(), b.clone()), Formula::not(Formula::eq(a, b)))
    }

    pub fn pred(name: &str, args: Vec<Term>) -> Formula {
        Formula::Atom(Atom::Pred(Symbol::new(name), args))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn exists(v: &str, f: Formula) -> Formula {
        Formula::Exists(Var::new(v), Box::new(f))
    }

    pub fn forall(v: &str, f: Formula) -> Formula {
        Formula::Forall(Var::new(v), Box::new(f))
    }

    pub fn bexists(v: &str, bound: Term, f: Formula) -> Formula {
        Formula::BExists(Var::new(v), bound, Box::new(f))
    }

    pub fn bforall(v: &str, bound: Term, f: Formula) -> Formula {
        Formula::BForall(Var::new(v), bound, Box::new(f))
    }

    /// `A v <= t. (~(v = t) -> f)`, i.e. a universal bounded strictly below `t`.
    pub fn bforall_lt(v: &str, bound: Term, f: Formula) -> Formula {
        let guard = Formula::not(Formula::eq(Term::var(v), bound.clone()));
        Formula::bforall(v, bound, Formula::implies(guard, f))
    }

    /// `E v <= t. (~(v = t) & f)`.
    pub fn bexists_lt(v: &str, bound: Term, f: Formula) -> Formula {
        let guard = Formula::not(Formula::eq(Term::var(v), bound.clone()));
        Formula::bexists(v, bound, Formula::and(guard, f))
    }

    /// Left-folded conjunction; `None` for an empty list.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        items.into_iter().reduce(Formula::and)
    }

    /// `0 = 0`.
    pub fn verum() -> Formula {
        Formula::eq(Term::Zero, Term::Zero)
    }

    /// `~(0 = 0)`.
    pub fn falsum() -> Formula {
        Formula::not(Formula::verum())
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.free_vars_into(&mut BTreeSet::new(), &mut out);
        out
    }

    fn free_vars_into(&self, bound: &mut BTreeSet<Var>, out: &mut BTreeSet<Var>) {
        let add_term = |t: &Term, bound: &BTreeSet<Var>, out: &mut BTreeSet<Var>| {
            for v in t.vars() {
                if !bound.contains(&v) {
                    out.insert(v);
                }
            }
        };
        match self {
            Formula::Atom(a) => a.terms().into_iter().for_each(|t| add_term(t, bound, out)),
            Formula::Not(f) => f.free_vars_into(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.free_vars_into(bound, out);
                b.free_vars_into(bound, out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                let fresh = bound.insert(v.clone());
                f.free_vars_into(bound, out);
                if fresh {
                    bound.remove(v);
                }
            }
            Formula::BExists(v, t, f) | Formula::BForall(v, t, f) => {
                add_term(t, bound, out);
                let fresh = bound.insert(v.clone());
                f.free_vars_into(bound, out);
                if fresh {
                    bound.remove(v);
                }
            }
        }
    }

    pub fn is_free(&self, v: &Var) -> bool {
        self.free_vars().contains(v)
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.all_vars_into(&mut out);
        out
    }

    fn all_vars_into(&self, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Atom(a) => a.terms().into_iter().for_each(|t| t.vars_into(out)),
            Formula::Not(f) => f.all_vars_into(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.all_vars_into(out);
                b.all_vars_into(out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                out.insert(v.clone());
                f.all_vars_into(out);
            }
            Formula::BExists(v, t, f) | Formula::BForall(v, t, f) => {
                out.insert(v.clone());
                t.vars_into(out);
                f.all_vars_into(out);
            }
        }
    }

    /// Every interpreted symbol used, with its argument count.
    pub fn symbols(&self) -> BTreeSet<(Symbol, usize)> {
        fn term(t: &Term, out: &mut BTreeSet<(Symbol, usize)>) {
            match t {
                Term::Var(_) | Term::Zero | Term::Num(_) => {}
                Term::Succ(a) => term(a, out),
                Term::Add(a, b) | Term::Mul(a, b) => {
                    term(a, out);
                    term(b, out);
                }
                Term::Fun(s, args) => {
                    out.insert((s.clone(), args.len()));
                    args.iter().for_each(|a| term(a, out));
                }
            }
        }
        fn go(f: &Formula, out: &mut BTreeSet<(Symbol, usize)>) {
            match f {
                Formula::Atom(Atom::Pred(s, args)) => {
                    out.insert((s.clone(), args.len()));
                    args.iter().for_each(|a| term(a, out));
                }
                Formula::Atom(a) => a.terms().into_iter().for_each(|t| term(t, out)),
                Formula::Not(g) => go(g, out),
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                Formula::Exists(_, g) | Formula::Forall(_, g) => go(g, out),
                Formula::BExists(_, t, g) | Formula::BForall(_, t, g) => {
                    term(t, out);
                    go(g, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut out);
        out
    }

    /// Number of nodes, counting terms.
    pub fn size(&self) -> usize {
        fn tsize(t: &Term) -> usize {
            match t {
                Term::Var(_) | Term::Zero | Term::Num(_) => 1,
                Term::Succ(a) => 1 + tsize(a),
                Term::Add(a, b) | Term::Mul(a, b) => 1 + tsize(a) + tsize(b),
                Term::Fun(_, args) => 1 + args.iter().map(tsize).sum::<usize>(),
            }
        }
        match self {
            Formula::Atom(a) => 1 + a.terms().into_iter().map(tsize).sum::<usize>(),
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                1 + a.size() + b.size()
            }
            Formula::BExists(_, t, f) | Formula::BForall(_, t, f) => 1 + tsize(t) + f.size(),
        }
    }

    /// Checks that no bounded quantifier's bound mentions its own variable.
    pub fn bounds_well_formed(&self) -> bool {
        match self {
            Formula::Atom(_) => true,
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => f.bounds_well_formed(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.bounds_well_formed() && b.bounds_well_formed()
            }
            Formula::BExists(v, t, f) | Formula::BForall(v, t, f) => !t.contains_var(v) && f.bounds_well_formed(),
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
