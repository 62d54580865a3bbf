//! Syntactic placement of formulas in the arithmetical hierarchy.
//!
//! A formula gets a pair of indices `(s, p)`: the least `n` with the formula
//! in the syntactic class Sigma(n), and the least `n` with it in Pi(n). The
//! reported [`Level`] is the smaller of the two.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::Serialize;
use thiserror::Error;

use crate::syntax::{Atom, Formula, Symbol, SymbolKind, SymbolRegistry};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum LevelKind {
    Sigma,
    Pi,
}

impl LevelKind {
    pub fn dual(self) -> LevelKind {
        match self {
            LevelKind::Sigma => LevelKind::Pi,
            LevelKind::Pi => LevelKind::Sigma,
        }
    }
}

/// A point of the hierarchy. `Sigma(0)` and `Pi(0)` are the same level.
#[derive(Clone, Copy, Debug)]
pub struct Level {
    pub kind: LevelKind,
    pub index: u32,
}

impl Level {
    pub fn sigma(index: u32) -> Level {
        Level { kind: LevelKind::Sigma, index }
    }

    pub fn pi(index: u32) -> Level {
        Level { kind: LevelKind::Pi, index }
    }

    pub fn bounded() -> Level {
        Level::sigma(0)
    }

    pub fn dual(self) -> Level {
        Level { kind: self.kind.dual(), index: self.index }
    }

    /// Representative with index 0 always reported as Sigma.
    pub fn normalized(self) -> Level {
        if self.index == 0 {
            Level::sigma(0)
        } else {
            self
        }
    }

    /// Lattice order: same kind compares indices; across kinds only a
    /// strictly smaller index (or index 0) is below.
    pub fn leq(self, other: Level) -> bool {
        if self.kind == other.kind || self.index == 0 {
            self.index <= other.index
        } else {
            self.index < other.index
        }
    }

    /// Least upper bound when the two are comparable; otherwise the next
    /// level up, keeping the kind of `self`.
    pub fn join(self, other: Level) -> Level {
        if other.leq(self) {
            self.normalized()
        } else if self.leq(other) {
            other.normalized()
        } else {
            Level { kind: self.kind, index: self.index.max(other.index) + 1 }
        }
    }

    /// The index pair `(s, p)` of an atom declared at this level.
    fn indices(self) -> (u32, u32) {
        match (self.kind, self.index) {
            (_, 0) => (0, 0),
            (LevelKind::Sigma, k) => (k, k + 1),
            (LevelKind::Pi, k) => (k + 1, k),
        }
    }
}

impl PartialEq for Level {
    fn eq(&self, other: &Level) -> bool {
        let (a, b) = (self.normalized(), other.normalized());
        a.kind == b.kind && a.index == b.index
    }
}

impl Eq for Level {}

impl Hash for Level {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let n = self.normalized();
        n.kind.hash(state);
        n.index.hash(state);
    }
}

impl PartialOrd for Level {
    fn partial_cmp(&self, other: &Level) -> Option<Ordering> {
        match (self.leq(*other), other.leq(*self)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.normalized();
        match n.kind {
            LevelKind::Sigma => write!(f, "Sigma({})", n.index),
            LevelKind::Pi => write!(f, "Pi({})", n.index),
        }
    }
}

pub fn dual(l: Level) -> Level {
    l.dual()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HierarchyError {
    #[error("interpreted symbol `{0}` has no declared level")]
    UndeclaredSymbol(String),
    #[error("`{0}` is a function symbol used as a predicate")]
    NotAPredicate(String),
}

/// Result of classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub level: Level,
    /// Least `n` with the formula syntactically in Sigma(n).
    pub sigma: u32,
    /// Least `n` with the formula syntactically in Pi(n).
    pub pi: u32,
    pub nnf: Formula,
}

impl Classification {
    /// Whether the formula is in both Sigma(n) and Pi(n) for its reported index.
    pub fn is_delta(&self) -> bool {
        self.sigma == self.pi
    }

    pub fn within(&self, l: Level) -> bool {
        match l.kind {
            LevelKind::Sigma => self.sigma <= l.index,
            LevelKind::Pi => self.pi <= l.index,
        }
    }
}

/// Replaces `->` and `<->` by their definitions in `~`, `&`, `|`.
pub fn desugar(f: &Formula) -> Formula {
    match f {
        Formula::Atom(_) => f.clone(),
        Formula::Not(g) => Formula::not(desugar(g)),
        Formula::And(a, b) => Formula::and(desugar(a), desugar(b)),
        Formula::Or(a, b) => Formula::or(desugar(a), desugar(b)),
        Formula::Implies(a, b) => Formula::or(Formula::not(desugar(a)), desugar(b)),
        Formula::Iff(a, b) => {
            let (a, b) = (desugar(a), desugar(b));
            Formula::and(Formula::or(Formula::not(a.clone()), b.clone()), Formula::or(Formula::not(b), a))
        }
        Formula::Exists(v, g) => Formula::Exists(v.clone(), Box::new(desugar(g))),
        Formula::Forall(v, g) => Formula::Forall(v.clone(), Box::new(desugar(g))),
        Formula::BExists(v, t, g) => Formula::BExists(v.clone(), t.clone(), Box::new(desugar(g))),
        Formula::BForall(v, t, g) => Formula::BForall(v.clone(), t.clone(), Box::new(desugar(g))),
    }
}

/// Negation normal form: implications removed, negations only on atoms.
pub fn nnf(f: &Formula) -> Formula {
    push(&desugar(f), true)
}

fn push(f: &Formula, positive: bool) -> Formula {
    match f {
        Formula::Atom(_) => {
            if positive {
                f.clone()
            } else {
                Formula::not(f.clone())
            }
        }
        Formula::Not(g) => push(g, !positive),
        Formula::And(a, b) | Formula::Or(a, b) => {
            let (a, b) = (push(a, positive), push(b, positive));
            if matches!(f, Formula::And(..)) == positive {
                Formula::and(a, b)
            } else {
                Formula::or(a, b)
            }
        }
        Formula::Implies(..) | Formula::Iff(..) => push(&desugar(f), positive),
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let g = Box::new(push(g, positive));
            if matches!(f, Formula::Exists(..)) == positive {
                Formula::Exists(v.clone(), g)
            } else {
                Formula::Forall(v.clone(), g)
            }
        }
        Formula::BExists(v, t, g) | Formula::BForall(v, t, g) => {
            let g = Box::new(push(g, positive));
            if matches!(f, Formula::BExists(..)) == positive {
                Formula::BExists(v.clone(), t.clone(), g)
            } else {
                Formula::BForall(v.clone(), t.clone(), g)
            }
        }
    }
}

pub fn classify(f: &Formula) -> Result<Level, HierarchyError> {
    classify_with(f, &SymbolRegistry::builtin()).map(|c| c.level)
}

pub fn classify_with(f: &Formula, registry: &SymbolRegistry) -> Result<Classification, HierarchyError> {
    let nnf = nnf(f);
    let (sigma, pi) = indices(&nnf, registry)?;
    let level = if sigma == 0 {
        Level::sigma(0)
    } else if sigma < pi {
        Level::sigma(sigma)
    } else if pi < sigma {
        Level::pi(pi)
    } else {
        let kind = leading_kind(&nnf, registry).unwrap_or(LevelKind::Sigma);
        Level { kind, index: sigma }
    };
    Ok(Classification { level, sigma, pi, nnf })
}

fn atom_level(a: &Atom, registry: &SymbolRegistry) -> Result<Level, HierarchyError> {
    match a {
        Atom::Eq(..) | Atom::Le(..) => Ok(Level::sigma(0)),
        Atom::Pred(s, _) => predicate_level(s, registry),
    }
}

fn predicate_level(s: &Symbol, registry: &SymbolRegistry) -> Result<Level, HierarchyError> {
    let decl = registry.lookup(s).ok_or_else(|| HierarchyError::UndeclaredSymbol(s.to_string()))?;
    if decl.kind != SymbolKind::Predicate {
        return Err(HierarchyError::NotAPredicate(s.to_string()));
    }
    Ok(decl.level)
}

fn normalize((s, p): (u32, u32)) -> (u32, u32) {
    (s.min(p + 1), p.min(s + 1))
}

fn indices(f: &Formula, registry: &SymbolRegistry) -> Result<(u32, u32), HierarchyError> {
    let pair = match f {
        Formula::Atom(a) => atom_level(a, registry)?.indices(),
        Formula::Not(g) => match g.as_ref() {
            Formula::Atom(a) => atom_level(a, registry)?.dual().indices(),
            other => {
                let (s, p) = indices(&push(other, false), registry)?;
                (s, p)
            }
        },
        Formula::And(a, b) | Formula::Or(a, b) => {
            let (sa, pa) = indices(a, registry)?;
            let (sb, pb) = indices(b, registry)?;
            (sa.max(sb), pa.max(pb))
        }
        Formula::Implies(..) | Formula::Iff(..) => indices(&nnf(f), registry)?,
        Formula::Exists(_, g) => {
            let (s, p) = indices(g, registry)?;
            let s = s.max(1).min(p + 1);
            (s, s + 1)
        }
        Formula::Forall(_, g) => {
            let (s, p) = indices(g, registry)?;
            let p = p.max(1).min(s + 1);
            (p + 1, p)
        }
        Formula::BExists(_, _, g) | Formula::BForall(_, _, g) => indices(g, registry)?,
    };
    Ok(normalize(pair))
}

/// Kind of the first unbounded quantifier (or unbounded interpreted atom)
/// met in pre-order; decides ties between Sigma(n) and Pi(n).
fn leading_kind(f: &Formula, registry: &SymbolRegistry) -> Option<LevelKind> {
    match f {
        Formula::Atom(a) => {
            let l = atom_level(a, registry).ok()?;
            (l.index > 0).then_some(l.kind)
        }
        Formula::Not(g) => match g.as_ref() {
            Formula::Atom(a) => {
                let l = atom_level(a, registry).ok()?;
                (l.index > 0).then_some(l.kind.dual())
            }
            other => leading_kind(other, registry).map(LevelKind::dual),
        },
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            leading_kind(a, registry).or_else(|| leading_kind(b, registry))
        }
        Formula::Exists(..) => Some(LevelKind::Sigma),
        Formula::Forall(..) => Some(LevelKind::Pi),
        Formula::BExists(_, _, g) | Formula::BForall(_, _, g) => leading_kind(g, registry),
    }
}
