//! Registry of interpreted symbols: their kind, arity, declared level and
//! (for theory-specific predicates) their evaluation hook.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;

use super::Symbol;
use crate::hierarchy::Level;
use crate::semantics::{Evaluator, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolKind {
    Function,
    Predicate,
}

/// Evaluation hook of a registered predicate. Receives the evaluator, the
/// argument values and the current nesting depth.
pub type PredicateHook = Arc<dyn Fn(&Evaluator<'_>, &[BigUint], usize) -> Verdict + Send + Sync>;

#[derive(Clone)]
pub struct SymbolDecl {
    pub kind: SymbolKind,
    pub arity: usize,
    pub level: Level,
    pub hook: Option<PredicateHook>,
}

impl fmt::Debug for SymbolDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymbolDecl")
            .field("kind", &self.kind)
            .field("arity", &self.arity)
            .field("level", &self.level)
            .field("hook", &self.hook.is_some())
            .finish()
    }
}

/// Built-in function symbols. All are Σ₀-definable operations on codes.
pub const BUILTIN_FUNCTIONS: &[(&str, usize)] = &[
    ("SSub", 2),
    ("NegC", 1),
    ("AndC", 2),
    ("OrC", 2),
    ("ImpC", 2),
    ("ExistsC", 1),
    ("NumEqC", 1),
    ("Len", 1),
    ("At", 2),
    ("Prefix", 2),
];

/// Fixed built-in predicates (the `TrueSigma[n]`/`TruePi[n]` families are
/// resolved separately).
pub const BUILTIN_PREDICATES: &[(&str, usize)] = &[("ProofChk", 2), ("Seq", 1), ("Sent", 1), ("ConjSeq", 2)];

/// Symbol table. Built-ins are always present; theory symbols are added
/// with [`SymbolRegistry::with_symbol`]. Cloning is cheap.
#[derive(Clone, Default, Debug)]
pub struct SymbolRegistry {
    custom: BTreeMap<Symbol, SymbolDecl>,
}

impl SymbolRegistry {
    /// Registry holding only the built-in symbols.
    pub fn builtin() -> Self {
        SymbolRegistry::default()
    }

    pub fn with_symbol(mut self, name: Symbol, decl: SymbolDecl) -> Self {
        self.custom.insert(name, decl);
        self
    }

    pub fn insert(&mut self, name: Symbol, decl: SymbolDecl) {
        self.custom.insert(name, decl);
    }

    pub fn contains(&self, name: &Symbol) -> bool {
        self.lookup(name).is_some()
    }

    pub fn lookup(&self, name: &Symbol) -> Option<SymbolDecl> {
        if let Some(decl) = self.custom.get(name) {
            return Some(decl.clone());
        }
        builtin_decl(name)
    }

    pub fn custom_symbols(&self) -> impl Iterator<Item = (&Symbol, &SymbolDecl)> {
        self.custom.iter()
    }
}

/// Declaration of a built-in symbol, if `name` is one.
pub fn builtin_decl(name: &Symbol) -> Option<SymbolDecl> {
    let plain = |kind, arity| SymbolDecl { kind, arity, level: Level::sigma(0), hook: None };
    if let Some(&(_, arity)) = BUILTIN_FUNCTIONS.iter().find(|(n, _)| *n == name.as_str()) {
        return Some(plain(SymbolKind::Function, arity));
    }
    if let Some(&(_, arity)) = BUILTIN_PREDICATES.iter().find(|(n, _)| *n == name.as_str()) {
        return Some(plain(SymbolKind::Predicate, arity));
    }
    let (head, param) = name.split();
    let index = param.and_then(|p| p.parse::<u32>().ok())?;
    let level = match head {
        "TrueSigma" => Level::sigma(index),
        "TruePi" => Level::pi(index),
        _ => return None,
    };
    Some(SymbolDecl { kind: SymbolKind::Predicate, arity: 1, level, hook: None })
}

/// Name of the truth predicate for `level`.
pub fn truth_symbol(level: Level) -> Symbol {
    match level.kind {
        crate::hierarchy::LevelKind::Sigma => Symbol::new(&format!("TrueSigma[{}]", level.index)),
        crate::hierarchy::LevelKind::Pi => Symbol::new(&format!("TruePi[{}]", level.index)),
    }
}
