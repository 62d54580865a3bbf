use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::{name_token, token_name, TokenReader, TokenWriter};
use crate::syntax::symbols::builtin_decl;
use crate::syntax::{Atom, Formula, Symbol, SymbolKind, Term, Var, NUMERAL_UNFOLD_LIMIT};

const T_VAR: u64 = 0;
const T_ZERO: u64 = 1;
const T_SUCC: u64 = 2;
const T_ADD: u64 = 3;
const T_MUL: u64 = 4;
const T_FUN: u64 = 5;
const T_NUM: u64 = 6;

const F_EQ: u64 = 0;
const F_LE: u64 = 1;
const F_PRED: u64 = 2;
const F_NOT: u64 = 3;
const F_AND: u64 = 4;
const F_OR: u64 = 5;
const F_IMP: u64 = 6;
const F_IFF: u64 = 7;
const F_EX: u64 = 8;
const F_ALL: u64 = 9;
const F_BEX: u64 = 10;
const F_BALL: u64 = 11;

/// Nesting limit when decoding, so hostile codes cannot exhaust the stack.
const MAX_DEPTH: usize = 1000;

pub fn write_term(t: &Term, w: &mut TokenWriter) {
    match t {
        Term::Var(v) => {
            w.push_u64(T_VAR);
            w.push(&name_token(v.as_str()));
        }
        Term::Zero => w.push_u64(T_ZERO),
        Term::Succ(_) => {
            let mut cur = t;
            while let Term::Succ(inner) = cur {
                w.push_u64(T_SUCC);
                cur = inner;
            }
            write_term(cur, w);
        }
        Term::Add(a, b) | Term::Mul(a, b) => {
            w.push_u64(if matches!(t, Term::Add(..)) { T_ADD } else { T_MUL });
            write_term(a, w);
            write_term(b, w);
        }
        Term::Fun(s, args) => {
            w.push_u64(T_FUN);
            w.push(&name_token(s.as_str()));
            w.push_u64(args.len() as u64);
            args.iter().for_each(|a| write_term(a, w));
        }
        Term::Num(n) => {
            w.push_u64(T_NUM);
            w.push(n);
        }
    }
}

pub fn write_formula(f: &Formula, w: &mut TokenWriter) {
    match f {
        Formula::Atom(Atom::Eq(a, b)) | Formula::Atom(Atom::Le(a, b)) => {
            w.push_u64(if matches!(f, Formula::Atom(Atom::Eq(..))) { F_EQ } else { F_LE });
            write_term(a, w);
            write_term(b, w);
        }
        Formula::Atom(Atom::Pred(s, args)) => {
            w.push_u64(F_PRED);
            w.push(&name_token(s.as_str()));
            w.push_u64(args.len() as u64);
            args.iter().for_each(|a| write_term(a, w));
        }
        Formula::Not(g) => {
            w.push_u64(F_NOT);
            write_formula(g, w);
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            let tag = match f {
                Formula::And(..) => F_AND,
                Formula::Or(..) => F_OR,
                Formula::Implies(..) => F_IMP,
                _ => F_IFF,
            };
            w.push_u64(tag);
            write_formula(a, w);
            write_formula(b, w);
        }
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            w.push_u64(if matches!(f, Formula::Exists(..)) { F_EX } else { F_ALL });
            w.push(&name_token(v.as_str()));
            write_formula(g, w);
        }
        Formula::BExists(v, t, g) | Formula::BForall(v, t, g) => {
            w.push_u64(if matches!(f, Formula::BExists(..)) { F_BEX } else { F_BALL });
            w.push(&name_token(v.as_str()));
            write_term(t, w);
            write_formula(g, w);
        }
    }
}

pub fn encode_term(t: &Term) -> BigUint {
    let mut w = TokenWriter::new();
    write_term(t, &mut w);
    w.finish()
}

pub fn encode_formula(f: &Formula) -> BigUint {
    let mut w = TokenWriter::new();
    write_formula(f, &mut w);
    w.finish()
}

fn read_var(r: &mut TokenReader) -> Option<Var> {
    let name = token_name(&r.next()?)?;
    Var::is_valid_name(&name).then(|| Var::new(&name))
}

fn read_symbol(r: &mut TokenReader, kind: SymbolKind) -> Option<(Symbol, usize)> {
    let name = token_name(&r.next()?)?;
    if !Symbol::is_valid_name(&name) {
        return None;
    }
    let sym = Symbol::new(&name);
    let arity = r.next_usize()?;
    if let Some(decl) = builtin_decl(&sym) {
        if decl.kind != kind || decl.arity != arity {
            return None;
        }
    }
    Some((sym, arity))
}

fn read_args(r: &mut TokenReader, n: usize, depth: usize) -> Option<Vec<Term>> {
    // Each argument takes at least one token, which bounds hostile arities.
    let mut args = Vec::with_capacity(n.min(64));
    for _ in 0..n {
        args.push(read_term_at(r, depth + 1)?);
    }
    Some(args)
}

pub fn read_term(r: &mut TokenReader) -> Option<Term> {
    read_term_at(r, 0)
}

fn read_term_at(r: &mut TokenReader, depth: usize) -> Option<Term> {
    if depth > MAX_DEPTH {
        return None;
    }
    let mut succs = 0usize;
    let mut tag = r.next_u64()?;
    while tag == T_SUCC {
        succs += 1;
        tag = r.next_u64()?;
    }
    let mut t = match tag {
        T_VAR => Term::Var(read_var(r)?),
        T_ZERO => Term::Zero,
        T_ADD | T_MUL => {
            let a = read_term_at(r, depth + 1)?;
            let b = read_term_at(r, depth + 1)?;
            if tag == T_ADD {
                Term::add(a, b)
            } else {
                Term::mul(a, b)
            }
        }
        T_FUN => {
            let (sym, arity) = read_symbol(r, SymbolKind::Function)?;
            Term::Fun(sym, read_args(r, arity, depth)?)
        }
        T_NUM => {
            let n = r.next()?;
            if n.to_u64().is_some_and(|v| v <= NUMERAL_UNFOLD_LIMIT) {
                return None;
            }
            Term::Num(n)
        }
        _ => return None,
    };
    for _ in 0..succs {
        t = Term::succ(t);
    }
    Some(t)
}

pub fn read_formula(r: &mut TokenReader) -> Option<Formula> {
    read_formula_at(r, 0)
}

fn read_formula_at(r: &mut TokenReader, depth: usize) -> Option<Formula> {
    if depth > MAX_DEPTH {
        return None;
    }
    let d = depth + 1;
    let f = match r.next_u64()? {
        F_EQ => Formula::eq(read_term_at(r, d)?, read_term_at(r, d)?),
        F_LE => Formula::le(read_term_at(r, d)?, read_term_at(r, d)?),
        F_PRED => {
            let (sym, arity) = read_symbol(r, SymbolKind::Predicate)?;
            Formula::Atom(Atom::Pred(sym, read_args(r, arity, depth)?))
        }
        F_NOT => Formula::not(read_formula_at(r, d)?),
        tag @ (F_AND | F_OR | F_IMP | F_IFF) => {
            let a = read_formula_at(r, d)?;
            let b = read_formula_at(r, d)?;
            match tag {
                F_AND => Formula::and(a, b),
                F_OR => Formula::or(a, b),
                F_IMP => Formula::implies(a, b),
                _ => Formula::iff(a, b),
            }
        }
        tag @ (F_EX | F_ALL) => {
            let v = read_var(r)?;
            let g = Box::new(read_formula_at(r, d)?);
            if tag == F_EX {
                Formula::Exists(v, g)
            } else {
                Formula::Forall(v, g)
            }
        }
        tag @ (F_BEX | F_BALL) => {
            let v = read_var(r)?;
            let t = read_term_at(r, d)?;
            if t.contains_var(&v) {
                return None;
            }
            let g = Box::new(read_formula_at(r, d)?);
            if tag == F_BEX {
                Formula::BExists(v, t, g)
            } else {
                Formula::BForall(v, t, g)
            }
        }
        _ => return None,
    };
    Some(f)
}

pub fn decode_formula(c: &BigUint) -> Option<Formula> {
    let mut r = TokenReader::new(c)?;
    let f = read_formula(&mut r)?;
    r.at_end().then_some(f)
}

pub fn decode_term(c: &BigUint) -> Option<Term> {
    let mut r = TokenReader::new(c)?;
    let t = read_term(&mut r)?;
    r.at_end().then_some(t)
}

/// The `Sent` predicate: `c` decodes to a formula with no free variables.
pub fn is_sent_code(c: &BigUint) -> bool {
    decode_formula(c).is_some_and(|f| f.is_sentence())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    #[test]
    fn small_codes() {
        assert_eq!(encode_formula(&Formula::verum()), BigUint::from(210u32));
        assert_eq!(decode_formula(&BigUint::from(210u32)), Some(Formula::verum()));
        assert_eq!(decode_formula(&BigUint::from(0u32)), None);
        assert_eq!(decode_formula(&BigUint::from(17u32)), None);
    }

    #[test]
    fn round_trips() {
        for text in [
            "E x. x = 0",
            "A x <= S(S(0)). x <= S(S(0))",
            "TruePi[2](SSub(x, 5000)) -> ~(y = x * (x + 0))",
            "ProofChk(y, ImpC(z, x)) <-> Ax[q](x) | 0 = 0",
        ] {
            let f = parse(text).unwrap_or_else(|_| crate::syntax::parse_with(text, &test_registry()).unwrap());
            assert_eq!(decode_formula(&encode_formula(&f)), Some(f.clone()), "{text}");
        }
    }

    fn test_registry() -> crate::syntax::SymbolRegistry {
        use crate::hierarchy::Level;
        use crate::syntax::SymbolDecl;
        crate::syntax::SymbolRegistry::builtin().with_symbol(
            Symbol::new("Ax[q]"),
            SymbolDecl { kind: SymbolKind::Predicate, arity: 1, level: Level::sigma(0), hook: None },
        )
    }

    #[test]
    fn sentence_codes() {
        assert!(is_sent_code(&encode_formula(&parse("E x. x = 0").unwrap())));
        assert!(!is_sent_code(&encode_formula(&parse("x = 0").unwrap())));
    }

    #[test]
    fn rejects_non_canonical_numerals() {
        let mut w = TokenWriter::new();
        w.push_u64(F_EQ);
        w.push_u64(T_NUM);
        w.push_u64(3);
        w.push_u64(T_ZERO);
        assert_eq!(decode_formula(&w.finish()), None);
    }
}
