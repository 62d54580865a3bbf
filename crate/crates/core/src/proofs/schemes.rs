use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::syntax::{substitute, Atom, Formula, Term, Var};

/// Logical axiom schemes. Propositional: K, S and Mendelson's third scheme
/// plus derived conveniences; quantifier, bounded-quantifier and equality
/// schemes complete the calculus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Scheme {
    /// `A -> (B -> A)`
    K,
    /// `(A -> (B -> C)) -> ((A -> B) -> (A -> C))`
    S,
    /// `(~B -> ~A) -> ((~B -> A) -> B)`
    Contra,
    /// `(A -> B) -> (~B -> ~A)`
    Contrapos,
    /// `~~A -> A`
    DneElim,
    /// `A -> ~~A`
    DneIntro,
    /// `A -> (B -> A & B)`
    AndIntro,
    /// `A & B -> A`
    AndElimL,
    /// `A & B -> B`
    AndElimR,
    /// `A -> A | B`
    OrIntroL,
    /// `B -> A | B`
    OrIntroR,
    /// `(A -> C) -> ((B -> C) -> (A | B -> C))`
    OrElim,
    /// `(A -> B) -> ((B -> A) -> (A <-> B))`
    IffIntro,
    /// `(A <-> B) -> (A -> B)`
    IffElimL,
    /// `(A <-> B) -> (B -> A)`
    IffElimR,
    /// `(A x. A) -> A[x := t]`
    ForallElim,
    /// `A[x := t] -> E x. A`
    ExistsIntro,
    /// `(A x. (A -> B)) -> (A -> A x. B)`, `x` not free in `A`
    ForallDist,
    /// `(A x. (A -> B)) -> ((E x. A) -> B)`, `x` not free in `B`
    ExistsElim,
    /// `(A x <= t. A) <-> A x. (x <= t -> A)`
    BForallDef,
    /// `(E x <= t. A) <-> E x. (x <= t & A)`
    BExistsDef,
    /// `t = t`
    EqRefl,
    /// `s = t -> t = s`
    EqSym,
    /// `r = s -> (s = t -> r = t)`
    EqTrans,
    /// `s = t -> S(s) = S(t)`
    EqCongSucc,
    /// `s1 = t1 -> (s2 = t2 -> s1 + s2 = t1 + t2)`
    EqCongAdd,
    /// `s1 = t1 -> (s2 = t2 -> s1 * s2 = t1 * t2)`
    EqCongMul,
    /// `s1 = t1 -> (s2 = t2 -> (s1 <= s2 -> t1 <= t2))`
    EqCongLe,
    /// `s1 = t1 -> (s2 = t2 -> (s1 = s2 -> t1 = t2))`
    EqCongEq,
}

pub const ALL_SCHEMES: [Scheme; 29] = [
    Scheme::K,
    Scheme::S,
    Scheme::Contra,
    Scheme::Contrapos,
    Scheme::DneElim,
    Scheme::DneIntro,
    Scheme::AndIntro,
    Scheme::AndElimL,
    Scheme::AndElimR,
    Scheme::OrIntroL,
    Scheme::OrIntroR,
    Scheme::OrElim,
    Scheme::IffIntro,
    Scheme::IffElimL,
    Scheme::IffElimR,
    Scheme::ForallElim,
    Scheme::ExistsIntro,
    Scheme::ForallDist,
    Scheme::ExistsElim,
    Scheme::BForallDef,
    Scheme::BExistsDef,
    Scheme::EqRefl,
    Scheme::EqSym,
    Scheme::EqTrans,
    Scheme::EqCongSucc,
    Scheme::EqCongAdd,
    Scheme::EqCongMul,
    Scheme::EqCongLe,
    Scheme::EqCongEq,
];

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Scheme, String> {
        ALL_SCHEMES.iter().copied().find(|x| x.to_string() == s).ok_or_else(|| format!("unknown scheme `{s}`"))
    }
}

impl Scheme {
    pub fn id(self) -> u64 {
        ALL_SCHEMES.iter().position(|s| *s == self).expect("listed") as u64
    }

    pub fn from_id(id: u64) -> Option<Scheme> {
        ALL_SCHEMES.get(usize::try_from(id).ok()?).copied()
    }

    /// Whether `f` is an instance of this scheme.
    pub fn matches(self, f: &Formula) -> bool {
        use Formula as F;
        match self {
            Scheme::K => imp(f).and_then(|(a, r)| imp(r).map(|(_, a2)| a == a2)).unwrap_or(false),
            Scheme::S => (|| {
                let (l, r) = imp(f)?;
                let (a, bc) = imp(l)?;
                let (b, c) = imp(bc)?;
                let (ab, ac) = imp(r)?;
                let (a2, b2) = imp(ab)?;
                let (a3, c2) = imp(ac)?;
                Some(a == a2 && a == a3 && b == b2 && c == c2)
            })()
            .unwrap_or(false),
            Scheme::Contra => (|| {
                let (l, r) = imp(f)?;
                let (nb, na) = imp(l)?;
                let (nb2, a) = imp(r.imp_lhs()?)?;
                let b = r.imp_rhs()?;
                Some(nb == nb2 && neg(nb)? == b && neg(na)? == a)
            })()
            .unwrap_or(false),
            Scheme::Contrapos => (|| {
                let (l, r) = imp(f)?;
                let (a, b) = imp(l)?;
                let (nb, na) = imp(r)?;
                Some(neg(nb)? == b && neg(na)? == a)
            })()
            .unwrap_or(false),
            Scheme::DneElim => imp(f).and_then(|(l, r)| Some(neg(neg(l)?)? == r)).unwrap_or(false),
            Scheme::DneIntro => imp(f).and_then(|(l, r)| Some(neg(neg(r)?)? == l)).unwrap_or(false),
            Scheme::AndIntro => (|| {
                let (a, r) = imp(f)?;
                let (b, c) = imp(r)?;
                Some(matches!(c, F::And(x, y) if **x == *a && **y == *b))
            })()
            .unwrap_or(false),
            Scheme::AndElimL | Scheme::AndElimR => match imp(f) {
                Some((F::And(a, b), c)) => c == if self == Scheme::AndElimL { a.as_ref() } else { b.as_ref() },
                _ => false,
            },
            Scheme::OrIntroL | Scheme::OrIntroR => match imp(f) {
                Some((c, F::Or(a, b))) => c == if self == Scheme::OrIntroL { a.as_ref() } else { b.as_ref() },
                _ => false,
            },
            Scheme::OrElim => (|| {
                let (ac, r) = imp(f)?;
                let (a, c) = imp(ac)?;
                let (bc, r2) = imp(r)?;
                let (b, c2) = imp(bc)?;
                let (ab, c3) = imp(r2)?;
                Some(matches!(ab, F::Or(x, y) if **x == *a && **y == *b) && c == c2 && c == c3)
            })()
            .unwrap_or(false),
            Scheme::IffIntro => (|| {
                let (ab, r) = imp(f)?;
                let (a, b) = imp(ab)?;
                let (ba, iff) = imp(r)?;
                let (b2, a2) = imp(ba)?;
                Some(a == a2 && b == b2 && matches!(iff, F::Iff(x, y) if **x == *a && **y == *b))
            })()
            .unwrap_or(false),
            Scheme::IffElimL | Scheme::IffElimR => (|| {
                let (iff, r) = imp(f)?;
                let (x, y) = imp(r)?;
                let F::Iff(a, b) = iff else { return None };
                Some(if self == Scheme::IffElimL { **a == *x && **b == *y } else { **b == *x && **a == *y })
            })()
            .unwrap_or(false),
            Scheme::ForallElim => match imp(f) {
                Some((F::Forall(x, a), b)) => is_instance(a, x, b),
                _ => false,
            },
            Scheme::ExistsIntro => match imp(f) {
                Some((b, F::Exists(x, a))) => is_instance(a, x, b),
                _ => false,
            },
            Scheme::ForallDist => (|| {
                let (F::Forall(x, ab), r) = imp(f)? else {
                    return None;
                };
                let (a, b) = imp(ab)?;
                let (a2, F::Forall(x2, b2)) = imp(r)? else {
                    return None;
                };
                Some(x == x2 && a == a2 && b == b2.as_ref() && !a.is_free(x))
            })()
            .unwrap_or(false),
            Scheme::ExistsElim => (|| {
                let (F::Forall(x, ab), r) = imp(f)? else {
                    return None;
                };
                let (a, b) = imp(ab)?;
                let (F::Exists(x2, a2), b2) = imp(r)? else {
                    return None;
                };
                Some(x == x2 && a == a2.as_ref() && b == b2 && !b.is_free(x))
            })()
            .unwrap_or(false),
            Scheme::BForallDef => match f {
                F::Iff(l, r) => match (l.as_ref(), r.as_ref()) {
                    (F::BForall(x, t, a), F::Forall(x2, body)) => match imp(body) {
                        Some((F::Atom(Atom::Le(Term::Var(v), t2)), a2)) => {
                            x == x2 && v == x && t == t2 && a.as_ref() == a2
                        }
                        _ => false,
                    },
                    _ => false,
                },
                _ => false,
            },
            Scheme::BExistsDef => match f {
                F::Iff(l, r) => match (l.as_ref(), r.as_ref()) {
                    (F::BExists(x, t, a), F::Exists(x2, body)) => match body.as_ref() {
                        F::And(le, a2) => {
                            matches!(le.as_ref(), F::Atom(Atom::Le(Term::Var(v), t2)) if v == x && t2 == t)
                                && x == x2
                                && a == a2
                        }
                        _ => false,
                    },
                    _ => false,
                },
                _ => false,
            },
            Scheme::EqRefl => matches!(f, F::Atom(Atom::Eq(a, b)) if a == b),
            Scheme::EqSym => match imp(f) {
                Some((F::Atom(Atom::Eq(s, t)), F::Atom(Atom::Eq(t2, s2)))) => s == s2 && t == t2,
                _ => false,
            },
            Scheme::EqTrans => (|| {
                let (rs, r) = imp(f)?;
                let (st, rt) = imp(r)?;
                let (r1, s1) = eq(rs)?;
                let (s2, t2) = eq(st)?;
                let (r3, t3) = eq(rt)?;
                Some(s1 == s2 && r1 == r3 && t2 == t3)
            })()
            .unwrap_or(false),
            Scheme::EqCongSucc => match imp(f) {
                Some((F::Atom(Atom::Eq(s, t)), F::Atom(Atom::Eq(Term::Succ(s2), Term::Succ(t2))))) => {
                    s == s2.as_ref() && t == t2.as_ref()
                }
                _ => false,
            },
            Scheme::EqCongAdd | Scheme::EqCongMul | Scheme::EqCongLe | Scheme::EqCongEq => (|| {
                let (e1, r) = imp(f)?;
                let (e2, c) = imp(r)?;
                let (s1, t1) = eq(e1)?;
                let (s2, t2) = eq(e2)?;
                Some(match self {
                    Scheme::EqCongAdd => {
                        eq(c)? == (&Term::add(s1.clone(), s2.clone()), &Term::add(t1.clone(), t2.clone()))
                    }
                    Scheme::EqCongMul => {
                        eq(c)? == (&Term::mul(s1.clone(), s2.clone()), &Term::mul(t1.clone(), t2.clone()))
                    }
                    _ => {
                        let (p, q) = imp(c)?;
                        match (self, p, q) {
                            (Scheme::EqCongLe, F::Atom(Atom::Le(a, b)), F::Atom(Atom::Le(a2, b2))) => {
                                (a, b, a2, b2) == (s1, s2, t1, t2)
                            }
                            (Scheme::EqCongEq, F::Atom(Atom::Eq(a, b)), F::Atom(Atom::Eq(a2, b2))) => {
                                (a, b, a2, b2) == (s1, s2, t1, t2)
                            }
                            _ => false,
                        }
                    }
                })
            })()
            .unwrap_or(false),
        }
    }
}

trait ImpParts {
    fn imp_lhs(&self) -> Option<&Formula>;
    fn imp_rhs(&self) -> Option<&Formula>;
}

impl ImpParts for Formula {
    fn imp_lhs(&self) -> Option<&Formula> {
        imp(self).map(|(a, _)| a)
    }
    fn imp_rhs(&self) -> Option<&Formula> {
        imp(self).map(|(_, b)| b)
    }
}

pub(crate) fn imp(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::Implies(a, b) => Some((a, b)),
        _ => None,
    }
}

fn neg(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::Not(a) => Some(a),
        _ => None,
    }
}

fn eq(f: &Formula) -> Option<(&Term, &Term)> {
    match f {
        Formula::Atom(Atom::Eq(a, b)) => Some((a, b)),
        _ => None,
    }
}

/// Whether `b` is `a[x := t]` for some term `t`.
pub(crate) fn is_instance(a: &Formula, x: &Var, b: &Formula) -> bool {
    if !a.is_free(x) {
        return a == b;
    }
    match find_instance_term(a, x, b) {
        Some(t) => &substitute(a, x, &t) == b,
        None => false,
    }
}

/// Walks `a` and `b` in parallel and returns the subterm of `b` sitting at
/// the first free occurrence of `x` in `a`. Binder names are ignored, since
/// substitution may rename them.
pub(crate) fn find_instance_term(a: &Formula, x: &Var, b: &Formula) -> Option<Term> {
    fn term(a: &Term, x: &Var, b: &Term) -> Option<Term> {
        match (a, b) {
            (Term::Var(v), _) if v == x => Some(b.clone()),
            (Term::Succ(p), Term::Succ(q)) => term(p, x, q),
            (Term::Add(p1, p2), Term::Add(q1, q2)) | (Term::Mul(p1, p2), Term::Mul(q1, q2)) => {
                term(p1, x, q1).or_else(|| term(p2, x, q2))
            }
            (Term::Fun(s, ps), Term::Fun(s2, qs)) if s == s2 && ps.len() == qs.len() => {
                ps.iter().zip(qs).find_map(|(p, q)| term(p, x, q))
            }
            _ => None,
        }
    }
    fn go(a: &Formula, x: &Var, b: &Formula) -> Option<Term> {
        match (a, b) {
            (Formula::Atom(p), Formula::Atom(q)) => {
                let (ps, qs) = (p.terms(), q.terms());
                if ps.len() != qs.len() {
                    return None;
                }
                ps.into_iter().zip(qs).find_map(|(p, q)| term(p, x, q))
            }
            (Formula::Not(p), Formula::Not(q)) => go(p, x, q),
            (Formula::And(p1, p2), Formula::And(q1, q2))
            | (Formula::Or(p1, p2), Formula::Or(q1, q2))
            | (Formula::Implies(p1, p2), Formula::Implies(q1, q2))
            | (Formula::Iff(p1, p2), Formula::Iff(q1, q2)) => go(p1, x, q1).or_else(|| go(p2, x, q2)),
            (Formula::Exists(v, p), Formula::Exists(_, q)) | (Formula::Forall(v, p), Formula::Forall(_, q)) => {
                if v == x {
                    return None;
                }
                go(p, x, q)
            }
            (Formula::BExists(v, t, p), Formula::BExists(_, t2, q))
            | (Formula::BForall(v, t, p), Formula::BForall(_, t2, q)) => {
                if let Some(found) = term(t, x, t2) {
                    return Some(found);
                }
                if v == x {
                    return None;
                }
                go(p, x, q)
            }
            _ => None,
        }
    }
    go(a, x, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn holds(s: Scheme, text: &str) -> bool {
        s.matches(&parse(text).unwrap())
    }

    #[test]
    fn propositional_instances() {
        assert!(holds(Scheme::K, "0 = 0 -> (x = 0 -> 0 = 0)"));
        assert!(!holds(Scheme::K, "0 = 0 -> (x = 0 -> x = 0)"));
        assert!(holds(Scheme::S, "(a = 0 -> (b = 0 -> c = 0)) -> ((a = 0 -> b = 0) -> (a = 0 -> c = 0))"));
        assert!(holds(Scheme::Contra, "(~(b = 0) -> ~(a = 0)) -> ((~(b = 0) -> a = 0) -> b = 0)"));
        assert!(holds(Scheme::Contrapos, "(a = 0 -> b = 0) -> (~(b = 0) -> ~(a = 0))"));
        assert!(holds(Scheme::AndIntro, "a = 0 -> (b = 0 -> a = 0 & b = 0)"));
        assert!(holds(Scheme::OrElim, "(a = 0 -> c = 0) -> ((b = 0 -> c = 0) -> (a = 0 | b = 0 -> c = 0))"));
        assert!(holds(Scheme::IffElimR, "(a = 0 <-> b = 0) -> (b = 0 -> a = 0)"));
    }

    #[test]
    fn quantifier_instances() {
        assert!(holds(Scheme::ForallElim, "(A x. x = y) -> S(0) = y"));
        assert!(holds(Scheme::ForallElim, "(A x. E y. x = y) -> E y1. y = y1"));
        assert!(!holds(Scheme::ForallElim, "(A x. x = x) -> 0 = S(0)"));
        assert!(holds(Scheme::ExistsIntro, "S(0) + S(0) = 2 -> E x. x + x = 2"));
        assert!(holds(Scheme::ForallDist, "(A x. (0 = 0 -> x = x)) -> (0 = 0 -> A x. x = x)"));
        assert!(!holds(Scheme::ForallDist, "(A x. (x = 0 -> x = x)) -> (x = 0 -> A x. x = x)"));
        assert!(holds(Scheme::BForallDef, "(A x <= 3. x = x) <-> A x. (x <= 3 -> x = x)"));
        assert!(holds(Scheme::BExistsDef, "(E x <= y. x = x) <-> E x. (x <= y & x = x)"));
    }

    #[test]
    fn equality_instances() {
        assert!(holds(Scheme::EqTrans, "a = b -> (b = c -> a = c)"));
        assert!(holds(Scheme::EqCongAdd, "a = b -> (c = d -> a + c = b + d)"));
        assert!(holds(Scheme::EqCongEq, "a = b -> (c = d -> (a = c -> b = d))"));
        assert!(!holds(Scheme::EqCongEq, "a = b -> (c = d -> (a = c -> d = b))"));
        assert_eq!(Scheme::from_id(Scheme::EqCongEq.id()), Some(Scheme::EqCongEq));
        assert_eq!("ForallElim".parse::<Scheme>(), Ok(Scheme::ForallElim));
    }
}
