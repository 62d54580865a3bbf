//! Concrete ASCII syntax. The printer emits exactly what the parser reads,
//! so `parse(print(f)) == f` for every well-formed AST.

use std::fmt::{self, Display, Formatter, Write};

use super::{Atom, Formula, Term};

fn term_prec(t: &Term) -> u8 {
    match t {
        Term::Add(..) => 1,
        Term::Mul(..) => 2,
        _ => 3,
    }
}

fn write_term(t: &Term, out: &mut Formatter<'_>) -> fmt::Result {
    match t {
        Term::Var(v) => write!(out, "{v}"),
        Term::Zero => out.write_char('0'),
        Term::Num(n) => write!(out, "{n}"),
        Term::Succ(inner) => {
            // Iterative so long successor chains don't recurse.
            let mut depth = 1usize;
            let mut cur: &Term = inner;
            while let Term::Succ(next) = cur {
                depth += 1;
                cur = next;
            }
            for _ in 0..depth {
                out.write_str("S(")?;
            }
            write_term(cur, out)?;
            for _ in 0..depth {
                out.write_char(')')?;
            }
            Ok(())
        }
        Term::Add(a, b) | Term::Mul(a, b) => {
            let (prec, op) = if matches!(t, Term::Add(..)) { (1, " + ") } else { (2, " * ") };
            write_operand(a, term_prec(a) < prec, out)?;
            out.write_str(op)?;
            write_operand(b, term_prec(b) <= prec, out)
        }
        Term::Fun(s, args) => {
            write!(out, "{s}(")?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.write_str(", ")?;
                }
                write_term(a, out)?;
            }
            out.write_char(')')
        }
    }
}

fn write_operand(t: &Term, paren: bool, out: &mut Formatter<'_>) -> fmt::Result {
    if paren {
        out.write_char('(')?;
        write_term(t, out)?;
        out.write_char(')')
    } else {
        write_term(t, out)
    }
}

impl Display for Term {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_term(self, f)
    }
}

impl Display for Atom {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Eq(a, b) => write!(f, "{a} = {b}"),
            Atom::Le(a, b) => write!(f, "{a} <= {b}"),
            Atom::Pred(s, args) => {
                write!(f, "{s}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_char(')')
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Assoc {
    Left,
    Right,
    None,
}

fn formula_prec(f: &Formula) -> u8 {
    match f {
        Formula::Exists(..) | Formula::Forall(..) | Formula::BExists(..) | Formula::BForall(..) => 0,
        Formula::Iff(..) => 1,
        Formula::Implies(..) => 2,
        Formula::Or(..) => 3,
        Formula::And(..) => 4,
        Formula::Not(_) | Formula::Atom(_) => 5,
    }
}

fn write_formula(f: &Formula, out: &mut Formatter<'_>) -> fmt::Result {
    match f {
        Formula::Atom(a) => write!(out, "{a}"),
        Formula::Not(g) => {
            out.write_str("~(")?;
            write_formula(g, out)?;
            out.write_char(')')
        }
        Formula::And(a, b) => write_binary(a, b, " & ", 4, Assoc::Left, out),
        Formula::Or(a, b) => write_binary(a, b, " | ", 3, Assoc::Left, out),
        Formula::Implies(a, b) => write_binary(a, b, " -> ", 2, Assoc::Right, out),
        Formula::Iff(a, b) => write_binary(a, b, " <-> ", 1, Assoc::None, out),
        Formula::Exists(v, g) => {
            write!(out, "E {v}. ")?;
            write_formula(g, out)
        }
        Formula::Forall(v, g) => {
            write!(out, "A {v}. ")?;
            write_formula(g, out)
        }
        Formula::BExists(v, t, g) => {
            write!(out, "E {v} <= {t}. ")?;
            write_formula(g, out)
        }
        Formula::BForall(v, t, g) => {
            write!(out, "A {v} <= {t}. ")?;
            write_formula(g, out)
        }
    }
}

fn write_binary(a: &Formula, b: &Formula, op: &str, prec: u8, assoc: Assoc, out: &mut Formatter<'_>) -> fmt::Result {
    let pa = formula_prec(a);
    let pb = formula_prec(b);
    let left_paren = pa < prec || (pa == prec && assoc != Assoc::Left);
    let right_paren = pb < prec || (pb == prec && assoc != Assoc::Right);
    write_sub(a, left_paren, out)?;
    out.write_str(op)?;
    write_sub(b, right_paren, out)
}

fn write_sub(f: &Formula, paren: bool, out: &mut Formatter<'_>) -> fmt::Result {
    if paren {
        out.write_char('(')?;
        write_formula(f, out)?;
        out.write_char(')')
    } else {
        write_formula(f, out)
    }
}

impl Display for Formula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_formula(self, f)
    }
}
