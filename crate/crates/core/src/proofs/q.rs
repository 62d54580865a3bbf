use num_bigint::BigUint;

use crate::coding::encode_formula;
use crate::syntax::{substitute, Formula, Term, Var};

/// Robinson arithmetic. The predecessor and order axioms carry bounded
/// inner quantifiers so that every axiom stays within Pi(1).
pub fn q_axioms() -> Vec<Formula> {
    let x = || Term::var("x");
    let y = || Term::var("y");
    let z = || Term::var("z");
    vec![
        Formula::forall("x", Formula::not(Formula::eq(Term::succ(x()), Term::Zero))),
        Formula::forall(
            "x",
            Formula::forall(
                "y",
                Formula::implies(Formula::eq(Term::succ(x()), Term::succ(y())), Formula::eq(x(), y())),
            ),
        ),
        Formula::forall(
            "x",
            Formula::or(Formula::eq(x(), Term::Zero), Formula::bexists("y", x(), Formula::eq(x(), Term::succ(y())))),
        ),
        Formula::forall("x", Formula::eq(Term::add(x(), Term::Zero), x())),
        Formula::forall(
            "x",
            Formula::forall("y", Formula::eq(Term::add(x(), Term::succ(y())), Term::succ(Term::add(x(), y())))),
        ),
        Formula::forall("x", Formula::eq(Term::mul(x(), Term::Zero), Term::Zero)),
        Formula::forall(
            "x",
            Formula::forall("y", Formula::eq(Term::mul(x(), Term::succ(y())), Term::add(Term::mul(x(), y()), x()))),
        ),
        Formula::forall(
            "x",
            Formula::forall(
                "y",
                Formula::iff(Formula::le(x(), y()), Formula::bexists("z", y(), Formula::eq(Term::add(z(), x()), y()))),
            ),
        ),
    ]
}

/// Left-folded conjunction of [`q_axioms`].
pub fn q_conj() -> Formula {
    Formula::conj(q_axioms()).expect("non-empty")
}

pub fn q_conj_code() -> BigUint {
    encode_formula(&q_conj())
}

/// `[phi(0) & A v. (phi(v) -> phi(S(v)))] -> A v. phi(v)`.
pub fn pa_induction_instance(phi: &Formula, v: &str) -> Result<Formula, String> {
    let var = Var::new(v);
    if !phi.is_free(&var) {
        return Err(format!("variable `{v}` is not free in the formula"));
    }
    let base = substitute(phi, &var, &Term::Zero);
    let step = Formula::forall(v, Formula::implies(phi.clone(), substitute(phi, &var, &Term::succ(Term::var(v)))));
    Ok(Formula::implies(Formula::and(base, step), Formula::forall(v, phi.clone())))
}
