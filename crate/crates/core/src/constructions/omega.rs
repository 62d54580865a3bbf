use crate::proofs::q_conj_code;
use crate::syntax::{numeral, Formula, Term};

/// `omega-Con_Q(x)`: for every one-variable formula `chi`, if
/// `q & x -> E v. chi(v)` is provable then some instance
/// `q & x -> ~chi(v)` is unprovable. `chi` ranges over codes and its
/// instances are formed with `SSub`.
pub fn omega_con_q_formula() -> Formula {
    let q = numeral(&q_conj_code());
    let premises = || Term::fun("AndC", vec![q.clone(), Term::var("x")]);
    let chk =
        |z: &str, goal: Term| Formula::pred("ProofChk", vec![Term::var(z), Term::fun("ImpC", vec![premises(), goal])]);
    let exists = Term::fun("ExistsC", vec![Term::var("chi")]);
    let instance = Term::fun("NegC", vec![Term::fun("SSub", vec![Term::var("chi"), Term::var("v")])]);
    Formula::forall(
        "chi",
        Formula::implies(
            Formula::exists("z", chk("z", exists)),
            Formula::exists("v", Formula::forall("z", Formula::not(chk("z", instance)))),
        ),
    )
}
