use num_bigint::BigUint;

use super::ConstructionError;
use crate::coding::encode_formula;
use crate::hierarchy::Level;
use crate::syntax::{numeral, substitute, Formula, Term, Var};
use crate::theories::{conjax_formula, prov_formula, TheoryDescriptor, CODE_VAR};

/// `theta(v) = phi(SSub(v, v))` and `gamma = theta(⌜theta⌝)`, so that
/// `SSub(⌜theta⌝, ⌜theta⌝)` evaluates to `⌜gamma⌝`.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedPointResult {
    pub var: Var,
    pub theta: Formula,
    pub theta_code: BigUint,
    pub gamma: Formula,
    pub gamma_code: BigUint,
}

impl FixedPointResult {
    /// `phi(⌜gamma⌝)`, the other side of the fixed-point equivalence.
    pub fn instance(&self, phi: &Formula) -> Formula {
        substitute(phi, &self.var, &numeral(&self.gamma_code))
    }

    /// The term `SSub(⌜theta⌝, ⌜theta⌝)`, whose value is `⌜gamma⌝`.
    pub fn ssub_term(&self) -> Term {
        let t = numeral(&self.theta_code);
        Term::fun("SSub", vec![t.clone(), t])
    }
}

pub fn fixed_point(phi: &Formula) -> Result<FixedPointResult, ConstructionError> {
    let free = phi.free_vars();
    if free.len() != 1 {
        return Err(ConstructionError::FreeVariables(free.iter().map(|v| v.to_string()).collect()));
    }
    let var = free.into_iter().next().expect("one variable");
    let diag = Term::fun("SSub", vec![Term::Var(var.clone()), Term::Var(var.clone())]);
    let theta = substitute(phi, &var, &diag);
    let theta_code = encode_formula(&theta);
    let gamma = substitute(&theta, &var, &numeral(&theta_code));
    let gamma_code = encode_formula(&gamma);
    Ok(FixedPointResult { var, theta, theta_code, gamma, gamma_code })
}

/// Fixed point of `~Prov_T(x)`.
pub fn godel_sentence(t: &TheoryDescriptor) -> FixedPointResult {
    fixed_point(&Formula::not(prov_formula(t))).expect("Prov_T has one free variable")
}

#[derive(Clone, Debug)]
pub struct RosserResult {
    pub fixed_point: FixedPointResult,
    /// `Psi(u, z)` with the code of gamma filled in.
    pub psi: Formula,
    /// `Psi^(u, z)` with the code of `~gamma` filled in.
    pub psi_hat: Formula,
    pub n: u32,
}

const W: &str = "w";

/// `E x <= u. E y <= u. ((x+y)*(x+y)+x = u & TruePi[n](x) & ConjAx_T(y) &
/// ProofChk(z, ImpC(AndC(x, y), target)))`, with the pairing spelled out.
fn psi_template(t: &TheoryDescriptor, n: u32, u: &str, z: &str, target: Term) -> Formula {
    let (x, y) = (|| Term::var("x"), || Term::var("y"));
    let s = || Term::add(x(), y());
    let pairing = Formula::eq(Term::add(Term::mul(s(), s()), x()), Term::var(u));
    let truth = Formula::pred(&format!("TruePi[{n}]"), vec![x()]);
    let conjax = substitute(&conjax_formula(t), &Var::new(CODE_VAR), &y());
    let chk = Formula::pred(
        "ProofChk",
        vec![Term::var(z), Term::fun("ImpC", vec![Term::fun("AndC", vec![x(), y()]), target])],
    );
    let body = Formula::and(Formula::and(Formula::and(pairing, truth), conjax), chk);
    Formula::bexists("x", Term::var(u), Formula::bexists("y", Term::var(u), body))
}

/// The Rosser sentence for `T + Pi(n)-Th(N)`: the fixed point of
/// `A u. A z. (Psi(u, z) -> E u1 <= u. E z1 <= z. Psi^(u1, z1))`.
pub fn rosser_sentence(t: &TheoryDescriptor, n: u32) -> Result<RosserResult, ConstructionError> {
    if !t.declared_level.leq(Level::pi(n)) {
        return Err(ConstructionError::Precondition(format!(
            "axiom predicate of `{}` is {}, which is not within Pi({n})",
            t.name, t.declared_level
        )));
    }
    let w = || Term::var(W);
    let psi = psi_template(t, n, "u", "z", w());
    let psi_hat = psi_template(t, n, "u1", "z1", Term::fun("NegC", vec![w()]));
    let phi = Formula::forall(
        "u",
        Formula::forall(
            "z",
            Formula::implies(
                psi,
                Formula::bexists("u1", Term::var("u"), Formula::bexists("z1", Term::var("z"), psi_hat)),
            ),
        ),
    );
    let fp = fixed_point(&phi)?;
    let gamma_num = numeral(&fp.gamma_code);
    let neg_num = numeral(&encode_formula(&Formula::not(fp.gamma.clone())));
    Ok(RosserResult {
        psi: psi_template(t, n, "u", "z", gamma_num),
        psi_hat: psi_template(t, n, "u", "z", neg_num),
        fixed_point: fp,
        n,
    })
}

/// A proof obligation of the independence argument. `k` and `m` stay free
/// as parameters.
#[derive(Clone, Debug)]
pub struct Obligation {
    pub label: &'static str,
    pub formula: Formula,
    /// Auxiliary sentence the obligation relies on, when there is one.
    pub auxiliary: Option<Formula>,
}

fn rename_uz(f: &Formula, u: Term, z: Term) -> Formula {
    substitute(&substitute(f, &Var::new("u"), &u), &Var::new("z"), &z)
}

/// Obligations (1), (2) and (3) with parameters `k` and `m`:
///
/// 1. `A u. A z. (k <= u & m <= z -> E u1 <= u. E z1 <= z. Psi^(u1, z1))`
/// 2. `A u. A z. (u < k -> ~Psi(u, z))`
/// 3. `A u. A z. (z < m -> ~Psi(u, z))`, using
///    `A x. A y. A v. A w. (ProofChk(w, ImpC(AndC(x, y), v)) -> (x+y)*(x+y)+x < w)`.
pub fn rosser_obligations(r: &RosserResult) -> Vec<Obligation> {
    let (u, z, k, m) = (|| Term::var("u"), || Term::var("z"), || Term::var("k"), || Term::var("m"));
    let hat = rename_uz(&r.psi_hat, Term::var("u1"), Term::var("z1"));
    let first = Formula::forall(
        "u",
        Formula::forall(
            "z",
            Formula::implies(
                Formula::and(Formula::le(k(), u()), Formula::le(m(), z())),
                Formula::bexists("u1", u(), Formula::bexists("z1", z(), hat)),
            ),
        ),
    );
    let not_psi = Formula::not(r.psi.clone());
    let second = Formula::forall("u", Formula::forall("z", Formula::implies(Formula::lt(u(), k()), not_psi.clone())));
    let third = Formula::forall("u", Formula::forall("z", Formula::implies(Formula::lt(z(), m()), not_psi)));
    let (x, y) = (|| Term::var("x"), || Term::var("y"));
    let s = || Term::add(x(), y());
    let aux = Formula::forall(
        "x",
        Formula::forall(
            "y",
            Formula::forall(
                "v",
                Formula::forall(
                    "w",
                    Formula::implies(
                        Formula::pred(
                            "ProofChk",
                            vec![
                                Term::var("w"),
                                Term::fun("ImpC", vec![Term::fun("AndC", vec![x(), y()]), Term::var("v")]),
                            ],
                        ),
                        Formula::lt(Term::add(Term::mul(s(), s()), x()), Term::var("w")),
                    ),
                ),
            ),
        ),
    );
    vec![
        Obligation { label: "(1) large u and z have a smaller refutation", formula: first, auxiliary: None },
        Obligation { label: "(2) no proof with u < k", formula: second, auxiliary: None },
        Obligation { label: "(3) no proof with z < m", formula: third, auxiliary: Some(aux) },
    ]
}

/// The instance `A z. ~Psi(i, z)` of obligation (2).
pub fn rosser_obligation_two_instance(r: &RosserResult, i: &BigUint) -> Formula {
    Formula::forall("z", Formula::not(substitute(&r.psi, &Var::new("u"), &numeral(i))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coding::pair;
    use crate::proofs::{encode_proof, search_with, SearchLimits};
    use crate::semantics::{eval, Budget, Verdict};
    use crate::syntax::parse;

    #[test]
    fn fixed_point_examples() {
        let b = Budget::with_witness_bound(100);
        for (text, want) in [("x = x", Verdict::True), ("~(x = x)", Verdict::False)] {
            let phi = parse(text).unwrap();
            let fp = fixed_point(&phi).unwrap();
            assert!(fp.gamma.is_sentence());
            assert_eq!(eval(&fp.gamma, b).unwrap(), want);
            assert_eq!(eval(&fp.instance(&phi), b).unwrap(), want);
            let code = crate::semantics::eval_term(&fp.ssub_term(), &Default::default()).unwrap();
            assert_eq!(code, fp.gamma_code);
        }
        assert!(fixed_point(&parse("x = y").unwrap()).is_err());
        assert!(fixed_point(&parse("0 = 0").unwrap()).is_err());
    }

    #[test]
    fn godel_shape() {
        let t = TheoryDescriptor::finite("unit", vec![Formula::verum()]).unwrap();
        let g = godel_sentence(&t);
        let Formula::Not(inner) = &g.gamma else { panic!("not a negation") };
        assert!(matches!(inner.as_ref(), Formula::Exists(..)));
        assert_eq!(t.classify(&g.gamma).unwrap(), Level::pi(1));
    }

    #[test]
    fn rosser_pieces() {
        let t = TheoryDescriptor::q();
        let r = rosser_sentence(&t, 1).unwrap();
        assert_eq!(t.classify(&r.fixed_point.gamma).unwrap(), Level::pi(2));
        assert_eq!(t.classify(&r.psi).unwrap(), t.classify(&r.psi_hat).unwrap());
        assert_eq!(r.psi.free_vars(), [Var::new("u"), Var::new("z")].into());
        let obligations = rosser_obligations(&r);
        assert_eq!(obligations.len(), 3);
        assert!(obligations[2].auxiliary.is_some());
        let inst = rosser_obligation_two_instance(&r, &BigUint::from(3u32));
        assert_eq!(inst.free_vars().len(), 0);
        let q1 = crate::theories::extend_with_pi_truth(&t, 1);
        assert!(rosser_sentence(&q1, 0).is_err());
    }

    #[test]
    fn pairing_bound_fails_for_packed_codes() {
        // A one-step proof of `x & y -> x` is shorter than the pair of the
        // two codes once `y` is much longer than `x`.
        let x = parse("0 = 0").unwrap();
        let y = parse("A a. A b. A c. a + b + c + a + b = c * c * 5").unwrap();
        let goal = Formula::implies(Formula::and(x.clone(), y.clone()), x.clone());
        let w = encode_proof(&search_with(&[], &goal, SearchLimits::default()).unwrap());
        assert!(pair(&encode_formula(&x), &encode_formula(&y)) > w);
    }
}
