mod common;

use std::collections::{BTreeSet, HashMap};

use arith_core::coding::{
    decode_formula, decode_term, encode_formula, encode_term, is_sent_code, pair, seq_at, seq_encode, seq_len,
    seq_prefix, ssub, unpair,
};
use arith_core::constructions::{fixed_point, lindenbaum_complete, n_consistency_audit, rosser_sentence, EvalOracle};
use arith_core::hierarchy::{classify_with, Level, LevelKind};
use arith_core::proofs::{
    decode_proof, encode_proof, parse_proof, print_proof, proofchk_hook, q_axioms, search_with, SearchLimits,
};
use arith_core::semantics::{Budget, Evaluator, Verdict};
use arith_core::syntax::{numeral, numeral_u64, parse, substitute, Atom, Formula, SymbolRegistry, Term, Var};
use arith_core::theories::{con_sentence, conjax_formula, prov_at, prov_formula, TheoryDescriptor, CODE_VAR};
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

fn formula(depth: u32) -> impl Strategy<Value = Formula> {
    any::<u64>().prop_map(move |seed| random_formula(&mut ChaCha8Rng::seed_from_u64(seed), depth))
}

fn bounded_sentence() -> impl Strategy<Value = Formula> {
    any::<u64>().prop_map(|seed| random_bounded_sentence(&mut ChaCha8Rng::seed_from_u64(seed), 5, &mut Vec::new()))
}

/// Closes a formula by bounding its free variables below small numerals.
fn close(f: Formula) -> Formula {
    f.free_vars().into_iter().fold(f, |acc, v| Formula::BForall(v, numeral_u64(3), Box::new(acc)))
}

fn biguint() -> impl Strategy<Value = BigUint> {
    prop::collection::vec(any::<u32>(), 0..6).prop_map(BigUint::new)
}

// syntax

proptest! {
    #[test]
    fn print_then_parse_is_identity(f in formula(6)) {
        prop_assert_eq!(parse(&f.to_string()), Ok(f));
    }

    #[test]
    fn substitution_leaves_sentences_alone(f in formula(5), seed in any::<u64>()) {
        let s = close(f);
        let t = random_term(&mut ChaCha8Rng::seed_from_u64(seed), 2, &["x", "y"]);
        prop_assert_eq!(substitute(&s, &Var::new("x"), &t), s);
    }

    #[test]
    fn substitution_free_variables(f in formula(5), seed in any::<u64>()) {
        let x = Var::new("x");
        let t = random_term(&mut ChaCha8Rng::seed_from_u64(seed), 2, &["y", "z"]);
        let g = substitute(&f, &x, &t);
        let mut want: BTreeSet<Var> = f.free_vars();
        if want.remove(&x) {
            want.extend(t.vars());
        }
        prop_assert_eq!(g.free_vars(), want);
    }
}

#[test]
fn numerals_have_n_successors() {
    for n in 0..=500u64 {
        let t = numeral_u64(n);
        let mut count = 0;
        let mut cur = &t;
        while let Term::Succ(inner) = cur {
            count += 1;
            cur = inner;
        }
        assert_eq!((count, cur), (n, &Term::Zero));
        assert_eq!(t.numeral_value(), Some(BigUint::from(n)));
    }
}

// coding

proptest! {
    #[test]
    fn unpair_inverts_pair(u in biguint(), v in biguint()) {
        prop_assert_eq!(unpair(&pair(&u, &v)), Some((u, v)));
    }

    #[test]
    fn formula_codes_round_trip(f in formula(6)) {
        let c = encode_formula(&f);
        prop_assert_eq!(is_sent_code(&c), f.is_sentence());
        prop_assert_eq!(decode_formula(&c), Some(f));
    }

    #[test]
    fn term_codes_round_trip(seed in any::<u64>()) {
        let t = random_term(&mut ChaCha8Rng::seed_from_u64(seed), 4, &["x", "y", "z"]);
        prop_assert_eq!(decode_term(&encode_term(&t)), Some(t));
    }

    #[test]
    fn sequence_laws(items in prop::collection::vec(biguint(), 0..16), k in 0usize..16) {
        let m = seq_encode(&items);
        prop_assert_eq!(seq_len(&m), Ok(items.len()));
        for (i, item) in items.iter().enumerate() {
            prop_assert_eq!(seq_at(&m, i), Ok(item.clone()));
        }
        let k = k.min(items.len());
        prop_assert_eq!(seq_prefix(&m, k), Ok(seq_encode(&items[..k])));
        prop_assert_eq!(seq_prefix(&m, items.len()), Ok(m));
    }

    #[test]
    fn ssub_is_substitution_of_the_numeral(f in formula(4), m in 0u64..2000) {
        let fv = f.free_vars();
        prop_assume!(fv.len() == 1);
        let v = fv.into_iter().next().unwrap();
        let want = encode_formula(&substitute(&f, &v, &numeral_u64(m)));
        prop_assert_eq!(ssub(&encode_formula(&f), &BigUint::from(m)), want);
    }
}

// hierarchy

proptest! {
    #[test]
    fn classifier_matches_oracle(f in formula(5)) {
        let c = classify_with(&f, &SymbolRegistry::builtin()).unwrap();
        prop_assert_eq!((c.sigma, c.pi), oracle_indices(&f));
    }

    #[test]
    fn negation_duality(f in formula(6)) {
        let reg = SymbolRegistry::builtin();
        let c = classify_with(&f, &reg).unwrap();
        let d = classify_with(&Formula::not(f), &reg).unwrap();
        prop_assert_eq!(d.level, c.level.dual());
        prop_assert_eq!((d.sigma, d.pi), (c.pi, c.sigma));
    }

    #[test]
    fn monotone_embedding(f in formula(6)) {
        let c = classify_with(&f, &SymbolRegistry::builtin()).unwrap();
        for n in 0..6 {
            for l in [Level::sigma(n), Level::pi(n)] {
                if c.within(l) {
                    prop_assert!(c.within(Level::sigma(n + 1)) && c.within(Level::pi(n + 1)));
                }
            }
        }
    }

    #[test]
    fn closure_laws(f in formula(5), g in formula(5)) {
        let reg = SymbolRegistry::builtin();
        let cf = classify_with(&f, &reg).unwrap();
        let cg = classify_with(&g, &reg).unwrap();
        let z = Term::var("z");
        for n in 1..5 {
            let s = Level::sigma(n);
            let p = Level::pi(n);
            let c = |h: Formula| classify_with(&h, &reg).unwrap();
            if cf.within(s) && cg.within(s) {
                prop_assert!(c(Formula::and(f.clone(), g.clone())).within(s));
                prop_assert!(c(Formula::or(f.clone(), g.clone())).within(s));
            }
            if cf.within(s) {
                prop_assert!(c(Formula::exists("x", f.clone())).within(s));
                prop_assert!(c(Formula::bforall("x", z.clone(), f.clone())).within(s));
            }
            if cf.within(p) && cg.within(p) {
                prop_assert!(c(Formula::and(f.clone(), g.clone())).within(p));
                prop_assert!(c(Formula::or(f.clone(), g.clone())).within(p));
            }
            if cf.within(p) {
                prop_assert!(c(Formula::forall("x", f.clone())).within(p));
                prop_assert!(c(Formula::bexists("x", z.clone(), f.clone())).within(p));
            }
        }
    }
}

#[test]
fn join_is_a_minimal_upper_bound() {
    let levels: Vec<Level> = (0..=4).flat_map(|n| [Level::sigma(n), Level::pi(n)]).collect();
    for &a in &levels {
        for &b in &levels {
            let j = a.join(b);
            assert!(a.leq(j) && b.leq(j), "{a} join {b} = {j}");
            // Sigma(n) and Pi(n) have no least bound among these levels, so
            // the check is that no upper bound sits at a lower index.
            for &c in &levels {
                if a.leq(c) && b.leq(c) {
                    assert!(j.index <= c.index, "{a} join {b} = {j}, but {c} is a lower bound");
                    if a.leq(b) || b.leq(a) {
                        assert!(j.leq(c), "{a} join {b} = {j} is above {c}");
                    }
                }
            }
        }
    }
}

// semantics

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn bounded_sentences_match_direct_evaluation(s in bounded_sentence()) {
        let want = brute_eval(&s, &mut HashMap::new(), 1000);
        prop_assume!(want.is_some());
        let reg = SymbolRegistry::builtin();
        let got = Evaluator::new(&reg, Budget::with_witness_bound(0)).eval(&s).unwrap();
        prop_assert_eq!(got, Verdict::from_bool(want.unwrap()));
    }

    #[test]
    fn negation_flips_the_verdict(f in formula(4)) {
        let s = close(f);
        let reg = SymbolRegistry::builtin();
        let ev = Evaluator::new(&reg, Budget::with_witness_bound(20));
        prop_assert_eq!(ev.eval(&Formula::not(s.clone())).unwrap(), ev.eval(&s).unwrap().not());
    }

    #[test]
    fn larger_budgets_never_undecide(seed in any::<u64>()) {
        let s = random_unbounded_sentence(&mut ChaCha8Rng::seed_from_u64(seed));
        let reg = SymbolRegistry::builtin();
        let mut last = Verdict::Unknown;
        for wb in [0, 5, 50, 500] {
            let v = Evaluator::new(&reg, Budget::with_witness_bound(wb)).eval(&s).unwrap();
            if last.is_decided() {
                prop_assert_eq!(v, last, "{} at witness bound {}", s, wb);
            }
            last = v;
        }
    }

    #[test]
    fn existential_witnesses_check(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let body = random_bounded_sentence(&mut rng, 3, &mut vec!["x"]);
        let s = Formula::exists("x", body.clone());
        let reg = SymbolRegistry::builtin();
        let ev = Evaluator::new(&reg, Budget::with_witness_bound(30));
        let (v, w) = ev.eval_with_witness(&s).unwrap();
        if v == Verdict::True {
            // The witness covers the whole leading existential block.
            prop_assert_eq!(w[0].0.as_str(), "x");
            let inst = substitute(&body, &Var::new("x"), &numeral(&w[0].1));
            prop_assert_eq!(ev.eval(&inst).unwrap(), Verdict::True);
        }
    }
}

// proofs

fn closed_goals() -> Vec<(Vec<Formula>, Formula)> {
    let p = |s: &str| parse(s).unwrap();
    vec![
        (vec![], p("0 = 0 -> 0 = 0")),
        (vec![], p("(0 = 0 & S(0) = 0) -> S(0) = 0")),
        (vec![p("0 = 0")], p("0 = 0 | S(0) = 0")),
        (vec![p("A x. x = x")], p("S(0) = S(0)")),
        (q_axioms(), p("S(0) + S(0) = S(S(0))")),
        (q_axioms(), p("~(S(0) = 0)")),
        (vec![], p("A x. (x = x -> x = x)")),
    ]
}

#[test]
fn proof_codes_and_text_round_trip() {
    let limits = SearchLimits::default();
    for (premises, goal) in closed_goals() {
        let proof = search_with(&premises, &goal, limits).unwrap_or_else(|| panic!("no proof of {goal}"));
        assert_eq!(decode_proof(&encode_proof(&proof)), Some(proof.clone()));
        assert_eq!(parse_proof(&print_proof(&proof)).as_ref(), Ok(&proof));
        if premises.is_empty() {
            assert!(proofchk_hook(&encode_proof(&proof), &encode_formula(&goal)));
            assert!(!proofchk_hook(&encode_proof(&proof), &encode_formula(&Formula::falsum())));
        }
    }
}

// theories

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn finite_membership_is_list_membership(mask in any::<u64>()) {
        let sentences: Vec<Formula> = golden_corpus().into_iter().filter(Formula::is_sentence).take(40).collect();
        let chosen: Vec<Formula> =
            sentences.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, f)| f.clone()).collect();
        prop_assume!(!chosen.is_empty());
        let t = TheoryDescriptor::finite("t", chosen.clone()).unwrap();
        for f in &sentences {
            let v = t.membership(&encode_formula(f), Budget::with_witness_bound(0));
            prop_assert_eq!(v, Verdict::from_bool(chosen.contains(f)), "{}", f);
        }
    }
}

fn theory_at(level: Level) -> TheoryDescriptor {
    let reg = SymbolRegistry::builtin();
    if level.index == 0 {
        return TheoryDescriptor::finite("t0", vec![Formula::verum()]).unwrap();
    }
    let name = match level.kind {
        LevelKind::Sigma => format!("TrueSigma[{}]", level.index),
        LevelKind::Pi => format!("TruePi[{}]", level.index),
    };
    TheoryDescriptor::defined("t", Formula::pred(&name, vec![Term::var(CODE_VAR)]), &reg).unwrap()
}

#[test]
fn provability_level_law() {
    for n in 0..=4 {
        for lvl in [Level::sigma(n + 1), Level::pi(n)] {
            let t = theory_at(lvl);
            assert_eq!(t.declared_level, lvl.normalized());
            let prov = classify_with(&prov_formula(&t), t.registry()).unwrap();
            assert!(prov.within(Level::sigma(n + 1)), "axioms at {lvl}: Prov at {}", prov.level);
            assert_eq!(classify_with(&conjax_formula(&t), t.registry()).unwrap().level, lvl.normalized());
        }
    }
}

#[test]
fn consistency_is_a_negated_provability() {
    for t in [TheoryDescriptor::q(), theory_at(Level::sigma(2))] {
        let falsum = encode_formula(&Formula::falsum());
        assert_eq!(con_sentence(&t), Formula::not(prov_at(&t, &falsum)));
    }
}

// constructions

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fixed_point_law(f in formula(4)) {
        prop_assume!(f.free_vars().len() == 1);
        let r = fixed_point(&f).unwrap();
        prop_assert!(r.gamma.is_sentence());
        prop_assert_eq!(&r.gamma, &substitute(&r.theta, &r.var, &numeral(&r.theta_code)));
        prop_assert_eq!(ssub(&r.theta_code, &r.theta_code), r.gamma_code.clone());
        prop_assert_eq!(encode_formula(&r.gamma), r.gamma_code);
    }
}

#[test]
fn lindenbaum_traces_extend() {
    let q = TheoryDescriptor::q();
    let oracle = EvalOracle { budget: Budget::with_witness_bound(20) };
    let short = lindenbaum_complete(&q, &oracle, 10);
    let long = lindenbaum_complete(&q, &oracle, 25);
    assert_eq!(short.added_after(10), long.added_after(10));
    for k in 0..25 {
        let before = long.added_after(k);
        assert_eq!(&long.added_after(k + 1)[..k], &before[..]);
    }
}

#[test]
fn audit_violations_replay() {
    for odd in [1u64, 3, 5] {
        let mut axioms = q_axioms();
        axioms.push(Formula::exists("x", Formula::eq(Term::add(Term::var("x"), Term::var("x")), numeral_u64(odd))));
        let t = TheoryDescriptor::finite("q_odd", axioms.clone()).unwrap();
        let report = n_consistency_audit(&t, 1, Budget::with_witness_bound(6));
        let v = report.violation().unwrap_or_else(|| panic!("no violation for {odd}"));
        assert!(v.replays(&axioms));
        assert_eq!(v.refutations.iter().map(|(k, _)| *k).collect::<Vec<_>>(), (0..=6).collect::<Vec<_>>());
    }
}

/// Matches `E x <= u. E y <= u. ((x+y)*(x+y)+x = u & TruePi[n](x) &
/// ConjAx(y) & ProofChk(z, ImpC(AndC(x, y), target)))` and returns `target`.
fn match_psi<'f>(f: &'f Formula, t: &TheoryDescriptor, n: u32, u: &str, z: &str) -> Option<&'f Term> {
    let var = |t: &Term, name: &str| matches!(t, Term::Var(v) if v.as_str() == name);
    let Formula::BExists(x, bx, rest) = f else {
        return None;
    };
    let Formula::BExists(y, by, body) = rest.as_ref() else {
        return None;
    };
    if x.as_str() != "x" || y.as_str() != "y" || !var(bx, u) || !var(by, u) {
        return None;
    }
    let Formula::And(abc, chk) = body.as_ref() else {
        return None;
    };
    let Formula::And(ab, conj) = abc.as_ref() else {
        return None;
    };
    let Formula::And(pairing, truth) = ab.as_ref() else {
        return None;
    };
    let sum = Term::add(Term::var("x"), Term::var("y"));
    let want_pair = Formula::eq(Term::add(Term::mul(sum.clone(), sum), Term::var("x")), Term::var(u));
    let want_truth = Formula::pred(&format!("TruePi[{n}]"), vec![Term::var("x")]);
    let want_conj = substitute(&conjax_formula(t), &Var::new(CODE_VAR), &Term::var("y"));
    if **pairing != want_pair || **truth != want_truth || **conj != want_conj {
        return None;
    }
    let Formula::Atom(Atom::Pred(s, args)) = chk.as_ref() else {
        return None;
    };
    if s.as_str() != "ProofChk" || args.len() != 2 || !var(&args[0], z) {
        return None;
    }
    let Term::Fun(imp, ia) = &args[1] else {
        return None;
    };
    let Term::Fun(and, aa) = &ia[0] else {
        return None;
    };
    let xy = [Term::var("x"), Term::var("y")];
    (imp.as_str() == "ImpC" && and.as_str() == "AndC" && aa[..] == xy[..]).then_some(&ia[1])
}

#[test]
fn rosser_template_fidelity() {
    for n in 0..=3 {
        let t = arith_core::theories::extend_with_pi_truth(&TheoryDescriptor::q(), n);
        let r = rosser_sentence(&t, n).unwrap();
        let gamma = r.fixed_point.gamma_code.clone();
        let neg = encode_formula(&Formula::not(r.fixed_point.gamma.clone()));
        assert_eq!(match_psi(&r.psi, &t, n, "u", "z").and_then(Term::numeral_value), Some(gamma));
        assert_eq!(match_psi(&r.psi_hat, &t, n, "u", "z").and_then(Term::numeral_value), Some(neg));

        // theta = A u. A z. (Psi(u, z, D) -> E u1 <= u. E z1 <= z. Psi^(u1, z1, NegC(D)))
        // with D = SSub(w, w).
        let Formula::Forall(u, rest) = &r.fixed_point.theta else { panic!("theta shape") };
        let Formula::Forall(z, imp) = rest.as_ref() else { panic!("theta shape") };
        let Formula::Implies(psi, hat) = imp.as_ref() else { panic!("theta shape") };
        assert_eq!((u.as_str(), z.as_str()), ("u", "z"));
        let w = r.fixed_point.var.clone();
        let diag = Term::fun("SSub", vec![Term::Var(w.clone()), Term::Var(w)]);
        assert_eq!(match_psi(psi, &t, n, "u", "z"), Some(&diag));
        let Formula::BExists(u1, bu, inner) = hat.as_ref() else { panic!("hat shape") };
        let Formula::BExists(z1, bz, psi_hat) = inner.as_ref() else { panic!("hat shape") };
        assert_eq!((bu, bz), (&Term::var("u"), &Term::var("z")));
        assert_eq!(match_psi(psi_hat, &t, n, u1.as_str(), z1.as_str()), Some(&Term::fun("NegC", vec![diag.clone()])));
    }
}
