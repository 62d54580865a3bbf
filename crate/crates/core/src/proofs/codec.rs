use num_bigint::BigUint;

use super::{Proof, Scheme, Step};
use crate::coding::{
    decode_formula, encode_formula, name_token, read_formula, token_name, write_formula, TokenReader, TokenWriter,
};
use crate::syntax::{Formula, Var};

const K_AXIOM: u64 = 0;
const K_PREMISE: u64 = 1;
const K_MP: u64 = 2;
const K_GEN: u64 = 3;

/// Token stream: step count, then per step a kind tag and its fields.
pub fn encode_proof(p: &Proof) -> BigUint {
    let mut w = TokenWriter::new();
    w.push_u64(p.steps.len() as u64);
    for s in &p.steps {
        match s {
            Step::Axiom(scheme, f) => {
                w.push_u64(K_AXIOM);
                w.push_u64(scheme.id());
                write_formula(f, &mut w);
            }
            Step::Premise(f) => {
                w.push_u64(K_PREMISE);
                write_formula(f, &mut w);
            }
            Step::Mp(i, j) => {
                w.push_u64(K_MP);
                w.push_u64(*i as u64);
                w.push_u64(*j as u64);
            }
            Step::Gen(i, x) => {
                w.push_u64(K_GEN);
                w.push_u64(*i as u64);
                w.push(&name_token(x.as_str()));
            }
        }
    }
    w.finish()
}

pub fn decode_proof(c: &BigUint) -> Option<Proof> {
    let mut r = TokenReader::new(c)?;
    let n = r.next_usize()?;
    let mut steps = Vec::with_capacity(n.min(256));
    for _ in 0..n {
        let step = match r.next_u64()? {
            K_AXIOM => {
                let scheme = Scheme::from_id(r.next_u64()?)?;
                Step::Axiom(scheme, read_formula(&mut r)?)
            }
            K_PREMISE => Step::Premise(read_formula(&mut r)?),
            K_MP => Step::Mp(r.next_usize()?, r.next_usize()?),
            K_GEN => {
                let i = r.next_usize()?;
                let name = token_name(&r.next()?)?;
                if !Var::is_valid_name(&name) {
                    return None;
                }
                Step::Gen(i, Var::new(&name))
            }
            _ => return None,
        };
        steps.push(step);
    }
    r.at_end().then_some(Proof { steps })
}

/// Code of the conclusion of the premise-free proof coded by `y`.
pub fn proof_conclusion_code(y: &BigUint) -> Option<BigUint> {
    let p = decode_proof(y)?;
    if p.steps.iter().any(|s| matches!(s, Step::Premise(_))) {
        return None;
    }
    p.conclusion().ok().map(|f| encode_formula(&f))
}

/// The proof relation on codes: `y` codes a premise-free proof whose
/// conclusion is the formula coded by `x`.
pub fn proofchk_hook(y: &BigUint, x: &BigUint) -> bool {
    let Some(p) = decode_proof(y) else {
        return false;
    };
    if p.steps.iter().any(|s| matches!(s, Step::Premise(_))) {
        return false;
    }
    let Ok(concl) = p.conclusion() else {
        return false;
    };
    decode_formula(x).is_some_and(|f: Formula| f == concl)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    #[test]
    fn round_trip_and_hook() {
        let f = parse("0 = 0").unwrap();
        let p = Proof::new(vec![Step::Axiom(Scheme::EqRefl, f.clone()), Step::Gen(0, Var::new("x"))]);
        let c = encode_proof(&p);
        assert_eq!(decode_proof(&c), Some(p));
        assert!(proofchk_hook(&c, &encode_formula(&parse("A x. 0 = 0").unwrap())));
        assert!(!proofchk_hook(&c, &encode_formula(&f)));
        assert!(!proofchk_hook(&BigUint::from(17u32), &encode_formula(&f)));
        let with_premise = Proof::new(vec![Step::Premise(f.clone())]);
        assert!(!proofchk_hook(&encode_proof(&with_premise), &encode_formula(&f)));
    }
}
