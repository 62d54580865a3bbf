//! Code-level syntactic operators.

use num_bigint::BigUint;
use num_traits::Zero;

use super::{decode_formula, encode_formula, seq_decode, seq_encode, CodingError};
use crate::syntax::{numeral, substitute, Formula};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    And,
    Or,
    Implies,
}

fn formula(m: &BigUint) -> Result<Formula, CodingError> {
    decode_formula(m).ok_or_else(|| CodingError::NotAFormula(m.clone()))
}

/// `⌜~a⌝` from `⌜a⌝`.
pub fn neg_code(m: &BigUint) -> Result<BigUint, CodingError> {
    Ok(encode_formula(&Formula::not(formula(m)?)))
}

/// `⌜a op b⌝` from `⌜a⌝` and `⌜b⌝`.
pub fn bin_code(op: BinOp, m: &BigUint, k: &BigUint) -> Result<BigUint, CodingError> {
    let (a, b) = (formula(m)?, formula(k)?);
    Ok(encode_formula(&match op {
        BinOp::And => Formula::and(a, b),
        BinOp::Or => Formula::or(a, b),
        BinOp::Implies => Formula::implies(a, b),
    }))
}

/// `⌜E v. a⌝` where `v` is the single free variable of `a`.
pub fn exists_code(m: &BigUint) -> Result<BigUint, CodingError> {
    let a = formula(m)?;
    let free = a.free_vars();
    if free.len() != 1 {
        return Err(CodingError::NotAFormula(m.clone()));
    }
    let v = free.into_iter().next().expect("one variable");
    Ok(encode_formula(&Formula::Exists(v, Box::new(a))))
}

/// `⌜z = z⌝` for the numeral of `z`.
pub fn numeq_code(z: &BigUint) -> BigUint {
    encode_formula(&Formula::eq(numeral(z), numeral(z)))
}

/// Self-substitution: for `a = ⌜psi⌝` with exactly one free variable the code
/// of `psi` applied to the numeral of `m`; `a` itself when `psi` is closed;
/// `0` otherwise.
pub fn ssub(a: &BigUint, m: &BigUint) -> BigUint {
    let Some(f) = decode_formula(a) else {
        return BigUint::zero();
    };
    let free = f.free_vars();
    match free.len() {
        0 => a.clone(),
        1 => {
            let v = free.into_iter().next().expect("one variable");
            encode_formula(&substitute(&f, &v, &numeral(m)))
        }
        _ => BigUint::zero(),
    }
}

/// Left-folded conjunction of the sentences listed in sequence `m`; the
/// empty sequence gives `⌜0 = 0⌝`.
pub fn conjseq(m: &BigUint) -> Result<BigUint, CodingError> {
    let mut acc: Option<Formula> = None;
    for item in seq_decode(m)? {
        let f = decode_formula(&item)
            .filter(Formula::is_sentence)
            .ok_or_else(|| CodingError::NotASentence(item.clone()))?;
        acc = Some(match acc {
            None => f,
            Some(prev) => Formula::and(prev, f),
        });
    }
    Ok(encode_formula(&acc.unwrap_or_else(Formula::verum)))
}

/// Every sequence code `m` with `conjseq(m) = x`, shortest first.
pub fn conjseq_decompositions(x: &BigUint) -> Vec<BigUint> {
    let Some(f) = decode_formula(x).filter(Formula::is_sentence) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    if f == Formula::verum() {
        out.push(seq_encode(&[]));
    }
    // Walk the left spine; each cut gives the head plus the right conjuncts.
    let mut rights: Vec<BigUint> = Vec::new();
    let mut head = f;
    loop {
        let mut items = vec![encode_formula(&head)];
        items.extend(rights.iter().rev().cloned());
        out.push(seq_encode(&items));
        match head {
            Formula::And(l, r) => {
                rights.push(encode_formula(&r));
                head = *l;
            }
            _ => break,
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn code(text: &str) -> BigUint {
        encode_formula(&parse(text).unwrap())
    }

    #[test]
    fn connectives() {
        assert_eq!(neg_code(&code("0 = 0")).unwrap(), code("~(0 = 0)"));
        assert_eq!(bin_code(BinOp::And, &code("0 = 0"), &code("0 = 0")).unwrap(), code("0 = 0 & 0 = 0"));
        let nn = neg_code(&neg_code(&code("0 = 0")).unwrap()).unwrap();
        assert_eq!(decode_formula(&nn).unwrap(), parse("~~(0 = 0)").unwrap());
        assert!(neg_code(&BigUint::from(17u32)).is_err());
        assert_eq!(exists_code(&code("x = 0")).unwrap(), code("E x. x = 0"));
    }

    #[test]
    fn self_substitution() {
        assert_eq!(ssub(&code("x = 0"), &BigUint::from(2u32)), code("2 = 0"));
        assert_eq!(ssub(&code("0 = 0"), &BigUint::from(2u32)), code("0 = 0"));
        assert_eq!(ssub(&code("x = y"), &BigUint::from(2u32)), BigUint::zero());
    }

    #[test]
    fn conjunction_sequences() {
        let a = code("0 = 0");
        let b = code("0 <= 0");
        assert_eq!(conjseq(&seq_encode(std::slice::from_ref(&a))).unwrap(), a);
        assert_eq!(conjseq(&seq_encode(&[a.clone(), b.clone()])).unwrap(), code("0 = 0 & 0 <= 0"));
        assert_eq!(conjseq(&seq_encode(&[])).unwrap(), a);
        assert!(conjseq(&seq_encode(&[code("x = 0")])).is_err());
        let x = code("0 = 0 & 0 <= 0 & 0 = 0");
        let ds = conjseq_decompositions(&x);
        assert_eq!(ds.len(), 3);
        for d in ds {
            assert_eq!(conjseq(&d).unwrap(), x);
        }
    }
}
