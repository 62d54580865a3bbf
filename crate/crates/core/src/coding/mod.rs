//! Goedel numbering.
//!
//! Every syntax object is flattened to a stream of natural-number tokens.
//! The stream is packed into one natural: a leading 1 bit followed by the
//! Elias-gamma codes of `token + 1`. Sequences of codes use the same packing,
//! so the empty sequence is `1` and `0` is never a valid code.

mod formula;
mod ops;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

pub use formula::{
    decode_formula, decode_term, encode_formula, encode_term, is_sent_code, read_formula, read_term, write_formula,
    write_term,
};
pub use ops::{bin_code, conjseq, conjseq_decompositions, exists_code, neg_code, numeq_code, ssub, BinOp};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodingError {
    #[error("{0} is not a sequence code")]
    NotASequence(BigUint),
    #[error("index {index} out of range for a sequence of length {len}")]
    OutOfRange { index: usize, len: usize },
    #[error("{0} is not a formula code")]
    NotAFormula(BigUint),
    #[error("sequence member {0} is not a sentence code")]
    NotASentence(BigUint),
}

/// `(u+v)^2 + u`.
pub fn pair(u: &BigUint, v: &BigUint) -> BigUint {
    let s = u + v;
    &s * &s + u
}

pub fn unpair(c: &BigUint) -> Option<(BigUint, BigUint)> {
    let w = c.sqrt();
    let u = c - &w * &w;
    if u > w {
        return None;
    }
    let v = &w - &u;
    Some((u, v))
}

/// Appends gamma-coded tokens to a bit buffer.
#[derive(Default, Debug, Clone)]
pub struct TokenWriter {
    bits: Vec<u8>,
}

impl TokenWriter {
    pub fn new() -> Self {
        TokenWriter { bits: vec![1] }
    }

    pub fn push(&mut self, token: &BigUint) {
        let n = token + 1u32;
        let digits = n.to_radix_be(2);
        self.bits.extend(std::iter::repeat_n(0, digits.len() - 1));
        self.bits.extend(digits);
    }

    pub fn push_u64(&mut self, token: u64) {
        let n = token + 1;
        let width = 64 - n.leading_zeros() as usize;
        self.bits.extend(std::iter::repeat_n(0, width - 1));
        self.bits.extend((0..width).rev().map(|i| ((n >> i) & 1) as u8));
    }

    pub fn finish(self) -> BigUint {
        BigUint::from_radix_be(&self.bits, 2).expect("binary digits")
    }
}

/// Reads gamma-coded tokens back out of a code.
#[derive(Debug, Clone)]
pub struct TokenReader {
    bits: Vec<u8>,
    pos: usize,
}

impl TokenReader {
    /// `None` when `code` is zero (there is no leading marker bit).
    pub fn new(code: &BigUint) -> Option<Self> {
        if code.is_zero() {
            return None;
        }
        Some(TokenReader { bits: code.to_radix_be(2), pos: 1 })
    }

    pub fn at_end(&self) -> bool {
        self.pos == self.bits.len()
    }

    #[allow(clippy::should_implement_trait)]
    pub fn next(&mut self) -> Option<BigUint> {
        let zeros = self.bits[self.pos..].iter().take_while(|&&b| b == 0).count();
        let end = self.pos + 2 * zeros + 1;
        if end > self.bits.len() {
            return None;
        }
        let value = BigUint::from_radix_be(&self.bits[self.pos + zeros..end], 2)?;
        self.pos = end;
        Some(value - 1u32)
    }

    pub fn next_u64(&mut self) -> Option<u64> {
        self.next()?.to_u64()
    }

    pub fn next_usize(&mut self) -> Option<usize> {
        self.next()?.to_usize()
    }
}

pub fn seq_encode(items: &[BigUint]) -> BigUint {
    let mut w = TokenWriter::new();
    for it in items {
        w.push(it);
    }
    w.finish()
}

/// Decodes a sequence code into its members.
pub fn seq_decode(c: &BigUint) -> Result<Vec<BigUint>, CodingError> {
    let bad = || CodingError::NotASequence(c.clone());
    let mut r = TokenReader::new(c).ok_or_else(bad)?;
    let mut out = Vec::new();
    while !r.at_end() {
        out.push(r.next().ok_or_else(bad)?);
    }
    Ok(out)
}

pub fn is_seq(c: &BigUint) -> bool {
    seq_decode(c).is_ok()
}

pub fn empty_seq() -> BigUint {
    BigUint::one()
}

pub fn seq_len(c: &BigUint) -> Result<usize, CodingError> {
    seq_decode(c).map(|s| s.len())
}

pub fn seq_at(c: &BigUint, l: usize) -> Result<BigUint, CodingError> {
    let mut items = seq_decode(c)?;
    let len = items.len();
    if l >= len {
        return Err(CodingError::OutOfRange { index: l, len });
    }
    Ok(items.swap_remove(l))
}

pub fn seq_prefix(c: &BigUint, k: usize) -> Result<BigUint, CodingError> {
    let items = seq_decode(c)?;
    if k > items.len() {
        return Err(CodingError::OutOfRange { index: k, len: items.len() });
    }
    Ok(seq_encode(&items[..k]))
}

/// Encodes a string as the big-endian integer of its UTF-8 bytes.
pub(crate) fn name_token(name: &str) -> BigUint {
    BigUint::from_bytes_be(name.as_bytes())
}

pub(crate) fn token_name(t: &BigUint) -> Option<String> {
    if t.is_zero() {
        return None;
    }
    String::from_utf8(t.to_bytes_be()).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(pair(&n(0), &n(0)), n(0));
        assert_eq!(pair(&n(1), &n(2)), n(10));
        assert_eq!(pair(&n(2), &n(1)), n(11));
        assert_eq!(unpair(&n(10)), Some((n(1), n(2))));
        assert_eq!(unpair(&n(0)), Some((n(0), n(0))));
        // (1+0)^2+1 = 2, so 2 is a pair; 3 is the first non-pair.
        assert_eq!(unpair(&n(2)), Some((n(1), n(0))));
        assert_eq!(unpair(&n(3)), None);
    }

    #[test]
    fn sequences() {
        let s = seq_encode(&[n(5), n(7), n(9)]);
        assert_eq!(seq_at(&s, 1).unwrap(), n(7));
        assert_eq!(seq_len(&s).unwrap(), 3);
        assert_eq!(seq_prefix(&s, 0).unwrap(), empty_seq());
        assert_eq!(seq_prefix(&s, 3).unwrap(), s);
        assert!(matches!(seq_at(&s, 3), Err(CodingError::OutOfRange { .. })));
        assert!(!is_seq(&n(0)));
        assert!(!is_seq(&n(2)));
        assert_eq!(seq_decode(&empty_seq()).unwrap(), vec![]);
    }

    #[test]
    fn token_streams() {
        let mut w = TokenWriter::new();
        w.push_u64(0);
        w.push(&n(1));
        w.push_u64(1);
        assert_eq!(w.finish(), n(0b11010010));
        let mut r = TokenReader::new(&n(0b11010010)).unwrap();
        assert_eq!(r.next_u64(), Some(0));
        assert_eq!(r.next_u64(), Some(1));
        assert_eq!(r.next_u64(), Some(1));
        assert!(r.at_end());
    }
}
