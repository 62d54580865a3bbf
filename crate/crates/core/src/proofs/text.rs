//! Line-oriented proof format:
//!
//! ```text
//! 1: AXIOM EqRefl 0 = 0
//! 2: PREMISE 0 = 0 -> S(0) = S(0)
//! 3: MP 1 2
//! 4: GEN 3 x
//! ```
//!
//! Lines are numbered from 1 and references use those numbers.

use std::fmt::Write;

use super::{Proof, Scheme, Step};
use crate::syntax::{parse_with, SymbolRegistry, Var};

pub fn print_proof(p: &Proof) -> String {
    let mut out = String::new();
    for (n, s) in p.steps.iter().enumerate() {
        let n = n + 1;
        let _ = match s {
            Step::Axiom(scheme, f) => writeln!(out, "{n}: AXIOM {scheme} {f}"),
            Step::Premise(f) => writeln!(out, "{n}: PREMISE {f}"),
            Step::Mp(i, j) => writeln!(out, "{n}: MP {} {}", i + 1, j + 1),
            Step::Gen(i, x) => writeln!(out, "{n}: GEN {} {x}", i + 1),
        };
    }
    out
}

pub fn parse_proof(text: &str) -> Result<Proof, String> {
    parse_proof_with(text, &SymbolRegistry::builtin())
}

pub fn parse_proof_with(text: &str, registry: &SymbolRegistry) -> Result<Proof, String> {
    let mut steps = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |m: &str| format!("line {}: {m}", lineno + 1);
        let (num, rest) = line.split_once(':').ok_or_else(|| err("missing `n:` prefix"))?;
        let num: usize = num.trim().parse().map_err(|_| err("bad step number"))?;
        if num != steps.len() + 1 {
            return Err(err("steps must be numbered consecutively from 1"));
        }
        let rest = rest.trim_start();
        let (kind, args) = rest.split_once(' ').unwrap_or((rest, ""));
        let reference = |s: &str| -> Result<usize, String> {
            let k: usize = s.parse().map_err(|_| err("bad step reference"))?;
            k.checked_sub(1).ok_or_else(|| err("step references start at 1"))
        };
        let step = match kind {
            "AXIOM" => {
                let (scheme, formula) = args.trim().split_once(' ').ok_or_else(|| err("missing formula"))?;
                let scheme: Scheme = scheme.parse().map_err(|e: String| err(&e))?;
                Step::Axiom(scheme, parse_with(formula, registry).map_err(|e| err(&e.to_string()))?)
            }
            "PREMISE" => Step::Premise(parse_with(args, registry).map_err(|e| err(&e.to_string()))?),
            "MP" => {
                let parts: Vec<&str> = args.split_whitespace().collect();
                let [i, j] = parts.as_slice() else {
                    return Err(err("MP takes two references"));
                };
                Step::Mp(reference(i)?, reference(j)?)
            }
            "GEN" => {
                let parts: Vec<&str> = args.split_whitespace().collect();
                let [i, x] = parts.as_slice() else {
                    return Err(err("GEN takes a reference and a variable"));
                };
                if !Var::is_valid_name(x) {
                    return Err(err("bad variable name"));
                }
                Step::Gen(reference(i)?, Var::new(x))
            }
            other => return Err(err(&format!("unknown step kind `{other}`"))),
        };
        steps.push(step);
    }
    Ok(Proof { steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    #[test]
    fn round_trip() {
        let p = Proof::new(vec![
            Step::Axiom(Scheme::EqRefl, parse("x = x").unwrap()),
            Step::Premise(parse("x = x -> 0 = 0").unwrap()),
            Step::Mp(0, 1),
            Step::Gen(0, Var::new("x")),
        ]);
        let text = print_proof(&p);
        assert!(text.starts_with("1: AXIOM EqRefl x = x\n"));
        assert_eq!(parse_proof(&text).unwrap(), p);
        assert!(parse_proof("1: MP 0 1").is_err());
        assert!(parse_proof("2: PREMISE 0 = 0").is_err());
    }
}
