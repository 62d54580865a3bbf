use num_bigint::BigUint;
use thiserror::Error;

use super::symbols::{SymbolKind, SymbolRegistry};
use super::{numeral, Atom, Formula, Symbol, Term, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown symbol `{name}` at {pos}")]
    UnknownSymbol { pos: usize, name: String },
    #[error("symbol `{name}` at {pos} expects {expected} argument(s), found {found}")]
    ArityMismatch { pos: usize, name: String, expected: usize, found: usize },
    #[error("bound of quantifier over `{var}` at {pos} mentions the bound variable")]
    BoundMentionsVariable { pos: usize, var: String },
}

impl ParseError {
    pub fn pos(&self) -> usize {
        match self {
            ParseError::Syntax { pos, .. }
            | ParseError::UnknownSymbol { pos, .. }
            | ParseError::ArityMismatch { pos, .. }
            | ParseError::BoundMentionsVariable { pos, .. } => *pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Lower(String),
    Upper(String),
    Number(BigUint),
    LParen,
    RParen,
    Comma,
    Dot,
    Tilde,
    Amp,
    Bar,
    Arrow,
    DArrow,
    Eq,
    Le,
    Lt,
    Ne,
    Plus,
    Star,
}

fn describe(t: Option<&(Tok, usize)>) -> String {
    match t {
        None => "end of input".into(),
        Some((tok, _)) => format!("{tok:?}"),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let two = text.get(i..i + 2);
        let three = text.get(i..i + 3);
        let tok = if three == Some("<->") {
            i += 3;
            Tok::DArrow
        } else if two == Some("->") {
            i += 2;
            Tok::Arrow
        } else if two == Some("<=") {
            i += 2;
            Tok::Le
        } else if two == Some("!=") {
            i += 2;
            Tok::Ne
        } else if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            Tok::Number(text[start..i].parse().expect("digits"))
        } else if c.is_ascii_lowercase() {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            Tok::Lower(text[start..i].to_string())
        } else if c.is_ascii_uppercase() {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'[' {
                let close = text[i..]
                    .find(']')
                    .map(|k| i + k)
                    .ok_or(ParseError::Syntax { pos: i, message: "unterminated symbol parameter".into() })?;
                i = close + 1;
            }
            Tok::Upper(text[start..i].to_string())
        } else {
            i += 1;
            match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                '.' => Tok::Dot,
                '~' => Tok::Tilde,
                '&' => Tok::Amp,
                '|' => Tok::Bar,
                '=' => Tok::Eq,
                '<' => Tok::Lt,
                '+' => Tok::Plus,
                '*' => Tok::Star,
                _ => return Err(ParseError::Syntax { pos: start, message: format!("unexpected character `{c}`") }),
            }
        };
        out.push((tok, start));
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    registry: &'a SymbolRegistry,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn error<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(ParseError::Syntax { pos: self.offset(), message: message.into() })
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            self.error(format!("expected {tok:?}, found {}", describe(self.toks.get(self.pos))))
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        let lhs = self.implication()?;
        if self.eat(&Tok::DArrow) {
            let rhs = self.implication()?;
            if self.peek() == Some(&Tok::DArrow) {
                return self.error("`<->` is not associative; add parentheses");
            }
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> PResult<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut acc = self.conjunction()?;
        while self.eat(&Tok::Bar) {
            acc = Formula::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut acc = self.unary()?;
        while self.eat(&Tok::Amp) {
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> PResult<Formula> {
        if self.eat(&Tok::Tilde) {
            return Ok(Formula::not(self.unary()?));
        }
        if let Some(Tok::Upper(q)) = self.peek() {
            if (q == "A" || q == "E") && matches!(self.toks.get(self.pos + 1), Some((Tok::Lower(_), _))) {
                return self.quantifier();
            }
        }
        self.primary()
    }

    fn quantifier(&mut self) -> PResult<Formula> {
        let universal = matches!(self.peek(), Some(Tok::Upper(q)) if q == "A");
        self.pos += 1;
        let var = match self.peek() {
            Some(Tok::Lower(v)) => Var::new(v),
            _ => return self.error("expected variable"),
        };
        self.pos += 1;
        let strict = matches!(self.peek(), Some(Tok::Lt));
        let bound = if self.eat(&Tok::Le) || self.eat(&Tok::Lt) {
            let at = self.offset();
            let t = self.term()?;
            if t.contains_var(&var) {
                return Err(ParseError::BoundMentionsVariable { pos: at, var: var.to_string() });
            }
            Some(t)
        } else {
            None
        };
        self.expect(Tok::Dot)?;
        let body = self.formula()?;
        if let (true, Some(t)) = (strict, &bound) {
            return Ok(if universal {
                Formula::bforall_lt(var.as_str(), t.clone(), body)
            } else {
                Formula::bexists_lt(var.as_str(), t.clone(), body)
            });
        }
        let body = Box::new(body);
        Ok(match (universal, bound) {
            (true, None) => Formula::Forall(var, body),
            (false, None) => Formula::Exists(var, body),
            (true, Some(t)) => Formula::BForall(var, t, body),
            (false, Some(t)) => Formula::BExists(var, t, body),
        })
    }

    fn primary(&mut self) -> PResult<Formula> {
        if let Some(Tok::Upper(name)) = self.peek() {
            let name = name.clone();
            let sym = Symbol::new(&name);
            if let Some(decl) = self.registry.lookup(&sym) {
                if decl.kind == SymbolKind::Predicate {
                    let at = self.offset();
                    self.pos += 1;
                    let args = self.arguments()?;
                    check_arity(at, &name, decl.arity, args.len())?;
                    return Ok(Formula::Atom(Atom::Pred(sym, args)));
                }
            }
        }
        let start = self.pos;
        match self.atom() {
            Ok(f) => Ok(f),
            Err(atom_err) => {
                if self.toks.get(start).map(|(t, _)| t) != Some(&Tok::LParen) {
                    return Err(atom_err);
                }
                self.pos = start + 1;
                let inner = self.formula().and_then(|f| self.expect(Tok::RParen).map(|_| f));
                match inner {
                    Ok(f) => Ok(f),
                    Err(e) => Err(if e.pos() >= atom_err.pos() { e } else { atom_err }),
                }
            }
        }
    }

    fn atom(&mut self) -> PResult<Formula> {
        let lhs = self.term()?;
        let op = self.peek().cloned();
        let rel = match op {
            Some(Tok::Eq) | Some(Tok::Le) | Some(Tok::Lt) | Some(Tok::Ne) => op.unwrap(),
            _ => return self.error(format!("expected relation, found {}", describe(self.toks.get(self.pos)))),
        };
        self.pos += 1;
        let rhs = self.term()?;
        Ok(match rel {
            Tok::Eq => Formula::eq(lhs, rhs),
            Tok::Le => Formula::le(lhs, rhs),
            Tok::Lt => Formula::lt(lhs, rhs),
            _ => Formula::not(Formula::eq(lhs, rhs)),
        })
    }

    fn arguments(&mut self) -> PResult<Vec<Term>> {
        self.expect(Tok::LParen)?;
        let mut args = Vec::new();
        if self.eat(&Tok::RParen) {
            return Ok(args);
        }
        loop {
            args.push(self.term()?);
            if self.eat(&Tok::RParen) {
                return Ok(args);
            }
            self.expect(Tok::Comma)?;
        }
    }

    fn term(&mut self) -> PResult<Term> {
        let first = self.term_atom()?;
        self.term_rest(first)
    }

    /// Continues a sum of products whose first factor is already parsed.
    fn term_rest(&mut self, first: Term) -> PResult<Term> {
        let mut acc = self.product_rest(first)?;
        while self.eat(&Tok::Plus) {
            let factor = self.term_atom()?;
            acc = Term::add(acc, self.product_rest(factor)?);
        }
        Ok(acc)
    }

    fn product_rest(&mut self, first: Term) -> PResult<Term> {
        let mut acc = first;
        while self.eat(&Tok::Star) {
            acc = Term::mul(acc, self.term_atom()?);
        }
        Ok(acc)
    }

    fn term_atom(&mut self) -> PResult<Term> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Lower(v)) => {
                self.pos += 1;
                Ok(Term::Var(Var::new(&v)))
            }
            Some(Tok::Number(n)) => {
                self.pos += 1;
                Ok(numeral(&n))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Some(Tok::Upper(name)) if name == "S" => {
                // Successor chains are unrolled iteratively.
                let mut depth = 0usize;
                while matches!(self.peek(), Some(Tok::Upper(n)) if n == "S") {
                    self.pos += 1;
                    self.expect(Tok::LParen)?;
                    depth += 1;
                }
                let mut t = self.term()?;
                for level in 0..depth {
                    if level > 0 {
                        t = self.term_rest(t)?;
                    }
                    self.expect(Tok::RParen)?;
                    t = Term::succ(t);
                }
                Ok(t)
            }
            Some(Tok::Upper(name)) => {
                let sym = Symbol::new(&name);
                match self.registry.lookup(&sym) {
                    Some(decl) if decl.kind == SymbolKind::Function => {
                        self.pos += 1;
                        let args = self.arguments()?;
                        check_arity(at, &name, decl.arity, args.len())?;
                        Ok(Term::Fun(sym, args))
                    }
                    Some(_) => self.error(format!("predicate `{name}` used as a term")),
                    None => Err(ParseError::UnknownSymbol { pos: at, name }),
                }
            }
            other => self.error(format!("expected term, found {}", describe(other.map(|t| (t, at)).as_ref()))),
        }
    }
}

fn check_arity(pos: usize, name: &str, expected: usize, found: usize) -> PResult<()> {
    if expected == found {
        Ok(())
    } else {
        Err(ParseError::ArityMismatch { pos, name: name.to_string(), expected, found })
    }
}

/// Parses a formula using only the built-in symbols.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    parse_with(text, &SymbolRegistry::builtin())
}

pub fn parse_with(text: &str, registry: &SymbolRegistry) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len(), registry };
    let f = p.formula()?;
    if p.pos != p.toks.len() {
        return p.error(format!("unexpected trailing {}", describe(p.toks.get(p.pos))));
    }
    Ok(f)
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    parse_term_with(text, &SymbolRegistry::builtin())
}

pub fn parse_term_with(text: &str, registry: &SymbolRegistry) -> Result<Term, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len(), registry };
    let t = p.term()?;
    if p.pos != p.toks.len() {
        return p.error(format!("unexpected trailing {}", describe(p.toks.get(p.pos))));
    }
    Ok(t)
}
