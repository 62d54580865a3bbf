use std::collections::{BTreeMap, BTreeSet};

use super::{Atom, Formula, Term, Var};

/// A variable named after `base` that is not in `avoid`. The trailing digits
/// of `base` are replaced by the smallest positive counter that works.
pub fn fresh_var(base: &Var, avoid: &BTreeSet<Var>) -> Var {
    let stem = base.as_str().trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "v" } else { stem };
    (1u64..).map(|i| Var::new(&format!("{stem}{i}"))).find(|v| !avoid.contains(v)).expect("unbounded counter")
}

impl Term {
    pub fn substitute_all(&self, map: &BTreeMap<Var, Term>) -> Term {
        match self {
            Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::Zero | Term::Num(_) => self.clone(),
            Term::Succ(_) => {
                // Numerals are long successor chains; walk them iteratively.
                let mut depth = 0usize;
                let mut cur = self;
                while let Term::Succ(inner) = cur {
                    depth += 1;
                    cur = inner;
                }
                let mut out = cur.substitute_all(map);
                for _ in 0..depth {
                    out = Term::succ(out);
                }
                out
            }
            Term::Add(a, b) => Term::add(a.substitute_all(map), b.substitute_all(map)),
            Term::Mul(a, b) => Term::mul(a.substitute_all(map), b.substitute_all(map)),
            Term::Fun(s, args) => Term::Fun(s.clone(), args.iter().map(|a| a.substitute_all(map)).collect()),
        }
    }

    pub fn substitute(&self, v: &Var, t: &Term) -> Term {
        self.substitute_all(&BTreeMap::from([(v.clone(), t.clone())]))
    }
}

/// Capture-avoiding substitution of `t` for the free occurrences of `v`.
pub fn substitute(f: &Formula, v: &Var, t: &Term) -> Formula {
    substitute_all(f, &BTreeMap::from([(v.clone(), t.clone())]))
}

/// Simultaneous capture-avoiding substitution.
pub fn substitute_all(f: &Formula, map: &BTreeMap<Var, Term>) -> Formula {
    let free = f.free_vars();
    let relevant: BTreeMap<Var, Term> =
        map.iter().filter(|(v, _)| free.contains(*v)).map(|(v, t)| (v.clone(), t.clone())).collect();
    if relevant.is_empty() {
        return f.clone();
    }
    go(f, &relevant)
}

fn go(f: &Formula, map: &BTreeMap<Var, Term>) -> Formula {
    match f {
        Formula::Atom(a) => Formula::Atom(match a {
            Atom::Eq(x, y) => Atom::Eq(x.substitute_all(map), y.substitute_all(map)),
            Atom::Le(x, y) => Atom::Le(x.substitute_all(map), y.substitute_all(map)),
            Atom::Pred(s, args) => Atom::Pred(s.clone(), args.iter().map(|t| t.substitute_all(map)).collect()),
        }),
        Formula::Not(g) => Formula::not(go(g, map)),
        Formula::And(a, b) => Formula::and(go(a, map), go(b, map)),
        Formula::Or(a, b) => Formula::or(go(a, map), go(b, map)),
        Formula::Implies(a, b) => Formula::implies(go(a, map), go(b, map)),
        Formula::Iff(a, b) => Formula::iff(go(a, map), go(b, map)),
        Formula::Exists(w, g) => {
            let (w, g) = binder(w, g, map);
            Formula::Exists(w, Box::new(g))
        }
        Formula::Forall(w, g) => {
            let (w, g) = binder(w, g, map);
            Formula::Forall(w, Box::new(g))
        }
        Formula::BExists(w, t, g) => {
            let t = t.substitute_all(map);
            let (w, g) = binder(w, g, map);
            Formula::BExists(w, t, Box::new(g))
        }
        Formula::BForall(w, t, g) => {
            let t = t.substitute_all(map);
            let (w, g) = binder(w, g, map);
            Formula::BForall(w, t, Box::new(g))
        }
    }
}

/// Pushes the substitution under a binder for `w`, renaming `w` when it
/// would capture a variable of an incoming term.
fn binder(w: &Var, body: &Formula, map: &BTreeMap<Var, Term>) -> (Var, Formula) {
    let free = body.free_vars();
    let inner: BTreeMap<Var, Term> =
        map.iter().filter(|(v, _)| *v != w && free.contains(*v)).map(|(v, t)| (v.clone(), t.clone())).collect();
    if inner.is_empty() {
        return (w.clone(), body.clone());
    }
    let captures = inner.values().any(|t| t.contains_var(w));
    if !captures {
        return (w.clone(), go(body, &inner));
    }
    let mut avoid = body.all_vars();
    for (v, t) in &inner {
        avoid.insert(v.clone());
        t.vars_into(&mut avoid);
    }
    let fresh = fresh_var(w, &avoid);
    let mut renamed = inner;
    renamed.insert(w.clone(), Term::Var(fresh.clone()));
    (fresh, go(body, &renamed))
}
