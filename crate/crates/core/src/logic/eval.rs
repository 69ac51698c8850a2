//! Brute-force Tarskian model checking.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::structure::{Elem, Relation, Structure, LIN_SUCC, SUCC};

use super::formula::Formula;

/// Truth of the sentence `phi` in `s`.
///
/// Relation atoms name relations of the signature; `S` and `Sbar` both refer
/// to the successor pairs of `s` (which must be present if either is used).
pub fn model_check(s: &Structure, phi: &Formula) -> Result<bool> {
    model_check_with(s, phi, &BTreeMap::new())
}

/// Truth of `phi` in `s` under an assignment of its free variables.
pub fn model_check_with(s: &Structure, phi: &Formula, env: &BTreeMap<String, Elem>) -> Result<bool> {
    let free = phi.free_vars();
    if let Some(v) = free.iter().find(|v| !env.contains_key(*v)) {
        return Err(Error::input(format!("formula has unassigned free variable {v:?}")));
    }
    let mut scope: Vec<(String, usize)> = Vec::new();
    let mut slots = Vec::new();
    for (name, &e) in env {
        if e as usize >= s.size() {
            return Err(Error::input(format!("variable {name:?} assigned to {e}, outside the universe")));
        }
        scope.push((name.clone(), slots.len()));
        slots.push(e);
    }
    let mut compiler = Compiler { s, scope, slots: slots.len() };
    let c = compiler.compile(phi)?;
    slots.resize(compiler.slots, 0);
    Ok(eval(s, &c, &mut slots))
}

enum Compiled<'a> {
    Exists(usize, Box<Compiled<'a>>),
    Forall(usize, Box<Compiled<'a>>),
    And(Vec<Compiled<'a>>),
    Or(Vec<Compiled<'a>>),
    Not(Box<Compiled<'a>>),
    Eq(usize, usize),
    Atom(&'a Relation, Vec<usize>),
}

struct Compiler<'a> {
    s: &'a Structure,
    scope: Vec<(String, usize)>,
    slots: usize,
}

impl<'a> Compiler<'a> {
    fn lookup(&self, v: &str) -> Result<usize> {
        self.scope
            .iter()
            .rev()
            .find(|(n, _)| n == v)
            .map(|&(_, i)| i)
            .ok_or_else(|| Error::input(format!("unbound variable {v:?}")))
    }

    fn quantified(&mut self, v: &str, body: &Formula) -> Result<(usize, Box<Compiled<'a>>)> {
        let slot = self.slots;
        self.slots += 1;
        self.scope.push((v.to_string(), slot));
        let b = self.compile(body)?;
        self.scope.pop();
        Ok((slot, Box::new(b)))
    }

    fn compile(&mut self, f: &Formula) -> Result<Compiled<'a>> {
        Ok(match f {
            Formula::Exists(v, b) => {
                let (slot, b) = self.quantified(v, b)?;
                Compiled::Exists(slot, b)
            }
            Formula::Forall(v, b) => {
                let (slot, b) = self.quantified(v, b)?;
                Compiled::Forall(slot, b)
            }
            Formula::And(fs) => Compiled::And(fs.iter().map(|g| self.compile(g)).collect::<Result<_>>()?),
            Formula::Or(fs) => Compiled::Or(fs.iter().map(|g| self.compile(g)).collect::<Result<_>>()?),
            Formula::Not(b) => Compiled::Not(Box::new(self.compile(b)?)),
            Formula::Eq(a, b) => Compiled::Eq(self.lookup(a)?, self.lookup(b)?),
            Formula::Atom(name, vars) => {
                let rel = if name == SUCC || name == LIN_SUCC {
                    self.s
                        .succ()
                        .ok_or_else(|| Error::input(format!("formula uses {name} but the structure has no successor")))?
                } else {
                    let idx = self.s.signature().index_of(name).ok_or_else(|| {
                        Error::input(format!("relation {name:?} is not in the signature"))
                    })?;
                    self.s.relation(idx)
                };
                if rel.arity() != vars.len() {
                    return Err(Error::input(format!(
                        "relation {name:?} has arity {}, used with {} arguments",
                        rel.arity(),
                        vars.len()
                    )));
                }
                Compiled::Atom(rel, vars.iter().map(|v| self.lookup(v)).collect::<Result<_>>()?)
            }
        })
    }
}

fn eval(s: &Structure, c: &Compiled, slots: &mut [Elem]) -> bool {
    match c {
        Compiled::Exists(i, b) => (0..s.size() as Elem).any(|e| {
            slots[*i] = e;
            eval(s, b, slots)
        }),
        Compiled::Forall(i, b) => (0..s.size() as Elem).all(|e| {
            slots[*i] = e;
            eval(s, b, slots)
        }),
        Compiled::And(cs) => cs.iter().all(|c| eval(s, c, slots)),
        Compiled::Or(cs) => cs.iter().any(|c| eval(s, c, slots)),
        Compiled::Not(b) => !eval(s, b, slots),
        Compiled::Eq(a, b) => slots[*a] == slots[*b],
        Compiled::Atom(rel, args) => {
            let mut buf = [0; 8];
            if args.len() <= buf.len() {
                for (k, &a) in args.iter().enumerate() {
                    buf[k] = slots[a];
                }
                rel.contains(&buf[..args.len()])
            } else {
                let t: Vec<Elem> = args.iter().map(|&a| slots[a]).collect();
                rel.contains(&t)
            }
        }
    }
}
