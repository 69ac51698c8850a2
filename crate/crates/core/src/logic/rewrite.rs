//! Translations between sentences over a circular successor `S` and over a
//! linear successor `Sbar`.
//!
//! A circular successor is recovered from a linear one by adding the edge
//! from the last element to the first; a linear one is obtained from a
//! circular one by cutting the edge into a chosen element `min`.

use crate::error::{Error, Result};
use crate::structure::{LIN_SUCC, SUCC};

use super::formula::Formula;

/// Replaces every `S(x,y)` by `Sbar(x,y) ∨ ¬∃z (Sbar(x,z) ∨ Sbar(z,y))`:
/// `x` is the last and `y` the first element of the linear order.
pub fn succ_to_linsucc(phi: &Formula) -> Result<Formula> {
    if phi.uses_relation(LIN_SUCC) {
        return Err(Error::input(format!("formula already uses {LIN_SUCC}")));
    }
    check_binary(phi, SUCC)?;
    let z = phi.fresh_variable("z");
    Ok(phi.map_atoms(&mut |rel, vars| {
        (rel == SUCC).then(|| {
            let (x, y) = (vars[0].as_str(), vars[1].as_str());
            Formula::Or(vec![
                Formula::atom(LIN_SUCC, &[x, y]),
                Formula::not(Formula::exists(
                    z.clone(),
                    Formula::Or(vec![Formula::atom(LIN_SUCC, &[x, &z]), Formula::atom(LIN_SUCC, &[&z, y])]),
                )),
            ])
        })
    }))
}

/// `∃min Cut(psi)`, where `Cut` replaces every `Sbar(x,y)` by
/// `S(x,y) ∧ ¬ y = min`.
pub fn linsucc_to_succ(psi: &Formula) -> Result<Formula> {
    if psi.uses_relation(SUCC) {
        return Err(Error::input(format!("formula already uses {SUCC}")));
    }
    check_binary(psi, LIN_SUCC)?;
    let min = psi.fresh_variable("min");
    let cut = psi.map_atoms(&mut |rel, vars| {
        (rel == LIN_SUCC).then(|| {
            Formula::And(vec![
                Formula::atom(SUCC, &[&vars[0], &vars[1]]),
                Formula::not(Formula::eq(vars[1].clone(), min.clone())),
            ])
        })
    });
    Ok(Formula::exists(min, cut))
}

fn check_binary(phi: &Formula, name: &str) -> Result<()> {
    let mut bad = None;
    phi.map_atoms(&mut |rel, vars| {
        if rel == name && vars.len() != 2 {
            bad = Some(vars.len());
        }
        None
    });
    match bad {
        Some(n) => Err(Error::input(format!("{name} is binary but is used with {n} arguments"))),
        None => Ok(()),
    }
}
