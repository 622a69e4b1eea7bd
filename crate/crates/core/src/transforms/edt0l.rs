use std::collections::BTreeMap;

use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::grammar::{fresh_name, GSym};
use crate::lsystem::{edt0l_validate, Edt0lWitness, Et0lSystem, Form, Table};
use crate::symbol::Symbol;
use crate::word::Letter;

/// Splits a deterministic system over pair letters into two copies, the
/// second reversed, joined by `#` in the axiom. Applying a table sequence to
/// the result yields `u#v^rev` where `(u, v)` is the input's yield.
pub fn two_tape_edt0l_to_unfolded(h: &Edt0lWitness) -> Result<Edt0lWitness> {
    let sys = h.system();
    let mut used: FxHashSet<Symbol> = sys.nonterminals().iter().copied().collect();
    let mut copies: BTreeMap<Symbol, (Symbol, Symbol)> = BTreeMap::new();
    for n in sys.nonterminals() {
        let one = fresh_name(&format!("{n}1"), &mut used);
        let two = fresh_name(&format!("{n}2"), &mut used);
        copies.insert(*n, (one, two));
    }
    let side = |form: &Form, first: bool| -> Result<Form> {
        let mut out = Vec::new();
        for s in form {
            match s {
                GSym::N(n) => out.push(GSym::N(if first { copies[n].0 } else { copies[n].1 })),
                GSym::T(Letter::Pair(p)) => out.extend((if first { p.left() } else { p.right() }).map(|a| GSym::T(Letter::Sym(a)))),
                GSym::T(l) => return Err(Error::Invalid(format!("letter `{l}` is not a pair letter"))),
            }
        }
        if !first {
            out.reverse();
        }
        Ok(out)
    };
    let mut axiom = side(sys.axiom(), true)?;
    axiom.push(GSym::T(Letter::hash_mark()));
    axiom.extend(side(sys.axiom(), false)?);
    let mut tables = Vec::new();
    for t in sys.tables() {
        let mut rules = Vec::new();
        for (a, r) in t.rules().filter(|(a, _)| !t.inserted().contains(a)) {
            rules.push((copies[&a].0, side(r, true)?));
            rules.push((copies[&a].1, side(r, false)?));
        }
        tables.push(Table::new(t.name.clone(), rules));
    }
    let nonterminals = copies.values().flat_map(|(a, b)| [*a, *b]).collect();
    edt0l_validate(&Et0lSystem::new(sys.alphabet().clone(), nonterminals, axiom, tables)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::formalism::{Limits, Object};
    use crate::lsystem::etol_enumerate;
    use crate::sample::sample_equal;

    fn check(src: &str, bound: usize) -> Et0lSystem {
        let sys = Et0lSystem::parse(src).unwrap();
        let out = two_tape_edt0l_to_unfolded(&edt0l_validate(&sys).unwrap()).unwrap();
        assert_eq!(out.system().tables().len(), sys.tables().len());
        let (a, _) = Object::from(sys).sample(bound, Limits::for_bound(bound)).unwrap();
        let (b, _) = Object::from(out.system().clone()).sample(bound, Limits::for_bound(bound)).unwrap();
        assert!(sample_equal(&a, &b).unwrap().equal());
        out.system().clone()
    }

    #[test]
    fn diagonal() {
        let out = check("alphabet: x\nnonterminals: A\naxiom: A\ntable t1: A -> (x,x) A\ntable t2: A -> eps\n", 8);
        let set = etol_enumerate(&out, Budget::Unfolded(3), 10).unwrap();
        assert_eq!(set.strings(), vec!["#", "x#x", "xx#xx", "xxx#xxx"]);
    }

    #[test]
    fn uneven_sides() {
        let out = check("alphabet: x y\nnonterminals: A\naxiom: A\ntable t1: A -> (x,.) (y,y) A\ntable t2: A -> eps\n", 8);
        let set = etol_enumerate(&out, Budget::Unfolded(4), 10).unwrap();
        assert_eq!(set.strings(), vec!["#", "xy#y", "xyxy#yy"]);
    }

    #[test]
    fn identity_only() {
        let out = check("alphabet: x\nnonterminals: I\naxiom: I\ntable t: I -> I\n", 4);
        let set = etol_enumerate(&out, Budget::Unfolded(4), 10).unwrap();
        assert!(set.is_empty());
        assert_eq!(out.axiom().len(), 3);
    }
}
