use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::grammar::{fresh_name, to_cnf, ContextFreeGrammar, GSym};
use crate::indexed::{Block, IItem, IndexedGrammar, IndexedProduction, PartitionedIndexedGrammar, BOTTOM};
use crate::symbol::Symbol;
use crate::word::{Letter, PairLetter};

fn tag(it: &IItem, first_tape: bool) -> IItem {
    match it {
        IItem::T(Letter::Sym(a)) => {
            let p = if first_tape { PairLetter::new(Some(*a), None) } else { PairLetter::new(None, Some(*a)) };
            IItem::T(Letter::Pair(p.expect("non-empty pair")))
        }
        other => other.clone(),
    }
}

/// Turns a partitioned grammar of `u#v^rev` words into a grammar over pair
/// letters for `(u, v)`: left-block material is tagged for the first tape,
/// right-block material for the second tape and reversed, and the centre
/// moves to the end.
pub fn unfolded_indexed_to_two_tape(g: &PartitionedIndexedGrammar) -> Result<IndexedGrammar> {
    let gr = g.grammar();
    let mut prods = Vec::new();
    for p in gr.productions() {
        let lhs = g.block(p.lhs).ok_or_else(|| Error::shape(p, format!("`{}` is in no block", p.lhs)))?;
        // Each output item remembers its input position to carry the linear mark.
        let items: Vec<(usize, IItem)> = match lhs {
            Block::Left => p.rhs.iter().enumerate().map(|(i, it)| (i, tag(it, true))).collect(),
            Block::Right => p.rhs.iter().enumerate().rev().map(|(i, it)| (i, tag(it, false))).collect(),
            Block::Hash => {
                let c = p
                    .rhs
                    .iter()
                    .position(|it| match it {
                        IItem::T(l) => l.is_hash(),
                        IItem::N { name, .. } => g.block(*name) == Some(Block::Hash),
                    })
                    .ok_or_else(|| Error::shape(p, "no centre"))?;
                let mut v: Vec<(usize, IItem)> = p.rhs[..c].iter().enumerate().map(|(i, it)| (i, tag(it, true))).collect();
                v.extend(p.rhs[c + 1..].iter().enumerate().rev().map(|(i, it)| (c + 1 + i, tag(it, false))));
                if let IItem::N { .. } = p.rhs[c] {
                    v.push((c, p.rhs[c].clone()));
                }
                v
            }
        };
        let linear = p.linear.and_then(|j| items.iter().position(|(i, _)| *i == j));
        prods.push(IndexedProduction { lhs: p.lhs, consume: p.consume, rhs: items.into_iter().map(|(_, it)| it).collect(), linear });
    }
    IndexedGrammar::new(gr.alphabet().clone(), gr.flags().to_vec(), gr.start(), prods)
}

/// Linear indexed grammar for `u#v^rev` from a two-tape context-free grammar:
/// the flag stack holds the pending nonterminals of a leftmost derivation in
/// Chomsky normal form.
pub fn two_tape_cfg_to_unfolded_lig(g: &ContextFreeGrammar) -> Result<IndexedGrammar> {
    let cnf = to_cnf(g);
    let mut used: FxHashSet<Symbol> = cnf.nonterminals().iter().copied().collect();
    used.insert(Symbol::new(BOTTOM));
    let start = fresh_name("I0", &mut used);
    let i = fresh_name("I", &mut used);
    let mut names = std::collections::BTreeMap::new();
    for a in cnf.nonterminals() {
        names.insert(*a, fresh_name(&format!("I_{a}"), &mut used));
    }
    let bottom = Symbol::new(BOTTOM);
    let var = |n: Symbol| IItem::var(n);
    let mut prods = vec![IndexedProduction::new(start, None, vec![IItem::N { name: names[&cnf.start()], push: vec![bottom] }], None)];
    for p in cnf.productions() {
        let ia = names[&p.lhs];
        let rhs = match p.rhs[..] {
            [GSym::N(b), GSym::N(c)] => vec![IItem::N { name: names[&b], push: vec![c] }],
            [] => vec![var(i)],
            [GSym::T(Letter::Pair(pl))] => {
                let mut v: Vec<IItem> = pl.left().map(|a| IItem::T(Letter::Sym(a))).into_iter().collect();
                v.push(var(i));
                v.extend(pl.right().map(|a| IItem::T(Letter::Sym(a))));
                v
            }
            _ => return Err(Error::shape(p, "expected a Chomsky normal form rule over pair letters")),
        };
        prods.push(IndexedProduction::new(ia, None, rhs, None));
    }
    for a in cnf.nonterminals() {
        prods.push(IndexedProduction::new(i, Some(*a), vec![var(names[a])], None));
    }
    prods.push(IndexedProduction::new(i, Some(bottom), vec![IItem::T(Letter::hash_mark())], None));
    let flags: Vec<Symbol> = std::iter::once(bottom).chain(cnf.nonterminals().iter().copied()).collect();
    IndexedGrammar::new(cnf.alphabet().clone(), flags, start, prods)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formalism::{Limits, Object};
    use crate::indexed::{ig_validate, ig_validate_partitioned, GrammarKind};
    use crate::sample::sample_equal;

    fn same_relation(a: impl Into<Object>, b: impl Into<Object>, bound: usize) {
        let (sa, _) = a.into().sample(bound, Limits::for_bound(bound)).unwrap();
        let (sb, _) = b.into().sample(bound, Limits::for_bound(bound)).unwrap();
        let d = sample_equal(&sa, &sb).unwrap();
        assert!(d.equal(), "{d}");
        assert!(!sa.is_empty());
    }

    const SORT3: &str = "alphabet: 1 2 3\nflags: $ 2 3\nstart: S\nhash: S\nright: T\n\
        S -> 1 S 1 | 2 S+2 | 3 S+3 | # T\nT[2] -> T 2\nT[3] -> 3 T\nT[$] -> eps\n";

    #[test]
    fn sorting_grammar_to_two_tape() {
        let g = IndexedGrammar::parse(SORT3).unwrap();
        let two = unfolded_indexed_to_two_tape(&ig_validate_partitioned(&g).unwrap()).unwrap();
        assert_eq!(ig_validate(&two).kind, GrammarKind::LinearIndexed);
        assert!(two.uses_pairs());
        same_relation(g, two, 4);
    }

    #[test]
    fn rev_to_lig() {
        let g = ContextFreeGrammar::parse("alphabet: a b\nstart: S\nS -> (a,.) S (.,a) | (b,.) S (.,b) | eps\n").unwrap();
        let split = crate::transforms::split_pair_letters(&Object::from(g.clone())).unwrap();
        let Object::Grammar(split) = split else { unreachable!() };
        let lig = two_tape_cfg_to_unfolded_lig(&split).unwrap();
        assert_eq!(ig_validate(&lig).kind, GrammarKind::LinearIndexed);
        same_relation(g, lig, 4);
    }

    #[test]
    fn single_rule() {
        let g = ContextFreeGrammar::parse("alphabet: a\nstart: S\nS -> (a,.)\n").unwrap();
        let lig = two_tape_cfg_to_unfolded_lig(&g).unwrap();
        let set = crate::indexed::ig_enumerate(&lig, crate::budget::Budget::Unfolded(3), 10).unwrap();
        assert_eq!(set.strings(), vec!["a#"]);
    }
}
