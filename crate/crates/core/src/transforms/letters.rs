use std::collections::BTreeMap;

use rustc_hash::FxHashSet;

use crate::automata::{CounterAutomaton, CounterTransition, Nfa, PdaTransition, PushdownAutomaton, Transducer};
use crate::error::{Error, Result};
use crate::formalism::Object;
use crate::grammar::{fresh_name, ContextFreeGrammar, GSym, Production};
use crate::indexed::{IItem, IndexedGrammar, IndexedProduction};
use crate::lsystem::{Et0lSystem, Form, Table};
use crate::symbol::{Alphabet, Symbol};
use crate::word::{Letter, PairLetter, Word};

/// Replaces every letter by a word of letters, keeping the object's kind.
/// Regular-shaped productions and automaton transitions are chained through
/// fresh nonterminals or states so that their shape survives.
pub fn map_letters(obj: &Object, alphabet: Alphabet, f: &dyn Fn(Letter) -> Vec<Letter>) -> Result<Object> {
    Ok(match obj {
        Object::Grammar(g) => Object::Grammar(map_cfg(g, alphabet, f)?),
        Object::Indexed(g) => Object::Indexed(map_ig(g, alphabet, f)?),
        Object::Et0l(s) => Object::Et0l(map_etol(s, alphabet, f)?),
        Object::Nfa(a) => {
            let mut states = a.states().to_vec();
            let mut used: FxHashSet<Symbol> = states.iter().copied().collect();
            let mut out = Vec::new();
            for (p, l, q) in a.transitions() {
                let image = l.map_or_else(Vec::new, f);
                chain(*p, &image, *q, &mut used, &mut states, |p, l, q, _| out.push((p, l, q)));
            }
            Object::Nfa(Nfa::new(alphabet, states, a.initial().to_vec(), a.finals().to_vec(), out)?)
        }
        Object::Counter(a) => {
            let mut states = a.states().to_vec();
            let mut used: FxHashSet<Symbol> = states.iter().copied().collect();
            let mut out = Vec::new();
            for t in a.transitions() {
                let image = t.label.map_or_else(Vec::new, f);
                chain(t.from, &image, t.to, &mut used, &mut states, |p, l, q, first| {
                    let (zero, delta) = if first { (t.zero, t.delta) } else { (false, 0) };
                    out.push(CounterTransition { from: p, label: l, zero, delta, to: q })
                });
            }
            Object::Counter(CounterAutomaton::new(alphabet, states, a.initial().to_vec(), a.finals().to_vec(), out, a.mode())?)
        }
        Object::Pushdown(a) => {
            let mut states = a.states().to_vec();
            let mut used: FxHashSet<Symbol> = states.iter().copied().collect();
            let mut out = Vec::new();
            for t in a.transitions() {
                let image = t.label.map_or_else(Vec::new, f);
                chain(t.from, &image, t.to, &mut used, &mut states, |p, l, q, first| {
                    let (top, push) = if first { (t.top, t.push.clone()) } else { (None, Vec::new()) };
                    out.push(PdaTransition { from: p, label: l, top, push, to: q })
                });
            }
            Object::Pushdown(PushdownAutomaton::new(alphabet, a.stack().to_vec(), a.bottom(), states, a.initial().to_vec(), a.finals().to_vec(), out, a.acceptance())?)
        }
        Object::Transducer(t) => {
            let side = |w: &Word| -> Result<Word> {
                let mut out = Vec::new();
                for s in &w.0 {
                    for l in f(Letter::Sym(*s)) {
                        out.push(l.as_sym().ok_or_else(|| Error::Invalid("transducer labels must map to plain symbols".into()))?);
                    }
                }
                Ok(Word(out))
            };
            let mut out = Vec::new();
            for (p, (u, v), q) in t.transitions() {
                out.push((*p, (side(u)?, side(v)?), *q));
            }
            Object::Transducer(Transducer::new(alphabet, t.states().to_vec(), t.initial().to_vec(), t.finals().to_vec(), out)?)
        }
    })
}

/// Emits `p -l1-> s1 -l2-> ... -lk-> q` with fresh intermediate states, or a
/// single ε-step for an empty image. The callback learns which step is first.
fn chain(p: Symbol, image: &[Letter], q: Symbol, used: &mut FxHashSet<Symbol>, states: &mut Vec<Symbol>, mut emit: impl FnMut(Symbol, Option<Letter>, Symbol, bool)) {
    if image.is_empty() {
        emit(p, None, q, true);
        return;
    }
    let mut cur = p;
    for (i, l) in image.iter().enumerate() {
        let next = if i + 1 == image.len() {
            q
        } else {
            let s = fresh_name(&format!("{p}_"), used);
            states.push(s);
            s
        };
        emit(cur, Some(*l), next, i == 0);
        cur = next;
    }
}

fn map_cfg(g: &ContextFreeGrammar, alphabet: Alphabet, f: &dyn Fn(Letter) -> Vec<Letter>) -> Result<ContextFreeGrammar> {
    let mut used: FxHashSet<Symbol> = g.nonterminals().iter().copied().collect();
    let mut out = Vec::new();
    let t = |ls: &[Letter]| ls.iter().map(|l| GSym::T(*l)).collect::<Vec<_>>();
    for p in g.productions() {
        match p.rhs[..] {
            [GSym::T(l), ref rest @ ..] if rest.len() <= 1 && rest.iter().all(|s| matches!(s, GSym::N(_))) => {
                let image = f(l);
                if image.len() <= 1 {
                    out.push(Production::new(p.lhs, t(&image).into_iter().chain(rest.iter().copied()).collect()));
                    continue;
                }
                let mut cur = p.lhs;
                for (i, l) in image.iter().enumerate() {
                    if i + 1 == image.len() {
                        out.push(Production::new(cur, std::iter::once(GSym::T(*l)).chain(rest.iter().copied()).collect()));
                    } else {
                        let next = fresh_name(&format!("{}_", p.lhs), &mut used);
                        out.push(Production::new(cur, vec![GSym::T(*l), GSym::N(next)]));
                        cur = next;
                    }
                }
            }
            [GSym::N(b), GSym::T(l)] => {
                let image = f(l);
                if image.len() <= 1 {
                    out.push(Production::new(p.lhs, std::iter::once(GSym::N(b)).chain(t(&image)).collect()));
                    continue;
                }
                let mut cur = p.lhs;
                for (i, l) in image.iter().enumerate().rev() {
                    if i == 0 {
                        out.push(Production::new(cur, vec![GSym::N(b), GSym::T(*l)]));
                    } else {
                        let next = fresh_name(&format!("{}_", p.lhs), &mut used);
                        out.push(Production::new(cur, vec![GSym::N(next), GSym::T(*l)]));
                        cur = next;
                    }
                }
            }
            _ => out.push(Production::new(p.lhs, map_form(&p.rhs, f))),
        }
    }
    let mut h = ContextFreeGrammar::new(alphabet, g.start(), out)?;
    h.partition = g.partition.clone();
    Ok(h)
}

fn map_form(form: &[GSym], f: &dyn Fn(Letter) -> Vec<Letter>) -> Form {
    form.iter()
        .flat_map(|s| match s {
            GSym::T(l) => f(*l).into_iter().map(GSym::T).collect(),
            n => vec![*n],
        })
        .collect()
}

fn map_ig(g: &IndexedGrammar, alphabet: Alphabet, f: &dyn Fn(Letter) -> Vec<Letter>) -> Result<IndexedGrammar> {
    let prods = g
        .productions()
        .iter()
        .map(|p| {
            let mut rhs = Vec::new();
            let mut linear = None;
            for (i, it) in p.rhs.iter().enumerate() {
                match it {
                    IItem::T(l) => rhs.extend(f(*l).into_iter().map(IItem::T)),
                    n => {
                        if p.linear == Some(i) {
                            linear = Some(rhs.len());
                        }
                        rhs.push(n.clone());
                    }
                }
            }
            IndexedProduction { lhs: p.lhs, consume: p.consume, rhs, linear }
        })
        .collect();
    let mut h = IndexedGrammar::new(alphabet, g.flags().to_vec(), g.start(), prods)?;
    h.partition = g.partition.clone();
    Ok(h)
}

fn map_etol(s: &Et0lSystem, alphabet: Alphabet, f: &dyn Fn(Letter) -> Vec<Letter>) -> Result<Et0lSystem> {
    let tables = s
        .tables()
        .iter()
        .map(|t| Table::new(t.name.clone(), t.rules().filter(|(a, _)| !t.inserted().contains(a)).map(|(a, r)| (a, map_form(r, f)))))
        .collect();
    Et0lSystem::new(alphabet, s.nonterminals().to_vec(), map_form(s.axiom(), f), tables)
}

/// Writes each pair `(a,b)` with both sides present as `(a,.)(.,b)`.
pub fn split_pair_letters(obj: &Object) -> Result<Object> {
    map_letters(obj, obj.alphabet().clone(), &|l| match l.as_pair() {
        Some(p) if p.left().is_some() && p.right().is_some() => {
            vec![Letter::Pair(PairLetter::new(p.left(), None).expect("left side")), Letter::Pair(PairLetter::new(None, p.right()).expect("right side"))]
        }
        _ => vec![l],
    })
}

/// A symbol-to-word map; symbols without an entry are fixed.
pub type Homomorphism = BTreeMap<Symbol, Word>;

/// The letter image under `h`: symbols map to their words, pairs map
/// componentwise and are realigned.
pub fn hom_letter(h: &Homomorphism, l: Letter) -> Vec<Letter> {
    let image = |s: Symbol| h.get(&s).map_or_else(|| vec![s], |w| w.0.clone());
    match l {
        Letter::Sym(s) => image(s).into_iter().map(Letter::Sym).collect(),
        Letter::Pair(p) => {
            let u = p.left().map_or_else(Vec::new, image);
            let v = p.right().map_or_else(Vec::new, image);
            (0..u.len().max(v.len())).map(|i| Letter::Pair(PairLetter::new(u.get(i).copied(), v.get(i).copied()).expect("non-empty pair"))).collect()
        }
    }
}

pub fn hom_alphabet(h: &Homomorphism, alphabet: &Alphabet) -> Result<Alphabet> {
    let syms: Vec<Symbol> = alphabet.symbols().iter().flat_map(|s| h.get(s).map_or_else(|| vec![*s], |w| w.0.clone())).filter(|s| !s.is_hash()).collect();
    Alphabet::new(syms)
}

pub fn apply_homomorphism(obj: &Object, h: &Homomorphism) -> Result<Object> {
    map_letters(obj, hom_alphabet(h, obj.alphabet())?, &|l| hom_letter(h, l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formalism::{Formalism, Limits};
    use crate::sample::sample_equal;

    #[test]
    fn splitting_keeps_relation_and_shape() {
        let src = "alphabet: x\nstart: S\nS -> (x,x) S | eps\n";
        let g = Object::parse(Formalism::Regular, src).unwrap();
        let s = split_pair_letters(&g).unwrap();
        assert_eq!(s.formalism(), Formalism::Regular);
        let (a, _) = g.sample(5, Limits::for_bound(5)).unwrap();
        let (b, _) = s.sample(5, Limits::for_bound(5)).unwrap();
        assert!(sample_equal(&a, &b).unwrap().equal());
        assert_eq!(split_pair_letters(&s).unwrap(), s);
    }

    #[test]
    fn splitting_automata() {
        let a = Object::parse(Formalism::Nfa, "alphabet: a b\nstate p initial final\ntrans p (a,b) p\n").unwrap();
        let s = split_pair_letters(&a).unwrap();
        let (x, _) = a.sample(4, Limits::for_bound(4)).unwrap();
        let (y, _) = s.sample(4, Limits::for_bound(4)).unwrap();
        assert!(sample_equal(&x, &y).unwrap().equal());
        assert_eq!(x.len(), 5);
    }

    #[test]
    fn homomorphism_erases_and_expands() {
        let g = Object::parse(Formalism::ContextFree, "alphabet: a b\nstart: S\nS -> a S b | eps\n").unwrap();
        let h: Homomorphism = [(Symbol::new("a"), Word::parse("cc")), (Symbol::new("b"), Word::empty())].into_iter().collect();
        let out = apply_homomorphism(&g, &h).unwrap();
        assert_eq!(out.alphabet().symbols(), &[Symbol::new("c")]);
        let set = out.enumerate(crate::budget::Budget::Length(6), Limits::for_bound(6)).unwrap();
        assert_eq!(set.strings(), vec!["", "cc", "cccc", "cccccc"]);
        let id = apply_homomorphism(&g, &Homomorphism::new()).unwrap();
        assert_eq!(id, g);
    }
}
