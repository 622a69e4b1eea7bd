use std::collections::BTreeMap;

use rustc_hash::FxHashSet;

use crate::automata::{CounterAutomaton, CounterMode, CounterTransition, Transducer};
use crate::error::{Error, Result};
use crate::grammar::fresh_name;
use crate::symbol::Symbol;
use crate::word::{Letter, PairLetter};

fn on_tape(l: Letter, first: bool) -> Letter {
    let s = l.as_sym().expect("plain letter");
    Letter::Pair(if first { PairLetter::new(Some(s), None) } else { PairLetter::new(None, Some(s)) }.expect("non-empty pair"))
}

/// Two-tape automaton for `(u, v)` from a blind automaton for `u#v^rev`.
/// It reads `u` on the first tape up to a guessed `#`-step into `p`, then
/// reads `v` on the second tape along the remaining run backwards, from a
/// final state down to `p`, with the same counter updates.
pub fn unfolded_oca_to_two_tape(a: &CounterAutomaton) -> Result<CounterAutomaton> {
    if a.mode() != CounterMode::Blind {
        return Err(Error::GuardedInput);
    }
    if a.transitions().iter().any(|t| t.label.is_some_and(|l| l.as_pair().is_some())) {
        return Err(Error::Invalid("input already reads pair letters".into()));
    }
    let mut used: FxHashSet<Symbol> = FxHashSet::default();
    let mut one = BTreeMap::new();
    for s in a.states() {
        one.insert(*s, fresh_name(&format!("{s}"), &mut used));
    }
    // Targets of `#`-steps, the states where the second phase must end.
    let mut meets: Vec<Symbol> = a.transitions().iter().filter(|t| t.label.is_some_and(|l| l.is_hash())).map(|t| t.to).collect();
    meets.sort();
    meets.dedup();
    let mut two = BTreeMap::new();
    for p in &meets {
        for q in a.states() {
            two.insert((*p, *q), fresh_name(&format!("{p}.{q}"), &mut used));
        }
    }
    let mut out = Vec::new();
    for t in a.transitions() {
        match t.label {
            Some(l) if l.is_hash() => {
                for f in a.finals() {
                    out.push(CounterTransition { from: one[&t.from], label: None, zero: false, delta: t.delta, to: two[&(t.to, *f)] });
                }
            }
            label => {
                out.push(CounterTransition { from: one[&t.from], label: label.map(|l| on_tape(l, true)), zero: false, delta: t.delta, to: one[&t.to] });
                for p in &meets {
                    out.push(CounterTransition { from: two[&(*p, t.to)], label: label.map(|l| on_tape(l, false)), zero: false, delta: t.delta, to: two[&(*p, t.from)] });
                }
            }
        }
    }
    let states: Vec<Symbol> = one.values().chain(two.values()).copied().collect();
    let initial = a.initial().iter().map(|s| one[s]).collect();
    let finals = meets.iter().map(|p| two[&(*p, *p)]).collect();
    CounterAutomaton::new(a.alphabet().clone(), states, initial, finals, out, CounterMode::Blind)
}

/// Blind automaton for `a^k # a^l` over the pairs `(a^k, a^l)` of a
/// transducer over one letter: the first phase follows the transducer and
/// counts second-tape letters, the second phase counts them down.
pub fn unary_transducer_to_unfolded_oca(t: &Transducer) -> Result<CounterAutomaton> {
    let mut letter: Option<Symbol> = None;
    for (_, (u, v), _) in t.transitions() {
        for s in u.0.iter().chain(&v.0) {
            if letter.is_some_and(|x| x != *s) {
                return Err(Error::NonUnaryLabel(format!("({u},{v})")));
            }
            letter = Some(*s);
        }
    }
    let a = letter.or_else(|| t.alphabet().symbols().first().copied());
    let mut states: Vec<Symbol> = t.states().to_vec();
    let mut used: FxHashSet<Symbol> = states.iter().copied().collect();
    let post = fresh_name("post", &mut used);
    states.push(post);
    let mut out = Vec::new();
    for (p, (u, v), q) in t.transitions() {
        let delta = v.len() as i64;
        if u.is_empty() {
            out.push(CounterTransition { from: *p, label: None, zero: false, delta, to: *q });
            continue;
        }
        let mut cur = *p;
        for i in 0..u.len() {
            let next = if i + 1 == u.len() {
                *q
            } else {
                let s = fresh_name(&format!("{p}_"), &mut used);
                states.push(s);
                s
            };
            out.push(CounterTransition { from: cur, label: a.map(Letter::Sym), zero: false, delta: if i == 0 { delta } else { 0 }, to: next });
            cur = next;
        }
    }
    for f in t.finals() {
        out.push(CounterTransition { from: *f, label: Some(Letter::hash_mark()), zero: false, delta: 0, to: post });
    }
    if let Some(a) = a {
        out.push(CounterTransition { from: post, label: Some(Letter::Sym(a)), zero: false, delta: -1, to: post });
    }
    CounterAutomaton::new(t.alphabet().clone(), states, t.initial().to_vec(), vec![post], out, CounterMode::Blind)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::oca_enumerate;
    use crate::budget::Budget;
    use crate::formalism::{Limits, Object};
    use crate::sample::sample_equal;

    const XN_HASH_XN: &str = "alphabet: x\nstate p initial\nstate q final\ntrans p x +1 p\ntrans p # q\ntrans q x -1 q\n";

    fn same_relation(a: impl Into<Object>, b: impl Into<Object>, bound: usize) {
        let (sa, _) = a.into().sample(bound, Limits::for_bound(bound)).unwrap();
        let (sb, _) = b.into().sample(bound, Limits::for_bound(bound)).unwrap();
        let d = sample_equal(&sa, &sb).unwrap();
        assert!(d.equal(), "{d}");
        assert!(!sa.is_empty());
    }

    #[test]
    fn balanced_to_two_tape() {
        let a = CounterAutomaton::parse(XN_HASH_XN).unwrap();
        let two = unfolded_oca_to_two_tape(&a).unwrap();
        same_relation(a, two, 6);
    }

    #[test]
    fn asymmetric_runs() {
        // x^n # y^m with 2n = m plus an ε-detour on the right.
        let a = CounterAutomaton::parse("alphabet: x y\nstate p initial\nstate q\nstate r final\ntrans p x +2 p\ntrans p # q\ntrans q y -1 q\ntrans q eps r\ntrans r y -1 r\n").unwrap();
        same_relation(a.clone(), unfolded_oca_to_two_tape(&a).unwrap(), 6);
    }

    #[test]
    fn tested_input_is_refused() {
        let a = CounterAutomaton::parse(&format!("mode: tested\n{XN_HASH_XN}")).unwrap();
        assert_eq!(unfolded_oca_to_two_tape(&a), Err(Error::GuardedInput));
    }

    fn unary(src: &str) -> Vec<String> {
        let t = Transducer::parse(src).unwrap();
        let a = unary_transducer_to_unfolded_oca(&t).unwrap();
        same_relation(t, a.clone(), 6);
        oca_enumerate(&a, Budget::Length(7), 4).unwrap().strings()
    }

    #[test]
    fn unary_transducers() {
        assert_eq!(unary("alphabet: a\nstate q initial final\ntrans q (a,aa) q\n"), vec!["#", "a#aa", "aa#aaaa"]);
        assert_eq!(unary("alphabet: a\nstate q initial final\ntrans q (a,a) q\n"), vec!["#", "a#a", "aa#aa", "aaa#aaa"]);
        assert_eq!(unary("alphabet: a\nstate p initial\nstate q final\ntrans p (a,a) p\ntrans p (.,a) q\n"), vec!["#a", "a#aa", "aa#aaa"]);
    }

    #[test]
    fn binary_labels_are_refused() {
        let t = Transducer::parse("alphabet: a b\nstate q initial final\ntrans q (a,b) q\n").unwrap();
        assert!(matches!(unary_transducer_to_unfolded_oca(&t), Err(Error::NonUnaryLabel(_))));
    }
}
