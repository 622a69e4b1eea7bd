use std::fmt;

use rustc_hash::FxHashSet;

use super::{label_str, read_label, read_states, States};
use crate::budget::{Budget, LetterTable};
use crate::derive::{derive, Expander, Item};
use crate::error::{Error, Result};
use crate::packed::Packed;
use crate::budget::Measure;
use crate::symbol::{Alphabet, Symbol};
use crate::text::Document;
use crate::word::Letter;
use crate::wordset::WordSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CounterMode {
    /// Counter ranges over the integers and is never tested.
    Blind,
    /// Counter stays non-negative and transitions may require it to be zero.
    Tested,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterTransition {
    pub from: Symbol,
    pub label: Option<Letter>,
    /// Only enabled when the counter is zero.
    pub zero: bool,
    pub delta: i64,
    pub to: Symbol,
}

impl fmt::Display for CounterTransition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "trans {} {}", self.from, label_str(&self.label))?;
        if self.zero {
            write!(f, " =0")?;
        }
        if self.delta != 0 {
            write!(f, " {:+}", self.delta)?;
        }
        write!(f, " {}", self.to)
    }
}

/// A one-counter automaton accepting in a final state with counter zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterAutomaton {
    alphabet: Alphabet,
    states: States,
    transitions: Vec<CounterTransition>,
    mode: CounterMode,
}

impl CounterAutomaton {
    pub fn new(alphabet: Alphabet, states: Vec<Symbol>, initial: Vec<Symbol>, finals: Vec<Symbol>, transitions: Vec<CounterTransition>, mode: CounterMode) -> Result<CounterAutomaton> {
        for t in &transitions {
            if !states.contains(&t.from) || !states.contains(&t.to) {
                return Err(Error::Invalid(format!("`{t}` uses an undeclared state")));
            }
            if t.zero && mode == CounterMode::Blind {
                return Err(Error::GuardedInput);
            }
        }
        Ok(CounterAutomaton { alphabet, states: States { names: states, initial, finals }, transitions, mode })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn mode(&self) -> CounterMode {
        self.mode
    }

    pub fn states(&self) -> &[Symbol] {
        &self.states.names
    }

    pub fn initial(&self) -> &[Symbol] {
        &self.states.initial
    }

    pub fn finals(&self) -> &[Symbol] {
        &self.states.finals
    }

    pub fn transitions(&self) -> &[CounterTransition] {
        &self.transitions
    }

    pub fn letters(&self) -> Vec<Letter> {
        let mut v: Vec<Letter> = self.transitions.iter().filter_map(|t| t.label).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn uses_pairs(&self) -> bool {
        self.letters().iter().any(|l| l.as_pair().is_some())
    }

    fn max_delta(&self) -> i64 {
        self.transitions.iter().map(|t| t.delta.abs()).max().unwrap_or(0)
    }

    pub fn parse(src: &str) -> Result<CounterAutomaton> {
        let doc = Document::parse(src, &["alphabet", "mode"]);
        let alphabet = Alphabet::parse(doc.require("alphabet")?.0)?;
        let mode = match doc.get("mode") {
            None | Some(("blind", _)) => CounterMode::Blind,
            Some(("tested", _)) => CounterMode::Tested,
            Some((m, l)) => return Err(Error::parse(l, format!("unknown mode `{m}`"))),
        };
        let (states, trans) = read_states(&doc)?;
        let mut transitions = Vec::new();
        for (no, t) in trans {
            if t.len() < 3 {
                return Err(Error::parse(no, "expected `trans FROM LABEL [=0] [DELTA] TO`"));
            }
            let mut zero = false;
            let mut delta = 0;
            for tok in &t[2..t.len() - 1] {
                if tok == "=0" {
                    zero = true;
                } else {
                    delta = tok.parse::<i64>().map_err(|_| Error::parse(no, format!("bad counter update `{tok}`")))?;
                }
            }
            transitions.push(CounterTransition { from: Symbol::new(&t[0]), label: read_label(&t[1], no, &alphabet)?, zero, delta, to: Symbol::new(&t[t.len() - 1]) });
        }
        let s = states;
        CounterAutomaton::new(alphabet, s.names, s.initial, s.finals, transitions, mode).map_err(|e| match e {
            Error::GuardedInput => Error::parse(0, "zero tests need `mode: tested`"),
            e => e,
        })
    }
}

impl fmt::Display for CounterAutomaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "alphabet: {}", self.alphabet)?;
        writeln!(f, "mode: {}", if self.mode == CounterMode::Blind { "blind" } else { "tested" })?;
        self.states.write(f)?;
        for t in &self.transitions {
            writeln!(f, "{t}")?;
        }
        Ok(())
    }
}

fn step(a: &CounterAutomaton, t: &CounterTransition, c: i64) -> Option<i64> {
    if t.zero && c != 0 {
        return None;
    }
    let next = c + t.delta;
    (a.mode == CounterMode::Blind || next >= 0).then_some(next)
}

/// Acceptance with at most `step_bound` consecutive ε-moves.
pub fn oca_run(a: &CounterAutomaton, w: &[Letter], step_bound: usize) -> bool {
    let closure = |set: FxHashSet<(Symbol, i64)>| {
        let mut all = set.clone();
        let mut frontier: Vec<(Symbol, i64)> = set.into_iter().collect();
        for _ in 0..step_bound {
            let mut next = Vec::new();
            for &(p, c) in &frontier {
                for t in a.transitions.iter().filter(|t| t.from == p && t.label.is_none()) {
                    if let Some(c2) = step(a, t, c) {
                        if all.insert((t.to, c2)) {
                            next.push((t.to, c2));
                        }
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        all
    };
    let mut cur = closure(a.states.initial.iter().map(|s| (*s, 0)).collect());
    for l in w {
        let mut next = FxHashSet::default();
        for &(p, c) in &cur {
            for t in a.transitions.iter().filter(|t| t.from == p && t.label == Some(*l)) {
                if let Some(c2) = step(a, t, c) {
                    next.insert((t.to, c2));
                }
            }
        }
        cur = closure(next);
        if cur.is_empty() {
            return false;
        }
    }
    cur.iter().any(|&(s, c)| c == 0 && a.states.is_final(s))
}

struct OcaExpander<'a> {
    a: &'a CounterAutomaton,
    pieces: Vec<Option<(Packed, Measure)>>,
    cap: i64,
}

impl Expander for OcaExpander<'_> {
    /// (state index, counter); the state `u32::MAX` is a virtual start.
    type Key = (u32, i64);

    fn expand(&self, &(q, c): &(u32, i64)) -> Option<Vec<Vec<Item<(u32, i64)>>>> {
        if c.abs() > self.cap {
            return None;
        }
        let a = self.a;
        if q == u32::MAX {
            return Some(a.states.initial.iter().map(|s| vec![Item::Key((a.states.index(*s) as u32, 0))]).collect());
        }
        let name = a.states.names[q as usize];
        let mut out = Vec::new();
        if c == 0 && a.states.is_final(name) {
            out.push(vec![]);
        }
        for (i, t) in a.transitions.iter().enumerate().filter(|(_, t)| t.from == name) {
            let Some(c2) = step(a, t, c) else { continue };
            let next = Item::Key((a.states.index(t.to) as u32, c2));
            match (t.label, self.pieces[i]) {
                (None, _) => out.push(vec![next]),
                (Some(_), Some((w, m))) => out.push(vec![Item::Piece(w, m), next]),
                (Some(_), None) => {}
            }
        }
        Some(out)
    }
}

/// Words admitted by `budget`. Counter values beyond
/// `(max_len + step_bound) * max|delta|` are cut off and make the result
/// incomplete.
pub fn oca_enumerate(a: &CounterAutomaton, budget: Budget, step_bound: usize) -> Result<WordSet> {
    let table = LetterTable::new(a.letters(), budget)?;
    let mut pieces = Vec::new();
    for t in &a.transitions {
        pieces.push(match t.label {
            Some(l) => table.encode(&[l])?,
            None => None,
        });
    }
    let cap = (budget.max_len() + step_bound) as i64 * a.max_delta();
    let d = derive(&OcaExpander { a, pieces, cap }, &table, (u32::MAX, 0))?;
    Ok(WordSet { table, words: d.words, complete: d.complete })
}

/// Reverses every transition and negates its update; initial and final
/// states swap roles.
pub fn oca_reverse(a: &CounterAutomaton) -> Result<CounterAutomaton> {
    if a.mode != CounterMode::Blind || a.transitions.iter().any(|t| t.zero) {
        return Err(Error::GuardedInput);
    }
    let transitions = a
        .transitions
        .iter()
        .map(|t| CounterTransition { from: t.to, label: t.label, zero: false, delta: -t.delta, to: t.from })
        .collect();
    CounterAutomaton::new(a.alphabet.clone(), a.states.names.clone(), a.states.finals.clone(), a.states.initial.clone(), transitions, CounterMode::Blind)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const XN_HASH_XN: &str = "alphabet: x\nmode: blind\nstate p initial\nstate q final\n\
        trans p x +1 p\ntrans p # q\ntrans q x -1 q\n";

    fn word(s: &str) -> Vec<Letter> {
        s.chars().map(|c| Letter::sym(&c.to_string())).collect()
    }

    #[test]
    fn balanced_hash() {
        let a = CounterAutomaton::parse(XN_HASH_XN).unwrap();
        assert!(oca_run(&a, &word("xx#xx"), 4));
        assert!(!oca_run(&a, &word("x#xx"), 4));
        let set = oca_enumerate(&a, Budget::Length(5), 0).unwrap();
        assert!(set.complete);
        assert_eq!(set.strings(), vec!["#", "x#x", "xx#xx"]);
        assert_eq!(CounterAutomaton::parse(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn reversal_reverses_language() {
        let a = CounterAutomaton::parse("alphabet: x y\nstate p initial\nstate q final\ntrans p x +1 p\ntrans p # q\ntrans q y -2 q\ntrans q eps +1 q\n").unwrap();
        let r = oca_reverse(&a).unwrap();
        let fwd = oca_enumerate(&a, Budget::Length(6), 6).unwrap();
        let back = oca_enumerate(&r, Budget::Length(6), 6).unwrap();
        let mut rev: Vec<Vec<Letter>> = fwd.letter_words().into_iter().map(|mut w| {
            w.reverse();
            w
        }).collect();
        rev.sort();
        let mut got = back.letter_words();
        got.sort();
        assert_eq!(rev, got);
        assert_eq!(oca_reverse(&r).unwrap(), a);
    }

    #[test]
    fn guards_need_tested_mode() {
        let src = "alphabet: x\nstate p initial final\ntrans p x =0 p\n";
        assert!(CounterAutomaton::parse(src).is_err());
        let a = CounterAutomaton::parse(&format!("mode: tested\n{src}")).unwrap();
        assert_eq!(oca_reverse(&a), Err(Error::GuardedInput));
    }
}
