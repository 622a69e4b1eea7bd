use std::fmt;

use rustc_hash::FxHashSet;

use super::{read_states, States};
use crate::automata::{nfa_enumerate, Nfa};
use crate::error::{Error, Result};
use crate::grammar::fresh_name;
use crate::sample::RelationSample;
use crate::symbol::{Alphabet, Symbol, EPS};
use crate::text::{Document, Lexicon};
use crate::word::{write_symbols, Letter, Word};
use crate::wordset::Viewpoint;

/// A finite-state transducer whose transitions read a pair of words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transducer {
    alphabet: Alphabet,
    states: States,
    transitions: Vec<(Symbol, (Word, Word), Symbol)>,
}

impl Transducer {
    pub fn new(alphabet: Alphabet, states: Vec<Symbol>, initial: Vec<Symbol>, finals: Vec<Symbol>, transitions: Vec<(Symbol, (Word, Word), Symbol)>) -> Result<Transducer> {
        for (p, (u, v), q) in &transitions {
            if !states.contains(p) || !states.contains(q) {
                return Err(Error::Invalid(format!("transition {p} -> {q} uses an undeclared state")));
            }
            if let Some(s) = u.0.iter().chain(&v.0).find(|s| !alphabet.contains(**s)) {
                return Err(Error::InvalidSymbol(s.to_string()));
            }
        }
        Ok(Transducer { alphabet, states: States { names: states, initial, finals }, transitions })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
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

    pub fn transitions(&self) -> &[(Symbol, (Word, Word), Symbol)] {
        &self.transitions
    }

    pub fn parse(src: &str) -> Result<Transducer> {
        let doc = Document::parse(src, &["alphabet"]);
        let alphabet = Alphabet::parse(doc.require("alphabet")?.0)?;
        let lex = Lexicon::new(alphabet.symbols().iter().map(|s| s.as_str()));
        let (states, trans) = read_states(&doc)?;
        let side = |s: &str, no: usize| -> Result<Word> {
            let s = s.trim();
            if s == "." || s == EPS {
                return Ok(Word::empty());
            }
            Ok(Word(lex.split(s, no)?.iter().map(|t| Symbol::new(t)).collect()))
        };
        let mut transitions = Vec::new();
        for (no, t) in trans {
            let [p, l, q] = &t[..] else {
                return Err(Error::parse(no, "expected `trans FROM (U,V) TO`"));
            };
            let label = if l == EPS {
                (Word::empty(), Word::empty())
            } else {
                let inner = l
                    .strip_prefix('(')
                    .and_then(|t| t.strip_suffix(')'))
                    .and_then(|t| t.split_once(','))
                    .ok_or_else(|| Error::parse(no, format!("bad label `{l}`")))?;
                (side(inner.0, no)?, side(inner.1, no)?)
            };
            transitions.push((Symbol::new(p), label, Symbol::new(q)));
        }
        Transducer::new(alphabet, states.names, states.initial, states.finals, transitions)
    }

    /// The same machine reading aligned pair letters, one per step.
    pub fn to_nfa(&self) -> Result<Nfa> {
        let mut names = self.states.names.clone();
        let mut used: FxHashSet<Symbol> = names.iter().copied().collect();
        let mut out = Vec::new();
        for (p, (u, v), q) in &self.transitions {
            let n = u.len().max(v.len());
            if n == 0 {
                out.push((*p, None, *q));
                continue;
            }
            let mut cur = *p;
            for i in 0..n {
                let l = Letter::pair(u.0.get(i).copied(), v.0.get(i).copied())?;
                let next = if i + 1 == n {
                    *q
                } else {
                    let s = fresh_name(&format!("{p}_"), &mut used);
                    names.push(s);
                    s
                };
                out.push((cur, Some(l), next));
                cur = next;
            }
        }
        Nfa::new(self.alphabet.clone(), names, self.states.initial.clone(), self.states.finals.clone(), out)
    }
}

fn word_str(w: &Word) -> String {
    if w.is_empty() {
        return ".".into();
    }
    let mut s = String::new();
    write_symbols(&mut s, w.0.iter().map(|s| s.as_str())).expect("string write");
    s
}

impl fmt::Display for Transducer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "alphabet: {}", self.alphabet)?;
        self.states.write(f)?;
        for (p, (u, v), q) in &self.transitions {
            writeln!(f, "trans {p} ({},{}) {q}", word_str(u), word_str(v))?;
        }
        Ok(())
    }
}

/// Every pair read along an accepting path with both components within
/// `bound`.
pub fn transducer_enumerate(t: &Transducer, bound: usize) -> Result<RelationSample> {
    let set = nfa_enumerate(&t.to_nfa()?, Viewpoint::TwoTape.budget(bound))?;
    set.to_sample(Viewpoint::TwoTape)?.reencode(&t.alphabet)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubling() {
        let t = Transducer::parse("alphabet: x\nstate q initial final\ntrans q (x,xx) q\n").unwrap();
        let s = transducer_enumerate(&t, 7).unwrap();
        let want: Vec<(Word, Word)> = (0..=3).map(|n| (Word::parse(&"x".repeat(n)), Word::parse(&"x".repeat(2 * n)))).collect();
        let mut got: Vec<_> = s.pairs().collect();
        got.sort();
        assert_eq!(got, want);
        assert_eq!(Transducer::parse(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn equality() {
        let t = Transducer::parse("alphabet: a b\nstate q initial final\ntrans q (a,a) q\ntrans q (b,b) q\n").unwrap();
        let s = transducer_enumerate(&t, 3).unwrap();
        assert_eq!(s.len(), 15);
        assert!(s.pairs().all(|(u, v)| u == v));
    }

    #[test]
    fn empty_labels_and_long_sides() {
        let t = Transducer::parse("alphabet: a\nstate p initial\nstate q final\ntrans p eps q\ntrans q (.,aa) q\n").unwrap();
        let s = transducer_enumerate(&t, 4).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.contains(&Word::empty(), &Word::parse("aaaa")));
    }
}
