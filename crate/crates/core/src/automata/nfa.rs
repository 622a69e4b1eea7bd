use std::fmt;

use rustc_hash::FxHashSet;

use super::{label_str, read_label, read_states, States};
use crate::budget::{Budget, LetterTable};
use crate::derive::{derive, Expander, Item};
use crate::error::{Error, Result};
use crate::sample::WordFilter;
use crate::symbol::{Alphabet, Symbol};
use crate::text::Document;
use crate::word::{Letter, Word};
use crate::wordset::WordSet;

/// A nondeterministic finite automaton with ε-moves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa {
    alphabet: Alphabet,
    states: States,
    transitions: Vec<(Symbol, Option<Letter>, Symbol)>,
}

impl Nfa {
    pub fn new(alphabet: Alphabet, states: Vec<Symbol>, initial: Vec<Symbol>, finals: Vec<Symbol>, transitions: Vec<(Symbol, Option<Letter>, Symbol)>) -> Result<Nfa> {
        for (p, _, q) in &transitions {
            if !states.contains(p) || !states.contains(q) {
                return Err(Error::Invalid(format!("transition {p} -> {q} uses an undeclared state")));
            }
        }
        Ok(Nfa { alphabet, states: States { names: states, initial, finals }, transitions })
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

    pub fn transitions(&self) -> &[(Symbol, Option<Letter>, Symbol)] {
        &self.transitions
    }

    pub fn letters(&self) -> Vec<Letter> {
        let mut v: Vec<Letter> = self.transitions.iter().filter_map(|t| t.1).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn uses_pairs(&self) -> bool {
        self.letters().iter().any(|l| l.as_pair().is_some())
    }

    pub fn parse(src: &str) -> Result<Nfa> {
        let doc = Document::parse(src, &["alphabet"]);
        let alphabet = Alphabet::parse(doc.require("alphabet")?.0)?;
        let (states, trans) = read_states(&doc)?;
        let mut transitions = Vec::new();
        for (no, t) in trans {
            let [p, l, q] = &t[..] else {
                return Err(Error::parse(no, "expected `trans FROM LABEL TO`"));
            };
            transitions.push((Symbol::new(p), read_label(l, no, &alphabet)?, Symbol::new(q)));
        }
        Ok(Nfa { alphabet, states, transitions })
    }

    fn closure(&self, set: &mut FxHashSet<Symbol>) {
        let mut stack: Vec<Symbol> = set.iter().copied().collect();
        while let Some(p) = stack.pop() {
            for (_, _, q) in self.transitions.iter().filter(|(s, l, _)| *s == p && l.is_none()) {
                if set.insert(*q) {
                    stack.push(*q);
                }
            }
        }
    }
}

impl fmt::Display for Nfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "alphabet: {}", self.alphabet)?;
        self.states.write(f)?;
        for (p, l, q) in &self.transitions {
            writeln!(f, "trans {p} {} {q}", label_str(l))?;
        }
        Ok(())
    }
}

pub fn nfa_run(a: &Nfa, w: &[Letter]) -> bool {
    let mut cur: FxHashSet<Symbol> = a.states.initial.iter().copied().collect();
    a.closure(&mut cur);
    for l in w {
        let mut next: FxHashSet<Symbol> = a.transitions.iter().filter(|(p, x, _)| *x == Some(*l) && cur.contains(p)).map(|t| t.2).collect();
        a.closure(&mut next);
        if next.is_empty() {
            return false;
        }
        cur = next;
    }
    cur.iter().any(|s| a.states.is_final(*s))
}

impl WordFilter for Nfa {
    fn accepts(&self, w: &Word) -> bool {
        nfa_run(self, &w.0.iter().map(|s| Letter::Sym(*s)).collect::<Vec<_>>())
    }
}

struct NfaExpander {
    /// Per state (index + 1; 0 is a virtual start): right-hand sides.
    rules: Vec<Vec<Vec<Item<usize>>>>,
}

impl Expander for NfaExpander {
    type Key = usize;
    fn expand(&self, k: &usize) -> Option<Vec<Vec<Item<usize>>>> {
        Some(self.rules[*k].clone())
    }
}

pub fn nfa_enumerate(a: &Nfa, budget: Budget) -> Result<WordSet> {
    let table = LetterTable::new(a.letters(), budget)?;
    let n = a.states.names.len();
    let mut rules = vec![Vec::new(); n + 1];
    for s in &a.states.initial {
        rules[0].push(vec![Item::Key(a.states.index(*s) + 1)]);
    }
    for s in &a.states.finals {
        rules[a.states.index(*s) + 1].push(vec![]);
    }
    for (p, l, q) in &a.transitions {
        let mut items = Vec::new();
        if let Some(l) = l {
            let Some((w, m)) = table.encode(&[*l])? else { continue };
            items.push(Item::Piece(w, m));
        }
        items.push(Item::Key(a.states.index(*q) + 1));
        rules[a.states.index(*p) + 1].push(items);
    }
    let d = derive(&NfaExpander { rules }, &table, 0)?;
    Ok(WordSet { table, words: d.words, complete: d.complete })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rho_f(p: usize) -> Nfa {
        let mut src = String::from("alphabet: x\n");
        for i in 0..p {
            src += &format!("state q{i}{}\nstate r{i}{}\n", if i == 0 { " initial" } else { "" }, if i == 0 { " final" } else { "" });
        }
        for i in 0..p {
            src += &format!("trans q{i} x q{}\ntrans q{i} # r{i}\n", (i + 1) % p);
        }
        for j in 1..p {
            src += &format!("trans r{j} x r{}\n", j - 1);
        }
        Nfa::parse(&src).unwrap()
    }

    fn word(s: &str) -> Vec<Letter> {
        s.chars().map(|c| Letter::sym(&c.to_string())).collect()
    }

    #[test]
    fn mod_three() {
        let a = rho_f(3);
        assert!(nfa_run(&a, &word("xxxxx#xx")));
        assert!(!nfa_run(&a, &word("xxxxx#x")));
        assert!(!nfa_run(&a, &[]));
        assert_eq!(Nfa::parse(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn enumeration_matches_runs() {
        let a = rho_f(2);
        let set = nfa_enumerate(&a, Budget::Length(7)).unwrap();
        for w in set.letter_words() {
            assert!(nfa_run(&a, &w));
        }
        // x^n # x^(n mod 2) with n + 1 + (n mod 2) <= 7.
        assert_eq!(set.len(), 7);
    }

    #[test]
    fn epsilon_acceptance() {
        let a = Nfa::parse("alphabet: a\nstate p initial\nstate q final\ntrans p eps q\n").unwrap();
        assert!(nfa_run(&a, &[]));
    }
}
