use std::collections::VecDeque;
use std::fmt;

use rustc_hash::FxHashSet;

use super::{label_str, read_label, read_states, States};
use crate::budget::{Budget, LetterTable, Measure};
use crate::derive::{derive, Expander, Item};
use crate::error::{Error, Result};
use crate::packed::Packed;
use crate::symbol::{Alphabet, Symbol};
use crate::text::{Document, Lexicon};
use crate::word::Letter;
use crate::wordset::WordSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Acceptance {
    EmptyStack,
    FinalState,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdaTransition {
    pub from: Symbol,
    pub label: Option<Letter>,
    /// Popped when present; the move is then only enabled on this top.
    pub top: Option<Symbol>,
    /// Pushed after the pop, first symbol ending on top.
    pub push: Vec<Symbol>,
    pub to: Symbol,
}

impl fmt::Display for PdaTransition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "trans {} {}", self.from, label_str(&self.label))?;
        if let Some(t) = self.top {
            write!(f, " top={t}")?;
        }
        if !self.push.is_empty() {
            let sep = if self.push.iter().all(|s| s.is_single_char()) { "" } else { " " };
            let names: Vec<&str> = self.push.iter().map(|s| s.as_str()).collect();
            if sep.is_empty() {
                write!(f, " push={}", names.concat())?;
            } else {
                for n in names {
                    write!(f, " push={n}")?;
                }
            }
        }
        write!(f, " {}", self.to)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushdownAutomaton {
    alphabet: Alphabet,
    stack: Vec<Symbol>,
    bottom: Option<Symbol>,
    states: States,
    transitions: Vec<PdaTransition>,
    acceptance: Acceptance,
}

/// Stack contents as indices into the stack alphabet, top last.
type Stack = Vec<u8>;

impl PushdownAutomaton {
    pub fn new(alphabet: Alphabet, stack: Vec<Symbol>, bottom: Option<Symbol>, states: Vec<Symbol>, initial: Vec<Symbol>, finals: Vec<Symbol>, transitions: Vec<PdaTransition>, acceptance: Acceptance) -> Result<PushdownAutomaton> {
        if stack.len() > u8::MAX as usize {
            return Err(Error::Capacity("more than 255 stack symbols".into()));
        }
        for t in &transitions {
            if !states.contains(&t.from) || !states.contains(&t.to) {
                return Err(Error::Invalid(format!("`{t}` uses an undeclared state")));
            }
            if let Some(s) = t.top.iter().chain(&t.push).find(|s| !stack.contains(s)) {
                return Err(Error::Invalid(format!("`{s}` is not a stack symbol")));
            }
        }
        if let Some(b) = bottom {
            if !stack.contains(&b) {
                return Err(Error::Invalid(format!("bottom `{b}` is not a stack symbol")));
            }
        }
        Ok(PushdownAutomaton { alphabet, stack, bottom, states: States { names: states, initial, finals }, transitions, acceptance })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn stack(&self) -> &[Symbol] {
        &self.stack
    }

    pub fn bottom(&self) -> Option<Symbol> {
        self.bottom
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

    pub fn acceptance(&self) -> Acceptance {
        self.acceptance
    }

    pub fn transitions(&self) -> &[PdaTransition] {
        &self.transitions
    }

    pub fn letters(&self) -> Vec<Letter> {
        let mut v: Vec<Letter> = self.transitions.iter().filter_map(|t| t.label).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn parse(src: &str) -> Result<PushdownAutomaton> {
        let doc = Document::parse(src, &["alphabet", "stack", "bottom", "acceptance"]);
        let alphabet = Alphabet::parse(doc.require("alphabet")?.0)?;
        let stack = doc.list("stack");
        let bottom = doc.get("bottom").map(|(b, _)| Symbol::new(b.trim()));
        let acceptance = match doc.get("acceptance") {
            None | Some(("empty-stack", _)) => Acceptance::EmptyStack,
            Some(("final-state", _)) => Acceptance::FinalState,
            Some((a, l)) => return Err(Error::parse(l, format!("unknown acceptance `{a}`"))),
        };
        let lex = Lexicon::new(stack.iter().map(|s| s.as_str()));
        let (states, trans) = read_states(&doc)?;
        let mut transitions = Vec::new();
        for (no, t) in trans {
            if t.len() < 3 {
                return Err(Error::parse(no, "expected `trans FROM LABEL [top=Z] [push=W] TO`"));
            }
            let mut top = None;
            let mut push = Vec::new();
            for tok in &t[2..t.len() - 1] {
                if let Some(z) = tok.strip_prefix("top=") {
                    top = Some(Symbol::new(z));
                } else if let Some(w) = tok.strip_prefix("push=") {
                    push.extend(lex.split(w, no)?.iter().map(|s| Symbol::new(s)));
                } else {
                    return Err(Error::parse(no, format!("unexpected `{tok}`")));
                }
            }
            transitions.push(PdaTransition { from: Symbol::new(&t[0]), label: read_label(&t[1], no, &alphabet)?, top, push, to: Symbol::new(&t[t.len() - 1]) });
        }
        PushdownAutomaton::new(alphabet, stack, bottom, states.names, states.initial, states.finals, transitions, acceptance)
    }

    fn initial_stack(&self) -> Stack {
        self.bottom.iter().map(|b| self.stack_id(*b)).collect()
    }

    fn stack_id(&self, s: Symbol) -> u8 {
        self.stack.iter().position(|x| *x == s).expect("declared stack symbol") as u8
    }

    /// Applies `t` to `stack`, or None when its top does not match.
    fn apply(&self, t: &PdaTransition, stack: &Stack) -> Option<Stack> {
        let mut s = stack.clone();
        if let Some(z) = t.top {
            if s.pop() != Some(self.stack_id(z)) {
                return None;
            }
        }
        s.extend(t.push.iter().rev().map(|x| self.stack_id(*x)));
        Some(s)
    }

    fn accepting(&self, q: Symbol, stack: &Stack) -> bool {
        match self.acceptance {
            Acceptance::EmptyStack => stack.is_empty(),
            Acceptance::FinalState => self.states.is_final(q),
        }
    }
}

impl fmt::Display for PushdownAutomaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "alphabet: {}", self.alphabet)?;
        let names: Vec<&str> = self.stack.iter().map(|s| s.as_str()).collect();
        writeln!(f, "stack: {}", names.join(" "))?;
        if let Some(b) = self.bottom {
            writeln!(f, "bottom: {b}")?;
        }
        let acc = if self.acceptance == Acceptance::EmptyStack { "empty-stack" } else { "final-state" };
        writeln!(f, "acceptance: {acc}")?;
        self.states.write(f)?;
        for t in &self.transitions {
            writeln!(f, "{t}")?;
        }
        Ok(())
    }
}

/// Breadth-first search over configurations with stack height at most
/// `bound`.
pub fn pda_run(p: &PushdownAutomaton, w: &[Letter], bound: usize) -> bool {
    let mut seen: FxHashSet<(usize, usize, Stack)> = FxHashSet::default();
    let mut queue = VecDeque::new();
    for s in &p.states.initial {
        let c = (0, p.states.index(*s), p.initial_stack());
        if seen.insert(c.clone()) {
            queue.push_back(c);
        }
    }
    while let Some((i, q, stack)) = queue.pop_front() {
        let name = p.states.names[q];
        if i == w.len() && p.accepting(name, &stack) {
            return true;
        }
        for t in p.transitions.iter().filter(|t| t.from == name) {
            let j = match t.label {
                None => i,
                Some(l) if w.get(i) == Some(&l) => i + 1,
                Some(_) => continue,
            };
            let Some(s2) = p.apply(t, &stack) else { continue };
            if s2.len() > bound {
                continue;
            }
            let c = (j, p.states.index(t.to), s2);
            if seen.insert(c.clone()) {
                queue.push_back(c);
            }
        }
    }
    false
}

struct PdaExpander<'a> {
    p: &'a PushdownAutomaton,
    pieces: Vec<Option<(Packed, Measure)>>,
    max_depth: usize,
}

impl Expander for PdaExpander<'_> {
    /// (state index, stack); `u32::MAX` is a virtual start.
    type Key = (u32, Stack);

    fn expand(&self, (q, stack): &(u32, Stack)) -> Option<Vec<Vec<Item<(u32, Stack)>>>> {
        let p = self.p;
        if *q == u32::MAX {
            return Some(p.states.initial.iter().map(|s| vec![Item::Key((p.states.index(*s) as u32, p.initial_stack()))]).collect());
        }
        if stack.len() > self.max_depth {
            return None;
        }
        let name = p.states.names[*q as usize];
        let mut out = Vec::new();
        if p.accepting(name, stack) {
            out.push(vec![]);
        }
        for (i, t) in p.transitions.iter().enumerate().filter(|(_, t)| t.from == name) {
            let Some(s2) = p.apply(t, stack) else { continue };
            let next = Item::Key((p.states.index(t.to) as u32, s2));
            match (t.label, self.pieces[i]) {
                (None, _) => out.push(vec![next]),
                (Some(_), Some((w, m))) => out.push(vec![Item::Piece(w, m), next]),
                (Some(_), None) => {}
            }
        }
        Some(out)
    }
}

/// Words admitted by `budget`; configurations with more than `max_depth`
/// stack symbols are cut off and make the result incomplete.
pub fn pda_enumerate(p: &PushdownAutomaton, budget: Budget, max_depth: usize) -> Result<WordSet> {
    let table = LetterTable::new(p.letters(), budget)?;
    let mut pieces = Vec::new();
    for t in &p.transitions {
        pieces.push(match t.label {
            Some(l) => table.encode(&[l])?,
            None => None,
        });
    }
    let d = derive(&PdaExpander { p, pieces, max_depth }, &table, (u32::MAX, Vec::new()))?;
    Ok(WordSet { table, words: d.words, complete: d.complete })
}

#[cfg(test)]
mod tests {
    use super::*;

    const ANBN: &str = "alphabet: a b\nstack: A Z\nbottom: Z\nacceptance: empty-stack\n\
        state p initial\nstate q\n\
        trans p a push=A p\ntrans p eps q\ntrans q b top=A q\ntrans q eps top=Z q\n";

    fn word(s: &str) -> Vec<Letter> {
        s.chars().map(|c| Letter::sym(&c.to_string())).collect()
    }

    #[test]
    fn counts_with_stack() {
        let p = PushdownAutomaton::parse(ANBN).unwrap();
        assert!(pda_run(&p, &word("aabb"), 8));
        assert!(pda_run(&p, &[], 8));
        assert!(!pda_run(&p, &word("aab"), 8));
        assert!(!pda_run(&p, &word("aaabbb"), 2));
        assert_eq!(PushdownAutomaton::parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn enumeration_agrees_with_runs() {
        let p = PushdownAutomaton::parse(ANBN).unwrap();
        let set = pda_enumerate(&p, Budget::Length(6), 8).unwrap();
        assert!(set.complete);
        assert_eq!(set.strings(), vec!["", "aaabbb", "aabb", "ab"]);
        let capped = pda_enumerate(&p, Budget::Length(6), 2).unwrap();
        assert!(!capped.complete);
    }

    #[test]
    fn multi_symbol_push_is_top_first() {
        let p = PushdownAutomaton::parse("alphabet: a\nstack: A B\nacceptance: empty-stack\nstate p initial\n\
            trans p a push=AB p\ntrans p eps top=A p\ntrans p eps top=B p\n").unwrap();
        assert_eq!(p.apply(&p.transitions[0], &vec![]), Some(vec![1, 0]));
        assert!(pda_run(&p, &word("aa"), 4));
    }
}
