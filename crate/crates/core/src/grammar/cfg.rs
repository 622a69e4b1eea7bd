use std::fmt;

use rustc_hash::{FxHashMap, FxHashSet};

use crate::budget::{Budget, LetterTable};
use crate::derive::{derive, Expander, Item};
use crate::error::{Error, Result};
use crate::symbol::{Alphabet, Symbol, HASH};
use crate::text::{parse_rhs, Document, Lexicon, RhsToken};
use crate::word::Letter;
use crate::wordset::WordSet;

/// A right-hand-side symbol.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum GSym {
    T(Letter),
    N(Symbol),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Production {
    pub lhs: Symbol,
    pub rhs: Vec<GSym>,
}

impl Production {
    pub fn new(lhs: impl Into<Symbol>, rhs: Vec<GSym>) -> Production {
        Production { lhs: lhs.into(), rhs }
    }

    pub fn nonterminals(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.rhs.iter().filter_map(|s| if let GSym::N(n) = s { Some(*n) } else { None })
    }
}

impl fmt::Display for Production {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ->", self.lhs)?;
        if self.rhs.is_empty() {
            return write!(f, " eps");
        }
        for s in &self.rhs {
            match s {
                GSym::T(l) => write!(f, " {l}")?,
                GSym::N(n) => write!(f, " {n}")?,
            }
        }
        Ok(())
    }
}

/// Named blocks of nonterminals (`left:`, `hash:`, `right:` headers).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Partition {
    pub left: Vec<Symbol>,
    pub hash: Vec<Symbol>,
    pub right: Vec<Symbol>,
}

impl Partition {
    pub(crate) fn from_doc(doc: &Document) -> Option<Partition> {
        if ["left", "hash", "right"].iter().all(|k| doc.get(k).is_none()) {
            return None;
        }
        Some(Partition { left: doc.list("left"), hash: doc.list("hash"), right: doc.list("right") })
    }

    pub(crate) fn write(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[Symbol]| v.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(" ");
        writeln!(f, "left: {}", join(&self.left))?;
        writeln!(f, "hash: {}", join(&self.hash))?;
        writeln!(f, "right: {}", join(&self.right))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContextFreeGrammar {
    alphabet: Alphabet,
    nonterminals: Vec<Symbol>,
    start: Symbol,
    productions: Vec<Production>,
    pub partition: Option<Partition>,
}

impl ContextFreeGrammar {
    /// Nonterminals are the start symbol plus every symbol used as one.
    pub fn new(alphabet: Alphabet, start: impl Into<Symbol>, productions: Vec<Production>) -> Result<ContextFreeGrammar> {
        let start = start.into();
        let mut nonterminals: Vec<Symbol> = productions.iter().flat_map(|p| p.nonterminals().chain([p.lhs])).chain([start]).collect();
        nonterminals.sort();
        nonterminals.dedup();
        let g = ContextFreeGrammar { alphabet, nonterminals, start, productions, partition: None };
        g.check()?;
        Ok(g)
    }

    fn check(&self) -> Result<()> {
        for n in &self.nonterminals {
            if self.alphabet.contains(*n) || n.is_hash() {
                return Err(Error::AlphabetClash(n.to_string()));
            }
        }
        for p in &self.productions {
            for s in &p.rhs {
                if let GSym::T(l) = s {
                    if !self.letter_ok(l) {
                        return Err(Error::shape(p, format!("letter `{l}` is not over the alphabet")));
                    }
                }
            }
        }
        Ok(())
    }

    fn letter_ok(&self, l: &Letter) -> bool {
        match l {
            Letter::Sym(s) => s.is_hash() || self.alphabet.contains(*s),
            Letter::Pair(p) => p.left().into_iter().chain(p.right()).all(|s| self.alphabet.contains(s)),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn start(&self) -> Symbol {
        self.start
    }

    pub fn nonterminals(&self) -> &[Symbol] {
        &self.nonterminals
    }

    pub fn is_nonterminal(&self, s: Symbol) -> bool {
        self.nonterminals.binary_search(&s).is_ok()
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    pub fn productions_of(&self, a: Symbol) -> impl Iterator<Item = &Production> {
        self.productions.iter().filter(move |p| p.lhs == a)
    }

    /// Terminal letters used in productions, sorted.
    pub fn terminals(&self) -> Vec<Letter> {
        let mut t: Vec<Letter> = self.productions.iter().flat_map(|p| p.rhs.iter()).filter_map(|s| if let GSym::T(l) = s { Some(*l) } else { None }).collect();
        t.sort();
        t.dedup();
        t
    }

    pub fn uses_pairs(&self) -> bool {
        self.terminals().iter().any(|l| l.as_pair().is_some())
    }

    pub fn uses_hash(&self) -> bool {
        self.terminals().iter().any(Letter::is_hash)
    }

    /// Nonterminals deriving ε.
    pub fn nullable(&self) -> FxHashSet<Symbol> {
        let mut set = FxHashSet::default();
        loop {
            let before = set.len();
            for p in &self.productions {
                if p.rhs.iter().all(|s| matches!(s, GSym::N(n) if set.contains(n))) {
                    set.insert(p.lhs);
                }
            }
            if set.len() == before {
                return set;
            }
        }
    }

    /// Nonterminals deriving at least one terminal word.
    pub fn generating(&self) -> FxHashSet<Symbol> {
        let mut set = FxHashSet::default();
        loop {
            let before = set.len();
            for p in &self.productions {
                if p.rhs.iter().all(|s| match s {
                    GSym::N(n) => set.contains(n),
                    GSym::T(_) => true,
                }) {
                    set.insert(p.lhs);
                }
            }
            if set.len() == before {
                return set;
            }
        }
    }

    /// Drops productions mentioning non-generating or unreachable symbols.
    pub fn trim(&self) -> ContextFreeGrammar {
        let gen = self.generating();
        let prods: Vec<Production> = self.productions.iter().filter(|p| gen.contains(&p.lhs) && p.nonterminals().all(|n| gen.contains(&n))).cloned().collect();
        let mut reach = FxHashSet::default();
        let mut stack = vec![self.start];
        reach.insert(self.start);
        while let Some(a) = stack.pop() {
            for p in prods.iter().filter(|p| p.lhs == a) {
                for n in p.nonterminals() {
                    if reach.insert(n) {
                        stack.push(n);
                    }
                }
            }
        }
        let prods = prods.into_iter().filter(|p| reach.contains(&p.lhs)).collect();
        let mut g = ContextFreeGrammar::new(self.alphabet.clone(), self.start, prods).expect("trimming keeps a valid grammar");
        g.partition = self.partition.clone().map(|p| {
            let keep = |v: Vec<Symbol>| v.into_iter().filter(|s| g.is_nonterminal(*s)).collect();
            Partition { left: keep(p.left), hash: keep(p.hash), right: keep(p.right) }
        });
        g
    }

    pub fn parse(src: &str) -> Result<ContextFreeGrammar> {
        let doc = Document::parse(src, &["alphabet", "start", "nonterminals", "left", "hash", "right"]);
        let alphabet = Alphabet::parse(doc.require("alphabet")?.0)?;
        let mut lhs_names = doc.list("nonterminals");
        let mut rules = Vec::new();
        for line in &doc.body {
            let (lhs, rhs) = line.text.split_once("->").ok_or_else(|| Error::parse(line.no, "expected `A -> rhs`"))?;
            let lhs = lhs.trim();
            if lhs.is_empty() || lhs.contains(char::is_whitespace) {
                return Err(Error::parse(line.no, format!("bad left-hand side `{lhs}`")));
            }
            lhs_names.push(Symbol::new(lhs));
            rules.push((line.no, Symbol::new(lhs), rhs.to_string()));
        }
        let start = doc.get("start").map(|(s, _)| Symbol::new(s)).or_else(|| rules.first().map(|r| r.1)).ok_or_else(|| Error::parse(0, "empty grammar"))?;
        lhs_names.push(start);
        let terms = Lexicon::new(alphabet.symbols().iter().map(|s| s.as_str()).chain([HASH]));
        let vars = Lexicon::new(lhs_names.iter().map(|s| s.as_str()));
        let in_alpha = |s: Symbol| alphabet.contains(s);
        let mut productions = Vec::new();
        for (no, lhs, rhs) in rules {
            for alt in rhs.split('|') {
                let toks = parse_rhs(alt, no, &terms, &vars, &Lexicon::default(), &in_alpha)?;
                let rhs = toks
                    .into_iter()
                    .map(|t| match t {
                        RhsToken::Term(l) => Ok(GSym::T(l)),
                        RhsToken::Var { name, push, linear } if push.is_empty() && !linear => Ok(GSym::N(name)),
                        RhsToken::Var { .. } => Err(Error::parse(no, "flags are not allowed in a context-free grammar")),
                    })
                    .collect::<Result<Vec<_>>>()?;
                productions.push(Production { lhs, rhs });
            }
        }
        let mut g = ContextFreeGrammar::new(alphabet, start, productions)?;
        g.partition = Partition::from_doc(&doc);
        Ok(g)
    }
}

impl fmt::Display for ContextFreeGrammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "alphabet: {}", self.alphabet)?;
        writeln!(f, "start: {}", self.start)?;
        if let Some(p) = &self.partition {
            p.write(f)?;
        }
        let mut order: Vec<Symbol> = vec![self.start];
        for p in &self.productions {
            if !order.contains(&p.lhs) {
                order.push(p.lhs);
            }
        }
        for a in order {
            let alts: Vec<String> = self.productions_of(a).map(|p| p.to_string().split_once("-> ").map(|x| x.1.to_string()).unwrap_or_default()).collect();
            if !alts.is_empty() {
                writeln!(f, "{a} -> {}", alts.join(" | "))?;
            }
        }
        Ok(())
    }
}

struct CfgExpander {
    rules: Vec<Vec<Vec<Item<usize>>>>,
}

impl Expander for CfgExpander {
    type Key = usize;
    fn expand(&self, k: &usize) -> Option<Vec<Vec<Item<usize>>>> {
        Some(self.rules[*k].clone())
    }
}

/// Splits a right-hand side into packed terminal runs and keys; `None` when a
/// run alone exceeds the budget.
pub(crate) fn pack_rhs<K>(table: &LetterTable, rhs: &[GSym], key: impl Fn(Symbol) -> K) -> Result<Option<Vec<Item<K>>>> {
    let mut items = Vec::new();
    let mut run: Vec<Letter> = Vec::new();
    let flush = |run: &mut Vec<Letter>, items: &mut Vec<Item<K>>| -> Result<bool> {
        if run.is_empty() {
            return Ok(true);
        }
        let packed = table.encode(run)?;
        run.clear();
        match packed {
            Some((w, m)) => {
                items.push(Item::Piece(w, m));
                Ok(true)
            }
            None => Ok(false),
        }
    };
    for s in rhs {
        match s {
            GSym::T(l) => run.push(*l),
            GSym::N(n) => {
                if !flush(&mut run, &mut items)? {
                    return Ok(None);
                }
                items.push(Item::Key(key(*n)));
            }
        }
    }
    if !flush(&mut run, &mut items)? {
        return Ok(None);
    }
    Ok(Some(items))
}

/// Words of the grammar admitted by `budget`.
pub fn enumerate(g: &ContextFreeGrammar, budget: Budget) -> Result<WordSet> {
    let table = LetterTable::new(g.terminals(), budget)?;
    let ids: FxHashMap<Symbol, usize> = g.nonterminals.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let mut rules = vec![Vec::new(); g.nonterminals.len()];
    for p in &g.productions {
        if let Some(items) = pack_rhs(&table, &p.rhs, |n| ids[&n])? {
            rules[ids[&p.lhs]].push(items);
        }
    }
    // The derivation engine treats key 0 as the start.
    let start = ids[&g.start];
    rules.swap(0, start);
    let remap = |k: usize| if k == 0 { start } else if k == start { 0 } else { k };
    for alts in rules.iter_mut() {
        for items in alts.iter_mut() {
            for it in items.iter_mut() {
                if let Item::Key(k) = it {
                    *k = remap(*k);
                }
            }
        }
    }
    let d = derive(&CfgExpander { rules }, &table, 0)?;
    Ok(WordSet { table, words: d.words, complete: d.complete })
}

/// Words of length at most `maxlen`.
pub fn cfg_enumerate(g: &ContextFreeGrammar, maxlen: usize) -> Result<WordSet> {
    enumerate(g, Budget::Length(maxlen))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wordset::Viewpoint;

    pub(crate) const REV: &str = "alphabet: a b\nstart: S\nS -> (a,.) S (.,a) | (b,.) S (.,b) | eps\n";

    #[test]
    fn parse_and_print_roundtrip() {
        let g = ContextFreeGrammar::parse(REV).unwrap();
        assert_eq!(g.productions().len(), 3);
        assert_eq!(ContextFreeGrammar::parse(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn rev_sample_matches_brute_force() {
        let g = ContextFreeGrammar::parse(REV).unwrap();
        let s = enumerate(&g, Budget::TwoTape(2)).unwrap().to_sample(Viewpoint::TwoTape).unwrap();
        let got: Vec<String> = s.pairs().map(|(u, v)| format!("{u},{v}")).collect();
        assert_eq!(got, vec![",", "a,a", "aa,aa", "ab,ba", "b,b", "ba,ab", "bb,bb"]);
    }

    #[test]
    fn no_terminal_base_is_empty() {
        let g = ContextFreeGrammar::parse("alphabet: a\nS -> a S\n").unwrap();
        assert!(cfg_enumerate(&g, 5).unwrap().is_empty());
    }

    #[test]
    fn sort_grammar_small() {
        let g = ContextFreeGrammar::parse("alphabet: 1 2\nS -> (1,1) S | (2,.) S (.,2) | eps\n").unwrap();
        let s = enumerate(&g, Budget::TwoTape(2)).unwrap().to_sample(Viewpoint::TwoTape).unwrap();
        for (u, v) in s.pairs() {
            let mut sorted = u.0.clone();
            sorted.sort();
            assert_eq!(v.0, sorted);
        }
        assert_eq!(s.len(), 7);
    }

    #[test]
    fn undeclared_nonterminal_is_rejected() {
        assert!(ContextFreeGrammar::parse("alphabet: a\nS -> a | T\n").is_err());
    }
}
