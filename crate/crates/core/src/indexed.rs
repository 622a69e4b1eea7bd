//! Indexed and linear indexed grammars.
//!
//! Nonterminal occurrences carry a stack of flags. A production may consume
//! the top flag of its left-hand side; its right-hand-side nonterminals
//! receive the remaining stack (all of them, or only the designated linear
//! child) plus any flags they push. When the grammar declares the flag `$`,
//! every stack that is not inherited starts as `[$]`.

use std::fmt;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::Serialize;

use crate::budget::{Budget, LetterTable, Measure};
use crate::derive::{derive, weight, Expander, Item};
use crate::error::{Error, Result};
use crate::grammar::{ContextFreeGrammar, GSym, Partition};
use crate::packed::Packed;
use crate::symbol::{Alphabet, Symbol, HASH};
use crate::text::{parse_rhs, Document, Lexicon, RhsToken};
use crate::word::Letter;
use crate::wordset::WordSet;

/// Reserved bottom-of-stack flag.
pub const BOTTOM: &str = "$";

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum IItem {
    T(Letter),
    /// A nonterminal with the flags it pushes, last pushed on top.
    N { name: Symbol, push: Vec<Symbol> },
}

impl IItem {
    pub fn var(name: impl Into<Symbol>) -> IItem {
        IItem::N { name: name.into(), push: Vec::new() }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IndexedProduction {
    pub lhs: Symbol,
    pub consume: Option<Symbol>,
    pub rhs: Vec<IItem>,
    /// Index into `rhs` of the only item inheriting the stack.
    pub linear: Option<usize>,
}

impl IndexedProduction {
    /// Builds a production, designating a lone right-hand nonterminal as the
    /// linear child.
    pub fn new(lhs: impl Into<Symbol>, consume: Option<Symbol>, rhs: Vec<IItem>, linear: Option<usize>) -> IndexedProduction {
        let vars: Vec<usize> = rhs.iter().enumerate().filter(|(_, it)| matches!(it, IItem::N { .. })).map(|(i, _)| i).collect();
        let linear = linear.or(if vars.len() == 1 { Some(vars[0]) } else { None });
        IndexedProduction { lhs: lhs.into(), consume, rhs, linear }
    }

    pub fn var_count(&self) -> usize {
        self.rhs.iter().filter(|it| matches!(it, IItem::N { .. })).count()
    }

    fn uses_flags(&self) -> bool {
        self.consume.is_some() || self.rhs.iter().any(|it| matches!(it, IItem::N { push, .. } if !push.is_empty()))
    }
}

impl fmt::Display for IndexedProduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.lhs)?;
        if let Some(c) = self.consume {
            write!(f, "[{c}]")?;
        }
        write!(f, " ->")?;
        if self.rhs.is_empty() {
            return write!(f, " eps");
        }
        let mark = self.var_count() > 1;
        for (i, it) in self.rhs.iter().enumerate() {
            match it {
                IItem::T(l) => write!(f, " {l}")?,
                IItem::N { name, push } => {
                    let hat = if mark && self.linear == Some(i) { "^" } else { "" };
                    write!(f, " {hat}{name}")?;
                    for p in push {
                        write!(f, "+{p}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrammarKind {
    LinearIndexed,
    Indexed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KindReport {
    pub kind: GrammarKind,
    /// No production consumes or pushes a flag.
    pub flag_free: bool,
    /// Productions with several nonterminals and no designated inheritor.
    pub unmarked: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexedGrammar {
    alphabet: Alphabet,
    nonterminals: Vec<Symbol>,
    flags: Vec<Symbol>,
    start: Symbol,
    productions: Vec<IndexedProduction>,
    pub partition: Option<Partition>,
}

impl IndexedGrammar {
    pub fn new(alphabet: Alphabet, flags: Vec<Symbol>, start: impl Into<Symbol>, productions: Vec<IndexedProduction>) -> Result<IndexedGrammar> {
        let start = start.into();
        let mut nonterminals: Vec<Symbol> = vec![start];
        for p in &productions {
            nonterminals.push(p.lhs);
            for it in &p.rhs {
                if let IItem::N { name, .. } = it {
                    nonterminals.push(*name);
                }
            }
        }
        nonterminals.sort();
        nonterminals.dedup();
        let mut flags = flags;
        flags.sort();
        flags.dedup();
        let g = IndexedGrammar { alphabet, nonterminals, flags, start, productions, partition: None };
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
            let flag_ok = |f: &Symbol| self.flags.contains(f);
            if p.consume.as_ref().is_some_and(|f| !flag_ok(f)) {
                return Err(Error::shape(p, "consumes an undeclared flag"));
            }
            for it in &p.rhs {
                match it {
                    IItem::N { push, .. } if !push.iter().all(flag_ok) => return Err(Error::shape(p, "pushes an undeclared flag")),
                    IItem::T(Letter::Sym(s)) if !s.is_hash() && !self.alphabet.contains(*s) => {
                        return Err(Error::shape(p, format!("`{s}` is not in the alphabet")));
                    }
                    _ => {}
                }
            }
            if let Some(i) = p.linear {
                if !matches!(p.rhs.get(i), Some(IItem::N { .. })) {
                    return Err(Error::shape(p, "linear child is not a nonterminal"));
                }
            }
        }
        Ok(())
    }

    /// Embeds a context-free grammar with no flags.
    pub fn from_cfg(g: &ContextFreeGrammar) -> IndexedGrammar {
        let prods = g
            .productions()
            .iter()
            .map(|p| {
                let rhs = p.rhs.iter().map(|s| match s {
                    GSym::T(l) => IItem::T(*l),
                    GSym::N(n) => IItem::var(*n),
                });
                IndexedProduction::new(p.lhs, None, rhs.collect(), None)
            })
            .collect();
        let mut ig = IndexedGrammar::new(g.alphabet().clone(), Vec::new(), g.start(), prods).expect("a context-free grammar embeds");
        ig.partition = g.partition.clone();
        ig
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn flags(&self) -> &[Symbol] {
        &self.flags
    }

    pub fn start(&self) -> Symbol {
        self.start
    }

    pub fn nonterminals(&self) -> &[Symbol] {
        &self.nonterminals
    }

    pub fn productions(&self) -> &[IndexedProduction] {
        &self.productions
    }

    pub fn has_bottom(&self) -> bool {
        self.flags.iter().any(|f| f.as_str() == BOTTOM)
    }

    pub fn terminals(&self) -> Vec<Letter> {
        let mut t: Vec<Letter> = self.productions.iter().flat_map(|p| p.rhs.iter()).filter_map(|it| if let IItem::T(l) = it { Some(*l) } else { None }).collect();
        t.sort();
        t.dedup();
        t
    }

    pub fn uses_pairs(&self) -> bool {
        self.terminals().iter().any(|l| l.as_pair().is_some())
    }

    pub fn parse(src: &str) -> Result<IndexedGrammar> {
        let doc = Document::parse(src, &["alphabet", "start", "flags", "nonterminals", "left", "hash", "right"]);
        let alphabet = Alphabet::parse(doc.require("alphabet")?.0)?;
        let flags = doc.list("flags");
        let mut names = doc.list("nonterminals");
        let mut rules = Vec::new();
        for line in &doc.body {
            let (lhs, rhs) = line.text.split_once("->").ok_or_else(|| Error::parse(line.no, "expected `A -> rhs`"))?;
            let lhs = lhs.trim();
            let (name, consume) = match lhs.split_once('[') {
                Some((n, rest)) => {
                    let f = rest.strip_suffix(']').ok_or_else(|| Error::parse(line.no, format!("bad left-hand side `{lhs}`")))?;
                    (n.trim(), Some(Symbol::new(f.trim())))
                }
                None => (lhs, None),
            };
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(Error::parse(line.no, format!("bad left-hand side `{lhs}`")));
            }
            names.push(Symbol::new(name));
            rules.push((line.no, Symbol::new(name), consume, rhs.to_string()));
        }
        let start = doc.get("start").map(|(s, _)| Symbol::new(s)).or_else(|| rules.first().map(|r| r.1)).ok_or_else(|| Error::parse(0, "empty grammar"))?;
        names.push(start);
        let terms = Lexicon::new(alphabet.symbols().iter().map(|s| s.as_str()).chain([HASH]));
        let vars = Lexicon::new(names.iter().map(|s| s.as_str()));
        let flag_lex = Lexicon::new(flags.iter().map(|s| s.as_str()));
        let in_alpha = |s: Symbol| alphabet.contains(s);
        let mut productions = Vec::new();
        for (no, lhs, consume, rhs) in rules {
            for alt in rhs.split('|') {
                let toks = parse_rhs(alt, no, &terms, &vars, &flag_lex, &in_alpha)?;
                let mut linear = None;
                let items = toks
                    .into_iter()
                    .enumerate()
                    .map(|(i, t)| match t {
                        RhsToken::Term(l) => IItem::T(l),
                        RhsToken::Var { name, push, linear: lin } => {
                            if lin {
                                linear = Some(i);
                            }
                            IItem::N { name, push }
                        }
                    })
                    .collect();
                productions.push(IndexedProduction::new(lhs, consume, items, linear));
            }
        }
        let mut g = IndexedGrammar::new(alphabet, flags, start, productions).map_err(|e| match e {
            Error::ShapeViolation { production, reason } => Error::parse(0, format!("{production}: {reason}")),
            e => e,
        })?;
        g.partition = Partition::from_doc(&doc);
        Ok(g)
    }
}

impl fmt::Display for IndexedGrammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "alphabet: {}", self.alphabet)?;
        if !self.flags.is_empty() {
            let flags: Vec<&str> = self.flags.iter().map(|s| s.as_str()).collect();
            writeln!(f, "flags: {}", flags.join(" "))?;
        }
        writeln!(f, "start: {}", self.start)?;
        if let Some(p) = &self.partition {
            p.write(f)?;
        }
        for p in &self.productions {
            writeln!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Classifies a grammar as linear indexed when every production with
/// several nonterminals designates one stack inheritor.
pub fn ig_validate(g: &IndexedGrammar) -> KindReport {
    let unmarked: Vec<String> = g.productions.iter().filter(|p| p.var_count() > 1 && p.linear.is_none()).map(|p| p.to_string()).collect();
    KindReport {
        kind: if unmarked.is_empty() { GrammarKind::LinearIndexed } else { GrammarKind::Indexed },
        flag_free: !g.productions.iter().any(IndexedProduction::uses_flags),
        unmarked,
    }
}

/// Block of a nonterminal in a partitioned indexed grammar.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Block {
    Left,
    Hash,
    Right,
}

/// Production shapes allowed in a partitioned indexed grammar.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Row {
    /// `A_# -> α_L # γ_R`
    HashEnd = 1,
    /// `A_# -> α_L B_# γ_R`
    HashStep = 2,
    /// `A_L -> α_L`
    Left = 3,
    /// `A_R -> α_R`
    Right = 4,
    /// Pushes onto a single nonterminal of the same block without consuming.
    Push = 5,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionedIndexedGrammar {
    grammar: IndexedGrammar,
    rows: Vec<Row>,
}

impl PartitionedIndexedGrammar {
    pub fn grammar(&self) -> &IndexedGrammar {
        &self.grammar
    }

    /// The row of each production, in production order.
    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn block(&self, s: Symbol) -> Option<Block> {
        block_of(self.grammar.partition.as_ref()?, s)
    }
}

fn block_of(p: &Partition, s: Symbol) -> Option<Block> {
    if p.left.contains(&s) {
        Some(Block::Left)
    } else if p.hash.contains(&s) {
        Some(Block::Hash)
    } else if p.right.contains(&s) {
        Some(Block::Right)
    } else {
        None
    }
}

/// Checks each production against the partitioned shapes and names its row.
pub fn ig_validate_partitioned(g: &IndexedGrammar) -> Result<PartitionedIndexedGrammar> {
    let part = g.partition.as_ref().ok_or_else(|| Error::Invalid("grammar has no `left:`/`hash:`/`right:` partition".into()))?;
    if block_of(part, g.start) != Some(Block::Hash) {
        return Err(Error::shape(g.start, "start symbol must be in the hash block"));
    }
    let mut rows = Vec::new();
    for p in &g.productions {
        let lhs = block_of(part, p.lhs).ok_or_else(|| Error::shape(p, format!("`{}` is in no block", p.lhs)))?;
        let blocks: Vec<Option<Block>> = p
            .rhs
            .iter()
            .map(|it| match it {
                IItem::T(l) if l.is_hash() => Some(Block::Hash),
                IItem::T(Letter::Sym(_)) => None,
                IItem::T(Letter::Pair(_)) => Some(Block::Hash),
                IItem::N { name, .. } => block_of(part, *name).or(Some(Block::Hash)),
            })
            .collect();
        for (it, b) in p.rhs.iter().zip(&blocks) {
            if let IItem::N { name, .. } = it {
                if block_of(part, *name).is_none() {
                    return Err(Error::shape(p, format!("`{name}` is in no block")));
                }
            }
            if let (IItem::T(Letter::Pair(_)), Some(_)) = (it, b) {
                return Err(Error::shape(p, "pair letters cannot occur in an unfolded grammar"));
            }
        }
        let push_row = p.consume.is_none()
            && p.var_count() == 1
            && p.rhs.iter().any(|it| matches!(it, IItem::N { name, push } if !push.is_empty() && block_of(part, *name) == Some(lhs)));
        let row = match lhs {
            Block::Left | Block::Right => {
                if let Some(bad) = blocks.iter().flatten().find(|b| **b != lhs) {
                    return Err(Error::shape(p, format!("a {lhs:?} nonterminal derives a {bad:?} symbol")));
                }
                if push_row {
                    Row::Push
                } else if lhs == Block::Left {
                    Row::Left
                } else {
                    Row::Right
                }
            }
            Block::Hash => {
                let centers: Vec<usize> = blocks.iter().enumerate().filter(|(_, b)| **b == Some(Block::Hash)).map(|(i, _)| i).collect();
                let [c] = centers[..] else {
                    return Err(Error::shape(p, "a hash-block production needs exactly one `#` or hash-block nonterminal"));
                };
                if blocks[..c].iter().flatten().any(|b| *b != Block::Left) || blocks[c + 1..].iter().flatten().any(|b| *b != Block::Right) {
                    return Err(Error::shape(p, "left-block symbols must precede the centre and right-block symbols follow it"));
                }
                if push_row && matches!(p.rhs[c], IItem::N { .. }) {
                    Row::Push
                } else if matches!(p.rhs[c], IItem::T(_)) {
                    Row::HashEnd
                } else {
                    Row::HashStep
                }
            }
        };
        rows.push(row);
    }
    Ok(PartitionedIndexedGrammar { grammar: g.clone(), rows })
}

/// Reverses every right-hand side.
pub fn ig_reverse(g: &IndexedGrammar) -> IndexedGrammar {
    let prods = g
        .productions
        .iter()
        .map(|p| {
            let n = p.rhs.len();
            IndexedProduction { lhs: p.lhs, consume: p.consume, rhs: p.rhs.iter().rev().cloned().collect(), linear: p.linear.map(|i| n - 1 - i) }
        })
        .collect();
    let mut out = IndexedGrammar::new(g.alphabet.clone(), g.flags.clone(), g.start, prods).expect("reversal keeps validity");
    out.partition = g.partition.clone();
    out
}

#[derive(Clone)]
enum PItem {
    Piece(Packed, Measure),
    Var { nt: u32, push: Vec<u8>, inherit: bool },
}

struct PProd {
    consume: Option<u8>,
    items: Vec<PItem>,
}

struct IgExpander {
    prods: Vec<Vec<PProd>>,
    fresh: Vec<u8>,
    max_depth: usize,
    /// Yield floor of a key: `base[A] + sum of per_flag[A][f]` over its stack.
    base: Vec<u32>,
    per_flag: Vec<Vec<u32>>,
}

impl IgExpander {
    /// `base[A]` is the least yield of `A` with flags ignored. `per_flag` is
    /// then the largest solution of the production constraints, found by
    /// descending iteration from `cap`. A production that consumes the bottom
    /// flag sees an empty remainder when the bottom flag is never pushed.
    fn compute_floors(&mut self, flags: usize, cap: u32, bottom: Option<u8>) {
        let n = self.prods.len();
        let var_weight = |items: &[PItem], f: &dyn Fn(usize, &[u8], bool) -> u64| -> u64 {
            items
                .iter()
                .map(|it| match it {
                    PItem::Piece(_, m) => weight(*m) as u64,
                    PItem::Var { nt, push, inherit } => f(*nt as usize, push, *inherit),
                })
                .sum()
        };
        let mut base = vec![u64::MAX; n];
        let mut changed = true;
        while changed {
            changed = false;
            for a in 0..n {
                for p in &self.prods[a] {
                    if p.items.iter().any(|it| matches!(it, PItem::Var { nt, .. } if base[*nt as usize] == u64::MAX)) {
                        continue;
                    }
                    let w = var_weight(&p.items, &|b, _, _| base[b]);
                    if w < base[a] {
                        base[a] = w;
                        changed = true;
                    }
                }
            }
        }
        let base: Vec<u32> = base.into_iter().map(|b| b.min(cap as u64) as u32).collect();
        let bottom_pushed = self.prods.iter().flatten().flat_map(|p| &p.items).any(|it| matches!(it, PItem::Var { push, .. } if bottom.is_some_and(|b| push.contains(&b))));
        let mut per_flag = vec![vec![cap; flags]; n];
        changed = true;
        while changed {
            changed = false;
            for a in 0..n {
                for p in &self.prods[a] {
                    let empty_rest = !bottom_pushed && p.consume.is_some() && p.consume == bottom;
                    if !empty_rest {
                        for g in 0..flags {
                            let inherited: u64 = p
                                .items
                                .iter()
                                .map(|it| match it {
                                    PItem::Var { nt, inherit: true, .. } => per_flag[*nt as usize][g] as u64,
                                    _ => 0,
                                })
                                .sum();
                            if (per_flag[a][g] as u64) > inherited {
                                per_flag[a][g] = inherited as u32;
                                changed = true;
                            }
                        }
                    }
                    if let Some(f) = p.consume {
                        let fresh = &self.fresh;
                        let rhs = var_weight(&p.items, &|b, push, inherit| {
                            let pushed: u64 = push.iter().map(|f| per_flag[b][*f as usize] as u64).sum();
                            let fresh: u64 = if inherit { 0 } else { fresh.iter().map(|f| per_flag[b][*f as usize] as u64).sum() };
                            base[b] as u64 + pushed + fresh
                        });
                        let v = rhs.saturating_sub(base[a] as u64);
                        if (per_flag[a][f as usize] as u64) > v {
                            per_flag[a][f as usize] = v as u32;
                            changed = true;
                        }
                    }
                }
            }
        }
        self.base = base;
        self.per_flag = per_flag;
    }
}

impl Expander for IgExpander {
    type Key = (u32, Vec<u8>);

    fn floor(&self, key: &(u32, Vec<u8>)) -> u32 {
        let (nt, stack) = key;
        let row = &self.per_flag[*nt as usize];
        stack.iter().fold(self.base[*nt as usize], |acc, f| acc.saturating_add(row[*f as usize]))
    }

    fn expand(&self, key: &(u32, Vec<u8>)) -> Option<Vec<Vec<Item<(u32, Vec<u8>)>>>> {
        let (nt, stack) = key;
        if stack.len() > self.max_depth {
            return None;
        }
        let mut out = Vec::new();
        for p in &self.prods[*nt as usize] {
            let rest: &[u8] = match p.consume {
                Some(f) if stack.last() == Some(&f) => &stack[..stack.len() - 1],
                Some(_) => continue,
                None => stack,
            };
            let items = p
                .items
                .iter()
                .map(|it| match it {
                    PItem::Piece(w, m) => Item::Piece(*w, *m),
                    PItem::Var { nt, push, inherit } => {
                        let mut s = if *inherit { rest.to_vec() } else { self.fresh.clone() };
                        s.extend_from_slice(push);
                        Item::Key((*nt, s))
                    }
                })
                .collect();
            out.push(items);
        }
        Some(out)
    }
}

/// Words admitted by `budget` whose derivations keep every flag stack at
/// depth `max_depth` or less. `complete` is false when a deeper stack was
/// reachable.
pub fn ig_enumerate(g: &IndexedGrammar, budget: Budget, max_depth: usize) -> Result<WordSet> {
    let table = LetterTable::new(g.terminals(), budget)?;
    let nt_id: FxHashMap<Symbol, u32> = g.nonterminals.iter().enumerate().map(|(i, s)| (*s, i as u32)).collect();
    if g.flags.len() > u8::MAX as usize {
        return Err(Error::Capacity("more than 255 flags".into()));
    }
    let flag_id: FxHashMap<Symbol, u8> = g.flags.iter().enumerate().map(|(i, s)| (*s, i as u8)).collect();
    let mut prods: Vec<Vec<PProd>> = (0..g.nonterminals.len()).map(|_| Vec::new()).collect();
    'prod: for p in &g.productions {
        let mut items = Vec::new();
        let mut run: Vec<Letter> = Vec::new();
        let mut fixed = Measure::default();
        for (i, it) in p.rhs.iter().enumerate() {
            match it {
                IItem::T(l) => run.push(*l),
                IItem::N { name, push } => {
                    if !run.is_empty() {
                        let Some((w, m)) = table.encode(&run)? else { continue 'prod };
                        let Some(f) = budget.join(fixed, m) else { continue 'prod };
                        fixed = f;
                        items.push(PItem::Piece(w, m));
                        run.clear();
                    }
                    let inherit = p.linear.map_or(true, |j| j == i);
                    items.push(PItem::Var { nt: nt_id[name], push: push.iter().map(|f| flag_id[f]).collect(), inherit });
                }
            }
        }
        if !run.is_empty() {
            let Some((w, m)) = table.encode(&run)? else { continue 'prod };
            if budget.join(fixed, m).is_none() {
                continue 'prod;
            }
            items.push(PItem::Piece(w, m));
        }
        prods[nt_id[&p.lhs] as usize].push(PProd { consume: p.consume.map(|f| flag_id[&f]), items });
    }
    let fresh = if g.has_bottom() { vec![flag_id[&Symbol::new(BOTTOM)]] } else { Vec::new() };
    let mut exp = IgExpander { prods, fresh: fresh.clone(), max_depth, base: Vec::new(), per_flag: Vec::new() };
    let cap = budget.max_len() as u32 + 1;
    exp.compute_floors(g.flags.len(), cap, g.has_bottom().then(|| flag_id[&Symbol::new(BOTTOM)]));
    let d = derive(&exp, &table, (nt_id[&g.start], fresh))?;
    Ok(WordSet { table, words: d.words, complete: d.complete })
}

/// Nonterminals reachable from the start symbol, ignoring flags.
pub fn reachable(g: &IndexedGrammar) -> FxHashSet<Symbol> {
    let mut seen = FxHashSet::from_iter([g.start]);
    let mut stack = vec![g.start];
    while let Some(a) = stack.pop() {
        for p in g.productions.iter().filter(|p| p.lhs == a) {
            for it in &p.rhs {
                if let IItem::N { name, .. } = it {
                    if seen.insert(*name) {
                        stack.push(*name);
                    }
                }
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::enumerate;
    use crate::wordset::Viewpoint;

    const SORT3: &str = "alphabet: 1 2 3\nflags: $ 2 3\nstart: S\nhash: S\nright: T\n\
        S -> 1 S 1 | 2 S+2 | 3 S+3 | # T\nT[2] -> T 2\nT[3] -> 3 T\nT[$] -> eps\n";

    fn sorted(w: &[Symbol]) -> Vec<Symbol> {
        let mut v = w.to_vec();
        v.sort();
        v
    }

    #[test]
    fn parse_print_roundtrip() {
        let g = IndexedGrammar::parse(SORT3).unwrap();
        assert_eq!(IndexedGrammar::parse(&g.to_string()).unwrap(), g);
        assert_eq!(ig_validate(&g).kind, GrammarKind::LinearIndexed);
    }

    #[test]
    fn sort3_rows() {
        let g = IndexedGrammar::parse(SORT3).unwrap();
        let p = ig_validate_partitioned(&g).unwrap();
        let mut rows: Vec<u8> = p.rows().iter().map(|r| *r as u8).collect();
        rows.sort();
        rows.dedup();
        assert_eq!(rows, vec![1, 2, 4, 5]);
    }

    #[test]
    fn left_to_right_is_a_shape_violation() {
        let g = IndexedGrammar::parse("alphabet: a\nstart: S\nhash: S\nleft: A\nright: B\nS -> A #\nA -> B\nB -> a\n").unwrap();
        assert!(matches!(ig_validate_partitioned(&g), Err(Error::ShapeViolation { .. })));
    }

    #[test]
    fn sort3_enumerates_sorted_pairs() {
        let g = IndexedGrammar::parse(SORT3).unwrap();
        let set = ig_enumerate(&g, Budget::Unfolded(3), 8).unwrap();
        assert!(set.complete);
        let s = set.to_sample(Viewpoint::Unfolded).unwrap();
        // 1 + 3 + 9 + 27 words u of length <= 3.
        assert_eq!(s.len(), 40);
        for (u, v) in s.pairs() {
            assert_eq!(v.0, sorted(&u.0));
        }
    }

    #[test]
    fn reverse_reverses_language() {
        let g = IndexedGrammar::parse(SORT3).unwrap();
        let r = ig_reverse(&g);
        let a = ig_enumerate(&g, Budget::Length(5), 8).unwrap();
        let b = ig_enumerate(&r, Budget::Length(5), 8).unwrap();
        let mut rev: Vec<Vec<Letter>> = a.letter_words().into_iter().map(|mut w| {
            w.reverse();
            w
        }).collect();
        rev.sort();
        let mut got = b.letter_words();
        got.sort();
        assert_eq!(rev, got);
        assert_eq!(ig_reverse(&r), g);
    }

    #[test]
    fn flag_free_agrees_with_cfg() {
        let cfg = ContextFreeGrammar::parse("alphabet: a b\nS -> a S b S | eps\n").unwrap();
        let ig = IndexedGrammar::from_cfg(&cfg);
        let r = ig_validate(&ig);
        assert!(r.flag_free);
        assert_eq!(r.kind, GrammarKind::Indexed);
        let a = enumerate(&cfg, Budget::Length(6)).unwrap().strings();
        let b = ig_enumerate(&ig, Budget::Length(6), 2).unwrap().strings();
        assert_eq!(a, b);
    }
}
