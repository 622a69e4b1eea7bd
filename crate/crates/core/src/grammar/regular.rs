use std::collections::VecDeque;

use rustc_hash::{FxHashMap, FxHashSet};

use super::cfg::{ContextFreeGrammar, GSym, Partition, Production};
use super::fresh_name;
use crate::error::{Error, Result};
use crate::symbol::{Symbol, HASH};
use crate::word::Letter;

/// Which regular shapes a grammar uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegularClass {
    /// Only `A -> aB`, `A -> a`, `A -> B`, `A -> eps`.
    LeftLinear,
    /// Also `A -> Ba`, confined to nonterminals that never reach a
    /// left-linear step again.
    Mixed,
}

/// A grammar checked to generate a regular language by one of the shapes above.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeftRegularGrammar {
    grammar: ContextFreeGrammar,
    class: RegularClass,
}

impl LeftRegularGrammar {
    pub fn grammar(&self) -> &ContextFreeGrammar {
        &self.grammar
    }

    pub fn class(&self) -> RegularClass {
        self.class
    }

    pub fn into_grammar(self) -> ContextFreeGrammar {
        self.grammar
    }

    /// Accepts left-linear rules plus mirrored `A -> Ba` rules on right-only
    /// nonterminals.
    pub fn validate_mixed(g: &ContextFreeGrammar) -> Result<LeftRegularGrammar> {
        if let Ok(l) = validate_left_regular(g) {
            return Ok(l);
        }
        let right = right_only(g);
        for p in g.productions() {
            let ok = match p.rhs[..] {
                [] | [GSym::T(_)] | [GSym::N(_)] => true,
                [GSym::T(_), GSym::N(_)] => true,
                [GSym::N(b), GSym::T(_)] => right.contains(&p.lhs) && right.contains(&b),
                _ => false,
            };
            if !ok {
                return Err(Error::NotLeftRegular(p.to_string()));
            }
        }
        // Left-linear rules may enter the right-only part but never leave it.
        for p in g.productions().iter().filter(|p| right.contains(&p.lhs)) {
            if p.nonterminals().any(|n| !right.contains(&n)) {
                return Err(Error::NotLeftRegular(p.to_string()));
            }
        }
        Ok(LeftRegularGrammar { grammar: g.clone(), class: RegularClass::Mixed })
    }
}

/// Greatest set of nonterminals whose rules are all `A -> Ba`, `A -> a`,
/// `A -> B` or `A -> eps` with `B` in the set.
pub(crate) fn right_only(g: &ContextFreeGrammar) -> FxHashSet<Symbol> {
    let mut set: FxHashSet<Symbol> = g.nonterminals().iter().copied().collect();
    loop {
        let drop: Vec<Symbol> = set
            .iter()
            .copied()
            .filter(|a| {
                !g.productions_of(*a).all(|p| match p.rhs[..] {
                    [] | [GSym::T(_)] => true,
                    [GSym::N(b)] | [GSym::N(b), GSym::T(_)] => set.contains(&b),
                    _ => false,
                })
            })
            .collect();
        if drop.is_empty() {
            return set;
        }
        for a in drop {
            set.remove(&a);
        }
    }
}

pub fn validate_left_regular(g: &ContextFreeGrammar) -> Result<LeftRegularGrammar> {
    for p in g.productions() {
        match p.rhs[..] {
            [] | [GSym::T(_)] | [GSym::N(_)] | [GSym::T(_), GSym::N(_)] => {}
            _ => return Err(Error::NotLeftRegular(p.to_string())),
        }
    }
    Ok(LeftRegularGrammar { grammar: g.clone(), class: RegularClass::LeftLinear })
}

/// A left-regular grammar over `X ∪ {#}` whose nonterminals are split into
/// the blocks before `#`, at `#`, and after `#`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionedRegularGrammar {
    grammar: ContextFreeGrammar,
}

impl PartitionedRegularGrammar {
    pub fn grammar(&self) -> &ContextFreeGrammar {
        &self.grammar
    }

    pub fn partition(&self) -> &Partition {
        self.grammar.partition.as_ref().expect("partition present")
    }

    /// Checks every production against the block shapes. Blocks come from
    /// the grammar's `left:`, `hash:`, `right:` headers.
    pub fn validate(g: &ContextFreeGrammar) -> Result<PartitionedRegularGrammar> {
        let part = g.partition.as_ref().ok_or_else(|| Error::Invalid("grammar has no `left:`/`hash:`/`right:` partition".into()))?;
        let block = |s: Symbol| -> Option<u8> {
            if part.left.contains(&s) {
                Some(1)
            } else if part.hash.contains(&s) {
                Some(2)
            } else if part.right.contains(&s) {
                Some(3)
            } else {
                None
            }
        };
        for n in g.nonterminals() {
            if block(*n).is_none() && g.productions_of(*n).next().is_some() {
                return Err(Error::shape(n, "nonterminal is in no block"));
            }
        }
        if !matches!(block(g.start()), Some(1 | 2)) {
            return Err(Error::shape(g.start(), "start symbol must be in the left or hash block"));
        }
        let is_x = |l: &Letter| matches!(l, Letter::Sym(s) if !s.is_hash());
        for p in g.productions() {
            let ok = match (block(p.lhs), &p.rhs[..]) {
                (Some(1), [GSym::T(a), GSym::N(b)]) => is_x(a) && matches!(block(*b), Some(1 | 2)),
                (Some(1), [GSym::N(b)]) => matches!(block(*b), Some(1 | 2)),
                (Some(2), [GSym::T(h)]) => h.is_hash(),
                (Some(2), [GSym::T(h), GSym::N(b)]) => h.is_hash() && block(*b) == Some(3),
                (Some(3), []) => true,
                (Some(3), [GSym::T(a)]) => is_x(a),
                (Some(3), [GSym::N(b)]) => block(*b) == Some(3),
                (Some(3), [GSym::T(a), GSym::N(b)]) => is_x(a) && block(*b) == Some(3),
                _ => false,
            };
            if !ok {
                return Err(Error::shape(p, "does not match the production shapes of its block"));
            }
        }
        Ok(PartitionedRegularGrammar { grammar: g.clone() })
    }
}

/// Rules `A -> aB` and `A -> a` equivalent to a left-linear grammar with the
/// units and ε-rules removed; also reports whether ε is generated.
fn letter_rules(g: &ContextFreeGrammar) -> (Vec<(Symbol, Letter, Option<Symbol>)>, bool) {
    let nullable = g.nullable();
    let mut closure: FxHashMap<Symbol, Vec<Symbol>> = FxHashMap::default();
    for &a in g.nonterminals() {
        let mut seen = vec![a];
        let mut i = 0;
        while i < seen.len() {
            for p in g.productions_of(seen[i]) {
                if let [GSym::N(b)] = p.rhs[..] {
                    if !seen.contains(&b) {
                        seen.push(b);
                    }
                }
            }
            i += 1;
        }
        closure.insert(a, seen);
    }
    let mut rules = Vec::new();
    for &a in g.nonterminals() {
        for &c in &closure[&a] {
            for p in g.productions_of(c) {
                match p.rhs[..] {
                    [GSym::T(x)] => rules.push((a, x, None)),
                    [GSym::T(x), GSym::N(b)] => {
                        rules.push((a, x, Some(b)));
                        if nullable.contains(&b) {
                            rules.push((a, x, None));
                        }
                    }
                    _ => {}
                }
            }
        }
    }
    rules.sort();
    rules.dedup();
    (rules, nullable.contains(&g.start()))
}

/// Shortest word of the grammar without exactly one `#`, if any.
fn unshaped_witness(g: &ContextFreeGrammar, rules: &[(Symbol, Letter, Option<Symbol>)], eps: bool) -> Option<String> {
    if eps {
        return Some("ε".into());
    }
    // BFS over (nonterminal or end, number of # read, saturated at 2).
    type Node = (Option<Symbol>, u8);
    let mut parent: FxHashMap<Node, (Node, Letter)> = FxHashMap::default();
    let start: Node = (Some(g.start()), 0);
    let mut queue = VecDeque::from([start]);
    let mut seen: FxHashSet<Node> = FxHashSet::from_iter([start]);
    while let Some(node) = queue.pop_front() {
        let (Some(a), c) = node else {
            if node.1 != 1 {
                let mut word = Vec::new();
                let mut cur = node;
                while let Some((prev, l)) = parent.get(&cur) {
                    word.push(l.to_string());
                    cur = *prev;
                }
                word.reverse();
                return Some(word.join(" "));
            }
            continue;
        };
        for (_, x, b) in rules.iter().filter(|r| r.0 == a) {
            let next = (*b, (c + x.is_hash() as u8).min(2));
            if seen.insert(next) {
                parent.insert(next, (node, *x));
                queue.push_back(next);
            }
        }
    }
    None
}

/// Product of `g` with the three-phase automaton for `X* # X*`.
///
/// Each nonterminal `A` gets copies `A'` (before `#`), `A''` (about to read
/// `#`) and `A'''` (after `#`). A fresh start symbol in the left block has
/// unit rules to the copies of the old start.
pub fn partition_for_hash(g: &LeftRegularGrammar) -> Result<PartitionedRegularGrammar> {
    let g = g.grammar();
    if g.uses_pairs() {
        return Err(Error::Invalid("partitioning expects a grammar over X and #".into()));
    }
    let (rules, eps) = letter_rules(g);
    if let Some(w) = unshaped_witness(g, &rules, eps) {
        return Err(Error::LanguageNotShaped(w));
    }
    let mut used: FxHashSet<Symbol> = g.nonterminals().iter().copied().chain(g.alphabet().symbols().iter().copied()).collect();
    used.insert(Symbol::new(HASH));
    let mut copies: FxHashMap<(Symbol, u8), Symbol> = FxHashMap::default();
    for &a in g.nonterminals() {
        for phase in 1..=3u8 {
            let name = fresh_name(&format!("{a}{}", "'".repeat(phase as usize)), &mut used);
            copies.insert((a, phase), name);
        }
    }
    let c = |a: Symbol, p: u8| copies[&(a, p)];
    let mut prods = Vec::new();
    for &(a, x, b) in &rules {
        let t = GSym::T(x);
        match (x.is_hash(), b) {
            (false, Some(b)) => {
                prods.push(Production::new(c(a, 1), vec![t, GSym::N(c(b, 1))]));
                prods.push(Production::new(c(a, 1), vec![t, GSym::N(c(b, 2))]));
                prods.push(Production::new(c(a, 3), vec![t, GSym::N(c(b, 3))]));
            }
            (false, None) => prods.push(Production::new(c(a, 3), vec![t])),
            (true, Some(b)) => prods.push(Production::new(c(a, 2), vec![t, GSym::N(c(b, 3))])),
            (true, None) => prods.push(Production::new(c(a, 2), vec![t])),
        }
    }
    let start = fresh_name(&format!("{}0", g.start()), &mut used);
    prods.push(Production::new(start, vec![GSym::N(c(g.start(), 1))]));
    prods.push(Production::new(start, vec![GSym::N(c(g.start(), 2))]));
    let mut out = ContextFreeGrammar::new(g.alphabet().clone(), start, prods)?;
    let by_phase = |p: u8| {
        let mut v: Vec<Symbol> = g.nonterminals().iter().map(|a| c(*a, p)).collect();
        if p == 1 {
            v.push(start);
        }
        v.sort();
        v
    };
    out.partition = Some(Partition { left: by_phase(1), hash: by_phase(2), right: by_phase(3) });
    let out = out.trim();
    PartitionedRegularGrammar::validate(&out)
}

#[cfg(test)]
mod tests {
    use super::super::cfg::cfg_enumerate;
    use super::*;

    fn g(src: &str) -> ContextFreeGrammar {
        ContextFreeGrammar::parse(src).unwrap()
    }

    #[test]
    fn left_regular_examples() {
        assert!(validate_left_regular(&g("alphabet: x\nS -> x S | # T\nT -> x T | eps\n")).is_ok());
        assert!(matches!(validate_left_regular(&g("alphabet: x\nS -> S S | x\n")), Err(Error::NotLeftRegular(_))));
        assert!(validate_left_regular(&g("alphabet: x\nS -> (x,x) S | eps\n")).is_ok());
    }

    #[test]
    fn mixed_requires_right_only_part() {
        let ok = g("alphabet: x\nS -> (x,.) S | T\nT -> T (.,x) | eps\n");
        assert_eq!(LeftRegularGrammar::validate_mixed(&ok).unwrap().class(), RegularClass::Mixed);
        let bad = g("alphabet: x\nS -> x T | eps\nT -> S x\n");
        assert!(LeftRegularGrammar::validate_mixed(&bad).is_err());
    }

    #[test]
    fn partition_preserves_language() {
        let src = g("alphabet: x\nS -> x S | # T\nT -> x T | eps\n");
        let p = partition_for_hash(&validate_left_regular(&src).unwrap()).unwrap();
        assert_eq!(cfg_enumerate(&src, 6).unwrap().strings(), cfg_enumerate(p.grammar(), 6).unwrap().strings());
        assert!(PartitionedRegularGrammar::validate(p.grammar()).is_ok());
    }

    #[test]
    fn unshaped_language_is_rejected() {
        let src = g("alphabet: x\nS -> x S | eps\n");
        assert!(matches!(partition_for_hash(&validate_left_regular(&src).unwrap()), Err(Error::LanguageNotShaped(_))));
        let two = g("alphabet: x\nS -> # S | x\n");
        match partition_for_hash(&validate_left_regular(&two).unwrap()) {
            Err(Error::LanguageNotShaped(w)) => assert_eq!(w, "x"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unit_into_hash_block_is_a_shape_error() {
        let mut bad = g("alphabet: x\nS -> T\nT -> x T | eps\n");
        bad.partition = Some(Partition { left: vec![], hash: vec![Symbol::new("S")], right: vec![Symbol::new("T")] });
        assert!(matches!(PartitionedRegularGrammar::validate(&bad), Err(Error::ShapeViolation { .. })));
    }
}
