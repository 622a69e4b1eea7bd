//! Bounded least-fixpoint enumeration over keyed word equations.
//!
//! Each key denotes a language given as a union of concatenations of fixed
//! pieces and other keys. Grammars use nonterminals (with flag stacks) as keys
//! and automata use configurations. Keys are discovered lazily from the start
//! key, cheapest context first, and rules whose surrounding letters plus the
//! expander's yield floors for the keys involved exceed the budget are dropped. An expander may refuse a key beyond its
//! derivation cap, which makes the result incomplete. Rounds are semi-naive:
//! every new word uses at least one word found in the previous round.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::hash::Hash;

use rustc_hash::{FxHashMap, FxHashSet};

use crate::budget::{LetterTable, Measure};
use crate::error::{Error, Result};
use crate::exec;
use crate::packed::Packed;

#[derive(Clone, Debug)]
pub enum Item<K> {
    Piece(Packed, Measure),
    Key(K),
}

pub trait Expander: Sync {
    type Key: Clone + Eq + Hash + Send + Sync;

    /// Right-hand sides for `key`, or `None` when the key lies beyond the cap.
    fn expand(&self, key: &Self::Key) -> Option<Vec<Vec<Item<Self::Key>>>>;

    /// A lower bound on the weight of every word derived from `key`.
    fn floor(&self, _key: &Self::Key) -> u32 {
        0
    }
}

/// Final words of the start key, sorted.
#[derive(Clone, Debug)]
pub struct Derived {
    pub words: Vec<Packed>,
    /// False when some reachable key was cut off by the derivation cap.
    pub complete: bool,
    pub keys: usize,
}

/// Upper limit on discovered keys before giving up.
pub const MAX_KEYS: usize = 4_000_000;

const CHUNK: usize = 2048;

pub(crate) fn weight(m: Measure) -> u32 {
    m.left as u32 + m.right as u32 + m.hash as u32
}

#[derive(Clone, Copy)]
enum Slot {
    Piece(Packed, Measure),
    Key(usize),
}

struct Rule {
    lhs: usize,
    slots: Vec<Slot>,
    keys: Vec<usize>,
    /// Least weight contributed by the slots after each position.
    tail: Vec<u32>,
}

struct Task {
    rule: usize,
    pivot: usize,
    from: usize,
    to: usize,
}

pub fn derive<E: Expander>(e: &E, table: &LetterTable, start: E::Key) -> Result<Derived> {
    let budget = table.budget();
    let limit = budget.max_len() as u32;
    let mut index: FxHashMap<E::Key, usize> = FxHashMap::default();
    let mut keys = vec![start.clone()];
    index.insert(start, 0);
    // Smallest number of letters emitted around each key on any path from
    // the start; keys are expanded in order of this cost.
    let mut cost = vec![0u32];
    let mut expanded = vec![false];
    let mut heap = BinaryHeap::from([Reverse((0u32, 0usize))]);
    let mut rules = Vec::new();
    let mut complete = true;
    while let Some(Reverse((c, next))) = heap.pop() {
        if expanded[next] || c > cost[next] {
            continue;
        }
        expanded[next] = true;
        let Some(expansions) = e.expand(&keys[next]) else {
            complete = false;
            continue;
        };
        'exp: for items in expansions {
            let mut fixed = Measure::default();
            for it in &items {
                if let Item::Piece(_, m) = it {
                    match budget.join(fixed, *m) {
                        Some(f) => fixed = f,
                        None => continue 'exp,
                    }
                }
            }
            let around = c + weight(fixed);
            let floors: Vec<u32> = items.iter().map(|it| if let Item::Key(k) = it { e.floor(k) } else { 0 }).collect();
            let total = around.saturating_add(floors.iter().fold(0u32, |a, f| a.saturating_add(*f)));
            if total > limit {
                continue;
            }
            let mut slots = Vec::with_capacity(items.len());
            let mut tail = vec![0u32; items.len()];
            for i in (1..items.len()).rev() {
                let w = match &items[i] {
                    Item::Piece(_, m) => weight(*m),
                    Item::Key(_) => floors[i],
                };
                tail[i - 1] = tail[i].saturating_add(w);
            }
            for (it, floor) in items.into_iter().zip(floors) {
                match it {
                    Item::Piece(w, m) => slots.push(Slot::Piece(w, m)),
                    Item::Key(k) => {
                        let id = match index.get(&k) {
                            Some(&id) => id,
                            None => {
                                if keys.len() >= MAX_KEYS {
                                    return Err(Error::Capacity(format!("more than {MAX_KEYS} derivation keys")));
                                }
                                index.insert(k.clone(), keys.len());
                                keys.push(k);
                                cost.push(u32::MAX);
                                expanded.push(false);
                                keys.len() - 1
                            }
                        };
                        let context = total - floor;
                        if context < cost[id] {
                            cost[id] = context;
                            heap.push(Reverse((context, id)));
                        }
                        slots.push(Slot::Key(id));
                    }
                }
            }
            let key_slots = slots.iter().filter_map(|s| if let Slot::Key(k) = s { Some(*k) } else { None }).collect();
            rules.push(Rule { lhs: next, slots, keys: key_slots, tail });
        }
    }
    drop(index);

    let n = keys.len();
    let mut words: Vec<Vec<(Packed, Measure)>> = vec![Vec::new(); n];
    let mut seen: Vec<FxHashSet<Packed>> = vec![FxHashSet::default(); n];
    let mut old = vec![0usize; n];
    // Start of each round's block in `words[k]`; blocks are sorted by weight.
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); n];

    let codec = *table.codec();
    let combine = |rule: &Rule, pivot: Option<(usize, usize, usize)>, words: &Vec<Vec<(Packed, Measure)>>, blocks: &[Vec<usize>], old: &[usize], out: &mut Vec<(usize, Packed, Measure)>| {
        // pivot = (position among key slots, from, to)
        struct Ctx<'a> {
            rule: &'a Rule,
            words: &'a Vec<Vec<(Packed, Measure)>>,
            blocks: &'a [Vec<usize>],
            ranges: &'a dyn Fn(usize, usize) -> (usize, usize),
            budget: &'a crate::budget::Budget,
            codec: &'a crate::packed::Codec,
            limit: u32,
        }
        fn go(cx: &Ctx<'_>, at: usize, key_pos: usize, acc: (Packed, usize, Measure), out: &mut Vec<(usize, Packed, Measure)>) {
            let slots = &cx.rule.slots;
            if at == slots.len() {
                out.push((cx.rule.lhs, acc.0, acc.2));
                return;
            }
            match slots[at] {
                Slot::Piece(w, m) => {
                    if let Some(m2) = cx.budget.join(acc.2, m) {
                        let len = cx.codec.len(w);
                        go(cx, at + 1, key_pos, (cx.codec.concat_len(acc.0, acc.1, w), acc.1 + len, m2), out);
                    }
                }
                Slot::Key(k) => {
                    let room = weight(acc.2).saturating_add(cx.rule.tail[at]);
                    if room > cx.limit {
                        return;
                    }
                    let room = cx.limit - room;
                    let (from, to) = (cx.ranges)(key_pos, k);
                    let starts = &cx.blocks[k];
                    let mut b = starts.partition_point(|&s| s <= from).saturating_sub(1);
                    let mut lo = from;
                    while lo < to {
                        let end = starts.get(b + 1).copied().unwrap_or(usize::MAX).min(to);
                        for &(w, m) in &cx.words[k][lo..end] {
                            if weight(m) > room {
                                break;
                            }
                            if let Some(m2) = cx.budget.join(acc.2, m) {
                                let len = cx.codec.len(w);
                                go(cx, at + 1, key_pos + 1, (cx.codec.concat_len(acc.0, acc.1, w), acc.1 + len, m2), out);
                            }
                        }
                        lo = end;
                        b += 1;
                    }
                }
            }
        }
        let ranges = |pos: usize, k: usize| -> (usize, usize) {
            match pivot {
                Some((p, from, to)) if pos == p => (from, to),
                Some((p, _, _)) if pos < p => (0, old[k]),
                _ => (0, words[k].len()),
            }
        };
        let cx = Ctx { rule, words, blocks, ranges: &ranges, budget: &budget, codec: &codec, limit };
        go(&cx, 0, 0, (Packed(0), 0, Measure::default()), out);
    };

    // Round zero: key-free rules.
    let mut fresh = Vec::new();
    for rule in rules.iter().filter(|r| r.keys.is_empty()) {
        combine(rule, None, &words, &blocks, &old, &mut fresh);
    }
    let mut cur: Vec<usize>;
    loop {
        for (k, w, m) in fresh.drain(..) {
            if seen[k].insert(w) {
                words[k].push((w, m));
            }
        }
        cur = words.iter().map(Vec::len).collect();
        if (0..n).all(|k| cur[k] == old[k]) {
            break;
        }
        for k in (0..n).filter(|&k| cur[k] > old[k]) {
            words[k][old[k]..].sort_unstable_by_key(|&(_, m)| weight(m));
            blocks[k].push(old[k]);
        }
        let mut tasks = Vec::new();
        for (ri, rule) in rules.iter().enumerate() {
            for (p, &k) in rule.keys.iter().enumerate() {
                let mut from = old[k];
                while from < cur[k] {
                    let to = (from + CHUNK).min(cur[k]);
                    tasks.push(Task { rule: ri, pivot: p, from, to });
                    from = to;
                }
            }
        }
        let snapshot = &words;
        let prev = &old;
        let blocks = &blocks;
        fresh = exec::flat_map(&tasks, |t| {
            let mut out = Vec::new();
            combine(&rules[t.rule], Some((t.pivot, t.from, t.to)), snapshot, blocks, prev, &mut out);
            out.retain(|(k, w, _)| !seen[*k].contains(w));
            out
        });
        old = cur;
    }

    let budget = table.budget();
    let mut out: Vec<Packed> = words[0].iter().filter(|(_, m)| budget.accepts_final(*m)).map(|(w, _)| *w).collect();
    out.sort_unstable();
    Ok(Derived { words: out, complete, keys: n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::word::Letter;

    /// S -> a S b | eps over plain letters, with S keyed by unit.
    struct AnBn<'a>(&'a LetterTable);

    impl Expander for AnBn<'_> {
        type Key = ();
        fn expand(&self, _: &()) -> Option<Vec<Vec<Item<()>>>> {
            let a = self.0.encode(&[Letter::sym("a")]).unwrap().unwrap();
            let b = self.0.encode(&[Letter::sym("b")]).unwrap().unwrap();
            Some(vec![vec![Item::Piece(a.0, a.1), Item::Key(()), Item::Piece(b.0, b.1)], vec![]])
        }
    }

    #[test]
    fn anbn_to_length_six() {
        let t = LetterTable::new([Letter::sym("a"), Letter::sym("b")], Budget::Length(6)).unwrap();
        let d = derive(&AnBn(&t), &t, ()).unwrap();
        assert!(d.complete);
        let mut got: Vec<String> = d.words.iter().map(|w| t.decode(*w).iter().map(|l| l.to_string()).collect()).collect();
        got.sort();
        assert_eq!(got, vec!["", "aaabbb", "aabb", "ab"]);
    }

    /// Depth-capped counter: key n -> a (n+1) | eps, refused beyond 3.
    struct Capped<'a>(&'a LetterTable);

    impl Expander for Capped<'_> {
        type Key = u32;
        fn expand(&self, k: &u32) -> Option<Vec<Vec<Item<u32>>>> {
            if *k > 3 {
                return None;
            }
            let a = self.0.encode(&[Letter::sym("a")]).unwrap().unwrap();
            Some(vec![vec![Item::Piece(a.0, a.1), Item::Key(k + 1)], vec![]])
        }
    }

    #[test]
    fn cap_reports_incomplete() {
        let t = LetterTable::new([Letter::sym("a")], Budget::Length(10)).unwrap();
        let d = derive(&Capped(&t), &t, 0).unwrap();
        assert!(!d.complete);
        assert_eq!(d.words.len(), 4);
    }
}
