use rustc_hash::{FxHashMap, FxHashSet};

use crate::error::{Error, Result};
use crate::grammar::{fresh_name, right_only, ContextFreeGrammar, GSym, LeftRegularGrammar, PartitionedRegularGrammar, Production, RegularClass};
use crate::symbol::Symbol;
use crate::word::Letter;

fn left(a: Symbol) -> GSym {
    GSym::T(Letter::Pair(crate::word::PairLetter::new(Some(a), None).expect("non-empty pair")))
}

fn right(a: Symbol) -> GSym {
    GSym::T(Letter::Pair(crate::word::PairLetter::new(None, Some(a)).expect("non-empty pair")))
}

/// Rewrites a partitioned grammar of `u#v^rev` words into a two-tape grammar
/// of the pairs `(u, v)`. Right-block rules `A -> aB` become `A -> B (.,a)`,
/// so the result is left-regular only in the mirrored sense.
pub fn unfolded_regular_to_two_tape(g: &PartitionedRegularGrammar) -> Result<LeftRegularGrammar> {
    let part = g.partition();
    let gr = g.grammar();
    let mut out = Vec::new();
    for p in gr.productions() {
        let rhs = if part.left.contains(&p.lhs) {
            match p.rhs[..] {
                [GSym::T(Letter::Sym(a)), b @ GSym::N(_)] => vec![left(a), b],
                [b @ GSym::N(_)] => vec![b],
                _ => return Err(Error::shape(p, "expected `a B` or `B` in the left block")),
            }
        } else if part.hash.contains(&p.lhs) {
            match p.rhs[..] {
                [GSym::T(l)] if l.is_hash() => vec![],
                [GSym::T(l), b @ GSym::N(_)] if l.is_hash() => vec![b],
                _ => return Err(Error::shape(p, "expected `#` or `# B` in the hash block")),
            }
        } else {
            match p.rhs[..] {
                [] => vec![],
                [GSym::T(Letter::Sym(a))] => vec![right(a)],
                [GSym::T(Letter::Sym(a)), b @ GSym::N(_)] => vec![b, right(a)],
                [b @ GSym::N(_)] => vec![b],
                _ => return Err(Error::shape(p, "expected `eps`, `a`, `B` or `a B` in the right block")),
            }
        };
        out.push(Production::new(p.lhs, rhs));
    }
    let two = ContextFreeGrammar::new(gr.alphabet().clone(), gr.start(), out)?;
    LeftRegularGrammar::validate_mixed(&two)
}

/// An equivalent grammar using only `A -> aB`, `A -> a`, `A -> B` and
/// `A -> eps`. Mirrored rules on right-only nonterminals are read backwards:
/// `<B,A>` derives what is read from `B` up to the target `A`.
pub fn to_left_linear(g: &LeftRegularGrammar) -> Result<ContextFreeGrammar> {
    let gr = g.grammar();
    if g.class() == RegularClass::LeftLinear {
        return Ok(gr.clone());
    }
    let r = right_only(gr);
    let mut used: FxHashSet<Symbol> = gr.nonterminals().iter().copied().collect();
    let mut targets: FxHashMap<Symbol, Symbol> = FxHashMap::default();
    let mut entry = |a: Symbol, used: &mut FxHashSet<Symbol>| *targets.entry(a).or_insert_with(|| fresh_name(&format!("{a}_in"), used));
    let mut out = Vec::new();
    let start = if r.contains(&gr.start()) { entry(gr.start(), &mut used) } else { gr.start() };
    for p in gr.productions().iter().filter(|p| !r.contains(&p.lhs)) {
        let rhs = p.rhs.iter().map(|s| match s {
            GSym::N(a) if r.contains(a) => GSym::N(entry(*a, &mut used)),
            s => *s,
        });
        out.push(Production::new(p.lhs, rhs.collect()));
    }
    let mut pairs: FxHashMap<(Symbol, Symbol), Symbol> = FxHashMap::default();
    let mut pair = |b: Symbol, a: Symbol, used: &mut FxHashSet<Symbol>| *pairs.entry((b, a)).or_insert_with(|| fresh_name(&format!("{b}_{a}"), used));
    let mut wanted: Vec<(Symbol, Symbol)> = targets.iter().map(|(a, n)| (*a, *n)).collect();
    wanted.sort();
    let right_rules: Vec<&Production> = gr.productions().iter().filter(|p| r.contains(&p.lhs)).collect();
    for (a, entry_name) in wanted {
        // Runs start at a terminating rule and climb through mirrored rules.
        for p in &right_rules {
            match p.rhs[..] {
                [] => out.push(Production::new(entry_name, vec![GSym::N(pair(p.lhs, a, &mut used))])),
                [t @ GSym::T(_)] => out.push(Production::new(entry_name, vec![t, GSym::N(pair(p.lhs, a, &mut used))])),
                _ => {}
            }
        }
        out.push(Production::new(pair(a, a, &mut used), vec![]));
        for b in r.iter().copied() {
            let from = pair(b, a, &mut used);
            for p in &right_rules {
                match p.rhs[..] {
                    [GSym::N(c), t @ GSym::T(_)] if c == b => out.push(Production::new(from, vec![t, GSym::N(pair(p.lhs, a, &mut used))])),
                    [GSym::N(c)] if c == b => out.push(Production::new(from, vec![GSym::N(pair(p.lhs, a, &mut used))])),
                    _ => {}
                }
            }
        }
    }
    Ok(ContextFreeGrammar::new(gr.alphabet().clone(), start, out)?.trim())
}

/// Builds the context-free grammar of `u#v^rev` for a left-regular two-tape
/// grammar whose letters each touch a single tape.
pub fn two_tape_regular_to_unfolded_cfg(g: &LeftRegularGrammar) -> Result<ContextFreeGrammar> {
    let lin = to_left_linear(g)?;
    let hash = GSym::T(Letter::hash_mark());
    let side = |p: &Production, l: &Letter| -> Result<(bool, Symbol)> {
        let pl = l.as_pair().ok_or_else(|| Error::shape(p, "expected pair letters"))?;
        match (pl.left(), pl.right()) {
            (Some(a), None) => Ok((true, a)),
            (None, Some(a)) => Ok((false, a)),
            _ => Err(Error::shape(p, "split pair letters first")),
        }
    };
    let mut out = Vec::new();
    for p in lin.productions() {
        let rhs = match &p.rhs[..] {
            [] => vec![hash],
            [GSym::N(b)] => vec![GSym::N(*b)],
            [GSym::T(l)] => match side(p, l)? {
                (true, a) => vec![GSym::T(Letter::Sym(a)), hash],
                (false, a) => vec![hash, GSym::T(Letter::Sym(a))],
            },
            [GSym::T(l), GSym::N(b)] => match side(p, l)? {
                (true, a) => vec![GSym::T(Letter::Sym(a)), GSym::N(*b)],
                (false, a) => vec![GSym::N(*b), GSym::T(Letter::Sym(a))],
            },
            _ => return Err(Error::NotLeftRegular(p.to_string())),
        };
        out.push(Production::new(p.lhs, rhs));
    }
    ContextFreeGrammar::new(lin.alphabet().clone(), lin.start(), out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formalism::{Limits, Object};
    use crate::grammar::{partition_for_hash, validate_left_regular};
    use crate::sample::sample_equal;

    fn same_relation(a: impl Into<Object>, b: impl Into<Object>, bound: usize) {
        let (sa, _) = a.into().sample(bound, Limits::for_bound(bound)).unwrap();
        let (sb, _) = b.into().sample(bound, Limits::for_bound(bound)).unwrap();
        let d = sample_equal(&sa, &sb).unwrap();
        assert!(d.equal(), "{d}");
        assert!(!sa.is_empty());
    }

    const RHO_F2: &str = "alphabet: x\nstart: Q0\nQ0 -> x Q1 | # R0\nQ1 -> x Q0 | # R1\nR1 -> x R0\nR0 -> eps\n";

    #[test]
    fn partitioned_inputs() {
        for src in ["alphabet: x\nstart: S\nS -> x S | #\n", "alphabet: x\nstart: S\nS -> # R\nR -> x R | eps\n", RHO_F2] {
            let g = ContextFreeGrammar::parse(src).unwrap();
            let p = partition_for_hash(&validate_left_regular(&g).unwrap()).unwrap();
            let two = unfolded_regular_to_two_tape(&p).unwrap();
            same_relation(g.clone(), two.grammar().clone(), 6);
            let back = two_tape_regular_to_unfolded_cfg(&two).unwrap();
            same_relation(g, back, 6);
        }
    }

    #[test]
    fn equality_relation() {
        let g = ContextFreeGrammar::parse("alphabet: a b\nstart: S\nS -> (a,.) A | (b,.) B | eps\nA -> (.,a) S\nB -> (.,b) S\n").unwrap();
        let cfg = two_tape_regular_to_unfolded_cfg(&validate_left_regular(&g).unwrap()).unwrap();
        let (s, _) = Object::from(cfg).sample(4, Limits::for_bound(4)).unwrap();
        assert_eq!(s.len(), 31);
        assert!(s.pairs().all(|(u, v)| u == v));
    }

    #[test]
    fn full_pairs_are_refused() {
        let g = ContextFreeGrammar::parse("alphabet: x\nstart: S\nS -> (x,x) S | eps\n").unwrap();
        assert!(two_tape_regular_to_unfolded_cfg(&validate_left_regular(&g).unwrap()).is_err());
    }
}
