use rustc_hash::{FxHashMap, FxHashSet};

use crate::error::{Error, Result};
use crate::formalism::Object;
use crate::grammar::{fresh_name, ContextFreeGrammar, GSym, Production};
use crate::indexed::{ig_reverse, IItem, IndexedGrammar, IndexedProduction};
use crate::oracle::RelationOracle;
use crate::sample::RelationSample;
use crate::symbol::{Alphabet, Symbol};
use crate::word::{Letter, PairLetter, Word};

/// The fresh generators delimiting blocks.
pub const OPEN: &str = "l";
pub const CLOSE: &str = "r";

fn extended(x: &Alphabet) -> Result<Alphabet> {
    for m in [OPEN, CLOSE] {
        if x.contains(Symbol::new(m)) {
            return Err(Error::AlphabetClash(m.to_string()));
        }
    }
    Ok(x.union(&Alphabet::new([OPEN, CLOSE])?))
}

fn diag(s: Symbol) -> Letter {
    Letter::Pair(PairLetter::new(Some(s), Some(s)).expect("non-empty pair"))
}

fn swap(l: Letter) -> Letter {
    match l {
        Letter::Pair(p) => Letter::Pair(PairLetter::new(p.right(), p.left()).expect("non-empty pair")),
        l => l,
    }
}

/// Renames every nonterminal of a grammar to a fresh copy.
fn copies(names: &[Symbol], suffix: &str, used: &mut FxHashSet<Symbol>) -> FxHashMap<Symbol, Symbol> {
    names.iter().map(|n| (*n, fresh_name(&format!("{n}{suffix}"), used))).collect()
}

/// Two-tape grammar for the word problem of `<X, l, r | l u r = l v r (u ρ v)>`
/// from a two-tape grammar for `ρ`: any sequence of diagonal letters and
/// blocks `(l,l) K (r,r)`, where `K` generates `ρ`, its inverse, or the
/// diagonal of `X*`. Only one rewriting step per block is covered, so the
/// result is the full word problem when `ρ ∪ ρ⁻¹ ∪ id` is transitive.
pub fn monoid_two_tape_wp(k: &Object) -> Result<Object> {
    let y = extended(k.alphabet())?;
    let (open, close) = (Symbol::new(OPEN), Symbol::new(CLOSE));
    match k {
        Object::Grammar(g) => {
            let mut used: FxHashSet<Symbol> = g.nonterminals().iter().copied().collect();
            let inv = copies(g.nonterminals(), "_inv", &mut used);
            let (w, kk, e) = (fresh_name("W", &mut used), fresh_name("K", &mut used), fresh_name("E", &mut used));
            let mut prods = g.productions().to_vec();
            for p in g.productions() {
                let rhs = p.rhs.iter().map(|s| match s {
                    GSym::N(n) => GSym::N(inv[n]),
                    GSym::T(l) => GSym::T(swap(*l)),
                });
                prods.push(Production::new(inv[&p.lhs], rhs.collect()));
            }
            prods.push(Production::new(w, vec![]));
            for s in y.symbols() {
                prods.push(Production::new(w, vec![GSym::T(diag(*s)), GSym::N(w)]));
            }
            prods.push(Production::new(w, vec![GSym::T(diag(open)), GSym::N(kk), GSym::T(diag(close)), GSym::N(w)]));
            for n in [g.start(), inv[&g.start()], e] {
                prods.push(Production::new(kk, vec![GSym::N(n)]));
            }
            prods.push(Production::new(e, vec![]));
            for s in k.alphabet().symbols() {
                prods.push(Production::new(e, vec![GSym::T(diag(*s)), GSym::N(e)]));
            }
            Ok(Object::Grammar(ContextFreeGrammar::new(y, w, prods)?))
        }
        Object::Indexed(g) => {
            let mut used: FxHashSet<Symbol> = g.nonterminals().iter().copied().collect();
            let inv = copies(g.nonterminals(), "_inv", &mut used);
            let (w, kk, e) = (fresh_name("W", &mut used), fresh_name("K", &mut used), fresh_name("E", &mut used));
            let mut prods = g.productions().to_vec();
            for p in g.productions() {
                let rhs = p.rhs.iter().map(|it| match it {
                    IItem::N { name, push } => IItem::N { name: inv[name], push: push.clone() },
                    IItem::T(l) => IItem::T(swap(*l)),
                });
                prods.push(IndexedProduction { lhs: inv[&p.lhs], consume: p.consume, rhs: rhs.collect(), linear: p.linear });
            }
            let t = |l: Letter| IItem::T(l);
            prods.push(IndexedProduction::new(w, None, vec![], None));
            for s in y.symbols() {
                prods.push(IndexedProduction::new(w, None, vec![t(diag(*s)), IItem::var(w)], None));
            }
            prods.push(IndexedProduction::new(w, None, vec![t(diag(open)), IItem::var(kk), t(diag(close)), IItem::var(w)], Some(3)));
            for n in [g.start(), inv[&g.start()], e] {
                prods.push(IndexedProduction::new(kk, None, vec![IItem::var(n)], None));
            }
            prods.push(IndexedProduction::new(e, None, vec![], None));
            for s in k.alphabet().symbols() {
                prods.push(IndexedProduction::new(e, None, vec![t(diag(*s)), IItem::var(e)], None));
            }
            Ok(Object::Indexed(IndexedGrammar::new(y, g.flags().to_vec(), w, prods)?))
        }
        other => Err(Error::Invalid(format!("expected a grammar over pair letters, found a {} object", other.formalism()))),
    }
}

/// Grammar for the unfolded word problem of `<X, l, r | l w r = l r (w ∈ L)>`
/// from a grammar for `L`, with start `I` and rules
/// `I -> a I a | l S r I r l | l r I r S' l | l S r I r S' l | #`,
/// where `S'` starts a reversed copy. The fourth alternative relates two
/// different words of `L`.
pub fn monoid_unfolded_wp_indexed(g: &Object) -> Result<Object> {
    let y = extended(g.alphabet())?;
    let (open, close) = (Letter::Sym(Symbol::new(OPEN)), Letter::Sym(Symbol::new(CLOSE)));
    match g {
        Object::Grammar(gr) => {
            if gr.uses_pairs() || gr.uses_hash() {
                return Err(Error::Invalid("expected a grammar over plain letters".into()));
            }
            let mut used: FxHashSet<Symbol> = gr.nonterminals().iter().copied().collect();
            let rev = copies(gr.nonterminals(), "_rev", &mut used);
            let i = fresh_name("I", &mut used);
            let mut prods = gr.productions().to_vec();
            for p in gr.productions() {
                let rhs = p.rhs.iter().rev().map(|s| match s {
                    GSym::N(n) => GSym::N(rev[n]),
                    t => *t,
                });
                prods.push(Production::new(rev[&p.lhs], rhs.collect()));
            }
            let (s, s2, ii) = (GSym::N(gr.start()), GSym::N(rev[&gr.start()]), GSym::N(i));
            let (l, r) = (GSym::T(open), GSym::T(close));
            for a in y.symbols() {
                prods.push(Production::new(i, vec![GSym::T(Letter::Sym(*a)), ii, GSym::T(Letter::Sym(*a))]));
            }
            prods.push(Production::new(i, vec![l, s, r, ii, r, l]));
            prods.push(Production::new(i, vec![l, r, ii, r, s2, l]));
            prods.push(Production::new(i, vec![l, s, r, ii, r, s2, l]));
            prods.push(Production::new(i, vec![GSym::T(Letter::hash_mark())]));
            Ok(Object::Grammar(ContextFreeGrammar::new(y, i, prods)?))
        }
        Object::Indexed(gr) => {
            if gr.uses_pairs() {
                return Err(Error::Invalid("expected a grammar over plain letters".into()));
            }
            let mut used: FxHashSet<Symbol> = gr.nonterminals().iter().copied().collect();
            let rev = copies(gr.nonterminals(), "_rev", &mut used);
            let i = fresh_name("I", &mut used);
            let mut prods = gr.productions().to_vec();
            for p in ig_reverse(gr).productions() {
                let rhs = p.rhs.iter().map(|it| match it {
                    IItem::N { name, push } => IItem::N { name: rev[name], push: push.clone() },
                    t => t.clone(),
                });
                prods.push(IndexedProduction { lhs: rev[&p.lhs], consume: p.consume, rhs: rhs.collect(), linear: p.linear });
            }
            let (s, s2, ii) = (IItem::var(gr.start()), IItem::var(rev[&gr.start()]), IItem::var(i));
            let (l, r) = (IItem::T(open), IItem::T(close));
            for a in y.symbols() {
                prods.push(IndexedProduction::new(i, None, vec![IItem::T(Letter::Sym(*a)), ii.clone(), IItem::T(Letter::Sym(*a))], None));
            }
            prods.push(IndexedProduction::new(i, None, vec![l.clone(), s.clone(), r.clone(), ii.clone(), r.clone(), l.clone()], Some(3)));
            prods.push(IndexedProduction::new(i, None, vec![l.clone(), r.clone(), ii.clone(), r.clone(), s2.clone(), l.clone()], Some(2)));
            prods.push(IndexedProduction::new(i, None, vec![l.clone(), s, r.clone(), ii, r, s2, l], Some(3)));
            prods.push(IndexedProduction::new(i, None, vec![IItem::T(Letter::hash_mark())], None));
            Ok(Object::Indexed(IndexedGrammar::new(y, gr.flags().to_vec(), i, prods)?))
        }
        other => Err(Error::Invalid(format!("expected a grammar, found a {} object", other.formalism()))),
    }
}

/// A word cut into letters and maximal blocks `l w r` with `w` over `X`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Seg {
    Letter(Symbol),
    Block(Word),
}

fn segments(u: &Word, x: &Alphabet) -> Vec<Seg> {
    let (open, close) = (Symbol::new(OPEN), Symbol::new(CLOSE));
    let w = &u.0;
    let mut out = Vec::new();
    let mut i = 0;
    while i < w.len() {
        if w[i] == open {
            let end = w[i + 1..].iter().position(|s| !x.contains(*s)).map(|k| i + 1 + k);
            if let Some(e) = end.filter(|e| w[*e] == close) {
                out.push(Seg::Block(Word(w[i + 1..e].to_vec())));
                i = e + 1;
                continue;
            }
        }
        out.push(Seg::Letter(w[i]));
        i += 1;
    }
    out
}

fn seg_len(s: &Seg) -> usize {
    match s {
        Seg::Letter(_) => 1,
        Seg::Block(w) => w.len() + 2,
    }
}

/// All words obtained by choosing one alternative per segment, within `bound`.
fn expand(choices: &[Vec<Seg>], bound: usize) -> Vec<Word> {
    let (open, close) = (Symbol::new(OPEN), Symbol::new(CLOSE));
    let mins: Vec<usize> = choices.iter().map(|c| c.iter().map(seg_len).min().unwrap_or(0)).collect();
    let mut suffix_min = vec![0; choices.len() + 1];
    for i in (0..choices.len()).rev() {
        suffix_min[i] = suffix_min[i + 1] + mins[i];
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(i: usize, choices: &[Vec<Seg>], suffix_min: &[usize], bound: usize, cur: &mut Vec<Symbol>, out: &mut Vec<Word>, open: Symbol, close: Symbol) {
        if i == choices.len() {
            out.push(Word(cur.clone()));
            return;
        }
        for c in &choices[i] {
            if cur.len() + seg_len(c) + suffix_min[i + 1] > bound {
                continue;
            }
            let mark = cur.len();
            match c {
                Seg::Letter(s) => cur.push(*s),
                Seg::Block(w) => {
                    cur.push(open);
                    cur.extend_from_slice(&w.0);
                    cur.push(close);
                }
            }
            go(i + 1, choices, suffix_min, bound, cur, out, open, close);
            cur.truncate(mark);
        }
    }
    go(0, choices, &suffix_min, bound, &mut cur, &mut out, open, close);
    out
}

/// Decider for the word problem of `<X, l, r | l u r = l v r (u ρ v)>`:
/// two words are equal iff they agree outside blocks and corresponding block
/// contents are equivalent under the closure of `ρ`.
pub struct BlockCongruence {
    alphabet: Alphabet,
    x: Alphabet,
    class: FxHashMap<Word, usize>,
    members: Vec<Vec<Word>>,
}

impl BlockCongruence {
    /// Classes are the connected components of the pairs in `rho`.
    pub fn new(rho: &RelationSample) -> Result<BlockCongruence> {
        let x = rho.alphabet().clone();
        let alphabet = extended(&x)?;
        let mut ids: FxHashMap<Word, usize> = FxHashMap::default();
        let mut parent: Vec<usize> = Vec::new();
        fn find(parent: &mut [usize], mut a: usize) -> usize {
            while parent[a] != a {
                parent[a] = parent[parent[a]];
                a = parent[a];
            }
            a
        }
        for (u, v) in rho.pairs() {
            let mut id = |w: Word| {
                let n = ids.len();
                *ids.entry(w).or_insert_with(|| {
                    parent.push(n);
                    n
                })
            };
            let (a, b) = (id(u), id(v));
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        let mut roots: FxHashMap<usize, usize> = FxHashMap::default();
        let mut members: Vec<Vec<Word>> = Vec::new();
        let mut class = FxHashMap::default();
        let mut words: Vec<(Word, usize)> = ids.into_iter().collect();
        words.sort();
        for (w, i) in words {
            let root = find(&mut parent, i);
            let n = roots.len();
            let c = *roots.entry(root).or_insert(n);
            if c == members.len() {
                members.push(Vec::new());
            }
            members[c].push(w.clone());
            class.insert(w, c);
        }
        Ok(BlockCongruence { alphabet, x, class, members })
    }

    fn same(&self, a: &Word, b: &Word) -> bool {
        a == b || matches!((self.class.get(a), self.class.get(b)), (Some(x), Some(y)) if x == y)
    }
}

impl RelationOracle for BlockCongruence {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn relates(&self, u: &Word, v: &Word) -> bool {
        let (a, b) = (segments(u, &self.x), segments(v, &self.x));
        a.len() == b.len()
            && a.iter().zip(&b).all(|pair| match pair {
                (Seg::Letter(p), Seg::Letter(q)) => p == q,
                (Seg::Block(p), Seg::Block(q)) => self.same(p, q),
                _ => false,
            })
    }

    fn image(&self, u: &Word, bound: usize) -> Vec<Word> {
        let choices: Vec<Vec<Seg>> = segments(u, &self.x)
            .into_iter()
            .map(|s| match &s {
                Seg::Block(w) => match self.class.get(w) {
                    Some(c) => self.members[*c].iter().map(|m| Seg::Block(m.clone())).collect(),
                    None => vec![s],
                },
                Seg::Letter(_) => vec![s],
            })
            .collect();
        expand(&choices, bound)
    }
}

/// Decider for the word problem of `<X, l, r | l w r = l r (w ∈ L)>`: words
/// are equal iff they agree after emptying every block whose content is in `L`.
pub struct BlockErasure {
    alphabet: Alphabet,
    x: Alphabet,
    language: Vec<Word>,
    members: FxHashSet<Word>,
}

impl BlockErasure {
    /// `language` lists the words of `L` up to the bound of interest.
    pub fn new(x: Alphabet, language: Vec<Word>) -> Result<BlockErasure> {
        let alphabet = extended(&x)?;
        let members = language.iter().cloned().collect();
        Ok(BlockErasure { alphabet, x, language, members })
    }

    fn normal(&self, u: &Word) -> Vec<Seg> {
        segments(u, &self.x)
            .into_iter()
            .map(|s| match s {
                Seg::Block(w) if self.members.contains(&w) => Seg::Block(Word::empty()),
                s => s,
            })
            .collect()
    }
}

impl RelationOracle for BlockErasure {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn relates(&self, u: &Word, v: &Word) -> bool {
        self.normal(u) == self.normal(v)
    }

    fn image(&self, u: &Word, bound: usize) -> Vec<Word> {
        let choices: Vec<Vec<Seg>> = self
            .normal(u)
            .into_iter()
            .map(|s| match &s {
                Seg::Block(w) if w.is_empty() => std::iter::once(Word::empty()).chain(self.language.iter().filter(|m| !m.is_empty()).cloned()).map(Seg::Block).collect(),
                _ => vec![s],
            })
            .collect();
        expand(&choices, bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formalism::{Formalism, Limits};
    use crate::oracle::{oracle_compare, oracle_sample, FnOracle};

    fn w(s: &str) -> Word {
        Word::parse(s)
    }

    #[test]
    fn block_segments() {
        let x = Alphabet::new(["a", "b"]).unwrap();
        assert_eq!(segments(&w("llabrr"), &x), vec![Seg::Letter(Symbol::new("l")), Seg::Block(w("ab")), Seg::Letter(Symbol::new("r"))]);
        assert_eq!(segments(&w("lr"), &x), vec![Seg::Block(Word::empty())]);
    }

    fn swap_ab() -> RelationSample {
        RelationSample::from_words(Alphabet::new(["a", "b"]).unwrap(), 4, [(w("ab"), w("ba"))]).unwrap()
    }

    #[test]
    fn congruence_image_matches_brute_force() {
        let o = BlockCongruence::new(&swap_ab()).unwrap();
        assert!(o.relates(&w("labr"), &w("lbar")));
        assert!(o.relates(&w("labrlabr"), &w("lbarlbar")));
        assert!(!o.relates(&w("labr"), &w("labl")));
        let brute = FnOracle::new(o.alphabet().clone(), |u: &Word, v: &Word| o.relates(u, v));
        let s = oracle_sample(&brute, 4).unwrap();
        assert!(oracle_compare(&s, &o).unwrap().equal());
    }

    #[test]
    fn erasure_image_matches_brute_force() {
        let o = BlockErasure::new(Alphabet::new(["a", "b"]).unwrap(), vec![w("ab")]).unwrap();
        assert!(o.relates(&w("labr"), &w("lr")));
        assert!(!o.relates(&w("lbar"), &w("lr")));
        let brute = FnOracle::new(o.alphabet().clone(), |u: &Word, v: &Word| o.relates(u, v));
        let s = oracle_sample(&brute, 4).unwrap();
        assert!(oracle_compare(&s, &o).unwrap().equal());
    }

    #[test]
    fn two_tape_word_problem_of_swap() {
        let k = Object::parse(Formalism::ContextFree, "alphabet: a b\nstart: S\nS -> (a,b) (b,a)\n").unwrap();
        let wp = monoid_two_tape_wp(&k).unwrap();
        let (s, complete) = wp.sample(5, Limits::for_bound(5)).unwrap();
        assert!(complete);
        let o = BlockCongruence::new(&k.sample(5, Limits::for_bound(5)).unwrap().0).unwrap();
        let d = oracle_compare(&s, &o).unwrap();
        assert!(d.equal(), "{d}");
    }

    #[test]
    fn unfolded_word_problem_of_ab() {
        let g = Object::parse(Formalism::ContextFree, "alphabet: a b\nstart: S\nS -> a b\n").unwrap();
        let wp = monoid_unfolded_wp_indexed(&g).unwrap();
        let (s, _) = wp.sample(5, Limits::for_bound(5)).unwrap();
        assert!(s.contains(&w("labr"), &w("lr")));
        assert!(s.contains(&w("lr"), &w("labr")));
        let o = BlockErasure::new(Alphabet::new(["a", "b"]).unwrap(), vec![w("ab")]).unwrap();
        let d = oracle_compare(&s, &o).unwrap();
        assert!(d.equal(), "{d}");
    }

    #[test]
    fn marker_clash() {
        let g = Object::parse(Formalism::ContextFree, "alphabet: a l\nstart: S\nS -> a l\n").unwrap();
        assert_eq!(monoid_unfolded_wp_indexed(&g), Err(Error::AlphabetClash("l".into())));
    }
}
