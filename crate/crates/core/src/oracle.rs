//! Reference deciders for relations and exact comparison against samples.

use crate::error::Result;
use crate::exec;
use crate::packed::{Codec, Packed};
use crate::sample::{RelationSample, SampleDiff};
use crate::symbol::{Alphabet, Symbol};
use crate::word::{write_symbols, Word};

/// A decision procedure for a binary relation over an alphabet.
pub trait RelationOracle: Sync {
    fn alphabet(&self) -> &Alphabet;

    fn relates(&self, u: &Word, v: &Word) -> bool;

    /// Every `v` of length at most `bound` related to `u`. The default scans
    /// all words; deciders with structure override it.
    fn image(&self, u: &Word, bound: usize) -> Vec<Word> {
        all_words(self.alphabet(), bound).into_iter().filter(|v| self.relates(u, v)).collect()
    }
}

/// All words of length at most `bound`, in lexicographic order.
pub fn all_words(alphabet: &Alphabet, bound: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(a: &[Symbol], bound: usize, cur: &mut Vec<Symbol>, out: &mut Vec<Word>) {
        out.push(Word(cur.clone()));
        if cur.len() == bound {
            return;
        }
        for s in a {
            cur.push(*s);
            go(a, bound, cur, out);
            cur.pop();
        }
    }
    go(alphabet.symbols(), bound, &mut cur, &mut out);
    out
}

/// Calls `visit` on every packed word of length at most `bound` in
/// increasing order, in batches of at most `batch` words.
fn for_each_batch(codec: Codec, letters: u32, bound: usize, batch: usize, visit: &mut dyn FnMut(&[(Packed, usize)]) -> Result<()>) -> Result<()> {
    let mut buf = Vec::with_capacity(batch);
    let mut stack: Vec<(Packed, usize)> = vec![(codec.empty(), 0)];
    while let Some((w, len)) = stack.pop() {
        buf.push((w, len));
        if buf.len() == batch {
            visit(&buf)?;
            buf.clear();
        }
        if len < bound {
            for id in (1..=letters).rev() {
                stack.push((codec.concat_len(w, len, codec.single(id)), len + 1));
            }
        }
    }
    if !buf.is_empty() {
        visit(&buf)?;
    }
    Ok(())
}

/// The oracle's relation restricted to components of length `<= bound`.
pub fn oracle_sample(o: &dyn RelationOracle, bound: usize) -> Result<RelationSample> {
    let empty = RelationSample::empty(o.alphabet().clone(), bound)?;
    let codec = *empty.codec();
    let mut pairs = Vec::new();
    for_each_batch(codec, o.alphabet().len() as u32, bound, 4096, &mut |batch| {
        let found = exec::flat_map(batch, |&(u, _)| {
            let uw = empty.decode(u);
            o.image(&uw, bound).iter().map(|v| (u, empty.encode(v).expect("word over the alphabet"))).collect()
        });
        pairs.extend(found);
        Ok(())
    })?;
    RelationSample::from_packed(o.alphabet().clone(), bound, pairs)
}

const WITNESSES: usize = 100;

fn show(w: &Word) -> String {
    let mut s = String::new();
    write_symbols(&mut s, w.0.iter().map(Symbol::as_str)).expect("string write");
    if s.is_empty() {
        "ε".into()
    } else {
        s
    }
}

/// Compares a sample with the oracle at the sample's bound without
/// materialising the oracle's side. At most a hundred witnesses are kept
/// per side; the sizes are exact.
pub fn oracle_compare(s: &RelationSample, o: &dyn RelationOracle) -> Result<SampleDiff> {
    let bound = s.bound();
    let s = s.reencode(&s.alphabet().union(o.alphabet()))?;
    let codec = *s.codec();
    let pairs = s.packed_pairs();
    let mut i = 0;
    let mut oracle_size = 0;
    let (mut only_left, mut only_right) = (Vec::new(), Vec::new());
    let render = |u: Packed, v: Packed| (show(&s.decode(u)), show(&s.decode(v)));
    for_each_batch(codec, s.alphabet().len() as u32, bound, 4096, &mut |batch| {
        let images: Vec<Vec<Packed>> = exec::flat_map(batch, |&(u, _)| {
            let uw = s.decode(u);
            let mut img: Vec<Packed> = o.image(&uw, bound).iter().filter_map(|v| s.encode(v).ok()).collect();
            img.sort_unstable();
            img.dedup();
            vec![img]
        });
        for (&(u, _), img) in batch.iter().zip(images) {
            oracle_size += img.len();
            while i < pairs.len() && pairs[i].0 < u {
                if only_left.len() < WITNESSES {
                    only_left.push(render(pairs[i].0, pairs[i].1));
                }
                i += 1;
            }
            let mut j = 0;
            while j < img.len() || (i < pairs.len() && pairs[i].0 == u) {
                let mine = (i < pairs.len() && pairs[i].0 == u).then(|| pairs[i].1);
                match (mine, img.get(j)) {
                    (Some(a), Some(b)) if a == *b => {
                        i += 1;
                        j += 1;
                    }
                    (Some(a), Some(b)) if a < *b => {
                        if only_left.len() < WITNESSES {
                            only_left.push(render(u, a));
                        }
                        i += 1;
                    }
                    (Some(a), None) => {
                        if only_left.len() < WITNESSES {
                            only_left.push(render(u, a));
                        }
                        i += 1;
                    }
                    (_, Some(b)) => {
                        if only_right.len() < WITNESSES {
                            only_right.push(render(u, *b));
                        }
                        j += 1;
                    }
                    (None, None) => unreachable!(),
                }
            }
        }
        Ok(())
    })?;
    for p in &pairs[i..] {
        if only_left.len() < WITNESSES {
            only_left.push(render(p.0, p.1));
        }
    }
    Ok(SampleDiff { bound, left_size: pairs.len(), right_size: oracle_size, only_left, only_right })
}

/// An oracle given by a closure.
pub struct FnOracle<F> {
    alphabet: Alphabet,
    f: F,
}

impl<F: Fn(&Word, &Word) -> bool + Sync> FnOracle<F> {
    pub fn new(alphabet: Alphabet, f: F) -> FnOracle<F> {
        FnOracle { alphabet, f }
    }
}

impl<F: Fn(&Word, &Word) -> bool + Sync> RelationOracle for FnOracle<F> {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn relates(&self, u: &Word, v: &Word) -> bool {
        (self.f)(u, v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    #[test]
    fn lexicographic_enumeration() {
        let w: Vec<String> = all_words(&ab(), 2).iter().map(show).collect();
        assert_eq!(w, ["ε", "a", "aa", "ab", "b", "ba", "bb"]);
    }

    #[test]
    fn compare_agrees_with_materialised_sample() {
        let rev = FnOracle::new(ab(), |u: &Word, v: &Word| u.reversed() == *v);
        let s = oracle_sample(&rev, 4).unwrap();
        assert_eq!(s.len(), 31);
        let d = oracle_compare(&s, &rev).unwrap();
        assert!(d.equal(), "{d}");
        let eq = FnOracle::new(ab(), |u: &Word, v: &Word| u == v);
        let d = oracle_compare(&s, &eq).unwrap();
        assert!(!d.equal());
        assert_eq!(d.right_size, 31);
        assert!(d.only_left.contains(&("ab".into(), "ba".into())));
        assert!(d.only_right.contains(&("ab".into(), "ab".into())));
    }
}
