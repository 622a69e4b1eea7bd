//! Finite, length-bounded relation samples and their comparison.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec;
use crate::packed::{Codec, Packed};
use crate::symbol::{Alphabet, Symbol};
use crate::word::{write_symbols, Word};

/// The pairs of a relation whose components both have length `<= bound`.
#[derive(Clone, PartialEq, Eq)]
pub struct RelationSample {
    alphabet: Alphabet,
    codec: Codec,
    bound: usize,
    pairs: Vec<(Packed, Packed)>,
}

impl RelationSample {
    pub fn empty(alphabet: Alphabet, bound: usize) -> Result<RelationSample> {
        let codec = Codec::for_letters(alphabet.len());
        codec.check_capacity(bound)?;
        Ok(RelationSample { alphabet, codec, bound, pairs: Vec::new() })
    }

    /// Builds a sample, silently dropping pairs that exceed the bound.
    pub fn from_words<I>(alphabet: Alphabet, bound: usize, pairs: I) -> Result<RelationSample>
    where
        I: IntoIterator<Item = (Word, Word)>,
    {
        let mut s = RelationSample::empty(alphabet, bound)?;
        let mut packed = Vec::new();
        for (u, v) in pairs {
            if u.len() <= bound && v.len() <= bound {
                packed.push((s.encode(&u)?, s.encode(&v)?));
            }
        }
        s.set_pairs(packed);
        Ok(s)
    }

    /// Builds a sample from words already packed with this alphabet's codec.
    pub fn from_packed(alphabet: Alphabet, bound: usize, pairs: Vec<(Packed, Packed)>) -> Result<RelationSample> {
        let mut s = RelationSample::empty(alphabet, bound)?;
        s.set_pairs(pairs);
        Ok(s)
    }

    fn set_pairs(&mut self, mut pairs: Vec<(Packed, Packed)>) {
        exec::sort_dedup(&mut pairs);
        self.pairs = pairs;
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn codec(&self) -> &Codec {
        &self.codec
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn packed_pairs(&self) -> &[(Packed, Packed)] {
        &self.pairs
    }

    pub fn encode(&self, w: &Word) -> Result<Packed> {
        let mut ids = Vec::with_capacity(w.len());
        for s in &w.0 {
            let i = self
                .alphabet
                .index_of(*s)
                .ok_or_else(|| Error::MalformedWord(format!("symbol `{s}` is not in the alphabet {}", self.alphabet)))?;
            ids.push(i as u32 + 1);
        }
        self.codec.check_capacity(ids.len())?;
        Ok(self.codec.encode(&ids))
    }

    pub fn decode(&self, w: Packed) -> Word {
        Word(self.codec.decode(w).into_iter().map(|id| self.alphabet.symbols()[id as usize - 1]).collect())
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Word, Word)> + '_ {
        self.pairs.iter().map(|&(u, v)| (self.decode(u), self.decode(v)))
    }

    pub fn contains(&self, u: &Word, v: &Word) -> bool {
        match (self.encode(u), self.encode(v)) {
            (Ok(pu), Ok(pv)) => self.pairs.binary_search(&(pu, pv)).is_ok(),
            _ => false,
        }
    }

    /// The same pairs encoded over a larger alphabet.
    pub fn reencode(&self, alphabet: &Alphabet) -> Result<RelationSample> {
        if *alphabet == self.alphabet {
            return Ok(self.clone());
        }
        let mut map = vec![0u32];
        for s in self.alphabet.symbols() {
            let id = alphabet.index_of(*s).ok_or_else(|| Error::AlphabetClash(s.to_string()))?;
            map.push(id as u32 + 1);
        }
        let target = Codec::for_letters(alphabet.len());
        target.check_capacity(self.bound)?;
        let codec = self.codec;
        let pairs = exec::filter_map(&self.pairs, |&(u, v)| Some((codec.map_into(u, &map, &target), codec.map_into(v, &map, &target))));
        RelationSample::from_packed(alphabet.clone(), self.bound, pairs)
    }

    /// Pairs satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(&Word, &Word) -> bool + Sync + Send) -> RelationSample {
        let pairs = exec::filter_map(&self.pairs, |&(u, v)| keep(&self.decode(u), &self.decode(v)).then_some((u, v)));
        RelationSample { pairs, ..self.clone_empty() }
    }

    /// Pairs whose components both have length `<= bound`.
    pub fn truncate(&self, bound: usize) -> RelationSample {
        let c = self.codec;
        let pairs = self.pairs.iter().copied().filter(|&(u, v)| c.len(u) <= bound && c.len(v) <= bound).collect();
        RelationSample { pairs, bound: bound.min(self.bound), ..self.clone_empty() }
    }

    fn clone_empty(&self) -> RelationSample {
        RelationSample { alphabet: self.alphabet.clone(), codec: self.codec, bound: self.bound, pairs: Vec::new() }
    }

    /// Line-oriented `u TAB v` text, ε written as the empty string.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.pairs() {
            out.push_str(&format!("{u}\t{v}\n"));
        }
        out
    }

    pub fn to_structured(&self) -> SampleExport {
        SampleExport {
            bound: self.bound,
            alphabet: self.alphabet.symbols().iter().map(|s| s.to_string()).collect(),
            size: self.len(),
            pairs: self.pairs().map(|(u, v)| [u.to_string(), v.to_string()]).collect(),
        }
    }
}

impl fmt::Debug for RelationSample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RelationSample")
            .field("bound", &self.bound)
            .field("alphabet", &self.alphabet)
            .field("pairs", &self.pairs().collect::<Vec<_>>())
            .finish()
    }
}

/// Structured export of a sample.
#[derive(Debug, Serialize)]
pub struct SampleExport {
    pub bound: usize,
    pub alphabet: Vec<String>,
    pub size: usize,
    pub pairs: Vec<[String; 2]>,
}

/// Result of comparing two samples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleDiff {
    pub bound: usize,
    pub left_size: usize,
    pub right_size: usize,
    /// Pairs only in the first sample, sorted.
    pub only_left: Vec<(String, String)>,
    /// Pairs only in the second sample, sorted.
    pub only_right: Vec<(String, String)>,
}

impl SampleDiff {
    pub fn equal(&self) -> bool {
        self.only_left.is_empty() && self.only_right.is_empty()
    }
}

impl fmt::Display for SampleDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.equal() {
            return write!(f, "equal at bound {} ({} pairs)", self.bound, self.left_size);
        }
        writeln!(f, "unequal at bound {} ({} vs {} pairs)", self.bound, self.left_size, self.right_size)?;
        for (u, v) in self.only_left.iter().take(20) {
            writeln!(f, "  only in first:  ({u}, {v})")?;
        }
        for (u, v) in self.only_right.iter().take(20) {
            writeln!(f, "  only in second: ({u}, {v})")?;
        }
        Ok(())
    }
}

fn show(w: &Word) -> String {
    let mut s = String::new();
    write_symbols(&mut s, w.0.iter().map(Symbol::as_str)).expect("string write");
    if s.is_empty() {
        "ε".into()
    } else {
        s
    }
}

/// Compares two samples of the same bound over the union of their alphabets.
pub fn sample_equal(a: &RelationSample, b: &RelationSample) -> Result<SampleDiff> {
    if a.bound != b.bound {
        return Err(Error::BoundMismatch(a.bound, b.bound));
    }
    let alphabet = a.alphabet.union(&b.alphabet);
    let a = a.reencode(&alphabet)?;
    let b = b.reencode(&alphabet)?;
    let (mut only_left, mut only_right) = (Vec::new(), Vec::new());
    let (mut i, mut j) = (0, 0);
    while i < a.pairs.len() || j < b.pairs.len() {
        match (a.pairs.get(i), b.pairs.get(j)) {
            (Some(x), Some(y)) if x == y => {
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                only_left.push(*x);
                i += 1;
            }
            (Some(x), None) => {
                only_left.push(*x);
                i += 1;
            }
            (_, Some(y)) => {
                only_right.push(*y);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    let render = |s: &RelationSample, v: Vec<(Packed, Packed)>| v.into_iter().map(|(u, w)| (show(&s.decode(u)), show(&s.decode(w)))).collect();
    Ok(SampleDiff {
        bound: a.bound,
        left_size: a.len(),
        right_size: b.len(),
        only_left: render(&a, only_left),
        only_right: render(&b, only_right),
    })
}

/// Anything that decides membership of plain words.
pub trait WordFilter: Sync {
    fn accepts(&self, w: &Word) -> bool;
}

impl<F: Fn(&Word) -> bool + Sync> WordFilter for F {
    fn accepts(&self, w: &Word) -> bool {
        self(w)
    }
}

/// Keeps the pairs whose components lie in `first` and `second` respectively.
pub fn sample_restrict(s: &RelationSample, first: &dyn WordFilter, second: &dyn WordFilter) -> RelationSample {
    s.filter(|u, v| first.accepts(u) && second.accepts(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    fn w(s: &str) -> Word {
        Word::parse(s)
    }

    #[test]
    fn equal_and_witnesses() {
        let s = RelationSample::from_words(ab(), 1, [(w("a"), w("a"))]).unwrap();
        let e = RelationSample::empty(ab(), 1).unwrap();
        assert!(sample_equal(&s, &s).unwrap().equal());
        let d = sample_equal(&s, &e).unwrap();
        assert!(!d.equal());
        assert_eq!(d.only_left, vec![("a".to_string(), "a".to_string())]);
        assert!(matches!(sample_equal(&s, &RelationSample::empty(ab(), 2).unwrap()), Err(Error::BoundMismatch(1, 2))));
    }

    #[test]
    fn union_alphabet_comparison() {
        let x = RelationSample::from_words(Alphabet::new(["a"]).unwrap(), 2, [(w("a"), w("aa"))]).unwrap();
        let y = RelationSample::from_words(ab(), 2, [(w("a"), w("aa"))]).unwrap();
        assert!(sample_equal(&x, &y).unwrap().equal());
    }

    #[test]
    fn restrict_to_unary() {
        let s = RelationSample::from_words(ab(), 2, [(w("ab"), w("ba")), (w("a"), w("a"))]).unwrap();
        let only_a = |x: &Word| x.0.iter().all(|c| c.as_str() == "a");
        let r = sample_restrict(&s, &only_a, &only_a);
        assert_eq!(r.pairs().collect::<Vec<_>>(), vec![(w("a"), w("a"))]);
    }

    #[test]
    fn bound_drops_long_pairs() {
        let s = RelationSample::from_words(ab(), 1, [(w("ab"), w("a")), (w("b"), w(""))]).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s.contains(&w("b"), &w("")));
        assert_eq!(s.to_tsv(), "b\t\n");
    }
}
