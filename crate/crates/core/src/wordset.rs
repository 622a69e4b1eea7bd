//! Enumerated word sets and their reading as relation samples.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::budget::{Budget, LetterTable};
use crate::error::{Error, Result};
use crate::exec;
use crate::packed::{Codec, Packed};
use crate::sample::RelationSample;
use crate::symbol::{Alphabet, Symbol};
use crate::word::{write_symbols, Letter};

/// How a language encodes a relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Viewpoint {
    /// Pair-words read through the componentwise projection.
    TwoTape,
    /// Words `u # v^rev`.
    Unfolded,
}

impl Viewpoint {
    pub fn budget(&self, bound: usize) -> Budget {
        match self {
            Viewpoint::TwoTape => Budget::TwoTape(bound),
            Viewpoint::Unfolded => Budget::Unfolded(bound),
        }
    }
}

impl fmt::Display for Viewpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Viewpoint::TwoTape => "two-tape",
            Viewpoint::Unfolded => "unfolded",
        })
    }
}

impl std::str::FromStr for Viewpoint {
    type Err = Error;
    fn from_str(s: &str) -> Result<Viewpoint> {
        match s {
            "two-tape" => Ok(Viewpoint::TwoTape),
            "unfolded" => Ok(Viewpoint::Unfolded),
            _ => Err(Error::Invalid(format!("unknown viewpoint `{s}`"))),
        }
    }
}

/// Symbols of `X` mentioned by a set of letters.
pub fn base_alphabet<'a>(letters: impl IntoIterator<Item = &'a Letter>) -> Alphabet {
    let mut syms = Vec::new();
    for l in letters {
        match l {
            Letter::Sym(s) if s.is_hash() => {}
            Letter::Sym(s) => syms.push(*s),
            Letter::Pair(p) => syms.extend(p.left().into_iter().chain(p.right())),
        }
    }
    Alphabet::new(syms).expect("letters never contain reserved symbols")
}

/// A sorted set of packed words together with their letter table.
#[derive(Clone, Debug)]
pub struct WordSet {
    pub table: LetterTable,
    pub words: Vec<Packed>,
    /// False when the enumeration was cut off by a derivation cap.
    pub complete: bool,
}

impl WordSet {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn budget(&self) -> Budget {
        self.table.budget()
    }

    pub fn letter_words(&self) -> Vec<Vec<Letter>> {
        self.words.iter().map(|w| self.table.decode(*w)).collect()
    }

    pub fn contains(&self, word: &[Letter]) -> bool {
        match self.table.encode(word) {
            Ok(Some((w, _))) => self.words.binary_search(&w).is_ok(),
            _ => false,
        }
    }

    /// Words rendered as strings, in canonical order.
    pub fn strings(&self) -> Vec<String> {
        self.letter_words()
            .iter()
            .map(|w| {
                let names: Vec<String> = w.iter().map(|l| l.to_string()).collect();
                let mut s = String::new();
                write_symbols(&mut s, names.iter().map(String::as_str)).expect("string write");
                s
            })
            .collect()
    }

    /// Reads the words as a relation at the budget's bound.
    pub fn to_sample(&self, view: Viewpoint) -> Result<RelationSample> {
        let alphabet = base_alphabet(self.table.letters());
        let bound = self.budget().bound();
        let target = Codec::for_letters(alphabet.len());
        target.check_capacity(bound)?;
        let id = |s: Option<Symbol>| s.map_or(0, |s| alphabet.index_of(s).expect("symbol in base alphabet") as u32 + 1);
        let codec = *self.table.codec();
        let pairs = match view {
            Viewpoint::TwoTape => {
                let mut map = vec![(0u32, 0u32)];
                for l in self.table.letters() {
                    let p = l.as_pair().ok_or_else(|| Error::Invalid(format!("letter `{l}` is not a pair letter")))?;
                    map.push((id(p.left()), id(p.right())));
                }
                exec::filter_map(&self.words, |&w| {
                    let (mut u, mut v) = (Vec::new(), Vec::new());
                    for i in 0..codec.len(w) {
                        let (a, b) = map[codec.get(w, i) as usize];
                        if a != 0 {
                            u.push(a);
                        }
                        if b != 0 {
                            v.push(b);
                        }
                    }
                    (u.len() <= bound && v.len() <= bound).then(|| (target.encode(&u), target.encode(&v)))
                })
            }
            Viewpoint::Unfolded => {
                let mut map = vec![0u32];
                for l in self.table.letters() {
                    let s = l.as_sym().ok_or_else(|| Error::Invalid(format!("pair letter `{l}` in an unfolded word")))?;
                    map.push(if s.is_hash() { u32::MAX } else { id(Some(s)) });
                }
                exec::filter_map(&self.words, |&w| {
                    let (mut u, mut v, mut seen) = (Vec::new(), Vec::new(), 0);
                    for i in 0..codec.len(w) {
                        match map[codec.get(w, i) as usize] {
                            u32::MAX => seen += 1,
                            a if seen == 0 => u.push(a),
                            a => v.push(a),
                        }
                    }
                    v.reverse();
                    (seen == 1 && u.len() <= bound && v.len() <= bound).then(|| (target.encode(&u), target.encode(&v)))
                })
            }
        };
        RelationSample::from_packed(alphabet, bound, pairs)
    }
}
