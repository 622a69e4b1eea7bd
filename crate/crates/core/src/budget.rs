//! Monotone size budgets used to bound every enumeration.

use crate::error::{Error, Result};
use crate::packed::{Codec, Packed};
use crate::word::Letter;

/// How a generated word is measured against the bound `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Budget {
    /// Plain words of length at most `n`.
    Length(usize),
    /// Pair-words whose projections both have length at most `n`.
    TwoTape(usize),
    /// Words `u # w` with `|u|, |w| <= n`.
    Unfolded(usize),
}

/// Size of a subword. For unfolded budgets, `left` is the length before
/// the `#` (or the whole length if there is none) and `right` the length after.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Measure {
    pub left: u16,
    pub right: u16,
    pub hash: bool,
}

impl Budget {
    pub fn bound(&self) -> usize {
        match *self {
            Budget::Length(n) | Budget::TwoTape(n) | Budget::Unfolded(n) => n,
        }
    }

    /// Longest word the budget can admit.
    pub fn max_len(&self) -> usize {
        match *self {
            Budget::Length(n) => n,
            Budget::TwoTape(n) => 2 * n,
            Budget::Unfolded(n) => 2 * n + 1,
        }
    }

    pub fn letter(&self, l: &Letter) -> Result<Measure> {
        match (self, l) {
            (Budget::Length(_), _) => Ok(Measure { left: 1, ..Measure::default() }),
            (Budget::TwoTape(_), Letter::Pair(p)) => Ok(Measure {
                left: p.left().is_some() as u16,
                right: p.right().is_some() as u16,
                hash: false,
            }),
            (Budget::Unfolded(_), Letter::Sym(s)) if s.is_hash() => Ok(Measure { hash: true, ..Measure::default() }),
            (Budget::Unfolded(_), Letter::Sym(_)) => Ok(Measure { left: 1, ..Measure::default() }),
            (Budget::TwoTape(_), Letter::Sym(s)) => Err(Error::Invalid(format!("letter `{s}` is not a pair letter"))),
            (Budget::Unfolded(_), Letter::Pair(p)) => Err(Error::Invalid(format!("pair letter `{p}` in an unfolded word"))),
        }
    }

    /// Measure of a concatenation, or `None` when it exceeds the budget.
    #[inline]
    pub fn join(&self, x: Measure, y: Measure) -> Option<Measure> {
        let n = self.bound() as u16;
        let m = match self {
            Budget::Length(_) | Budget::TwoTape(_) => Measure { left: x.left + y.left, right: x.right + y.right, hash: false },
            Budget::Unfolded(_) => match (x.hash, y.hash) {
                (false, false) => Measure { left: x.left + y.left, right: 0, hash: false },
                (true, false) => Measure { left: x.left, right: x.right + y.left, hash: true },
                (false, true) => Measure { left: x.left + y.left, right: y.right, hash: true },
                (true, true) => return None,
            },
        };
        (m.left <= n && m.right <= n).then_some(m)
    }

    pub fn admits(&self, m: Measure) -> bool {
        let n = self.bound() as u16;
        m.left <= n && m.right <= n
    }

    /// True for complete words: unfolded words must contain their `#`.
    pub fn accepts_final(&self, m: Measure) -> bool {
        self.admits(m) && (!matches!(self, Budget::Unfolded(_)) || m.hash)
    }
}

/// A sorted set of letters with dense ids, a codec and per-letter measures.
#[derive(Clone, Debug)]
pub struct LetterTable {
    letters: Vec<Letter>,
    codec: Codec,
    measures: Vec<Measure>,
    budget: Budget,
}

impl LetterTable {
    pub fn new(letters: impl IntoIterator<Item = Letter>, budget: Budget) -> Result<LetterTable> {
        let mut letters: Vec<Letter> = letters.into_iter().collect();
        letters.sort();
        letters.dedup();
        let codec = Codec::for_letters(letters.len());
        codec.check_capacity(budget.max_len())?;
        let mut measures = vec![Measure::default()];
        for l in &letters {
            measures.push(budget.letter(l)?);
        }
        Ok(LetterTable { letters, codec, measures, budget })
    }

    pub fn codec(&self) -> &Codec {
        &self.codec
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn id(&self, l: &Letter) -> Option<u32> {
        self.letters.binary_search(l).ok().map(|i| i as u32 + 1)
    }

    pub fn letter(&self, id: u32) -> Letter {
        self.letters[id as usize - 1]
    }

    pub fn measure_id(&self, id: u32) -> Measure {
        self.measures[id as usize]
    }

    /// Packs a letter string; `None` if it already exceeds the budget.
    pub fn encode(&self, word: &[Letter]) -> Result<Option<(Packed, Measure)>> {
        let mut m = Measure::default();
        let mut ids = Vec::with_capacity(word.len());
        for l in word {
            let id = self.id(l).ok_or_else(|| Error::Invalid(format!("letter `{l}` is not in the table")))?;
            match self.budget.join(m, self.measure_id(id)) {
                Some(next) => m = next,
                None => return Ok(None),
            }
            ids.push(id);
        }
        Ok(Some((self.codec.encode(&ids), m)))
    }

    pub fn decode(&self, w: Packed) -> Vec<Letter> {
        self.codec.decode(w).into_iter().map(|id| self.letter(id)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(left: u16, right: u16, hash: bool) -> Measure {
        Measure { left, right, hash }
    }

    #[test]
    fn unfolded_join_rules() {
        let b = Budget::Unfolded(2);
        assert_eq!(b.join(m(1, 0, false), m(0, 1, true)), Some(m(1, 1, true)));
        assert_eq!(b.join(m(2, 0, false), m(1, 0, false)), None);
        assert_eq!(b.join(m(0, 0, true), m(0, 0, true)), None);
        assert!(!b.accepts_final(m(1, 0, false)));
    }

    #[test]
    fn two_tape_measures_sides() {
        let b = Budget::TwoTape(1);
        let l = Letter::pair(Some("a".into()), None).unwrap();
        assert_eq!(b.letter(&l).unwrap(), m(1, 0, false));
        assert!(b.letter(&Letter::sym("a")).is_err());
        assert_eq!(b.join(m(1, 0, false), m(1, 0, false)), None);
    }
}
