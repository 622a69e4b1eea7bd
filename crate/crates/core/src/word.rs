//! Letters, words over a plain alphabet, pair-words and unfolded words.

use std::fmt;

use crate::error::{Error, Result};
use crate::symbol::Symbol;

/// One component of a pair letter: a symbol or the empty word.
pub type Side = Option<Symbol>;

/// A letter of the pair alphabet; `(None, None)` is not constructible.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairLetter {
    left: Side,
    right: Side,
}

impl PairLetter {
    pub fn new(left: Side, right: Side) -> Result<PairLetter> {
        if left.is_none() && right.is_none() {
            return Err(Error::MalformedWord("(eps,eps) is not a pair letter".into()));
        }
        Ok(PairLetter { left, right })
    }

    pub fn left(&self) -> Side {
        self.left
    }

    pub fn right(&self) -> Side {
        self.right
    }

    /// True when at most one side is non-empty.
    pub fn is_split(&self) -> bool {
        self.left.is_none() || self.right.is_none()
    }
}

impl fmt::Display for PairLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |s: Side| s.map_or(".", |s| s.as_str());
        write!(f, "({},{})", side(self.left), side(self.right))
    }
}

impl fmt::Debug for PairLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A terminal letter as it appears in grammars and automata.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Sym(Symbol),
    Pair(PairLetter),
}

impl Letter {
    pub fn sym(name: &str) -> Letter {
        Letter::Sym(Symbol::new(name))
    }

    pub fn hash_mark() -> Letter {
        Letter::Sym(Symbol::hash_mark())
    }

    pub fn is_hash(&self) -> bool {
        matches!(self, Letter::Sym(s) if s.is_hash())
    }

    pub fn pair(left: Side, right: Side) -> Result<Letter> {
        PairLetter::new(left, right).map(Letter::Pair)
    }

    pub fn as_pair(&self) -> Option<PairLetter> {
        match self {
            Letter::Pair(p) => Some(*p),
            Letter::Sym(_) => None,
        }
    }

    pub fn as_sym(&self) -> Option<Symbol> {
        match self {
            Letter::Sym(s) => Some(*s),
            Letter::Pair(_) => None,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Sym(s) => write!(f, "{s}"),
            Letter::Pair(p) => write!(f, "{p}"),
        }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A word over a plain alphabet.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<Symbol>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    /// Parses single-character symbols written without separators, or
    /// whitespace-separated symbols; `eps` and the empty string are ε.
    pub fn parse(text: &str) -> Word {
        let t = text.trim();
        if t.is_empty() || t == crate::symbol::EPS {
            return Word::empty();
        }
        if t.contains(char::is_whitespace) {
            Word(t.split_whitespace().map(Symbol::new).collect())
        } else {
            Word(t.chars().map(|c| Symbol::new(&c.to_string())).collect())
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn count(&self, s: Symbol) -> usize {
        self.0.iter().filter(|&&x| x == s).count()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_symbols(f, self.0.iter().map(|s| s.as_str()))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            f.write_str("ε")
        } else {
            fmt::Display::fmt(self, f)
        }
    }
}

/// Writes symbols without separators when all are one character long.
pub(crate) fn write_symbols<'a>(f: &mut impl fmt::Write, syms: impl Iterator<Item = &'a str> + Clone) -> fmt::Result {
    let compact = syms.clone().all(|s| s.chars().count() == 1);
    for (i, s) in syms.enumerate() {
        if i > 0 && !compact {
            f.write_char(' ')?;
        }
        f.write_str(s)?;
    }
    Ok(())
}

/// A word over the pair alphabet.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Debug)]
pub struct PairWord(pub Vec<PairLetter>);

impl fmt::Display for PairWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// A word over `X ∪ {#}` with exactly one `#`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct UnfoldedWord(Vec<Symbol>);

impl UnfoldedWord {
    pub fn new(letters: Vec<Symbol>) -> Result<UnfoldedWord> {
        let hashes = letters.iter().filter(|s| s.is_hash()).count();
        if hashes != 1 {
            return Err(Error::MalformedWord(format!("expected exactly one #, found {hashes}")));
        }
        Ok(UnfoldedWord(letters))
    }

    pub fn parse(text: &str) -> Result<UnfoldedWord> {
        UnfoldedWord::new(Word::parse(text).0)
    }

    pub fn letters(&self) -> &[Symbol] {
        &self.0
    }
}

impl fmt::Display for UnfoldedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_symbols(f, self.0.iter().map(|s| s.as_str()))
    }
}

/// Componentwise concatenation of a pair-word.
pub fn pi_project(w: &PairWord) -> (Word, Word) {
    let u = w.0.iter().filter_map(|p| p.left).collect();
    let v = w.0.iter().filter_map(|p| p.right).collect();
    (Word(u), Word(v))
}

/// `u # v^rev`.
pub fn unfold(u: &Word, v: &Word) -> UnfoldedWord {
    let mut letters = u.0.clone();
    letters.push(Symbol::hash_mark());
    letters.extend(v.0.iter().rev());
    UnfoldedWord(letters)
}

/// Inverse of [`unfold`].
pub fn fold(w: &UnfoldedWord) -> (Word, Word) {
    let at = w.0.iter().position(Symbol::is_hash).expect("unfolded word has a #");
    let u = w.0[..at].to_vec();
    let v = w.0[at + 1..].iter().rev().copied().collect();
    (Word(u), Word(v))
}

/// Folds an arbitrary symbol sequence, rejecting zero or several `#`.
pub fn fold_symbols(letters: &[Symbol]) -> Result<(Word, Word)> {
    Ok(fold(&UnfoldedWord::new(letters.to_vec())?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(l: &str, r: &str) -> PairLetter {
        let side = |s: &str| if s.is_empty() { None } else { Some(Symbol::new(s)) };
        PairLetter::new(side(l), side(r)).unwrap()
    }

    #[test]
    fn projection_examples() {
        let w = PairWord(vec![p("a", ""), p("", "b")]);
        assert_eq!(pi_project(&w), (Word::parse("a"), Word::parse("b")));
        assert_eq!(pi_project(&PairWord::default()), (Word::empty(), Word::empty()));
        let w = PairWord(vec![p("x", ""), p("x", ""), p("", "x"), p("", "x")]);
        assert_eq!(pi_project(&w), (Word::parse("xx"), Word::parse("xx")));
    }

    #[test]
    fn unfold_examples() {
        assert_eq!(unfold(&Word::parse("ab"), &Word::parse("ba")).to_string(), "ab#ab");
        assert_eq!(unfold(&Word::empty(), &Word::empty()).to_string(), "#");
        assert_eq!(unfold(&Word::parse("xxx"), &Word::parse("xxxxxxxxx")).to_string(), "xxx#xxxxxxxxx");
    }

    #[test]
    fn fold_examples() {
        let w = UnfoldedWord::parse("ab#ab").unwrap();
        assert_eq!(fold(&w), (Word::parse("ab"), Word::parse("ba")));
        assert_eq!(fold(&UnfoldedWord::parse("#").unwrap()), (Word::empty(), Word::empty()));
        assert_eq!(fold(&UnfoldedWord::parse("xxxxx#xx").unwrap()), (Word::parse("xxxxx"), Word::parse("xx")));
        assert!(UnfoldedWord::parse("ab").is_err());
        assert!(UnfoldedWord::parse("a#b#").is_err());
    }

    #[test]
    fn empty_pair_letter_is_rejected() {
        assert!(PairLetter::new(None, None).is_err());
    }

    #[test]
    fn fold_unfold_exhaustive_to_six() {
        let a = Symbol::new("a");
        let b = Symbol::new("b");
        let mut words = vec![Word::empty()];
        let mut frontier = vec![Word::empty()];
        for _ in 0..6 {
            frontier = frontier
                .iter()
                .flat_map(|w| [a, b].map(|s| Word(w.0.iter().copied().chain([s]).collect())))
                .collect();
            words.extend(frontier.iter().cloned());
        }
        assert_eq!(words.len(), 127);
        for u in words.iter().step_by(3) {
            for v in &words {
                assert_eq!(fold(&unfold(u, v)), (u.clone(), v.clone()));
            }
        }
    }

    proptest! {
        #[test]
        fn projection_counts_sides(letters in prop::collection::vec((0u8..3, 0u8..3), 0..12)) {
            let side = |k: u8| match k { 0 => None, 1 => Some(Symbol::new("a")), _ => Some(Symbol::new("b")) };
            let w: Vec<PairLetter> = letters.iter().filter_map(|&(l, r)| PairLetter::new(side(l), side(r)).ok()).collect();
            let lefts = w.iter().filter(|p| p.left().is_some()).count();
            let rights = w.iter().filter(|p| p.right().is_some()).count();
            let (u, v) = pi_project(&PairWord(w.clone()));
            prop_assert_eq!(u.len(), lefts);
            prop_assert_eq!(v.len(), rights);
            prop_assert!(u.len() <= w.len() && v.len() <= w.len());
        }
    }
}
