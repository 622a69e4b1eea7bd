//! Interned atomic symbols and finite alphabets.

use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Mutex;

use once_cell::sync::Lazy;

use crate::error::{Error, Result};

static INTERNER: Lazy<Mutex<HashSet<&'static str>>> = Lazy::new(|| Mutex::new(HashSet::new()));

/// The separator between the two halves of an unfolded word.
pub const HASH: &str = "#";
/// Token used in text formats for the empty word.
pub const EPS: &str = "eps";

/// An interned, non-empty symbol name.
///
/// Equality and hashing use the interned address; ordering compares names so
/// that every sorted collection is independent of interning order.
#[derive(Clone, Copy)]
pub struct Symbol(&'static str);

impl Symbol {
    pub fn new(name: &str) -> Symbol {
        assert!(!name.is_empty(), "symbols are non-empty");
        let mut table = INTERNER.lock().expect("interner poisoned");
        if let Some(s) = table.get(name) {
            return Symbol(s);
        }
        let leaked: &'static str = Box::leak(name.to_owned().into_boxed_str());
        table.insert(leaked);
        Symbol(leaked)
    }

    pub fn hash_mark() -> Symbol {
        Symbol::new(HASH)
    }

    pub fn as_str(&self) -> &'static str {
        self.0
    }

    pub fn is_hash(&self) -> bool {
        self.0 == HASH
    }

    pub fn is_single_char(&self) -> bool {
        self.0.chars().count() == 1
    }
}

impl PartialEq for Symbol {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.0.as_ptr(), other.0.as_ptr())
    }
}

impl Eq for Symbol {}

impl Hash for Symbol {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (self.0.as_ptr() as usize).hash(state)
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        if self == other {
            std::cmp::Ordering::Equal
        } else {
            self.0.cmp(other.0)
        }
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

/// Names that cannot be alphabet symbols because the text formats give them
/// another meaning.
pub fn is_reserved(name: &str) -> bool {
    name == HASH || name == EPS || name == "." || name.contains(|c: char| c.is_whitespace() || "(),|[]^+".contains(c))
}

/// A finite ordered set of distinct symbols, never containing `#`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Alphabet {
    symbols: Vec<Symbol>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Alphabet>
    where
        I: IntoIterator<Item = S>,
        S: Into<Symbol>,
    {
        let mut v: Vec<Symbol> = symbols.into_iter().map(Into::into).collect();
        for s in &v {
            if is_reserved(s.as_str()) {
                return Err(Error::InvalidSymbol(s.to_string()));
            }
        }
        v.sort();
        v.dedup();
        Ok(Alphabet { symbols: v })
    }

    /// Parses a whitespace-separated list; a single token of one-char symbols
    /// such as `ab` is split into characters.
    pub fn parse(text: &str) -> Result<Alphabet> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() == 1 && tokens[0].chars().count() > 1 && !tokens[0].contains(',') {
            // Unambiguous only when every character is itself a legal symbol.
            let chars: Vec<String> = tokens[0].chars().map(String::from).collect();
            if chars.iter().all(|c| !is_reserved(c)) && tokens[0].chars().all(|c| c.is_alphanumeric()) && tokens[0].len() == tokens[0].chars().count() {
                return Alphabet::new(chars.iter().map(|s| s.as_str()));
            }
        }
        Alphabet::new(tokens)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.symbols.binary_search(&s).is_ok()
    }

    pub fn index_of(&self, s: Symbol) -> Option<usize> {
        self.symbols.binary_search(&s).ok()
    }

    pub fn union(&self, other: &Alphabet) -> Alphabet {
        let mut v = self.symbols.clone();
        v.extend_from_slice(&other.symbols);
        v.sort();
        v.dedup();
        Alphabet { symbols: v }
    }

    pub fn single_char(&self) -> bool {
        self.symbols.iter().all(Symbol::is_single_char)
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.symbols.iter()).finish()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self.symbols.iter().map(|s| s.as_str()).collect();
        f.write_str(&parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_is_stable() {
        let a = Symbol::new("a1");
        let b = Symbol::new(&String::from("a1"));
        assert_eq!(a, b);
        assert!(Symbol::new("a") < Symbol::new("b"));
    }

    #[test]
    fn alphabet_rejects_hash() {
        assert!(Alphabet::new(["a", "#"]).is_err());
        assert!(Alphabet::new(["eps"]).is_err());
    }

    #[test]
    fn alphabet_is_sorted_and_unique() {
        let x = Alphabet::new(["b", "a", "b"]).unwrap();
        assert_eq!(x.to_string(), "a b");
        assert_eq!(Alphabet::parse("ab").unwrap(), x);
        assert_eq!(Alphabet::parse("a1 a2").unwrap().len(), 2);
    }
}
