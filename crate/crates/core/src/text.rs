//! Shared pieces of the line-oriented text formats.

use crate::error::{Error, Result};
use crate::symbol::{Symbol, EPS};
use crate::word::Letter;

/// A non-blank source line with comments removed.
#[derive(Clone, Debug)]
pub struct Line {
    pub no: usize,
    pub text: String,
}

/// Header lines (`key: value`) and the remaining body lines.
#[derive(Clone, Debug, Default)]
pub struct Document {
    pub headers: Vec<(String, String, usize)>,
    pub body: Vec<Line>,
}

impl Document {
    /// Splits `src`; a line is a header when it starts with one of `keys`
    /// followed by `:`.
    pub fn parse(src: &str, keys: &[&str]) -> Document {
        let mut doc = Document::default();
        for (i, raw) in src.lines().enumerate() {
            let text = raw.split("//").next().unwrap_or("").trim();
            if text.is_empty() {
                continue;
            }
            let header = text.split_once(':').filter(|(k, _)| keys.iter().any(|key| k.trim() == *key || k.trim().starts_with(&format!("{key} "))));
            match header {
                Some((k, v)) => doc.headers.push((k.trim().to_string(), v.trim().to_string(), i + 1)),
                None => doc.body.push(Line { no: i + 1, text: text.to_string() }),
            }
        }
        doc
    }

    pub fn get(&self, key: &str) -> Option<(&str, usize)> {
        self.headers.iter().find(|(k, _, _)| k == key).map(|(_, v, l)| (v.as_str(), *l))
    }

    pub fn require(&self, key: &str) -> Result<(&str, usize)> {
        self.get(key).ok_or_else(|| Error::parse(0, format!("missing `{key}:` header")))
    }

    pub fn list(&self, key: &str) -> Vec<Symbol> {
        self.get(key).map(|(v, _)| v.split_whitespace().map(Symbol::new).collect()).unwrap_or_default()
    }
}

/// Greedy longest-match tokenizer over a fixed vocabulary.
#[derive(Clone, Debug, Default)]
pub struct Lexicon {
    words: Vec<String>,
}

impl Lexicon {
    pub fn new<I: IntoIterator<Item = S>, S: AsRef<str>>(words: I) -> Lexicon {
        let mut words: Vec<String> = words.into_iter().map(|s| s.as_ref().to_string()).collect();
        words.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        words.dedup();
        Lexicon { words }
    }

    pub fn longest<'a>(&self, text: &'a str) -> Option<&'a str> {
        self.words.iter().find(|w| text.starts_with(w.as_str())).map(|w| &text[..w.len()])
    }

    /// Whitespace-separated tokens, each split greedily unless it is itself
    /// a vocabulary word.
    pub fn split(&self, text: &str, line: usize) -> Result<Vec<String>> {
        let mut out = Vec::new();
        for chunk in text.split_whitespace() {
            if chunk == EPS {
                continue;
            }
            let mut rest = chunk;
            while !rest.is_empty() {
                let w = self.longest(rest).ok_or_else(|| Error::parse(line, format!("cannot read `{rest}`")))?;
                out.push(w.to_string());
                rest = &rest[w.len()..];
            }
        }
        Ok(out)
    }
}

/// Parses `(a,.)`, `(.,b)` or `(a,b)`; `allowed` checks each component.
pub fn parse_pair(tok: &str, line: usize, allowed: &dyn Fn(Symbol) -> bool) -> Result<Letter> {
    let inner = tok
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| Error::parse(line, format!("bad pair letter `{tok}`")))?;
    let (l, r) = inner.split_once(',').ok_or_else(|| Error::parse(line, format!("bad pair letter `{tok}`")))?;
    let side = |s: &str| -> Result<Option<Symbol>> {
        let s = s.trim();
        if s == "." || s == EPS {
            return Ok(None);
        }
        let sym = Symbol::new(s);
        if !allowed(sym) {
            return Err(Error::parse(line, format!("`{s}` is not in the alphabet")));
        }
        Ok(Some(sym))
    };
    Letter::pair(side(l)?, side(r)?).map_err(|e| Error::parse(line, e.to_string()))
}

/// One right-hand-side token of a grammar production.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RhsToken {
    Term(Letter),
    Var { name: Symbol, push: Vec<Symbol>, linear: bool },
}

/// Reads a right-hand side such as `a ^B+f (x,.) C` or `xBC`.
pub fn parse_rhs(text: &str, line: usize, terms: &Lexicon, vars: &Lexicon, flags: &Lexicon, in_alphabet: &dyn Fn(Symbol) -> bool) -> Result<Vec<RhsToken>> {
    let mut out = Vec::new();
    for chunk in text.split_whitespace() {
        if chunk == EPS {
            continue;
        }
        let mut rest = chunk;
        let mut linear = false;
        while !rest.is_empty() {
            if let Some(r) = rest.strip_prefix('^') {
                linear = true;
                rest = r;
                continue;
            }
            if rest.starts_with('(') {
                let end = rest.find(')').ok_or_else(|| Error::parse(line, format!("unclosed pair in `{chunk}`")))?;
                out.push(RhsToken::Term(parse_pair(&rest[..=end], line, in_alphabet)?));
                rest = &rest[end + 1..];
                continue;
            }
            if let Some(r) = rest.strip_prefix('+') {
                let f = flags.longest(r).ok_or_else(|| Error::parse(line, format!("unknown flag in `{chunk}`")))?;
                match out.last_mut() {
                    Some(RhsToken::Var { push, .. }) => push.push(Symbol::new(f)),
                    _ => return Err(Error::parse(line, "flags can only be pushed on nonterminals")),
                }
                rest = &r[f.len()..];
                continue;
            }
            let v = vars.longest(rest);
            let t = terms.longest(rest);
            match (v, t) {
                (Some(v), t) if t.map_or(true, |t| v.len() >= t.len()) => {
                    out.push(RhsToken::Var { name: Symbol::new(v), push: Vec::new(), linear });
                    linear = false;
                    rest = &rest[v.len()..];
                }
                (_, Some(t)) => {
                    if linear {
                        return Err(Error::parse(line, "`^` must precede a nonterminal"));
                    }
                    out.push(RhsToken::Term(Letter::sym(t)));
                    rest = &rest[t.len()..];
                }
                _ => return Err(Error::parse(line, format!("cannot read `{rest}`"))),
            }
        }
    }
    Ok(out)
}
