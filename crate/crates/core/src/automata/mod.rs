//! Finite automata, counter automata, transducers and pushdown automata.

mod counter;
mod nfa;
mod pda;
mod transducer;

pub use counter::{oca_enumerate, oca_reverse, oca_run, CounterAutomaton, CounterMode, CounterTransition};
pub use nfa::{nfa_enumerate, nfa_run, Nfa};
pub use pda::{pda_enumerate, pda_run, Acceptance, PdaTransition, PushdownAutomaton};
pub use transducer::{transducer_enumerate, Transducer};

use crate::error::{Error, Result};
use crate::symbol::{Alphabet, Symbol, EPS};
use crate::text::{parse_pair, Document, Line};
use crate::word::Letter;

/// States declared by `state NAME [initial] [final]` lines.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct States {
    pub names: Vec<Symbol>,
    pub initial: Vec<Symbol>,
    pub finals: Vec<Symbol>,
}

impl States {
    pub fn index(&self, s: Symbol) -> usize {
        self.names.iter().position(|n| *n == s).expect("declared state")
    }

    pub fn is_final(&self, s: Symbol) -> bool {
        self.finals.contains(&s)
    }

    pub fn write(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for s in &self.names {
            write!(f, "state {s}")?;
            if self.initial.contains(s) {
                write!(f, " initial")?;
            }
            if self.is_final(*s) {
                write!(f, " final")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Reads the `state` lines and returns the `trans` lines split into tokens.
pub(crate) fn read_states(doc: &Document) -> Result<(States, Vec<(usize, Vec<String>)>)> {
    let mut st = States::default();
    let mut trans = Vec::new();
    for Line { no, text } in &doc.body {
        let toks: Vec<String> = text.split_whitespace().map(String::from).collect();
        match toks[0].as_str() {
            "state" => {
                let name = toks.get(1).ok_or_else(|| Error::parse(*no, "state needs a name"))?;
                let s = Symbol::new(name);
                if st.names.contains(&s) {
                    return Err(Error::parse(*no, format!("state `{s}` declared twice")));
                }
                st.names.push(s);
                for attr in &toks[2..] {
                    match attr.as_str() {
                        "initial" => st.initial.push(s),
                        "final" => st.finals.push(s),
                        _ => return Err(Error::parse(*no, format!("unknown state attribute `{attr}`"))),
                    }
                }
            }
            "trans" => trans.push((*no, toks[1..].to_vec())),
            other => return Err(Error::parse(*no, format!("unexpected `{other}`"))),
        }
    }
    if st.initial.is_empty() {
        return Err(Error::parse(0, "no initial state"));
    }
    for (no, t) in &trans {
        for name in [t.first(), t.last()].into_iter().flatten() {
            if !st.names.contains(&Symbol::new(name)) {
                return Err(Error::parse(*no, format!("undeclared state `{name}`")));
            }
        }
    }
    Ok((st, trans))
}

/// Reads a single-letter label: `eps`, a symbol, `#`, or a pair token.
pub(crate) fn read_label(tok: &str, line: usize, alphabet: &Alphabet) -> Result<Option<Letter>> {
    if tok == EPS {
        return Ok(None);
    }
    if tok.starts_with('(') {
        return parse_pair(tok, line, &|s| alphabet.contains(s)).map(Some);
    }
    let s = Symbol::new(tok);
    if !s.is_hash() && !alphabet.contains(s) {
        return Err(Error::parse(line, format!("`{tok}` is not in the alphabet")));
    }
    Ok(Some(Letter::Sym(s)))
}

pub(crate) fn label_str(l: &Option<Letter>) -> String {
    l.map_or_else(|| EPS.to_string(), |l| l.to_string())
}
