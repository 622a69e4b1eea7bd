//! A uniform handle over every grammar, system and automaton kind.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::automata::{nfa_enumerate, oca_enumerate, pda_enumerate, transducer_enumerate, CounterAutomaton, Nfa, PushdownAutomaton, Transducer};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::grammar::{enumerate, ContextFreeGrammar, LeftRegularGrammar};
use crate::indexed::{ig_enumerate, ig_validate, GrammarKind, IndexedGrammar};
use crate::lsystem::{etol_enumerate, Et0lSystem};
use crate::sample::RelationSample;
use crate::symbol::Alphabet;
use crate::wordset::{Viewpoint, WordSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Formalism {
    Regular,
    ContextFree,
    LinearIndexed,
    Indexed,
    Et0l,
    Nfa,
    Counter,
    Transducer,
    Pushdown,
}

impl Formalism {
    pub const ALL: [Formalism; 9] = [
        Formalism::Regular,
        Formalism::ContextFree,
        Formalism::LinearIndexed,
        Formalism::Indexed,
        Formalism::Et0l,
        Formalism::Nfa,
        Formalism::Counter,
        Formalism::Transducer,
        Formalism::Pushdown,
    ];

    pub fn extension(self) -> &'static str {
        match self {
            Formalism::Regular => "rg",
            Formalism::ContextFree => "cfg",
            Formalism::LinearIndexed => "lig",
            Formalism::Indexed => "ig",
            Formalism::Et0l => "etol",
            Formalism::Nfa => "nfa",
            Formalism::Counter => "oca",
            Formalism::Transducer => "fst",
            Formalism::Pushdown => "pda",
        }
    }

    pub fn from_path(path: &Path) -> Option<Formalism> {
        path.extension()?.to_str()?.parse().ok()
    }
}

impl fmt::Display for Formalism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

impl FromStr for Formalism {
    type Err = Error;

    fn from_str(s: &str) -> Result<Formalism> {
        Formalism::ALL.into_iter().find(|f| f.extension() == s).ok_or_else(|| Error::Invalid(format!("unknown formalism `{s}`")))
    }
}

/// Caps for the searches behind bounded enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Flag-stack or pushdown depth.
    pub depth: usize,
    /// ET0L table applications.
    pub apps: usize,
    /// Consecutive ε-moves of a counter automaton.
    pub steps: usize,
}

impl Limits {
    pub fn for_bound(bound: usize) -> Limits {
        Limits { depth: 2 * bound + 4, apps: 4 * bound + 8, steps: 2 * bound + 2 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Object {
    Grammar(ContextFreeGrammar),
    Indexed(IndexedGrammar),
    Et0l(Et0lSystem),
    Nfa(Nfa),
    Counter(CounterAutomaton),
    Transducer(Transducer),
    Pushdown(PushdownAutomaton),
}

impl Object {
    pub fn parse(kind: Formalism, src: &str) -> Result<Object> {
        Ok(match kind {
            Formalism::Regular => {
                let g = ContextFreeGrammar::parse(src)?;
                LeftRegularGrammar::validate_mixed(&g)?;
                Object::Grammar(g)
            }
            Formalism::ContextFree => Object::Grammar(ContextFreeGrammar::parse(src)?),
            Formalism::LinearIndexed => {
                let g = IndexedGrammar::parse(src)?;
                let report = ig_validate(&g);
                if report.kind != GrammarKind::LinearIndexed {
                    return Err(Error::Invalid(format!("no designated inheritor in `{}`", report.unmarked[0])));
                }
                Object::Indexed(g)
            }
            Formalism::Indexed => Object::Indexed(IndexedGrammar::parse(src)?),
            Formalism::Et0l => Object::Et0l(Et0lSystem::parse(src)?),
            Formalism::Nfa => Object::Nfa(Nfa::parse(src)?),
            Formalism::Counter => Object::Counter(CounterAutomaton::parse(src)?),
            Formalism::Transducer => Object::Transducer(Transducer::parse(src)?),
            Formalism::Pushdown => Object::Pushdown(PushdownAutomaton::parse(src)?),
        })
    }

    /// The most specific formalism describing the object.
    pub fn formalism(&self) -> Formalism {
        match self {
            Object::Grammar(g) if LeftRegularGrammar::validate_mixed(g).is_ok() => Formalism::Regular,
            Object::Grammar(_) => Formalism::ContextFree,
            Object::Indexed(g) if ig_validate(g).kind == GrammarKind::LinearIndexed => Formalism::LinearIndexed,
            Object::Indexed(_) => Formalism::Indexed,
            Object::Et0l(_) => Formalism::Et0l,
            Object::Nfa(_) => Formalism::Nfa,
            Object::Counter(_) => Formalism::Counter,
            Object::Transducer(_) => Formalism::Transducer,
            Object::Pushdown(_) => Formalism::Pushdown,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        match self {
            Object::Grammar(g) => g.alphabet(),
            Object::Indexed(g) => g.alphabet(),
            Object::Et0l(s) => s.alphabet(),
            Object::Nfa(a) => a.alphabet(),
            Object::Counter(a) => a.alphabet(),
            Object::Transducer(t) => t.alphabet(),
            Object::Pushdown(p) => p.alphabet(),
        }
    }

    /// Two-tape when the object reads pair letters, unfolded otherwise.
    pub fn viewpoint(&self) -> Viewpoint {
        let pairs = match self {
            Object::Grammar(g) => g.uses_pairs(),
            Object::Indexed(g) => g.uses_pairs(),
            Object::Et0l(s) => s.uses_pairs(),
            Object::Nfa(a) => a.uses_pairs(),
            Object::Counter(a) => a.uses_pairs(),
            Object::Transducer(_) => true,
            Object::Pushdown(p) => p.letters().iter().any(|l| l.as_pair().is_some()),
        };
        if pairs {
            Viewpoint::TwoTape
        } else {
            Viewpoint::Unfolded
        }
    }

    /// Words admitted by `budget`. Transducers are read through their
    /// pair-letter automaton.
    pub fn enumerate(&self, budget: Budget, limits: Limits) -> Result<WordSet> {
        match self {
            Object::Grammar(g) => enumerate(g, budget),
            Object::Indexed(g) => ig_enumerate(g, budget, limits.depth),
            Object::Et0l(s) => etol_enumerate(s, budget, limits.apps),
            Object::Nfa(a) => nfa_enumerate(a, budget),
            Object::Counter(a) => oca_enumerate(a, budget, limits.steps),
            Object::Transducer(t) => nfa_enumerate(&t.to_nfa()?, budget),
            Object::Pushdown(p) => pda_enumerate(p, budget, limits.depth),
        }
    }

    /// The relation described by the object, with both components within
    /// `bound`, together with a completeness flag.
    pub fn sample(&self, bound: usize, limits: Limits) -> Result<(RelationSample, bool)> {
        self.sample_as(self.viewpoint(), bound, limits)
    }

    /// As [`Object::sample`], reading the words through `view`. Needed for
    /// objects without letters, whose viewpoint cannot be inferred.
    pub fn sample_as(&self, view: Viewpoint, bound: usize, limits: Limits) -> Result<(RelationSample, bool)> {
        if let Object::Transducer(t) = self {
            return Ok((transducer_enumerate(t, bound)?, true));
        }
        let set = self.enumerate(view.budget(bound), limits)?;
        let base = self.alphabet().clone();
        Ok((set.to_sample(view)?.reencode(&base)?, set.complete))
    }
}

impl fmt::Display for Object {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Object::Grammar(g) => g.fmt(f),
            Object::Indexed(g) => g.fmt(f),
            Object::Et0l(s) => s.fmt(f),
            Object::Nfa(a) => a.fmt(f),
            Object::Counter(a) => a.fmt(f),
            Object::Transducer(t) => t.fmt(f),
            Object::Pushdown(p) => p.fmt(f),
        }
    }
}

macro_rules! from_impl {
    ($($t:ty => $v:ident),*) => {
        $(impl From<$t> for Object {
            fn from(x: $t) -> Object {
                Object::$v(x)
            }
        })*
    };
}

from_impl!(ContextFreeGrammar => Grammar, IndexedGrammar => Indexed, Et0lSystem => Et0l, Nfa => Nfa, CounterAutomaton => Counter, Transducer => Transducer, PushdownAutomaton => Pushdown);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extensions_round_trip() {
        for f in Formalism::ALL {
            assert_eq!(f.extension().parse::<Formalism>().unwrap(), f);
        }
        assert_eq!(Formalism::from_path(Path::new("x/sort.lig")), Some(Formalism::LinearIndexed));
        assert_eq!(Formalism::from_path(Path::new("README")), None);
    }

    #[test]
    fn rev_grammar_sample() {
        let o = Object::parse(Formalism::ContextFree, "alphabet: a b\nstart: S\nS -> (a,.) S (.,a) | (b,.) S (.,b) | eps\n").unwrap();
        assert_eq!(o.viewpoint(), Viewpoint::TwoTape);
        let (s, complete) = o.sample(2, Limits::for_bound(2)).unwrap();
        assert!(complete);
        assert_eq!(s.len(), 7);
        assert!(s.pairs().all(|(u, v)| u.reversed() == v));
    }
}
