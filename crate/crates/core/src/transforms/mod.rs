//! Constructions between the two-tape and unfolded viewpoints.

mod counter;
mod edt0l;
mod indexed;
mod letters;
mod regular;
mod wordproblem;

pub use counter::{unary_transducer_to_unfolded_oca, unfolded_oca_to_two_tape};
pub use edt0l::two_tape_edt0l_to_unfolded;
pub use indexed::{two_tape_cfg_to_unfolded_lig, unfolded_indexed_to_two_tape};
pub use letters::{apply_homomorphism, hom_alphabet, hom_letter, map_letters, split_pair_letters, Homomorphism};
pub use regular::{to_left_linear, two_tape_regular_to_unfolded_cfg, unfolded_regular_to_two_tape};
pub use wordproblem::{monoid_two_tape_wp, monoid_unfolded_wp_indexed, BlockCongruence, BlockErasure, CLOSE, OPEN};

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::formalism::{Limits, Object};
use crate::grammar::{partition_for_hash, validate_left_regular, LeftRegularGrammar, PartitionedRegularGrammar};
use crate::indexed::{ig_validate_partitioned, IndexedGrammar};
use crate::lsystem::edt0l_validate;
use crate::oracle::oracle_compare;
use crate::sample::{sample_equal, SampleDiff};
use crate::word::Word;
use crate::wordset::Viewpoint;

/// The constructions exposed by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Construction {
    U2tReg,
    U2tOca,
    U2tIndexed,
    T2uEdt0l,
    T2uRegCfg,
    T2uCfgLig,
    UnaryTransOca,
    WpTwoTape,
    WpUnfolded,
    SplitPairs,
    Homomorphism,
}

impl Construction {
    pub const ALL: [Construction; 11] = [
        Construction::U2tReg,
        Construction::U2tOca,
        Construction::U2tIndexed,
        Construction::T2uEdt0l,
        Construction::T2uRegCfg,
        Construction::T2uCfgLig,
        Construction::UnaryTransOca,
        Construction::WpTwoTape,
        Construction::WpUnfolded,
        Construction::SplitPairs,
        Construction::Homomorphism,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Construction::U2tReg => "u2t-reg",
            Construction::U2tOca => "u2t-oca",
            Construction::U2tIndexed => "u2t-indexed",
            Construction::T2uEdt0l => "t2u-edt0l",
            Construction::T2uRegCfg => "t2u-reg-cfg",
            Construction::T2uCfgLig => "t2u-cfg-lig",
            Construction::UnaryTransOca => "unary-trans-oca",
            Construction::WpTwoTape => "wp-two-tape",
            Construction::WpUnfolded => "wp-unfolded",
            Construction::SplitPairs => "split-pairs",
            Construction::Homomorphism => "homomorphism",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Construction::U2tReg => "partitioned regular grammar of u#v^rev to a two-tape regular grammar",
            Construction::U2tOca => "blind one-counter automaton of u#v^rev to a two-tape one",
            Construction::U2tIndexed => "partitioned indexed grammar of u#v^rev to a two-tape indexed grammar",
            Construction::T2uEdt0l => "two-tape EDT0L system to an unfolded one",
            Construction::T2uRegCfg => "two-tape regular grammar to a context-free grammar of u#v^rev",
            Construction::T2uCfgLig => "two-tape context-free grammar to a linear indexed grammar of u#v^rev",
            Construction::UnaryTransOca => "unary transducer to a blind one-counter automaton of u#v^rev",
            Construction::WpTwoTape => "two-tape grammar of a relation to the two-tape word problem of its block monoid",
            Construction::WpUnfolded => "grammar of a language to the unfolded word problem of its erasure monoid",
            Construction::SplitPairs => "rewrite pair letters (a,b) as (a,.)(.,b)",
            Construction::Homomorphism => "apply a letter-to-word map",
        }
    }

    /// Whether the construction changes the described relation.
    fn preserves_relation(self) -> bool {
        !matches!(self, Construction::WpTwoTape | Construction::WpUnfolded | Construction::Homomorphism)
    }

    /// Viewpoints of input and output, for constructions that fix them.
    pub fn viewpoints(self) -> Option<(Viewpoint, Viewpoint)> {
        use Viewpoint::*;
        match self {
            Construction::U2tReg | Construction::U2tOca | Construction::U2tIndexed => Some((Unfolded, TwoTape)),
            Construction::T2uEdt0l | Construction::T2uRegCfg | Construction::T2uCfgLig | Construction::UnaryTransOca => Some((TwoTape, Unfolded)),
            Construction::WpTwoTape | Construction::SplitPairs => Some((TwoTape, TwoTape)),
            Construction::WpUnfolded | Construction::Homomorphism => None,
        }
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Construction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Construction> {
        Construction::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| Error::UnknownEntry(s.to_string()))
    }
}

/// Options for [`run_construction`].
#[derive(Clone, Debug)]
pub struct RunOptions {
    pub bound: usize,
    pub limits: Limits,
    pub verify: bool,
    pub homomorphism: Option<Homomorphism>,
}

impl RunOptions {
    pub fn new(bound: usize) -> RunOptions {
        RunOptions { bound, limits: Limits::for_bound(bound), verify: true, homomorphism: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Verified,
    Mismatch { witnesses: Vec<String> },
    Unchecked,
}

impl Verdict {
    fn from_diff(d: &SampleDiff) -> Verdict {
        if d.equal() {
            return Verdict::Verified;
        }
        let left = d.only_left.iter().map(|(u, v)| format!("only in input: ({u}, {v})"));
        let right = d.only_right.iter().map(|(u, v)| format!("only in output: ({u}, {v})"));
        Verdict::Mismatch { witnesses: left.chain(right).collect() }
    }
}

#[derive(Clone, Debug)]
pub struct ConstructionReport {
    pub construction: Construction,
    pub input: String,
    pub output: Object,
    pub checked_bound: usize,
    /// Whether both enumerations behind the check ran to completion.
    pub complete: bool,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl ConstructionReport {
    pub fn verified(&self) -> bool {
        self.verdict == Verdict::Verified
    }

    pub fn to_structured(&self) -> ReportExport {
        ReportExport {
            construction: self.construction.name().to_string(),
            input: self.input.clone(),
            output_formalism: self.output.formalism().to_string(),
            output: self.output.to_string(),
            checked_bound: self.checked_bound,
            complete: self.complete,
            verdict: self.verdict.clone(),
            notes: self.notes.clone(),
        }
    }
}

impl fmt::Display for ConstructionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "construction: {}", self.construction)?;
        writeln!(f, "input: {}", self.input)?;
        writeln!(f, "output: {} over {}", self.output.formalism(), self.output.alphabet())?;
        match &self.verdict {
            Verdict::Verified => writeln!(f, "verdict: verified at bound {}", self.checked_bound)?,
            Verdict::Unchecked => writeln!(f, "verdict: unchecked")?,
            Verdict::Mismatch { witnesses } => {
                writeln!(f, "verdict: mismatch at bound {}", self.checked_bound)?;
                for w in witnesses.iter().take(20) {
                    writeln!(f, "  {w}")?;
                }
            }
        }
        if !self.complete {
            writeln!(f, "note: enumeration hit its step limits; the check is relative to them")?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}

/// Structured form of a [`ConstructionReport`].
#[derive(Debug, Serialize)]
pub struct ReportExport {
    pub construction: String,
    pub input: String,
    pub output_formalism: String,
    pub output: String,
    pub checked_bound: usize,
    pub complete: bool,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

fn summary(obj: &Object) -> String {
    format!("{} over {} ({} view)", obj.formalism(), obj.alphabet(), obj.viewpoint())
}

fn wrong_input(c: Construction, obj: &Object) -> Error {
    Error::Invalid(format!("{c} does not accept a {} object", obj.formalism()))
}

fn regular_partition(obj: &Object) -> Result<PartitionedRegularGrammar> {
    let Object::Grammar(g) = obj else { return Err(wrong_input(Construction::U2tReg, obj)) };
    PartitionedRegularGrammar::validate(g).or_else(|_| partition_for_hash(&validate_left_regular(g)?))
}

fn split_grammar(c: Construction, obj: &Object) -> Result<crate::grammar::ContextFreeGrammar> {
    match split_pair_letters(obj)? {
        Object::Grammar(g) => Ok(g),
        _ => Err(wrong_input(c, obj)),
    }
}

/// Applies `c` to `input` without any check.
pub fn construct(c: Construction, input: &Object, h: Option<&Homomorphism>) -> Result<Object> {
    Ok(match (c, input) {
        (Construction::U2tReg, _) => Object::Grammar(unfolded_regular_to_two_tape(&regular_partition(input)?)?.into_grammar()),
        (Construction::U2tOca, Object::Counter(a)) => Object::Counter(unfolded_oca_to_two_tape(a)?),
        (Construction::U2tIndexed, Object::Indexed(g)) => Object::Indexed(unfolded_indexed_to_two_tape(&ig_validate_partitioned(g)?)?),
        (Construction::U2tIndexed, Object::Grammar(g)) => {
            Object::Indexed(unfolded_indexed_to_two_tape(&ig_validate_partitioned(&IndexedGrammar::from_cfg(g))?)?)
        }
        (Construction::T2uEdt0l, Object::Et0l(s)) => Object::Et0l(two_tape_edt0l_to_unfolded(&edt0l_validate(s)?)?.system().clone()),
        (Construction::T2uRegCfg, Object::Grammar(_)) => {
            let g = split_grammar(c, input)?;
            Object::Grammar(two_tape_regular_to_unfolded_cfg(&LeftRegularGrammar::validate_mixed(&g)?)?)
        }
        (Construction::T2uCfgLig, Object::Grammar(_)) => Object::Indexed(two_tape_cfg_to_unfolded_lig(&split_grammar(c, input)?)?),
        (Construction::UnaryTransOca, Object::Transducer(t)) => Object::Counter(unary_transducer_to_unfolded_oca(t)?),
        (Construction::WpTwoTape, _) => monoid_two_tape_wp(input)?,
        (Construction::WpUnfolded, _) => monoid_unfolded_wp_indexed(input)?,
        (Construction::SplitPairs, _) => split_pair_letters(input)?,
        (Construction::Homomorphism, _) => {
            let h = h.ok_or_else(|| Error::Invalid("homomorphism needs a letter map".into()))?;
            apply_homomorphism(input, h)?
        }
        _ => return Err(wrong_input(c, input)),
    })
}

fn letter_strings(words: Vec<Vec<crate::word::Letter>>) -> Vec<String> {
    words.iter().map(|w| w.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")).collect()
}

fn check(c: Construction, input: &Object, output: &Object, opts: &RunOptions) -> Result<(Verdict, bool, Vec<String>)> {
    let (n, limits) = (opts.bound, opts.limits);
    let mut notes = Vec::new();
    let views = c.viewpoints();
    let view_in = views.map_or(input.viewpoint(), |v| v.0);
    let view_out = views.map_or(output.viewpoint(), |v| v.1);
    if c.preserves_relation() {
        let (a, ca) = input.sample_as(view_in, n, limits)?;
        let (b, cb) = output.sample_as(view_out, n, limits)?;
        return Ok((Verdict::from_diff(&sample_equal(&a, &b)?), ca && cb, notes));
    }
    match c {
        Construction::WpTwoTape => {
            let (rho, ca) = input.sample_as(view_in, n, limits)?;
            let (out, cb) = output.sample_as(view_out, n, limits)?;
            let oracle = BlockCongruence::new(&rho)?;
            notes.push("blocks are rewritten independently; exact when ρ ∪ ρ⁻¹ ∪ id is transitive".into());
            Ok((Verdict::from_diff(&oracle_compare(&out, &oracle)?), ca && cb, notes))
        }
        Construction::WpUnfolded => {
            let set = input.enumerate(Budget::Length(n), limits)?;
            let lang: Vec<Word> = set.letter_words().iter().map(|w| Word(w.iter().filter_map(|l| l.as_sym()).collect())).collect();
            let oracle = BlockErasure::new(input.alphabet().clone(), lang)?;
            let (out, cb) = output.sample_as(Viewpoint::Unfolded, n, limits)?;
            Ok((Verdict::from_diff(&oracle_compare(&out, &oracle)?), set.complete && cb, notes))
        }
        Construction::Homomorphism => {
            let h = opts.homomorphism.as_ref().ok_or_else(|| Error::Invalid("homomorphism needs a letter map".into()))?;
            let erasing = h.values().any(|w| w.is_empty());
            let reach = if erasing { 2 * n } else { n };
            if erasing {
                notes.push(format!("erasing map: preimages searched up to length {reach}"));
            }
            let src = input.enumerate(Budget::Length(reach), Limits::for_bound(reach))?;
            let mut expected: Vec<Vec<crate::word::Letter>> = src
                .letter_words()
                .into_iter()
                .map(|w| w.into_iter().flat_map(|l| hom_letter(h, l)).collect::<Vec<_>>())
                .filter(|w| w.len() <= n)
                .collect();
            expected.sort();
            expected.dedup();
            let got = output.enumerate(Budget::Length(n), limits)?;
            let mut actual = got.letter_words();
            actual.sort();
            let (exp, act) = (letter_strings(expected), letter_strings(actual));
            let only_in = exp.iter().filter(|w| !act.contains(w)).map(|w| format!("only in image of input: {w}"));
            let only_out = act.iter().filter(|w| !exp.contains(w)).map(|w| format!("only in output: {w}"));
            let witnesses: Vec<String> = only_in.chain(only_out).collect();
            let verdict = if witnesses.is_empty() { Verdict::Verified } else { Verdict::Mismatch { witnesses } };
            Ok((verdict, src.complete && got.complete, notes))
        }
        _ => unreachable!("relation-preserving constructions handled above"),
    }
}

/// Applies `c` and, unless disabled, checks the result at `opts.bound`.
pub fn run_construction(c: Construction, input: &Object, opts: &RunOptions) -> Result<ConstructionReport> {
    let output = construct(c, input, opts.homomorphism.as_ref())?;
    let (verdict, complete, mut notes) = if opts.verify { check(c, input, &output, opts)? } else { (Verdict::Unchecked, true, Vec::new()) };
    if c == Construction::U2tReg {
        notes.push("output is in mixed left/right-regular form".into());
    }
    Ok(ConstructionReport { construction: c, input: summary(input), output, checked_bound: opts.bound, complete, verdict, notes })
}
