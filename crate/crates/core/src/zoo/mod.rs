//! Named relations, each with representations in several formalisms and an
//! independent decider.

pub mod deciders;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formalism::{Formalism, Limits, Object};
use crate::oracle::{oracle_compare, oracle_sample, RelationOracle};
use crate::sample::{RelationSample, SampleDiff};
use crate::symbol::Symbol;
use crate::transforms::{map_letters, monoid_two_tape_wp, monoid_unfolded_wp_indexed, BlockCongruence, BlockErasure};
use crate::word::{Letter, PairLetter, Word};
use crate::wordset::Viewpoint;

use deciders::*;

type DeciderFn = Arc<dyn Fn(usize) -> Result<Box<dyn RelationOracle + Send>> + Send + Sync>;

/// One concrete grammar or automaton for an entry.
#[derive(Clone, Debug)]
pub struct Representation {
    pub label: String,
    pub object: Object,
}

impl Representation {
    pub fn viewpoint(&self) -> Viewpoint {
        self.object.viewpoint()
    }
}

#[derive(Clone)]
pub struct ZooEntry {
    pub name: String,
    pub description: &'static str,
    /// Bound at which every representation is known to match the decider.
    pub check_bound: usize,
    pub representations: Vec<Representation>,
    decider: DeciderFn,
}

impl fmt::Debug for ZooEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ZooEntry").field("name", &self.name).field("representations", &self.representations.len()).finish()
    }
}

impl ZooEntry {
    /// The decider, with any closure computed from words up to `bound`.
    pub fn decider(&self, bound: usize) -> Result<Box<dyn RelationOracle + Send>> {
        (self.decider)(bound)
    }

    pub fn representation(&self, label: &str) -> Result<&Representation> {
        self.representations.iter().find(|r| r.label == label).ok_or_else(|| Error::UnknownEntry(format!("{}/{label}", self.name)))
    }
}

fn parse(kind: Formalism, src: &str) -> Object {
    Object::parse(kind, src).unwrap_or_else(|e| panic!("zoo source for {kind} does not parse: {e}\n{src}"))
}

fn rep(label: &str, kind: Formalism, src: &str) -> Representation {
    Representation { label: label.to_string(), object: parse(kind, src) }
}

fn fixed(d: impl Fn() -> Decider + Send + Sync + 'static) -> DeciderFn {
    Arc::new(move |_| Ok(Box::new(d()) as Box<dyn RelationOracle + Send>))
}

const REV: &str = "alphabet: a b\nstart: S\nS -> (a,.) S (.,a) | (b,.) S (.,b) | eps\n";
const DIAG_X: &str = "alphabet: x\nstart: S\nS -> (x,x) S | eps\n";
const XN_HASH_XN: &str = "alphabet: x\nmode: blind\nstate p initial\nstate q final\ntrans p x +1 p\ntrans p # q\ntrans q x -1 q\n";
const DIAG_X_EDT0L: &str = "alphabet: x\nnonterminals: A\naxiom: A\ntable step: A -> (x,x)A\ntable stop: A -> eps\n";
const RHO_G: &str = "alphabet: x\nnonterminals: A B C\naxiom: A#B\n\
    table t1: A -> xA ; B -> xBC ; C -> xxC\ntable t2: A -> eps ; B -> eps ; C -> eps\n";
const SORT2: &str = "alphabet: 1 2\nstart: S\nS -> (1,1) S | (2,.) S (.,2) | eps\n";
const SORT3: &str = "alphabet: 1 2 3\nflags: $ 2 3\nstart: S\nhash: S\nright: T\n\
    S -> 1 S 1 | 2 S+2 | 3 S+3 | # T\nT[2] -> T 2\nT[3] -> 3 T\nT[$] -> eps\n";
const SORT4: &str = "alphabet: 1 2 3 4\nflags: $ 2 3\nstart: S\n\
    S -> (1,1) S | (2,.) S+2 | (3,.) S+3 | (4,.) S (.,4) | T\nT[2] -> (.,2) T\nT[3] -> T (.,3)\nT[$] -> eps\n";
const KAPPA_ET0L: &str = "alphabet: a b\nnonterminals: U V U' V'\naxiom: UV#U'V'\n\
    table 1a: U -> aU ; U' -> U'a\ntable 1b: U -> bU ; U' -> U'b\n\
    table 2a: V -> aV ; V' -> V'a\ntable 2b: V -> bV ; V' -> V'b\n\
    table 3: U -> eps ; V -> eps ; U' -> eps ; V' -> eps\n";
const KAPPA_LIG: &str = "alphabet: a b\nflags: $ a b\nstart: S\nhash: S A\nright: B\n\
    S -> a S+a | b S+b | A\nA -> a A a | b A b | # B\nB[a] -> a B\nB[b] -> b B\nB[$] -> eps\n";
const EQUALITY_NFA: &str = "alphabet: a b\nstate q initial final\ntrans q (a,a) q\ntrans q (b,b) q\n";
const EQUALITY_REG: &str = "alphabet: a b\nstart: S\nS -> (a,a) S | (b,b) S | eps\n";
const SAME_LEN_SAME_A: &str = "alphabet: a b\nmode: blind\nstate q initial final\n\
    trans q (a,a) q\ntrans q (b,b) q\ntrans q (a,b) +1 q\ntrans q (b,a) -1 q\n";
const POW2_DIAG: &str = "alphabet: x\nnonterminals: S\naxiom: S#S\ntable double: S -> SS\ntable end: S -> x\n";
/// `{a1^n a2^n a3^n}` as a linear indexed grammar.
pub const TRIPLE_LIG: &str = "alphabet: a1 a2 a3\nflags: $ f\nstart: S\n\
    S -> a1 S+f a3 | T\nT[f] -> a2 T\nT[$] -> eps\n";
/// `{a^n b^n c^n}` as a linear indexed grammar.
pub const ABC_LIG: &str = "alphabet: a b c\nflags: $ f\nstart: S\nS -> a S+f c | T\nT[f] -> b T\nT[$] -> eps\n";
const FG1_FOUR: &str = "alphabet: x X\nmode: tested\nstate up initial\nstate un\nstate vp final\nstate vn final\n\
    trans up x +1 up\ntrans up X -1 up\ntrans up X =0 +1 un\n\
    trans un X +1 un\ntrans un x -1 un\ntrans un x =0 +1 up\n\
    trans up # vp\ntrans un # vn\n\
    trans vp X +1 vp\ntrans vp x -1 vp\ntrans vp x =0 +1 vn\n\
    trans vn x +1 vn\ntrans vn X -1 vn\ntrans vn X =0 +1 vp\n";
const FG1_BLIND: &str = "alphabet: x X\nmode: blind\nstate p initial\nstate q final\n\
    trans p x +1 p\ntrans p X -1 p\ntrans p # q\ntrans q x -1 q\ntrans q X +1 q\n";
const M1: &str = "alphabet: a b l r\nmode: tested\nstate q0 initial final\nstate p1\nstate p2\nstate q1\nstate q2\n\
    trans q0 (a,a) q0\ntrans q0 (b,b) q0\ntrans q0 (l,l) q0\ntrans q0 (r,r) q0\n\
    trans q0 (l,l) p1\ntrans q0 (l,l) q1\n\
    trans p1 (a,b) +1 p1\ntrans p1 (b,a) -1 p2\ntrans p2 (b,a) -1 p2\ntrans p2 (r,r) =0 q0\n\
    trans q1 (b,a) +1 q1\ntrans q1 (a,b) -1 q2\ntrans q2 (a,b) -1 q2\ntrans q2 (r,r) =0 q0\n";

fn rho_f_nfa(p: usize) -> String {
    let mut src = String::from("alphabet: x\n");
    for i in 0..p {
        let (init, fin) = if i == 0 { (" initial", " final") } else { ("", "") };
        src += &format!("state q{i}{init}\nstate r{i}{fin}\n");
    }
    for i in 0..p {
        src += &format!("trans q{i} x q{}\ntrans q{i} # r{i}\n", (i + 1) % p);
    }
    for j in 1..p {
        src += &format!("trans r{j} x r{}\n", j - 1);
    }
    src
}

fn rho_f_grammar(p: usize) -> String {
    let mut src = String::from("alphabet: x\nstart: Q0\n");
    for i in 0..p {
        src += &format!("Q{i} -> x Q{} | # R{i}\n", (i + 1) % p);
    }
    for j in 1..p {
        src += &format!("R{j} -> x R{}\n", j - 1);
    }
    src + "R0 -> eps\n"
}

/// Indexed grammar for `w # sorted(w)^rev` over `1..n`.
fn sort_ig(n: usize) -> String {
    let xs = digits(n);
    let mut src = format!("alphabet: {}\nflags: $ {}\nstart: S\n", xs.join(" "), xs.join(" "));
    let pushes: Vec<String> = xs.iter().map(|x| format!("S+{x}")).collect();
    let tails: Vec<String> = xs.iter().rev().map(|x| format!("T{x}")).collect();
    src += &format!("S -> {} | T # {}\n", pushes.join(" | "), tails.join(" "));
    for x in &xs {
        src += &format!("T[{x}] -> {x} T\nT{x}[{x}] -> {x} T{x}\nT{x}[$] -> eps\n");
        for y in xs.iter().filter(|y| *y != x) {
            src += &format!("T{x}[{y}] -> T{x}\n");
        }
    }
    src + "T[$] -> eps\n"
}

const FG2_LETTERS: [&str; 4] = ["x", "y", "X", "Y"];

/// Pushdown automaton for `u # v^rev` with `u = v` in the free group of rank
/// two: free reduction on the stack, reading inverses after `#`.
fn fg2_pda() -> String {
    let mut src = String::from("alphabet: x y X Y\nstack: x y X Y Z\nbottom: Z\nacceptance: empty-stack\nstate p initial\nstate q\ntrans p # q\ntrans q eps top=Z q\n");
    for (state, invert) in [("p", false), ("q", true)] {
        for a in FG2_LETTERS {
            let s = Symbol::new(a);
            let b = if invert { inverse(s) } else { s };
            let cancel = inverse(b);
            for t in FG2_LETTERS.iter().chain(&["Z"]) {
                if *t == cancel.as_str() {
                    src += &format!("trans {state} {a} top={t} {state}\n");
                } else {
                    src += &format!("trans {state} {a} top={t} push={b}{t} {state}\n");
                }
            }
        }
    }
    src
}

fn lin_triple_lig() -> Result<Object> {
    let base = parse(Formalism::LinearIndexed, TRIPLE_LIG);
    let names: Vec<&str> = TRIPLE_LEFT.iter().chain(&TRIPLE_RIGHT).copied().collect();
    let pair = |l: Letter| match l.as_sym() {
        Some(s) if !s.is_hash() => {
            let i = TRIPLE_LEFT.iter().position(|a| *a == s.as_str()).expect("letter of the triple alphabet");
            vec![Letter::Pair(PairLetter::new(Some(s), Some(Symbol::new(TRIPLE_RIGHT[i]))).expect("non-empty pair"))]
        }
        _ => vec![l],
    };
    map_letters(&base, alphabet(&names), &pair)
}

fn congruence(rho: impl Fn() -> Decider + Send + Sync + 'static) -> DeciderFn {
    Arc::new(move |bound| {
        let sample = oracle_sample(&rho(), bound)?;
        Ok(Box::new(BlockCongruence::new(&sample)?) as Box<dyn RelationOracle + Send>)
    })
}

fn erasure(names: &'static [&'static str], member: fn(&Word) -> bool) -> DeciderFn {
    Arc::new(move |bound| {
        let x = alphabet(names);
        let lang = crate::oracle::all_words(&x, bound).into_iter().filter(|w| member(w)).collect();
        Ok(Box::new(BlockErasure::new(x, lang)?) as Box<dyn RelationOracle + Send>)
    })
}

fn m1_rho() -> Decider {
    let (a, b) = (Symbol::new("a"), Symbol::new("b"));
    Decider::function(alphabet(&["a", "b"]), move |u| {
        let n = u.len() / 2;
        (n > 0 && u.len() % 2 == 0 && u.0[..n].iter().all(|s| *s == a) && u.0[n..].iter().all(|s| *s == b))
            .then(|| Word(std::iter::repeat(b).take(n).chain(std::iter::repeat(a).take(n)).collect()))
    })
}

fn ab_swap() -> Decider {
    Decider::function(alphabet(&["a", "b"]), |u| (*u == Word::parse("ab")).then(|| Word::parse("ba")))
}

/// Base names, with `:N` marking a numeric parameter.
pub const NAMES: [&str; 19] = [
    "rev",
    "rho_e",
    "rho_f:p",
    "rho_g",
    "rho_h",
    "sort_o:n",
    "kappa",
    "equality",
    "same_len_same_a",
    "pow2_diag",
    "lin_triple",
    "wp_F1",
    "wp_FG1",
    "wp_FG2",
    "wp_M1",
    "wp_M_rho",
    "wp_M5",
    "wp_M_L",
    "wp_M_L_abc",
];

fn param(name: &str, base: &str) -> Result<Option<usize>> {
    match name.strip_prefix(base) {
        Some("") => Ok(None),
        Some(rest) => match rest.strip_prefix(':').and_then(|p| p.parse::<usize>().ok()) {
            Some(p) if p > 0 => Ok(Some(p)),
            _ => Err(Error::UnknownEntry(name.to_string())),
        },
        None => Err(Error::UnknownEntry(name.to_string())),
    }
}

/// Looks up an entry; parametric entries take `name:N`.
pub fn zoo_entry(name: &str) -> Result<ZooEntry> {
    use Formalism::*;
    let base = name.split(':').next().unwrap_or(name);
    let entry = |description, check_bound, representations, decider| ZooEntry { name: name.to_string(), description, check_bound, representations, decider };
    if base != name && !matches!(base, "rho_f" | "sort_o") {
        return Err(Error::UnknownEntry(name.to_string()));
    }
    Ok(match base {
        "rev" => entry("v is the reverse of u", 6, vec![rep("cfg-two-tape", ContextFree, REV)], fixed(rev)),
        "rho_e" | "wp_F1" => entry(
            "x^n related to x^n; the word problem of the free monoid of rank one",
            8,
            vec![rep("reg-two-tape", Regular, DIAG_X), rep("oca-unfolded", Counter, XN_HASH_XN), rep("edt0l-two-tape", Et0l, DIAG_X_EDT0L)],
            fixed(|| unary(Some)),
        ),
        "rho_f" => {
            let p = param(name, "rho_f")?.unwrap_or(2);
            entry(
                "x^n related to x^(n mod p)",
                8,
                vec![rep("nfa-unfolded", Nfa, &rho_f_nfa(p)), rep("reg-unfolded", Regular, &rho_f_grammar(p))],
                fixed(move || rho_f(p)),
            )
        }
        "rho_g" => entry("x^n related to x^(n^2)", 5, vec![rep("et0l-unfolded", Et0l, RHO_G)], fixed(rho_g)),
        "rho_h" => entry("x^n related to x^(n^n) for n >= 1; decider only", 9, vec![], fixed(rho_h)),
        "sort_o" => {
            let n = param(name, "sort_o")?.unwrap_or(3);
            let mut reps = Vec::new();
            match n {
                2 => reps.push(rep("cfg-two-tape", ContextFree, SORT2)),
                3 => reps.push(rep("lig-unfolded", LinearIndexed, SORT3)),
                4 => reps.push(rep("lig-two-tape", LinearIndexed, SORT4)),
                _ => {}
            }
            reps.push(rep("ig-unfolded", Indexed, &sort_ig(n)));
            entry("w related to its letters in increasing order", 4, reps, fixed(move || sort_o(n)))
        }
        "kappa" => entry(
            "cyclic permutations (uv, vu)",
            5,
            vec![rep("et0l-unfolded", Et0l, KAPPA_ET0L), rep("lig-unfolded", LinearIndexed, KAPPA_LIG)],
            fixed(kappa),
        ),
        "equality" => entry(
            "the equality relation on {a, b}*",
            6,
            vec![rep("nfa-two-tape", Nfa, EQUALITY_NFA), rep("reg-two-tape", Regular, EQUALITY_REG)],
            fixed(|| equality(&["a", "b"])),
        ),
        "same_len_same_a" => entry("equal length and equal number of a", 6, vec![rep("oca-two-tape", Counter, SAME_LEN_SAME_A)], fixed(same_len_same_a)),
        "pow2_diag" => entry("(w, w) for w = x^(2^n), n >= 0", 8, vec![rep("edt0l-unfolded", Et0l, POW2_DIAG)], fixed(pow2_diag)),
        "lin_triple" => entry(
            "a1^n a2^n a3^n related to b1^n b2^n b3^n",
            6,
            vec![Representation { label: "lig-two-tape".into(), object: lin_triple_lig()? }],
            fixed(lin_triple),
        ),
        "wp_FG1" => entry(
            "the word problem of the free group of rank one, X = x^-1",
            5,
            vec![rep("oca-unfolded", Counter, FG1_FOUR), rep("oca-unfolded-blind", Counter, FG1_BLIND)],
            fixed(wp_fg1),
        ),
        "wp_FG2" => entry("the word problem of the free group of rank two, X = x^-1, Y = y^-1", 5, vec![rep("pda-unfolded", Pushdown, &fg2_pda())], fixed(wp_fg2)),
        "wp_M1" => entry("block monoid of l a^n b^n r = l b^n a^n r", 6, vec![rep("oca-two-tape", Counter, M1)], congruence(m1_rho)),
        "wp_M_rho" => {
            let k = parse(ContextFree, "alphabet: a b\nstart: S\nS -> (a,b) (b,a)\n");
            entry("block monoid of l ab r = l ba r", 6, vec![Representation { label: "cfg-two-tape".into(), object: monoid_two_tape_wp(&k)? }], congruence(ab_swap))
        }
        "wp_M5" => entry(
            "block monoid of l a1^n a2^n a3^n r = l b1^n b2^n b3^n r",
            5,
            vec![Representation { label: "lig-two-tape".into(), object: monoid_two_tape_wp(&lin_triple_lig()?)? }],
            congruence(lin_triple),
        ),
        "wp_M_L" => {
            let g = parse(ContextFree, "alphabet: a b\nstart: S\nS -> a b\n");
            entry(
                "erasure monoid of l ab r = l r",
                6,
                vec![Representation { label: "cfg-unfolded".into(), object: monoid_unfolded_wp_indexed(&g)? }],
                erasure(&["a", "b"], |w| *w == Word::parse("ab")),
            )
        }
        "wp_M_L_abc" => {
            let g = parse(LinearIndexed, ABC_LIG);
            entry(
                "erasure monoid of l a^n b^n c^n r = l r",
                6,
                vec![Representation { label: "lig-unfolded".into(), object: monoid_unfolded_wp_indexed(&g)? }],
                erasure(&["a", "b", "c"], |w| {
                    let n = w.len() / 3;
                    w.len() % 3 == 0 && *w == Word::parse(&format!("{}{}{}", "a".repeat(n), "b".repeat(n), "c".repeat(n)))
                }),
            )
        }
        _ => return Err(Error::UnknownEntry(name.to_string())),
    })
}

/// Every entry, with parametric ones at their default and listed sizes.
pub fn zoo_list() -> Vec<ZooEntry> {
    let names = NAMES.iter().flat_map(|n| match *n {
        "rho_f:p" => vec!["rho_f:2".to_string(), "rho_f:3".to_string()],
        "sort_o:n" => vec!["sort_o:2".to_string(), "sort_o:3".to_string(), "sort_o:4".to_string()],
        n => vec![n.to_string()],
    });
    names.map(|n| zoo_entry(&n).expect("registered entry")).collect()
}

/// The decider's relation with both components within `bound`.
pub fn zoo_sample(name: &str, bound: usize) -> Result<RelationSample> {
    oracle_sample(zoo_entry(name)?.decider(bound)?.as_ref(), bound)
}

#[derive(Clone, Debug, Serialize)]
pub struct RepresentationCheck {
    pub label: String,
    pub formalism: String,
    pub viewpoint: String,
    /// Whether the enumeration ran to completion within its limits.
    pub complete: bool,
    pub diff: SampleDiff,
}

#[derive(Clone, Debug, Serialize)]
pub struct ZooReport {
    pub name: String,
    pub bound: usize,
    pub checks: Vec<RepresentationCheck>,
}

impl ZooReport {
    pub fn verified(&self) -> bool {
        self.checks.iter().all(|c| c.diff.equal())
    }
}

impl fmt::Display for ZooReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} at bound {}", self.name, self.bound)?;
        if self.checks.is_empty() {
            writeln!(f, "  no representations; decider only")?;
        }
        for c in &self.checks {
            let status = if c.diff.equal() { "verified" } else { "MISMATCH" };
            let partial = if c.complete { "" } else { " (limits reached)" };
            writeln!(f, "  {} [{} {}]: {status}{partial}, {} pairs", c.label, c.formalism, c.viewpoint, c.diff.left_size)?;
            if !c.diff.equal() {
                for line in c.diff.to_string().lines().skip(1) {
                    writeln!(f, "  {line}")?;
                }
            }
        }
        Ok(())
    }
}

/// Checks one representation against the decider at `bound`.
pub fn check_representation(entry: &ZooEntry, r: &Representation, bound: usize, limits: Limits) -> Result<RepresentationCheck> {
    let decider = entry.decider(bound)?;
    let (sample, complete) = r.object.sample(bound, limits)?;
    Ok(RepresentationCheck {
        label: r.label.clone(),
        formalism: r.object.formalism().to_string(),
        viewpoint: r.viewpoint().to_string(),
        complete,
        diff: oracle_compare(&sample, decider.as_ref())?,
    })
}

/// Compares every representation of `name` with its decider.
pub fn zoo_check(name: &str, bound: usize) -> Result<ZooReport> {
    let entry = zoo_entry(name)?;
    let checks = entry.representations.iter().map(|r| check_representation(&entry, r, bound, Limits::for_bound(bound))).collect::<Result<_>>()?;
    Ok(ZooReport { name: entry.name.clone(), bound, checks })
}

/// Source text of one representation.
pub fn zoo_emit(name: &str, label: &str) -> Result<String> {
    Ok(zoo_entry(name)?.representation(label)?.object.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indexed::ig_enumerate;
    use crate::budget::Budget;

    #[test]
    fn sample_examples() {
        let s = zoo_sample("rev", 2).unwrap();
        assert_eq!(s.len(), 7);
        assert!(s.contains(&Word::parse("ab"), &Word::parse("ba")));
        let g = zoo_sample("rho_g", 3).unwrap();
        let pairs: Vec<(Word, Word)> = g.pairs().collect();
        assert_eq!(pairs, vec![(Word::empty(), Word::empty()), (Word::parse("x"), Word::parse("x"))]);
    }

    #[test]
    fn unknown_names() {
        assert!(zoo_entry("nope").is_err());
        assert!(zoo_entry("rev:3").is_err());
        assert!(zoo_entry("rho_f:0").is_err());
        assert!(zoo_entry("rho_f:5").is_ok());
    }

    #[test]
    fn helper_languages_match_counting() {
        for (src, names) in [(TRIPLE_LIG, ["a1", "a2", "a3"]), (ABC_LIG, ["a", "b", "c"])] {
            let g = crate::indexed::IndexedGrammar::parse(src).unwrap();
            let set = ig_enumerate(&g, Budget::Length(9), 20).unwrap();
            let want: Vec<String> = (0..=3).map(|n| names.iter().map(|s| s.repeat(n)).collect::<String>()).collect();
            let mut got: Vec<String> = set.letter_words().iter().map(|w| w.iter().map(|l| l.to_string()).collect()).collect();
            got.sort();
            let mut want = want;
            want.sort();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn small_entries_check() {
        for name in ["rev", "rho_e", "rho_f:3", "equality", "same_len_same_a", "wp_FG1", "wp_M1", "wp_M_rho", "wp_M_L"] {
            let r = zoo_check(name, 4).unwrap();
            assert!(r.verified(), "{r}");
        }
    }

    #[test]
    fn emit_round_trips() {
        let text = zoo_emit("kappa", "lig-unfolded").unwrap();
        assert!(Object::parse(Formalism::LinearIndexed, &text).is_ok());
        assert!(zoo_emit("kappa", "nope").is_err());
    }
}
