//! Brute-force deciders for the zoo relations.

use rustc_hash::FxHashMap;

use crate::oracle::{all_words, RelationOracle};
use crate::symbol::{Alphabet, Symbol};
use crate::word::Word;

type Pred = Box<dyn Fn(&Word, &Word) -> bool + Send + Sync>;
type Image = Box<dyn Fn(&Word, usize) -> Vec<Word> + Send + Sync>;

/// A relation given by a membership predicate and, optionally, a direct
/// image function.
pub struct Decider {
    alphabet: Alphabet,
    relates: Pred,
    image: Option<Image>,
}

impl Decider {
    pub fn predicate(alphabet: Alphabet, relates: impl Fn(&Word, &Word) -> bool + Send + Sync + 'static) -> Decider {
        Decider { alphabet, relates: Box::new(relates), image: None }
    }

    /// The graph of a partial function.
    pub fn function(alphabet: Alphabet, f: impl Fn(&Word) -> Option<Word> + Send + Sync + 'static) -> Decider {
        let f = std::sync::Arc::new(f);
        let g = f.clone();
        Decider {
            alphabet,
            relates: Box::new(move |u, v| f(u).as_ref() == Some(v)),
            image: Some(Box::new(move |u, bound| g(u).filter(|v| v.len() <= bound).into_iter().collect())),
        }
    }

    pub fn with_image(mut self, image: impl Fn(&Word, usize) -> Vec<Word> + Send + Sync + 'static) -> Decider {
        self.image = Some(Box::new(image));
        self
    }
}

impl RelationOracle for Decider {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn relates(&self, u: &Word, v: &Word) -> bool {
        (self.relates)(u, v)
    }

    fn image(&self, u: &Word, bound: usize) -> Vec<Word> {
        match &self.image {
            Some(f) => f(u, bound),
            None => all_words(&self.alphabet, bound).into_iter().filter(|v| (self.relates)(u, v)).collect(),
        }
    }
}

fn sym(s: &str) -> Symbol {
    Symbol::new(s)
}

pub fn alphabet(names: &[&str]) -> Alphabet {
    Alphabet::new(names.iter().copied()).expect("valid alphabet")
}

/// `n` when `w = s^n`.
pub fn power_of(w: &Word, s: Symbol) -> Option<usize> {
    w.0.iter().all(|c| *c == s).then_some(w.len())
}

pub fn repeat(s: Symbol, n: usize) -> Word {
    Word(vec![s; n])
}

pub fn rev() -> Decider {
    Decider::function(alphabet(&["a", "b"]), |u| Some(u.reversed()))
}

pub fn equality(names: &[&str]) -> Decider {
    Decider::function(alphabet(names), |u| Some(u.clone()))
}

/// `x^n ↦ x^f(n)`, with `f` returning `None` outside its domain or on overflow.
pub fn unary(f: impl Fn(usize) -> Option<usize> + Send + Sync + 'static) -> Decider {
    let x = sym("x");
    let f = std::sync::Arc::new(f);
    let g = f.clone();
    Decider::predicate(alphabet(&["x"]), move |u, v| match (power_of(u, x), power_of(v, x)) {
        (Some(n), Some(m)) => f(n) == Some(m),
        _ => false,
    })
    .with_image(move |u, bound| power_of(u, x).and_then(|n| g(n)).filter(|m| *m <= bound).map(|m| repeat(x, m)).into_iter().collect())
}

pub fn rho_f(p: usize) -> Decider {
    unary(move |n| Some(n % p))
}

pub fn rho_g() -> Decider {
    unary(|n| n.checked_mul(n))
}

pub fn rho_h() -> Decider {
    unary(|n| if n == 0 { None } else { u32::try_from(n).ok().and_then(|e| n.checked_pow(e)) })
}

pub fn pow2_diag() -> Decider {
    unary(|n| n.is_power_of_two().then_some(n))
}

pub fn digits(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

pub fn sort_o(n: usize) -> Decider {
    let names = digits(n);
    Decider::function(alphabet(&names.iter().map(String::as_str).collect::<Vec<_>>()), |u| {
        let mut v = u.0.clone();
        v.sort();
        Some(Word(v))
    })
}

/// All `(uv, vu)`.
pub fn kappa() -> Decider {
    Decider::predicate(alphabet(&["a", "b"]), |u, v| u.len() == v.len() && (0..=u.len()).any(|i| u.0[i..].iter().chain(&u.0[..i]).eq(v.0.iter()))).with_image(
        |u, bound| {
            if u.len() > bound {
                return Vec::new();
            }
            let mut out: Vec<Word> = (0..=u.len()).map(|i| Word(u.0[i..].iter().chain(&u.0[..i]).copied().collect())).collect();
            out.sort();
            out.dedup();
            out
        },
    )
}

pub fn same_len_same_a() -> Decider {
    let a = sym("a");
    Decider::predicate(alphabet(&["a", "b"]), move |u, v| u.len() == v.len() && u.count(a) == v.count(a))
}

pub const TRIPLE_LEFT: [&str; 3] = ["a1", "a2", "a3"];
pub const TRIPLE_RIGHT: [&str; 3] = ["b1", "b2", "b3"];

fn triple(names: [&str; 3], n: usize) -> Word {
    Word(names.iter().flat_map(|s| std::iter::repeat(sym(s)).take(n)).collect())
}

/// `n` when `w = s1^n s2^n s3^n`.
pub fn triple_exponent(w: &Word, names: [&str; 3]) -> Option<usize> {
    (w.len() % 3 == 0 && *w == triple(names, w.len() / 3)).then_some(w.len() / 3)
}

pub fn lin_triple() -> Decider {
    let names: Vec<&str> = TRIPLE_LEFT.iter().chain(&TRIPLE_RIGHT).copied().collect();
    Decider::function(alphabet(&names), |u| triple_exponent(u, TRIPLE_LEFT).map(|n| triple(TRIPLE_RIGHT, n)))
}

/// Free group of rank one on `x` with inverse `X`.
pub fn wp_fg1() -> Decider {
    let (x, inv) = (sym("x"), sym("X"));
    let signed = move |w: &Word| w.count(x) as i64 - w.count(inv) as i64;
    Decider::predicate(alphabet(&["x", "X"]), move |u, v| signed(u) == signed(v))
}

/// Inverse of a free group generator: case swap.
pub fn inverse(s: Symbol) -> Symbol {
    let t = s.as_str();
    if t.chars().all(|c| c.is_ascii_lowercase()) {
        sym(&t.to_ascii_uppercase())
    } else {
        sym(&t.to_ascii_lowercase())
    }
}

pub fn free_reduce(w: &Word) -> Word {
    let mut out: Vec<Symbol> = Vec::with_capacity(w.len());
    for s in &w.0 {
        if out.last() == Some(&inverse(*s)) {
            out.pop();
        } else {
            out.push(*s);
        }
    }
    Word(out)
}

/// Free group of rank two on `x`, `y` with inverses `X`, `Y`.
pub fn wp_fg2() -> Decider {
    Decider::predicate(alphabet(&["x", "y", "X", "Y"]), |u, v| free_reduce(u) == free_reduce(v))
}

/// Union-find closure of a finite set of pairs, as word classes.
pub fn closure_classes(pairs: impl IntoIterator<Item = (Word, Word)>) -> FxHashMap<Word, usize> {
    let mut ids: FxHashMap<Word, usize> = FxHashMap::default();
    let mut parent: Vec<usize> = Vec::new();
    fn find(parent: &mut [usize], mut a: usize) -> usize {
        while parent[a] != a {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        a
    }
    for (u, v) in pairs {
        let mut id = |w: Word| {
            let n = ids.len();
            *ids.entry(w).or_insert_with(|| {
                parent.push(n);
                n
            })
        };
        let (a, b) = (id(u), id(v));
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let keys: Vec<(Word, usize)> = ids.into_iter().collect();
    keys.into_iter().map(|(w, i)| (w, find(&mut parent, i))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{oracle_compare, oracle_sample, FnOracle};

    fn check_image(d: &Decider, bound: usize) {
        let brute = FnOracle::new(d.alphabet().clone(), |u: &Word, v: &Word| d.relates(u, v));
        let s = oracle_sample(&brute, bound).unwrap();
        let diff = oracle_compare(&s, d).unwrap();
        assert!(diff.equal(), "{diff}");
    }

    #[test]
    fn images_agree_with_predicates() {
        check_image(&rev(), 4);
        check_image(&rho_f(3), 8);
        check_image(&rho_g(), 9);
        check_image(&rho_h(), 9);
        check_image(&sort_o(3), 4);
        check_image(&kappa(), 5);
        check_image(&lin_triple(), 3);
    }

    #[test]
    fn rev_census() {
        let s = oracle_sample(&rev(), 2).unwrap();
        let got: Vec<String> = s.pairs().map(|(u, v)| format!("{u}/{v}")).collect();
        assert_eq!(got.len(), 7);
        assert!(got.contains(&"ab/ba".to_string()));
    }

    #[test]
    fn rho_g_truncates() {
        let s = oracle_sample(&rho_g(), 3).unwrap();
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn free_reduction() {
        assert_eq!(free_reduce(&Word::parse("xyYXy")), Word::parse("y"));
        assert!(wp_fg2().relates(&Word::parse("xX"), &Word::empty()));
        assert!(!wp_fg2().relates(&Word::parse("xy"), &Word::parse("yx")));
    }

    #[test]
    fn word_problem_deciders_are_equivalences() {
        for d in [wp_fg1(), wp_fg2(), kappa(), same_len_same_a()] {
            let words = all_words(d.alphabet(), 4);
            for u in &words {
                assert!(d.relates(u, u));
                for v in d.image(u, 4) {
                    assert!(d.relates(&v, u));
                    for w in d.image(&v, 4) {
                        assert!(d.relates(u, &w));
                    }
                }
            }
        }
    }
}
