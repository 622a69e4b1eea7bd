use rustc_hash::{FxHashMap, FxHashSet};

use super::cfg::{ContextFreeGrammar, GSym, Production};
use super::fresh_name;
use crate::symbol::{Symbol, HASH};
use crate::word::Letter;

fn letter_base(l: &Letter) -> String {
    match l {
        Letter::Sym(s) if s.is_hash() => "THash".to_string(),
        Letter::Sym(s) => format!("T{s}"),
        Letter::Pair(p) => format!("T{}_{}", p.left().map_or("", |s| s.as_str()), p.right().map_or("", |s| s.as_str())),
    }
}

/// Chomsky normal form: `A -> B C`, `A -> t`, and `S -> eps` for a start
/// symbol that never occurs on a right-hand side.
pub fn to_cnf(g: &ContextFreeGrammar) -> ContextFreeGrammar {
    let mut used: FxHashSet<Symbol> = g.nonterminals().iter().copied().chain(g.alphabet().symbols().iter().copied()).collect();
    used.insert(Symbol::new(HASH));
    let start = fresh_name(&format!("{}0", g.start()), &mut used);
    let mut prods: Vec<Production> = vec![Production::new(start, vec![GSym::N(g.start())])];
    prods.extend(g.productions().iter().cloned());

    // Terminals inside long right-hand sides get their own nonterminal.
    let mut term_var: FxHashMap<Letter, Symbol> = FxHashMap::default();
    let mut extra = Vec::new();
    for p in prods.iter_mut().filter(|p| p.rhs.len() >= 2) {
        for s in p.rhs.iter_mut() {
            if let GSym::T(l) = *s {
                let v = *term_var.entry(l).or_insert_with(|| {
                    let v = fresh_name(&letter_base(&l), &mut used);
                    extra.push(Production::new(v, vec![GSym::T(l)]));
                    v
                });
                *s = GSym::N(v);
            }
        }
    }
    prods.extend(extra);

    // Binarise.
    let mut bin = Vec::new();
    for p in prods {
        if p.rhs.len() <= 2 {
            bin.push(p);
            continue;
        }
        let mut lhs = p.lhs;
        let k = p.rhs.len();
        for i in 0..k - 2 {
            let next = fresh_name(&format!("{}_{}", p.lhs, "b"), &mut used);
            bin.push(Production::new(lhs, vec![p.rhs[i], GSym::N(next)]));
            lhs = next;
        }
        bin.push(Production::new(lhs, vec![p.rhs[k - 2], p.rhs[k - 1]]));
    }

    // Remove ε-productions.
    let tmp = ContextFreeGrammar::new(g.alphabet().clone(), start, bin.clone()).expect("intermediate grammar");
    let nullable = tmp.nullable();
    let mut no_eps = FxHashSet::default();
    for p in &bin {
        let opts: Vec<usize> = (0..p.rhs.len()).filter(|&i| matches!(p.rhs[i], GSym::N(n) if nullable.contains(&n))).collect();
        for mask in 0..(1u32 << opts.len()) {
            let rhs: Vec<GSym> = p
                .rhs
                .iter()
                .enumerate()
                .filter(|(i, _)| opts.iter().position(|o| o == i).map_or(true, |bit| mask & (1 << bit) == 0))
                .map(|(_, s)| *s)
                .collect();
            if !rhs.is_empty() {
                no_eps.insert(Production::new(p.lhs, rhs));
            }
        }
    }

    // Remove unit productions.
    let mut unit: FxHashMap<Symbol, FxHashSet<Symbol>> = FxHashMap::default();
    for n in tmp.nonterminals() {
        unit.entry(*n).or_default().insert(*n);
    }
    loop {
        let mut changed = false;
        for p in &no_eps {
            if let [GSym::N(b)] = p.rhs[..] {
                let targets: Vec<Symbol> = unit.get(&b).map(|s| s.iter().copied().collect()).unwrap_or_default();
                for (_, set) in unit.iter_mut().filter(|(_, set)| set.contains(&p.lhs)) {
                    for t in &targets {
                        changed |= set.insert(*t);
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut out: Vec<Production> = Vec::new();
    let mut sorted_nts: Vec<&Symbol> = unit.keys().collect();
    sorted_nts.sort();
    for a in sorted_nts {
        let mut reach: Vec<&Symbol> = unit[a].iter().collect();
        reach.sort();
        for b in reach {
            for p in no_eps.iter().filter(|p| p.lhs == *b && !matches!(p.rhs[..], [GSym::N(_)])) {
                out.push(Production::new(*a, p.rhs.clone()));
            }
        }
    }
    if nullable.contains(&start) {
        out.push(Production::new(start, vec![]));
    }
    out.sort();
    out.dedup();
    ContextFreeGrammar::new(g.alphabet().clone(), start, out).expect("normal form is valid").trim()
}

/// CYK recogniser over a normal-form copy of a grammar.
#[derive(Clone, Debug)]
pub struct Cyk {
    nullable: bool,
    start: usize,
    nts: usize,
    terminal: FxHashMap<Letter, Vec<usize>>,
    binary: Vec<(usize, usize, usize)>,
}

impl Cyk {
    pub fn new(g: &ContextFreeGrammar) -> Cyk {
        let cnf = to_cnf(g);
        let ids: FxHashMap<Symbol, usize> = cnf.nonterminals().iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let mut terminal: FxHashMap<Letter, Vec<usize>> = FxHashMap::default();
        let mut binary = Vec::new();
        let mut nullable = false;
        for p in cnf.productions() {
            match p.rhs[..] {
                [] => nullable = true,
                [GSym::T(l)] => terminal.entry(l).or_default().push(ids[&p.lhs]),
                [GSym::N(b), GSym::N(c)] => binary.push((ids[&p.lhs], ids[&b], ids[&c])),
                _ => unreachable!("normal form"),
            }
        }
        Cyk { nullable, start: ids[&cnf.start()], nts: ids.len(), terminal, binary }
    }

    pub fn accepts(&self, w: &[Letter]) -> bool {
        let n = w.len();
        if n == 0 {
            return self.nullable;
        }
        // table[i][l] = nonterminals deriving w[i..i+l+1]
        let mut table = vec![vec![vec![false; self.nts]; n]; n];
        for (i, l) in w.iter().enumerate() {
            for &a in self.terminal.get(l).into_iter().flatten() {
                table[i][0][a] = true;
            }
        }
        for len in 2..=n {
            for i in 0..=n - len {
                for split in 1..len {
                    for &(a, b, c) in &self.binary {
                        if !table[i][len - 1][a] && table[i][split - 1][b] && table[i + split][len - split - 1][c] {
                            table[i][len - 1][a] = true;
                        }
                    }
                }
            }
        }
        table[0][n - 1][self.start]
    }
}

/// Membership by CYK.
pub fn cfg_member(g: &ContextFreeGrammar, w: &[Letter]) -> bool {
    Cyk::new(g).accepts(w)
}

#[cfg(test)]
mod tests {
    use super::super::cfg::{cfg_enumerate, enumerate};
    use super::*;
    use crate::budget::Budget;

    fn is_cnf(g: &ContextFreeGrammar) -> bool {
        g.productions().iter().all(|p| match p.rhs[..] {
            [] => p.lhs == g.start(),
            [GSym::T(_)] => true,
            [GSym::N(b), GSym::N(c)] => b != g.start() && c != g.start(),
            _ => false,
        })
    }

    #[test]
    fn cnf_preserves_rev_language() {
        let g = ContextFreeGrammar::parse("alphabet: a\nS -> (a,.) S (.,a) | eps\n").unwrap();
        let c = to_cnf(&g);
        assert!(is_cnf(&c));
        let a = enumerate(&g, Budget::Length(8)).unwrap().strings();
        let b = enumerate(&c, Budget::Length(8)).unwrap().strings();
        assert_eq!(a, b);
        assert_eq!(a.len(), 5);
    }

    #[test]
    fn trivial_grammars() {
        let g = ContextFreeGrammar::parse("alphabet: a\nS -> a\n").unwrap();
        let c = to_cnf(&g);
        assert_eq!(cfg_enumerate(&c, 3).unwrap().strings(), vec!["a"]);
        let e = ContextFreeGrammar::parse("alphabet: a\nS -> eps\n").unwrap();
        let c = to_cnf(&e);
        assert_eq!(c.productions().len(), 1);
        assert!(c.productions()[0].rhs.is_empty());
    }

    #[test]
    fn cyk_agrees_with_enumeration() {
        let g = ContextFreeGrammar::parse("alphabet: a b\nS -> a S b S | b S a S | eps\n").unwrap();
        let cyk = Cyk::new(&g);
        let lang = cfg_enumerate(&g, 6).unwrap();
        let ab = [Letter::sym("a"), Letter::sym("b")];
        let mut words: Vec<Vec<Letter>> = vec![vec![]];
        for len in 0..6 {
            let next: Vec<Vec<Letter>> = words.iter().filter(|w| w.len() == len).flat_map(|w| ab.iter().map(move |l| [w.clone(), vec![*l]].concat())).collect();
            words.extend(next);
        }
        for w in &words {
            let balanced = w.iter().filter(|l| **l == ab[0]).count() * 2 == w.len();
            assert_eq!(cyk.accepts(w), balanced, "{w:?}");
            assert_eq!(lang.contains(w), balanced);
        }
    }
}
