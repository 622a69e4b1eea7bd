//! ET0L and EDT0L systems: tables of parallel rewriting rules.

use std::collections::BTreeMap;
use std::fmt;

use rustc_hash::FxHashSet;

use crate::budget::{Budget, LetterTable, Measure};
use crate::error::{Error, Result};
use crate::grammar::GSym;
use crate::symbol::{Alphabet, Symbol, HASH};
use crate::text::{parse_rhs, Document, Lexicon, RhsToken};
use crate::word::Letter;
use crate::wordset::WordSet;

pub type Form = Vec<GSym>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub name: String,
    rules: BTreeMap<Symbol, Vec<Form>>,
    /// Nonterminals that had no rule and were given the identity.
    inserted: Vec<Symbol>,
}

impl Table {
    pub fn new(name: impl Into<String>, rules: impl IntoIterator<Item = (Symbol, Form)>) -> Table {
        let mut map: BTreeMap<Symbol, Vec<Form>> = BTreeMap::new();
        for (a, rhs) in rules {
            let alts = map.entry(a).or_default();
            if !alts.contains(&rhs) {
                alts.push(rhs);
            }
        }
        Table { name: name.into(), rules: map, inserted: Vec::new() }
    }

    pub fn rules(&self) -> impl Iterator<Item = (Symbol, &Form)> {
        self.rules.iter().flat_map(|(a, alts)| alts.iter().map(move |r| (*a, r)))
    }

    pub fn alternatives(&self, a: Symbol) -> &[Form] {
        self.rules.get(&a).map_or(&[], Vec::as_slice)
    }

    pub fn inserted(&self) -> &[Symbol] {
        &self.inserted
    }

    fn complete_with_identity(&mut self, nonterminals: &[Symbol]) {
        for &n in nonterminals {
            if !self.rules.contains_key(&n) {
                self.rules.insert(n, vec![vec![GSym::N(n)]]);
                self.inserted.push(n);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Et0lSystem {
    alphabet: Alphabet,
    nonterminals: Vec<Symbol>,
    axiom: Form,
    tables: Vec<Table>,
}

impl Et0lSystem {
    /// Tables missing a rule for some nonterminal receive the identity rule,
    /// recorded in [`Table::inserted`].
    pub fn new(alphabet: Alphabet, nonterminals: Vec<Symbol>, axiom: Form, tables: Vec<Table>) -> Result<Et0lSystem> {
        if tables.is_empty() {
            return Err(Error::Invalid("an ET0L system needs at least one table".into()));
        }
        let mut nonterminals = nonterminals;
        nonterminals.sort();
        nonterminals.dedup();
        for n in &nonterminals {
            if alphabet.contains(*n) || n.is_hash() {
                return Err(Error::AlphabetClash(n.to_string()));
            }
        }
        let mut tables = tables;
        for t in &mut tables {
            for (a, rhs) in t.rules() {
                if nonterminals.binary_search(&a).is_err() {
                    return Err(Error::Invalid(format!("table `{}` rewrites `{a}`, which is not a nonterminal", t.name)));
                }
                for s in rhs {
                    if let GSym::N(n) = s {
                        if nonterminals.binary_search(n).is_err() {
                            return Err(Error::Invalid(format!("table `{}` uses undeclared `{n}`", t.name)));
                        }
                    }
                }
            }
            t.complete_with_identity(&nonterminals);
        }
        Ok(Et0lSystem { alphabet, nonterminals, axiom, tables })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn nonterminals(&self) -> &[Symbol] {
        &self.nonterminals
    }

    pub fn axiom(&self) -> &Form {
        &self.axiom
    }

    pub fn tables(&self) -> &[Table] {
        &self.tables
    }

    pub fn terminals(&self) -> Vec<Letter> {
        let mut t: Vec<Letter> = self
            .axiom
            .iter()
            .chain(self.tables.iter().flat_map(|t| t.rules().flat_map(|(_, r)| r.iter())))
            .filter_map(|s| if let GSym::T(l) = s { Some(*l) } else { None })
            .collect();
        t.sort();
        t.dedup();
        t
    }

    pub fn uses_pairs(&self) -> bool {
        self.terminals().iter().any(|l| l.as_pair().is_some())
    }

    pub fn parse(src: &str) -> Result<Et0lSystem> {
        let doc = Document::parse(src, &["alphabet", "nonterminals", "axiom", "table"]);
        let alphabet = Alphabet::parse(doc.require("alphabet")?.0)?;
        if let Some(l) = doc.body.first() {
            return Err(Error::parse(l.no, "expected a header line"));
        }
        let mut names = doc.list("nonterminals");
        let tables_src: Vec<(String, String, usize)> = doc
            .headers
            .iter()
            .filter(|(k, _, _)| k.starts_with("table"))
            .map(|(k, v, l)| (k.trim_start_matches("table").trim().to_string(), v.clone(), *l))
            .collect();
        for (_, body, line) in &tables_src {
            for rule in body.split(';').filter(|r| !r.trim().is_empty()) {
                let (lhs, _) = rule.split_once("->").ok_or_else(|| Error::parse(*line, format!("expected `A -> rhs` in `{}`", rule.trim())))?;
                names.push(Symbol::new(lhs.trim()));
            }
        }
        let terms = Lexicon::new(alphabet.symbols().iter().map(|s| s.as_str()).chain([HASH]));
        let vars = Lexicon::new(names.iter().map(|s| s.as_str()));
        let in_alpha = |s: Symbol| alphabet.contains(s);
        let read = |text: &str, line: usize| -> Result<Form> {
            parse_rhs(text, line, &terms, &vars, &Lexicon::default(), &in_alpha)?
                .into_iter()
                .map(|t| match t {
                    RhsToken::Term(l) => Ok(GSym::T(l)),
                    RhsToken::Var { name, push, linear } if push.is_empty() && !linear => Ok(GSym::N(name)),
                    RhsToken::Var { .. } => Err(Error::parse(line, "flags are not allowed in an ET0L system")),
                })
                .collect()
        };
        let (axiom_src, axiom_line) = doc.require("axiom")?;
        let axiom = read(axiom_src, axiom_line)?;
        let mut tables = Vec::new();
        for (i, (name, body, line)) in tables_src.iter().enumerate() {
            let mut rules = Vec::new();
            for rule in body.split(';').filter(|r| !r.trim().is_empty()) {
                let (lhs, rhs) = rule.split_once("->").expect("checked above");
                for alt in rhs.split('|') {
                    rules.push((Symbol::new(lhs.trim()), read(alt, *line)?));
                }
            }
            let name = if name.is_empty() { format!("t{}", i + 1) } else { name.clone() };
            tables.push(Table::new(name, rules));
        }
        Et0lSystem::new(alphabet, names, axiom, tables)
    }
}

fn write_form(f: &mut fmt::Formatter<'_>, form: &Form) -> fmt::Result {
    if form.is_empty() {
        return write!(f, "eps");
    }
    for (i, s) in form.iter().enumerate() {
        if i > 0 {
            write!(f, " ")?;
        }
        match s {
            GSym::T(l) => write!(f, "{l}")?,
            GSym::N(n) => write!(f, "{n}")?,
        }
    }
    Ok(())
}

impl fmt::Display for Et0lSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "alphabet: {}", self.alphabet)?;
        let nts: Vec<&str> = self.nonterminals.iter().map(|s| s.as_str()).collect();
        writeln!(f, "nonterminals: {}", nts.join(" "))?;
        write!(f, "axiom: ")?;
        write_form(f, &self.axiom)?;
        writeln!(f)?;
        for t in &self.tables {
            write!(f, "table {}:", t.name)?;
            let mut first = true;
            for (a, rhs) in t.rules().filter(|(a, _)| !t.inserted.contains(a)) {
                write!(f, "{} {a} -> ", if first { "" } else { " ;" })?;
                write_form(f, rhs)?;
                first = false;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// All results of rewriting every nonterminal of `form` with `table`.
pub fn apply_table(form: &[GSym], table: &Table) -> Vec<Form> {
    let mut out: Vec<Form> = vec![Vec::new()];
    for s in form {
        match s {
            GSym::T(_) => out.iter_mut().for_each(|f| f.push(*s)),
            GSym::N(n) => {
                let alts = table.alternatives(*n);
                out = out.iter().flat_map(|f| alts.iter().map(move |a| [f.as_slice(), a.as_slice()].concat())).collect();
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// A system whose tables give every nonterminal exactly one rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edt0lWitness {
    system: Et0lSystem,
}

impl Edt0lWitness {
    pub fn system(&self) -> &Et0lSystem {
        &self.system
    }
}

pub fn edt0l_validate(sys: &Et0lSystem) -> Result<Edt0lWitness> {
    for t in &sys.tables {
        for (a, alts) in &t.rules {
            if alts.len() > 1 {
                return Err(Error::NotDeterministic { table: t.name.clone(), symbol: a.to_string() });
            }
        }
    }
    Ok(Edt0lWitness { system: sys.clone() })
}

/// Nonterminals that might derive ε, ignoring table synchronisation. Every
/// other nonterminal is certain to yield at least one letter.
fn maybe_erasable(sys: &Et0lSystem) -> FxHashSet<Symbol> {
    let mut set = FxHashSet::default();
    loop {
        let before = set.len();
        for t in &sys.tables {
            for (a, rhs) in t.rules() {
                if rhs.iter().all(|s| matches!(s, GSym::N(n) if set.contains(n))) {
                    set.insert(a);
                }
            }
        }
        if set.len() == before {
            return set;
        }
    }
}

/// False when no completion of `form` can fit the budget.
fn form_fits(form: &[GSym], table: &LetterTable, erasable: &FxHashSet<Symbol>) -> bool {
    let budget = table.budget();
    let mut pending = 0u32;
    let mut terminal_weight = 0u32;
    // Terminal runs stay contiguous in the final word.
    let mut run = Measure::default();
    let mut total = Measure::default();
    let mut hashes = 0;
    for s in form {
        match s {
            GSym::T(l) => {
                let m = table.measure_id(table.id(l).expect("letter in table"));
                hashes += m.hash as u32;
                terminal_weight += m.left as u32 + m.right as u32 + m.hash as u32;
                match budget.join(run, m) {
                    Some(r) => run = r,
                    None => return false,
                }
                if !matches!(budget, Budget::Unfolded(_)) {
                    match budget.join(total, m) {
                        Some(t) => total = t,
                        None => return false,
                    }
                }
            }
            GSym::N(n) => {
                run = Measure::default();
                if !erasable.contains(n) {
                    pending += 1;
                }
            }
        }
    }
    hashes <= 1 && terminal_weight + pending <= budget.max_len() as u32
}

/// Terminal words admitted by `budget` reachable within `max_apps` table
/// applications.
pub fn etol_enumerate(sys: &Et0lSystem, budget: Budget, max_apps: usize) -> Result<WordSet> {
    let table = LetterTable::new(sys.terminals(), budget)?;
    let erasable = maybe_erasable(sys);
    let mut seen: FxHashSet<Form> = FxHashSet::default();
    let mut frontier: Vec<Form> = Vec::new();
    let mut found = Vec::new();
    let mut visit = |form: Form, frontier: &mut Vec<Form>, found: &mut Vec<crate::packed::Packed>| -> Result<()> {
        if !form_fits(&form, &table, &erasable) || !seen.insert(form.clone()) {
            return Ok(());
        }
        if form.iter().all(|s| matches!(s, GSym::T(_))) {
            let letters: Vec<Letter> = form.iter().map(|s| if let GSym::T(l) = s { *l } else { unreachable!() }).collect();
            if let Some((w, m)) = table.encode(&letters)? {
                if budget.accepts_final(m) {
                    found.push(w);
                }
            }
        } else {
            frontier.push(form);
        }
        Ok(())
    };
    visit(sys.axiom.clone(), &mut frontier, &mut found)?;
    let mut apps = 0;
    while !frontier.is_empty() && apps < max_apps {
        let mut next = Vec::new();
        for form in std::mem::take(&mut frontier) {
            for t in &sys.tables {
                for succ in apply_table(&form, t) {
                    visit(succ, &mut next, &mut found)?;
                }
            }
        }
        frontier = next;
        apps += 1;
    }
    found.sort_unstable();
    found.dedup();
    Ok(WordSet { table, words: found, complete: frontier.is_empty() })
}
