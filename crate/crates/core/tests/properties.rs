use proptest::prelude::*;

use relkit::formalism::{Formalism, Limits, Object};
use relkit::grammar::{cfg_enumerate, cfg_member, to_cnf, ContextFreeGrammar};
use relkit::oracle::{oracle_compare, oracle_sample};
use relkit::symbol::Symbol;
use relkit::transforms::{construct, run_construction, Construction, Homomorphism, RunOptions};
use relkit::word::Word;
use relkit::zoo::deciders::sort_o;
use relkit::zoo::zoo_entry;

const NONTERMINALS: [&str; 3] = ["S", "A", "B"];

/// Grammar text for alternatives indexed by nonterminal; tokens below 3
/// name nonterminals, the rest index `terminals`.
fn grammar_text(terminals: &[&str], alts: &[Vec<Vec<usize>>]) -> String {
    let mut src = String::from("alphabet: a b\nstart: S\n");
    for (lhs, rhss) in NONTERMINALS.iter().zip(alts) {
        let rendered: Vec<String> = rhss
            .iter()
            .map(|rhs| {
                if rhs.is_empty() {
                    return "eps".to_string();
                }
                rhs.iter().map(|&t| if t < 3 { NONTERMINALS[t] } else { terminals[t - 3] }).collect::<Vec<_>>().join(" ")
            })
            .collect();
        src += &format!("{lhs} -> {}\n", rendered.join(" | "));
    }
    src
}

fn alternatives(tokens: usize) -> impl Strategy<Value = Vec<Vec<Vec<usize>>>> {
    prop::collection::vec(prop::collection::vec(prop::collection::vec(0..tokens, 0..4), 1..4), 3)
}

fn verified(c: Construction, obj: &Object, bound: usize) -> Result<(), TestCaseError> {
    let report = run_construction(c, obj, &RunOptions::new(bound)).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert!(report.verified(), "{}\ninput:\n{}", report, obj);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cnf_and_cyk_agree_with_enumeration(alts in alternatives(5)) {
        let g = ContextFreeGrammar::parse(&grammar_text(&["a", "b"], &alts)).unwrap();
        let lang = cfg_enumerate(&g, 6).unwrap();
        prop_assert_eq!(cfg_enumerate(&to_cnf(&g), 6).unwrap().strings(), lang.strings());
        for w in relkit::oracle::all_words(g.alphabet(), 5) {
            let letters: Vec<_> = w.0.iter().map(|s| relkit::word::Letter::Sym(*s)).collect();
            prop_assert_eq!(cfg_member(&g, &letters), lang.contains(&letters), "{}", w);
        }
    }

    #[test]
    fn two_tape_cfg_to_lig_keeps_relation(alts in alternatives(6)) {
        let g = Object::parse(Formalism::ContextFree, &grammar_text(&["(a,.)", "(.,b)", "(a,b)"], &alts)).unwrap();
        verified(Construction::T2uCfgLig, &g, 3)?;
    }

    #[test]
    fn unary_transducer_to_counter_keeps_relation(
        moves in prop::collection::vec((0usize..2, 0usize..3, 0usize..3, 0usize..2), 1..5),
        accept_p in any::<bool>(),
    ) {
        let states = ["p", "q"];
        let mut src = format!("alphabet: a\nstate p initial{}\nstate q final\n", if accept_p { " final" } else { "" });
        for (from, i, j, to) in moves {
            let side = |k: usize| if k == 0 { ".".to_string() } else { "a".repeat(k) };
            let label = if i + j == 0 { "eps".to_string() } else { format!("({},{})", side(i), side(j)) };
            src += &format!("trans {} {label} {}\n", states[from], states[to]);
        }
        let t = Object::parse(Formalism::Transducer, &src).unwrap();
        verified(Construction::UnaryTransOca, &t, 6)?;
    }

    #[test]
    fn blind_counter_to_two_tape_keeps_relation(
        before in prop::collection::vec((0usize..2, -1i64..=1), 0..4),
        after in prop::collection::vec((0usize..2, -1i64..=1), 0..4),
        hash_delta in -1i64..=1,
    ) {
        let letters = ["a", "b"];
        let mut src = format!("alphabet: a b\nmode: blind\nstate p initial\nstate q final\ntrans p # {hash_delta:+} q\n");
        for (state, moves) in [("p", &before), ("q", &after)] {
            for (l, d) in moves {
                src += &format!("trans {state} {} {d:+} {state}\n", letters[*l]);
            }
        }
        let a = Object::parse(Formalism::Counter, &src).unwrap();
        verified(Construction::U2tOca, &a, 5)?;
    }

    #[test]
    fn samples_grow_with_the_bound(pick in 0usize..6, n in 1usize..5) {
        let (name, label) = [
            ("rev", "cfg-two-tape"),
            ("equality", "nfa-two-tape"),
            ("rho_e", "oca-unfolded"),
            ("kappa", "et0l-unfolded"),
            ("sort_o:2", "cfg-two-tape"),
            ("same_len_same_a", "oca-two-tape"),
        ][pick];
        let obj = zoo_entry(name).unwrap().representation(label).unwrap().object.clone();
        let (small, _) = obj.sample(n, Limits::for_bound(n)).unwrap();
        let (large, _) = obj.sample(n + 1, Limits::for_bound(n + 1)).unwrap();
        prop_assert_eq!(large.truncate(n), small);
    }
}

#[test]
fn erasing_the_largest_letter_collapses_sorting() {
    for n in 2..=4 {
        let entry = zoo_entry(&format!("sort_o:{n}")).unwrap();
        let h: Homomorphism = [(Symbol::new(&n.to_string()), Word::empty())].into_iter().collect();
        let want = oracle_sample(&sort_o(n - 1), 4).unwrap();
        for r in &entry.representations {
            let image = construct(Construction::Homomorphism, &r.object, Some(&h)).unwrap();
            let (s, complete) = image.sample(4, Limits::for_bound(4)).unwrap();
            let diff = oracle_compare(&s, &sort_o(n - 1)).unwrap();
            assert!(diff.equal(), "sort_o:{n} {}: {diff}", r.label);
            assert_eq!(s.len(), want.len());
            if !complete {
                eprintln!("sort_o:{n} {}: image enumeration reached its limits", r.label);
            }
        }
    }
}
