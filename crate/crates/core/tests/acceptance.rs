//! Acceptance suite: one line per criterion, every criterion must pass.

use std::collections::BTreeSet;
use std::time::Instant;

use relkit::budget::Budget;
use relkit::formalism::{Formalism, Limits, Object};
use relkit::lsystem::edt0l_validate;
use relkit::oracle::{oracle_compare, oracle_sample};
use relkit::sample::{sample_equal, sample_restrict, RelationSample};
use relkit::symbol::Symbol;
use relkit::transforms::{construct, hom_letter, run_construction, Construction, Homomorphism, RunOptions};
use relkit::word::{unfold, Letter, Word};
use relkit::wordset::Viewpoint;
use relkit::zoo::deciders;
use relkit::zoo::{zoo_check, zoo_entry, zoo_list};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sample(obj: &Object, bound: usize) -> Result<RelationSample, String> {
    let (s, complete) = obj.sample(bound, Limits::for_bound(bound)).map_err(|e| e.to_string())?;
    ensure(complete, || format!("{} enumeration hit its limits at bound {bound}", obj.formalism()))?;
    Ok(s)
}

fn parse(kind: Formalism, src: &str) -> Object {
    Object::parse(kind, src).unwrap()
}

fn zoo_object(name: &str, label: &str) -> Object {
    zoo_entry(name).unwrap().representation(label).unwrap().object.clone()
}

fn zoo_verified(name: &str, bound: usize) -> Result<usize, String> {
    let report = zoo_check(name, bound).map_err(|e| e.to_string())?;
    ensure(report.verified(), || report.to_string())?;
    ensure(report.checks.iter().all(|c| c.complete), || format!("{name}: limits reached\n{report}"))?;
    Ok(report.checks.first().map_or(0, |c| c.diff.left_size))
}

/// Runs `c` at `bound`, then recompares input and output samples directly.
fn construction_holds(c: Construction, input: &Object, bound: usize) -> Result<Object, String> {
    let report = run_construction(c, input, &RunOptions::new(bound)).map_err(|e| e.to_string())?;
    ensure(report.verified(), || report.to_string())?;
    let diff = sample_equal(&sample(input, bound)?, &sample(&report.output, bound)?).map_err(|e| e.to_string())?;
    ensure(diff.equal(), || format!("{c}: {diff}"))?;
    Ok(report.output)
}

fn rev_round_trip() -> Outcome {
    let s = sample(&zoo_object("rev", "cfg-two-tape"), 6)?;
    let diff = oracle_compare(&s, &deciders::rev()).map_err(|e| e.to_string())?;
    ensure(diff.equal(), || diff.to_string())?;
    let census = oracle_sample(&deciders::rev(), 6).map_err(|e| e.to_string())?.len();
    ensure(s.len() == census && census == 127, || format!("{} pairs, oracle census {census}", s.len()))?;
    Ok(format!("{} pairs", s.len()))
}

fn rho_g_squares() -> Outcome {
    let set = zoo_object("rho_g", "et0l-unfolded").enumerate(Budget::Unfolded(25), Limits::for_bound(25)).map_err(|e| e.to_string())?;
    let want: Vec<String> = (0..=5).map(|n| format!("{}#{}", "x".repeat(n), "x".repeat(n * n))).collect();
    let mut got = set.strings();
    got.sort_by_key(|s| s.len());
    ensure(got == want, || format!("got {got:?}"))?;
    Ok("x^n#x^(n^2) for n <= 5".into())
}

fn rho_f_acceptance() -> Outcome {
    for p in [1, 2, 3, 5] {
        let name = format!("rho_f:{p}");
        for label in ["nfa-unfolded", "reg-unfolded"] {
            let obj = zoo_object(&name, label);
            let set = obj.enumerate(Budget::Length(41), Limits::for_bound(41)).map_err(|e| e.to_string())?;
            for n in 0..=20 {
                for m in 0..=20 {
                    let mut w: Vec<Letter> = vec![Letter::sym("x"); n];
                    w.push(Letter::hash_mark());
                    w.extend(vec![Letter::sym("x"); m]);
                    ensure(set.contains(&w) == (m == n % p), || format!("{name} {label}: x^{n}#x^{m}"))?;
                }
            }
        }
    }
    Ok("n, m <= 20 for p in 1, 2, 3, 5".into())
}

fn sorting() -> Outcome {
    let mut labels = Vec::new();
    for n in [2, 3, 4] {
        let name = format!("sort_o:{n}");
        zoo_verified(&name, 4)?;
        labels.extend(zoo_entry(&name).unwrap().representations.iter().map(|r| format!("{}/{}", n, r.label)));
    }
    for want in ["2/cfg-two-tape", "3/lig-unfolded", "4/lig-two-tape", "4/ig-unfolded"] {
        ensure(labels.iter().any(|l| l == want), || format!("missing {want}"))?;
    }
    Ok(labels.join(", "))
}

fn kappa() -> Outcome {
    let pairs = zoo_verified("kappa", 5)?;
    Ok(format!("ET0L and LIG, {pairs} pairs"))
}

fn u2t_regular() -> Outcome {
    let inputs = [
        ("x^n#", parse(Formalism::Regular, "alphabet: x\nstart: S\nS -> x S | # T\nT -> eps\n")),
        ("#x^n", parse(Formalism::Regular, "alphabet: x\nstart: S\nS -> # T\nT -> x T | eps\n")),
        ("rho_f p=2", zoo_object("rho_f:2", "reg-unfolded")),
    ];
    for (name, g) in &inputs {
        construction_holds(Construction::U2tReg, g, 8).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok("three grammars at bound 8".into())
}

fn u2t_counter() -> Outcome {
    for (name, label) in [("rho_e", "oca-unfolded"), ("wp_FG1", "oca-unfolded-blind")] {
        let out = construction_holds(Construction::U2tOca, &zoo_object(name, label), 6).map_err(|e| format!("{name}: {e}"))?;
        ensure(out.viewpoint() == Viewpoint::TwoTape, || format!("{name}: output is not two-tape"))?;
    }
    Ok("x^n#x^n and the blind FG1 automaton at bound 6".into())
}

fn u2t_indexed() -> Outcome {
    for (name, label) in [("sort_o:3", "lig-unfolded"), ("kappa", "lig-unfolded")] {
        let out = construction_holds(Construction::U2tIndexed, &zoo_object(name, label), 4).map_err(|e| format!("{name}: {e}"))?;
        ensure(out.formalism() == Formalism::LinearIndexed, || format!("{name}: output is {}", out.formalism()))?;
    }
    Ok("sorting and rotation LIGs at bound 4, output linear".into())
}

fn t2u_edt0l() -> Outcome {
    let systems = [
        ("(x^n, x^n)", zoo_object("rho_e", "edt0l-two-tape")),
        ("((xy)^n, y^n)", parse(Formalism::Et0l, "alphabet: x y\nnonterminals: A\naxiom: A\ntable step: A -> (x,.)(y,y)A\ntable stop: A -> eps\n")),
    ];
    for (name, sys) in &systems {
        let out = construction_holds(Construction::T2uEdt0l, sys, 8).map_err(|e| format!("{name}: {e}"))?;
        let Object::Et0l(s) = &out else { return Err(format!("{name}: output is {}", out.formalism())) };
        edt0l_validate(s).map_err(|e| format!("{name}: output not deterministic: {e}"))?;
        ensure(out.viewpoint() == Viewpoint::Unfolded, || format!("{name}: output is not unfolded"))?;
    }
    Ok("two diagonal systems at bound 8, deterministic".into())
}

fn t2u_grammars() -> Outcome {
    let regular = [("rho_e", zoo_object("rho_e", "reg-two-tape")), ("equality", zoo_object("equality", "reg-two-tape"))];
    for (name, g) in &regular {
        let split = construct(Construction::SplitPairs, g, None).map_err(|e| e.to_string())?;
        construction_holds(Construction::T2uRegCfg, &split, 6).map_err(|e| format!("{name}: {e}"))?;
    }
    let cf = [("rev", zoo_object("rev", "cfg-two-tape")), ("sort_o:2", zoo_object("sort_o:2", "cfg-two-tape"))];
    for (name, g) in regular.iter().chain(&cf) {
        construction_holds(Construction::T2uCfgLig, g, 6).map_err(|e| format!("{name}: {e}"))?;
    }
    // u2t-reg followed by t2u-reg-cfg returns to the original relation.
    for (name, src) in [("x^n#", "alphabet: x\nstart: S\nS -> x S | # T\nT -> eps\n"), ("#x^n", "alphabet: x\nstart: S\nS -> # T\nT -> x T | eps\n")] {
        let g = parse(Formalism::Regular, src);
        let two = construct(Construction::U2tReg, &g, None).map_err(|e| e.to_string())?;
        let back = construction_holds(Construction::T2uRegCfg, &two, 6).map_err(|e| format!("{name} round trip: {e}"))?;
        let diff = sample_equal(&sample(&g, 6)?, &sample(&back, 6)?).map_err(|e| e.to_string())?;
        ensure(diff.equal(), || format!("{name} round trip: {diff}"))?;
    }
    let rho_f = zoo_object("rho_f:2", "reg-unfolded");
    let two = construct(Construction::U2tReg, &rho_f, None).map_err(|e| e.to_string())?;
    let back = construction_holds(Construction::T2uRegCfg, &two, 6).map_err(|e| format!("rho_f round trip: {e}"))?;
    let diff = sample_equal(&sample(&rho_f, 6)?, &sample(&back, 6)?).map_err(|e| e.to_string())?;
    ensure(diff.equal(), || format!("rho_f round trip: {diff}"))?;
    Ok("rho_e, equality, rev, sort_o:2 at bound 6; round trips agree".into())
}

fn unary_transducers() -> Outcome {
    let cases: [(&str, &str, fn(usize) -> usize); 3] = [
        ("(a^n, a^n)", "alphabet: a\nstate q initial final\ntrans q (a,a) q\n", |n| n),
        ("(a^n, a^2n)", "alphabet: a\nstate q initial final\ntrans q (a,aa) q\n", |n| 2 * n),
        ("(a^n, a^n+1)", "alphabet: a\nstate p initial\nstate q final\ntrans p (a,a) p\ntrans p (.,a) q\n", |n| n + 1),
    ];
    for (name, src, f) in cases {
        let t = parse(Formalism::Transducer, src);
        let report = run_construction(Construction::UnaryTransOca, &t, &RunOptions::new(12)).map_err(|e| e.to_string())?;
        ensure(report.verified(), || format!("{name}: {report}"))?;
        ensure(report.output.formalism() == Formalism::Counter, || format!("{name}: output is {}", report.output.formalism()))?;
        let set = report.output.enumerate(Budget::Length(13), Limits::for_bound(13)).map_err(|e| e.to_string())?;
        let got: BTreeSet<String> = set.strings().into_iter().collect();
        let want: BTreeSet<String> = (0..=12).filter(|&n| n + f(n) <= 12).map(|n| format!("{}#{}", "a".repeat(n), "a".repeat(f(n)))).collect();
        ensure(got == want, || format!("{name}: got {got:?}"))?;
    }
    Ok("three transducers up to total length 12".into())
}

fn word_problems() -> Outcome {
    let checks = [("wp_M1", 8), ("wp_FG1", 5), ("wp_FG2", 5), ("wp_M_rho", 8), ("wp_M5", 8), ("wp_M_L", 9), ("wp_M_L_abc", 8)];
    let mut parts = Vec::new();
    for (name, bound) in checks {
        let pairs = zoo_verified(name, bound)?;
        parts.push(format!("{name}@{bound} ({pairs})"));
    }
    Ok(parts.join(", "))
}

fn hierarchy_smoke() -> Outcome {
    // No registered unfolded-regular representation describes rho_e.
    let rho_e = oracle_sample(&deciders::unary(Some), 6).map_err(|e| e.to_string())?;
    for entry in zoo_list() {
        let same = sample_equal(&rho_e, &oracle_sample(entry.decider(6).map_err(|e| e.to_string())?.as_ref(), 6).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        if !same.equal() {
            continue;
        }
        for r in &entry.representations {
            let regular = matches!(r.object.formalism(), Formalism::Regular | Formalism::Nfa);
            ensure(!(regular && r.viewpoint() == Viewpoint::Unfolded), || format!("{} registers {} as unfolded regular", entry.name, r.label))?;
        }
    }

    // Restrict the M1 word problem to l a* b* r against l b* a* r, unfold,
    // and erase the markers.
    let m1 = sample(&zoo_object("wp_M1", "oca-two-tape"), 8)?;
    let shaped = |w: &Word, first: &str, second: &str| {
        let s: Vec<&str> = w.0.iter().map(Symbol::as_str).collect();
        let (Some(&"l"), Some(&"r")) = (s.first(), s.last()) else { return false };
        let body = &s[1..s.len() - 1];
        let k = body.iter().take_while(|x| **x == first).count();
        body[k..].iter().all(|x| *x == second)
    };
    let restricted = sample_restrict(&m1, &|w: &Word| shaped(w, "a", "b"), &|w: &Word| shaped(w, "b", "a"));
    let h: Homomorphism = ["l", "r", "#"].into_iter().map(|s| (Symbol::new(s), Word::empty())).collect();
    let image: BTreeSet<String> = restricted
        .pairs()
        .map(|(u, v)| unfold(&u, &v).letters().iter().flat_map(|s| hom_letter(&h, Letter::Sym(*s))).map(|l| l.to_string()).collect())
        .collect();
    let blocks: BTreeSet<String> = (1..=3).map(|n| format!("{0}{1}{0}{1}", "a".repeat(n), "b".repeat(n))).collect();
    let degenerate: BTreeSet<String> = (0..=6).flat_map(|i| ["a".repeat(2 * i), "b".repeat(2 * i)]).collect();
    let want: BTreeSet<String> = blocks.union(&degenerate).cloned().collect();
    ensure(image == want, || format!("image {image:?}"))?;
    Ok(format!(
        "rho_e has no unfolded regular representation; a^n b^n a^n b^n for n <= 3 reproduced, with {} unary words from the identity pairs l a^i r ~ l a^i r and l b^j r ~ l b^j r",
        degenerate.len()
    ))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("rev round trip", rev_round_trip),
        ("rho_g ET0L", rho_g_squares),
        ("rho_f automata", rho_f_acceptance),
        ("sorting representations", sorting),
        ("rotation representations", kappa),
        ("u2t-reg", u2t_regular),
        ("u2t-oca", u2t_counter),
        ("u2t-indexed", u2t_indexed),
        ("t2u-edt0l", t2u_edt0l),
        ("t2u-reg-cfg and t2u-cfg-lig", t2u_grammars),
        ("unary-trans-oca", unary_transducers),
        ("word problems", word_problems),
        ("hierarchy smoke test", hierarchy_smoke),
    ];
    let results: Vec<(Outcome, f64)> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|(_, f)| {
                s.spawn(move || {
                    let start = Instant::now();
                    let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
                    (r, start.elapsed().as_secs_f64())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut failed = Vec::new();
    for (i, ((title, _), (r, secs))) in criteria.iter().zip(&results).enumerate() {
        match r {
            Ok(detail) => println!("criterion {:>2} PASS {title} ({secs:.1}s): {detail}", i + 1),
            Err(why) => {
                println!("criterion {:>2} FAIL {title} ({secs:.1}s): {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
