//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use cnl4_core::fc::{self, BinaryTable, UnaryTable, UNARY_COUNT};
use cnl4_core::formula::{parse, parse_sequent, Formula, Sequent};
use cnl4_core::matrix::{Interpretation, TruthValue, CNL4, DEFAULT_VAR_CAP, GOLDEN_TABLES};
use cnl4_core::nd;
use cnl4_core::relational::{rel_consequence, OptionId, Preservation};
use cnl4_core::tables::parse_table;

use common::{all_interpretations, TableOracle, VARS};
use rand::Rng;
use TruthValue::{I, J, One, Zero};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn interp(pairs: &[(&str, TruthValue)]) -> Interpretation {
    Interpretation::from_pairs(pairs.iter().copied())
}

fn table_fidelity() -> Outcome {
    let golden = parse_table(GOLDEN_TABLES, &TruthValue::SYMBOLS).map_err(|e| e.to_string())?;
    let compiled = CNL4.table_entries();
    ensure(golden.len() == 36, || format!("{} golden entries", golden.len()))?;
    ensure(compiled.len() == 36, || format!("{} compiled entries", compiled.len()))?;
    let diffs: Vec<String> = golden
        .iter()
        .zip(&compiled)
        .filter(|(g, c)| g != c)
        .map(|(g, c)| format!("golden `{g}` vs compiled `{c}`"))
        .collect();
    ensure(diffs.is_empty(), || diffs.join("; "))?;
    Ok("36/36 entries match".into())
}

fn valid_schemas() -> Outcome {
    let schemas = [
        "q |- p | ~~p",
        "q |- ~(p | ~~p)",
        "p & ~~p |- q",
        "~(p & ~~p) |- q",
    ];
    for text in schemas {
        let s = parse_sequent(text).unwrap();
        let vars = s.variables();
        let rows = all_interpretations(&vars);
        ensure(rows.len() == 16, || format!("{text}: {} rows", rows.len()))?;
        for row in &rows {
            ensure(!CNL4.refutes(&s, row).unwrap(), || format!("{text} refuted by {row}"))?;
        }
        ensure(CNL4.is_consequence(&s, DEFAULT_VAR_CAP).unwrap().is_valid(), || format!("{text} not valid"))?;
    }

    let oracle = TableOracle::from_text(GOLDEN_TABLES, &TruthValue::SYMBOLS);
    let mut rng = common::rng(2);
    let mut evaluations = 0;
    for _ in 0..500 {
        let a = common::formula(&mut rng, &VARS, 4);
        let claims = [
            (Formula::or(a.clone(), Formula::neg_n(a.clone(), 2)), One),
            (Formula::neg(Formula::or(a.clone(), Formula::neg_n(a.clone(), 2))), I),
            (Formula::and(a.clone(), Formula::neg_n(a.clone(), 2)), Zero),
            (Formula::neg(Formula::and(a.clone(), Formula::neg_n(a.clone(), 2))), J),
        ];
        for row in all_interpretations(&a.variables()) {
            for (f, expected) in &claims {
                let got = CNL4.eval(f, &row).unwrap();
                let independent = oracle.eval(f, &|n| row.get(n).unwrap().symbol());
                ensure(got == *expected && independent == expected.symbol(), || {
                    format!("V({f}) = {got} / {independent} under {row}, expected {expected}")
                })?;
                evaluations += 1;
            }
        }
    }
    Ok(format!("4 schemas valid over 16 interpretations; {evaluations} value claims hold over 500 formulas"))
}

fn invalid_inferences() -> Outcome {
    // Published witnesses; canonical first countermodels must equal them
    // where they coincide.
    let cases: [(&str, Interpretation, bool); 4] = [
        ("q |- p | ~p", interp(&[("q", One), ("p", Zero)]), true),
        ("p & ~p |- q", interp(&[("p", One), ("q", Zero)]), false),
        ("~~p |- p", interp(&[("p", Zero)]), false),
        ("p |- ~~p", interp(&[("p", One)]), true),
    ];
    let mut notes = Vec::new();
    for (text, witness, canonical) in cases {
        let s = parse_sequent(text).unwrap();
        ensure(CNL4.refutes(&s, &witness).unwrap(), || format!("{witness} does not refute {text}"))?;
        let first = CNL4.countermodel(&s, DEFAULT_VAR_CAP).unwrap().ok_or(format!("{text} judged valid"))?;
        if canonical {
            ensure(first == witness, || format!("{text}: canonical {first}, expected {witness}"))?;
        } else {
            let all = CNL4.countermodels(&s, DEFAULT_VAR_CAP).unwrap();
            ensure(all.contains(&witness), || format!("{text}: {witness} missing from enumeration"))?;
            notes.push(format!("{text}: canonical first {first}"));
        }
    }
    Ok(format!("4 refuted by the published witnesses, 2 exact; {}", notes.join("; ")))
}

fn fc_verification() -> Outcome {
    let report = fc::verify_delta_c();
    ensure(report.checks.len() == 32, || format!("{} checks", report.checks.len()))?;
    ensure(report.all_passed(), || {
        report
            .failures()
            .map(|c| format!("{}({}) = {}, expected {}", c.term, c.input, c.actual, c.expected))
            .collect::<Vec<_>>()
            .join("; ")
    })?;

    let lib = fc::DefinedTermLibrary::standard();
    let tables: Vec<(&str, UnaryTable)> = lib
        .terms
        .iter()
        .map(|(n, t)| (*n, fc::fn_of_unary_term(t).unwrap()))
        .collect();
    let mut injected = 0;
    for k in 0..tables.len() {
        for input in TruthValue::ALL {
            for wrong in TruthValue::ALL {
                if wrong == tables[k].1.apply(input) {
                    continue;
                }
                let mut corrupted = tables.clone();
                corrupted[k].1 .0[input.index()] = wrong;
                let failures: Vec<_> = fc::check_tables(&corrupted).into_iter().filter(|c| !c.passed()).collect();
                ensure(
                    failures.len() == 1 && failures[0].term == tables[k].0 && failures[0].input == input,
                    || format!("corruption of {}({input}) to {wrong} not isolated", tables[k].0),
                )?;
                injected += 1;
            }
        }
    }
    Ok(format!(
        "32/32 point checks pass; {injected}/{injected} single-entry corruptions caught; derived complement table {}",
        report.bool_neg_table
    ))
}

fn clone_closure() -> Outcome {
    let start = Instant::now();
    let closure = fc::unary_clone_closure(fc::DEFAULT_CLOSURE_BUDGET).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(closure.len() == UNARY_COUNT, || format!("{} tables", closure.len()))?;
    let mut seen = std::collections::HashSet::new();
    for w in &closure.witnesses {
        ensure(seen.insert(w.table), || format!("duplicate table {}", w.table))?;
        let again = fc::fn_of_unary_term(&parse(&w.term.to_string()).unwrap()).unwrap();
        ensure(again == w.table, || format!("{} evaluates to {again}, recorded {}", w.term, w.table))?;
    }
    ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    let largest = closure.witnesses.last().map_or(0, |w| w.size);
    Ok(format!("256 tables at fixpoint, witnesses re-evaluate, largest witness size {largest}, {elapsed:.2?}"))
}

/// f(x, y) = g(x) or f(x, y) = g(y) for one of the 256 unary g.
fn reducible(f: &BinaryTable) -> bool {
    (0..UNARY_COUNT).map(UnaryTable::from_code).any(|g| {
        let all = TruthValue::ALL;
        let by_x = all.iter().all(|&x| all.iter().all(|&y| f.apply(x, y) == g.apply(x)));
        let by_y = all.iter().all(|&x| all.iter().all(|&y| f.apply(x, y) == g.apply(y)));
        by_x || by_y
    })
}

fn slupecki() -> Outcome {
    let report = fc::slupecki_check();
    let and = report.binary.iter().find(|b| b.operation == "&").ok_or("no & entry")?;
    ensure(and.surjective && and.essentially_binary, || format!("{and:?}"))?;
    ensure(report.all_unary_definable, || format!("{} unary tables", report.unary_tables))?;
    ensure(report.functionally_complete, || "verdict is not functionally complete".into())?;

    let mut rng = common::rng(6);
    let mut sample = vec![
        BinaryTable::and(),
        BinaryTable::or(),
        BinaryTable::from_fn(|x, _| x),
        BinaryTable::from_fn(|_, y| y),
    ];
    sample.extend(TruthValue::ALL.map(|v| BinaryTable::from_fn(move |_, _| v)));
    for _ in 0..1000 {
        sample.push(BinaryTable(std::array::from_fn(|_| TruthValue::from_index(rng.gen_range(0..4)))));
    }
    // random tables are almost never reducible; add some that are
    for code in (0..UNARY_COUNT).step_by(17) {
        let g = UnaryTable::from_code(code);
        sample.push(BinaryTable::from_fn(move |x, _| g.apply(x)));
        sample.push(BinaryTable::from_fn(move |_, y| g.apply(y)));
    }
    let mut reducible_count = 0;
    for f in &sample {
        let r = reducible(f);
        reducible_count += r as usize;
        ensure(fc::is_essentially_binary(f) != r, || format!("disagreement on {f:?}"))?;
    }
    Ok(format!(
        "& surjective and essentially binary; functionally complete; oracle agrees on {} tables ({reducible_count} reducible)",
        sample.len()
    ))
}

fn designated_letters(o: OptionId) -> [char; 2] {
    match o.reading().preservation {
        Preservation::Truth => ['t', 'b'],
        Preservation::NonFalsity => ['t', 'n'],
        Preservation::Falsity => ['b', 'f'],
    }
}

fn option_equivalence() -> Outcome {
    let oracles: Vec<TableOracle> = OptionId::ALL
        .iter()
        .map(|o| TableOracle::from_text(o.reading().golden_tables(), &['t', 'b', 'n', 'f']))
        .collect();
    let mut rng = common::rng(7);
    let mut points = 0;
    for _ in 0..200 {
        let f = common::formula(&mut rng, &VARS, 5);
        for (o, oracle) in OptionId::ALL.iter().zip(&oracles) {
            let reading = o.reading();
            let report = reading.check_equivalence(&f, DEFAULT_VAR_CAP).unwrap();
            ensure(report.holds(), || format!("{o}: {f}: {:?}", report.violations.first()))?;
            for row in all_interpretations(&f.variables()) {
                let matrix = CNL4.eval(&f, &row).unwrap();
                let rel = oracle.eval(&f, &|n| reading.fde(row.get(n).unwrap()).symbol());
                ensure(rel == reading.fde(matrix).symbol(), || format!("{o}: {f} under {row}"))?;
                ensure(
                    designated_letters(*o).contains(&rel) == matrix.is_designated(),
                    || format!("{o}: designation of {f} under {row}"),
                )?;
                points += 1;
            }
        }
    }
    let mut invalid = 0;
    for k in 0..100 {
        let mut s = common::sequent(&mut rng, &VARS, 3);
        // half the sample is valid by construction: A |- A | X and A & X |- A
        if k % 2 == 1 {
            let a = common::formula(&mut rng, &VARS, 3);
            let x = common::formula(&mut rng, &VARS, 2);
            s = if k % 4 == 1 {
                Sequent::new(vec![a.clone()], Formula::or(a, x))
            } else {
                Sequent::new(vec![Formula::and(a.clone(), x)], a)
            };
        }
        let matrix = CNL4.is_consequence(&s, DEFAULT_VAR_CAP).unwrap().is_valid();
        invalid += !matrix as usize;
        for o in OptionId::ALL {
            let rel = rel_consequence(o, &s, DEFAULT_VAR_CAP).unwrap().is_valid();
            ensure(rel == matrix, || format!("{o}: {s}: relational {rel}, matrix {matrix}"))?;
        }
    }
    Ok(format!(
        "200 formulas x 4 options commute ({points} points); 100 sequents agree ({invalid} invalid)"
    ))
}

fn option_tables() -> Outcome {
    for o in OptionId::ALL {
        let reading = o.reading();
        let golden = parse_table(reading.golden_tables(), &['t', 'b', 'n', 'f']).map_err(|e| e.to_string())?;
        let generated = reading.table_entries();
        ensure(golden.len() == 36 && golden == generated, || {
            let diff: Vec<String> = golden
                .iter()
                .zip(&generated)
                .filter(|(g, c)| g != c)
                .map(|(g, c)| format!("`{g}` vs `{c}`"))
                .collect();
            format!("{o}: {} golden entries; {}", golden.len(), diff.join("; "))
        })?;
    }
    Ok("4 x 36 entries match".into())
}

fn natural_deduction() -> Outcome {
    let corpus = nd::corpus();
    for e in &corpus {
        let checked = nd::check(&e.derivation).map_err(|err| format!("{}: {err}", e.name))?;
        ensure(checked.to_sequent() == e.sequent, || format!("{}: derives {checked}", e.name))?;
        ensure(nd::soundness_check(&e.derivation, DEFAULT_VAR_CAP).unwrap(), || format!("{} unsound", e.name))?;
    }

    let curated = [
        "|- p | ~~p",
        "p, ~~p |- q",
        "~p, ~q |- ~(p & q)",
        "~(p & q) |- ~p",
        "~p |- ~(p | q)",
        "~(p | q) |- ~p | ~q",
    ];
    for text in curated {
        let s = parse_sequent(text).unwrap();
        ensure(CNL4.is_consequence(&s, DEFAULT_VAR_CAP).unwrap().is_valid(), || format!("{text} not matrix-valid"))?;
        let d = nd::search(&s, 4).ok_or(format!("no derivation of {text} within depth 4"))?;
        ensure(d.height() <= 4, || format!("{text}: height {}", d.height()))?;
        let checked = nd::check(&d).map_err(|e| format!("{text}: {e}"))?;
        ensure(
            checked.open_assumptions.iter().all(|a| s.premises.contains(a)) && checked.conclusion == s.conclusion,
            || format!("{text}: found derivation proves {checked}"),
        )?;
    }
    let last = nd::search(&parse_sequent("~(p | q) |- ~p | ~q").unwrap(), 4).unwrap();
    ensure(last.nodes().iter().any(|(_, n)| n.rule == nd::RuleName::NOrE), || "no NOrE in the last derivation".into())?;

    let mut mutations = 0;
    for e in &corpus {
        for path in e.derivation.discharged_hypotheses() {
            for replacement in ["q", "~p", "p & q"] {
                let mut d = e.derivation.clone();
                let node = d.node_mut(&path).unwrap();
                let replacement = parse(replacement).unwrap();
                if node.conclusion == replacement {
                    continue;
                }
                node.conclusion = replacement;
                ensure(nd::check(&d).is_err(), || format!("{}: mutation at {path:?} accepted", e.name))?;
                mutations += 1;
            }
        }
    }
    ensure(mutations > 0, || "no discharged hypotheses in the corpus".into())?;
    Ok(format!(
        "{} corpus derivations check and are sound; 6/6 curated sequents found within depth 4; {mutations} discharge mutations rejected",
        corpus.len()
    ))
}

fn de_morgan() -> Outcome {
    for text in [
        "~(p & q) |- ~p & ~q",
        "~p & ~q |- ~(p & q)",
        "~(p | q) |- ~p | ~q",
        "~p | ~q |- ~(p | q)",
    ] {
        let s = parse_sequent(text).unwrap();
        ensure(CNL4.is_consequence(&s, DEFAULT_VAR_CAP).unwrap().is_valid(), || format!("{text} not valid"))?;
    }
    let at = interp(&[("p", I), ("q", J)]);
    let mut witnessed = Vec::new();
    for (lhs, rhs) in [("~(p & q)", "~p & ~q"), ("~(p | q)", "~p | ~q")] {
        let l = CNL4.eval(&parse(lhs).unwrap(), &at).unwrap();
        let r = CNL4.eval(&parse(rhs).unwrap(), &at).unwrap();
        ensure(l != r, || format!("{lhs} and {rhs} agree at ({at})"))?;
        witnessed.push(format!("{lhs}={l} vs {rhs}={r}"));
    }
    Ok(format!("4 directions valid; at p=i, q=j: {}", witnessed.join(", ")))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("table fidelity", table_fidelity),
        ("valid inferences", valid_schemas),
        ("invalid inferences", invalid_inferences),
        ("delta/C verification", fc_verification),
        ("unary clone closure", clone_closure),
        ("Slupecki conditions", slupecki),
        ("option equivalence", option_equivalence),
        ("option table fidelity", option_tables),
        ("natural deduction", natural_deduction),
        ("de Morgan equivalences", de_morgan),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS  {:>2} {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {:>2} {name}: {detail}", k + 1)
            }
        }
    }
    println!(
        "SKIP  11 excluded: completeness for arbitrary premise sets and Post completeness are not checked by enumeration"
    );
    println!("{}/{} criteria pass in {:.2?}", criteria.len() - failed, criteria.len(), start.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}
