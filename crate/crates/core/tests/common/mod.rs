//! Seeded generators and small independent oracles shared by integration tests.

#![allow(dead_code)]

use std::collections::HashMap;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use cnl4_core::formula::{Formula, Sequent};
use cnl4_core::matrix::{Interpretation, TruthValue};
use cnl4_core::tables::{parse_table, Op};

pub const VARS: [&str; 3] = ["p", "q", "r"];

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Random formula of depth at most `depth` over `vars`.
pub fn formula(rng: &mut StdRng, vars: &[&str], depth: usize) -> Formula {
    if depth == 0 || rng.gen_ratio(1, 4) {
        return Formula::atom(vars[rng.gen_range(0..vars.len())]);
    }
    match rng.gen_range(0..3) {
        0 => Formula::neg(formula(rng, vars, depth - 1)),
        1 => Formula::and(formula(rng, vars, depth - 1), formula(rng, vars, depth - 1)),
        _ => Formula::or(formula(rng, vars, depth - 1), formula(rng, vars, depth - 1)),
    }
}

pub fn sequent(rng: &mut StdRng, vars: &[&str], depth: usize) -> Sequent {
    let n = rng.gen_range(0..=2);
    let premises = (0..n).map(|_| formula(rng, vars, depth)).collect();
    Sequent::new(premises, formula(rng, vars, depth))
}

/// Every assignment of the four values to `vars`, built by nested expansion.
pub fn all_interpretations(vars: &[String]) -> Vec<Interpretation> {
    let mut rows: Vec<Vec<(String, TruthValue)>> = vec![Vec::new()];
    for v in vars {
        rows = rows
            .into_iter()
            .flat_map(|row| {
                TruthValue::ALL.into_iter().map(move |val| {
                    let mut r = row.clone();
                    r.push((v.clone(), val));
                    r
                })
            })
            .collect()
    }
    rows.into_iter().map(Interpretation::from_pairs).collect()
}

/// Evaluator driven directly by a table file, with no reference to the
/// library's compiled operations.
pub struct TableOracle {
    neg: HashMap<char, char>,
    and: HashMap<(char, char), char>,
    or: HashMap<(char, char), char>,
}

impl TableOracle {
    pub fn from_text(text: &str, alphabet: &[char]) -> TableOracle {
        let mut oracle = TableOracle {
            neg: HashMap::new(),
            and: HashMap::new(),
            or: HashMap::new(),
        };
        for e in parse_table(text, alphabet).expect("table parses") {
            match e.op {
                Op::Neg => {
                    oracle.neg.insert(e.lhs, e.result);
                }
                Op::And => {
                    oracle.and.insert((e.lhs, e.rhs.unwrap()), e.result);
                }
                Op::Or => {
                    oracle.or.insert((e.lhs, e.rhs.unwrap()), e.result);
                }
            }
        }
        oracle
    }

    pub fn eval(&self, f: &Formula, env: &dyn Fn(&str) -> char) -> char {
        match f {
            Formula::Atom(name) => env(name),
            Formula::Neg(a) => self.neg[&self.eval(a, env)],
            Formula::And(a, b) => self.and[&(self.eval(a, env), self.eval(b, env))],
            Formula::Or(a, b) => self.or[&(self.eval(a, env), self.eval(b, env))],
        }
    }
}
