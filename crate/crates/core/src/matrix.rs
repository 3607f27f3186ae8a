//! The four-valued matrix: operation tables, valuation, and consequence by
//! exhaustive enumeration of interpretations.
//!
//! Interpretations are enumerated in a canonical order so that reported
//! countermodels are reproducible: variables in first-occurrence order,
//! values cycling `1, i, j, 0` with the rightmost variable fastest.

use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::formula::{Formula, Sequent};
use crate::tables::{self, TableEntry};

/// Default bound on the number of distinct variables an enumeration may range over.
pub const DEFAULT_VAR_CAP: usize = 10;

/// The plain-text transcription of the operation tables.
pub const GOLDEN_TABLES: &str = include_str!("../data/cnl4.tables");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TruthValue {
    One,
    I,
    J,
    Zero,
}

impl TruthValue {
    /// Canonical order: `1 < i < j < 0`. The order carries no logical meaning.
    pub const ALL: [TruthValue; 4] = [TruthValue::One, TruthValue::I, TruthValue::J, TruthValue::Zero];

    pub const SYMBOLS: [char; 4] = ['1', 'i', 'j', '0'];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(k: usize) -> TruthValue {
        TruthValue::ALL[k]
    }

    pub fn symbol(self) -> char {
        TruthValue::SYMBOLS[self.index()]
    }

    pub fn from_symbol(c: char) -> Option<TruthValue> {
        TruthValue::SYMBOLS
            .iter()
            .position(|&s| s == c)
            .map(TruthValue::from_index)
    }

    pub fn neg(self) -> TruthValue {
        CNL4.neg(self)
    }

    pub fn and(self, other: TruthValue) -> TruthValue {
        CNL4.and(self, other)
    }

    pub fn or(self, other: TruthValue) -> TruthValue {
        CNL4.or(self, other)
    }

    pub fn is_designated(self) -> bool {
        CNL4.is_designated(self)
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl FromStr for TruthValue {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.trim().chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => {
                TruthValue::from_symbol(c).ok_or_else(|| format!("unknown truth value `{s}`"))
            }
            _ => Err(format!("unknown truth value `{s}`")),
        }
    }
}

impl Serialize for TruthValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_char(self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable `{0}` is not assigned a value")]
    UnboundVariable(String),
    #[error("{variables} variables exceed the enumeration cap of {cap}")]
    CapExceeded { variables: usize, cap: usize },
}

/// An assignment of values to variables, kept in insertion order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Assignment<V> {
    entries: Vec<(String, V)>,
}

pub type Interpretation = Assignment<TruthValue>;

impl<V: Copy> Assignment<V> {
    pub fn new() -> Self {
        Assignment { entries: Vec::new() }
    }

    pub fn from_pairs<S: Into<String>>(pairs: impl IntoIterator<Item = (S, V)>) -> Self {
        let mut out = Assignment::new();
        for (name, v) in pairs {
            out.set(name, v);
        }
        out
    }

    pub(crate) fn from_parts(names: &[String], values: &[V]) -> Self {
        Assignment {
            entries: names.iter().cloned().zip(values.iter().copied()).collect(),
        }
    }

    /// Inserts or overwrites.
    pub fn set(&mut self, name: impl Into<String>, v: V) {
        let name = name.into();
        match self.entries.iter_mut().find(|(n, _)| *n == name) {
            Some(slot) => slot.1 = v,
            None => self.entries.push((name, v)),
        }
    }

    pub fn get(&self, name: &str) -> Option<V> {
        self.entries.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, V)> {
        self.entries.iter().map(|(n, v)| (n.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn map<W: Copy>(&self, f: impl Fn(V) -> W) -> Assignment<W> {
        Assignment {
            entries: self.entries.iter().map(|(n, v)| (n.clone(), f(*v))).collect(),
        }
    }

    pub(crate) fn values_for(&self, names: &[String]) -> Result<Vec<V>, EvalError> {
        names
            .iter()
            .map(|n| self.get(n).ok_or_else(|| EvalError::UnboundVariable(n.clone())))
            .collect()
    }
}

impl<V: fmt::Display> fmt::Display for Assignment<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (n, v)) in self.entries.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{n}={v}")?;
        }
        Ok(())
    }
}

impl FromStr for Interpretation {
    type Err = String;

    /// `p=1, q=i`; the empty string is the empty interpretation.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = Interpretation::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, value) = part
                .split_once('=')
                .ok_or_else(|| format!("expected `name=value`, found `{part}`"))?;
            out.set(name.trim(), value.parse::<TruthValue>()?);
        }
        Ok(out)
    }
}

impl<V: Serialize> Serialize for Assignment<V> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.entries.len()))?;
        for (n, v) in &self.entries {
            map.serialize_entry(n, v)?;
        }
        map.end()
    }
}

/// Outcome of a consequence check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "countermodel", rename_all = "lowercase")]
pub enum Verdict<W> {
    Valid,
    Invalid(W),
}

impl<W> Verdict<W> {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Valid => None,
            Verdict::Invalid(w) => Some(w),
        }
    }
}

/// A formula with atoms resolved to positions in a variable list.
#[derive(Debug, Clone)]
pub(crate) enum Compiled {
    Var(usize),
    Neg(Box<Compiled>),
    And(Box<Compiled>, Box<Compiled>),
    Or(Box<Compiled>, Box<Compiled>),
}

impl Compiled {
    pub(crate) fn new(f: &Formula, vars: &[String]) -> Compiled {
        match f {
            Formula::Atom(n) => Compiled::Var(
                vars.iter()
                    .position(|v| v == n)
                    .expect("variable list covers the formula"),
            ),
            Formula::Neg(b) => Compiled::Neg(Box::new(Compiled::new(b, vars))),
            Formula::And(l, r) => {
                Compiled::And(Box::new(Compiled::new(l, vars)), Box::new(Compiled::new(r, vars)))
            }
            Formula::Or(l, r) => {
                Compiled::Or(Box::new(Compiled::new(l, vars)), Box::new(Compiled::new(r, vars)))
            }
        }
    }

    /// Evaluates with caller-supplied operations over any carrier.
    pub(crate) fn fold<V: Copy>(
        &self,
        env: &[V],
        neg: &impl Fn(V) -> V,
        and: &impl Fn(V, V) -> V,
        or: &impl Fn(V, V) -> V,
    ) -> V {
        match self {
            Compiled::Var(k) => env[*k],
            Compiled::Neg(b) => neg(b.fold(env, neg, and, or)),
            Compiled::And(l, r) => and(l.fold(env, neg, and, or), r.fold(env, neg, and, or)),
            Compiled::Or(l, r) => or(l.fold(env, neg, and, or), r.fold(env, neg, and, or)),
        }
    }
}

/// Visits every assignment of `carrier` values to `n` slots, rightmost fastest.
/// Stops early when the visitor breaks.
pub(crate) fn for_each_assignment<V: Copy, B>(
    carrier: &[V],
    n: usize,
    mut visit: impl FnMut(&[V]) -> ControlFlow<B>,
) -> Option<B> {
    let mut digits = vec![0usize; n];
    let mut env: Vec<V> = vec![carrier[0]; n];
    loop {
        if let ControlFlow::Break(b) = visit(&env) {
            return Some(b);
        }
        let mut k = n;
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < carrier.len() {
                env[k] = carrier[digits[k]];
                break;
            }
            digits[k] = 0;
            env[k] = carrier[0];
        }
    }
}

pub(crate) fn check_cap(variables: usize, cap: usize) -> Result<(), EvalError> {
    if variables > cap {
        Err(EvalError::CapExceeded { variables, cap })
    } else {
        Ok(())
    }
}

/// A logical matrix over the four values: operation tables plus a designated set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixLogic {
    pub neg_table: [TruthValue; 4],
    pub and_table: [[TruthValue; 4]; 4],
    pub or_table: [[TruthValue; 4]; 4],
    pub designated: [bool; 4],
}

use TruthValue::{One as V1, I as VI, J as VJ, Zero as V0};

/// The matrix of CNL²₄ with designated values `{1, i}`.
pub const CNL4: MatrixLogic = MatrixLogic {
    neg_table: [VI, V0, V1, VJ],
    and_table: [
        [V1, VI, VJ, V0],
        [VI, VI, V0, V0],
        [VJ, V0, VJ, V0],
        [V0, V0, V0, V0],
    ],
    or_table: [
        [V1, V1, V1, V1],
        [V1, VI, V1, VI],
        [V1, V1, VJ, VJ],
        [V1, VI, VJ, V0],
    ],
    designated: [true, true, false, false],
};

/// One row of a truth table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruthTableRow {
    pub interpretation: Interpretation,
    pub value: TruthValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruthTable {
    pub variables: Vec<String>,
    pub rows: Vec<TruthTableRow>,
}

impl MatrixLogic {
    pub fn neg(&self, v: TruthValue) -> TruthValue {
        self.neg_table[v.index()]
    }

    pub fn and(&self, a: TruthValue, b: TruthValue) -> TruthValue {
        self.and_table[a.index()][b.index()]
    }

    pub fn or(&self, a: TruthValue, b: TruthValue) -> TruthValue {
        self.or_table[a.index()][b.index()]
    }

    pub fn is_designated(&self, v: TruthValue) -> bool {
        self.designated[v.index()]
    }

    pub(crate) fn eval_compiled(&self, c: &Compiled, env: &[TruthValue]) -> TruthValue {
        c.fold(env, &|v| self.neg(v), &|a, b| self.and(a, b), &|a, b| self.or(a, b))
    }

    pub fn eval(&self, f: &Formula, interp: &Interpretation) -> Result<TruthValue, EvalError> {
        let vars = f.variables();
        let env = interp.values_for(&vars)?;
        Ok(self.eval_compiled(&Compiled::new(f, &vars), &env))
    }

    pub fn truth_table(&self, f: &Formula, cap: usize) -> Result<TruthTable, EvalError> {
        let vars = f.variables();
        check_cap(vars.len(), cap)?;
        let compiled = Compiled::new(f, &vars);
        let mut rows = Vec::with_capacity(4usize.pow(vars.len() as u32));
        for_each_assignment::<_, ()>(&TruthValue::ALL, vars.len(), |env| {
            rows.push(TruthTableRow {
                interpretation: Interpretation::from_parts(&vars, env),
                value: self.eval_compiled(&compiled, env),
            });
            ControlFlow::Continue(())
        });
        Ok(TruthTable {
            variables: vars,
            rows,
        })
    }

    /// Scans interpretations in canonical order and calls `found` on each
    /// countermodel until it breaks.
    fn scan_countermodels<B>(
        &self,
        s: &Sequent,
        cap: usize,
        mut found: impl FnMut(&[String], &[TruthValue]) -> ControlFlow<B>,
    ) -> Result<Option<B>, EvalError> {
        let vars = s.variables();
        check_cap(vars.len(), cap)?;
        let premises: Vec<Compiled> = s.premises.iter().map(|p| Compiled::new(p, &vars)).collect();
        let conclusion = Compiled::new(&s.conclusion, &vars);
        Ok(for_each_assignment(&TruthValue::ALL, vars.len(), |env| {
            let refutes = !self.is_designated(self.eval_compiled(&conclusion, env))
                && premises
                    .iter()
                    .all(|p| self.is_designated(self.eval_compiled(p, env)));
            if refutes {
                found(&vars, env)
            } else {
                ControlFlow::Continue(())
            }
        }))
    }

    /// Designated-value preservation over all interpretations of the
    /// sequent's variables; returns the canonically first countermodel.
    pub fn is_consequence(&self, s: &Sequent, cap: usize) -> Result<Verdict<Interpretation>, EvalError> {
        Ok(match self.countermodel(s, cap)? {
            Some(w) => Verdict::Invalid(w),
            None => Verdict::Valid,
        })
    }

    pub fn countermodel(&self, s: &Sequent, cap: usize) -> Result<Option<Interpretation>, EvalError> {
        self.scan_countermodels(s, cap, |vars, env| {
            ControlFlow::Break(Interpretation::from_parts(vars, env))
        })
    }

    /// Every countermodel, in canonical order.
    pub fn countermodels(&self, s: &Sequent, cap: usize) -> Result<Vec<Interpretation>, EvalError> {
        let mut out = Vec::new();
        self.scan_countermodels::<()>(s, cap, |vars, env| {
            out.push(Interpretation::from_parts(vars, env));
            ControlFlow::Continue(())
        })?;
        Ok(out)
    }

    /// Whether `interp` designates every premise and not the conclusion.
    pub fn refutes(&self, s: &Sequent, interp: &Interpretation) -> Result<bool, EvalError> {
        for p in &s.premises {
            if !self.is_designated(self.eval(p, interp)?) {
                return Ok(false);
            }
        }
        Ok(!self.is_designated(self.eval(&s.conclusion, interp)?))
    }

    /// The 36 table entries in canonical row order.
    pub fn table_entries(&self) -> Vec<TableEntry> {
        tables::build_entries(
            &TruthValue::ALL,
            TruthValue::symbol,
            |v| self.neg(v),
            |a, b| self.and(a, b),
            |a, b| self.or(a, b),
        )
    }

    pub fn render_tables(&self) -> String {
        tables::render_table(&self.table_entries())
    }
}

pub fn eval(f: &Formula, interp: &Interpretation) -> Result<TruthValue, EvalError> {
    CNL4.eval(f, interp)
}

pub fn truth_table(f: &Formula, cap: usize) -> Result<TruthTable, EvalError> {
    CNL4.truth_table(f, cap)
}

pub fn is_consequence(s: &Sequent, cap: usize) -> Result<Verdict<Interpretation>, EvalError> {
    CNL4.is_consequence(s, cap)
}

pub fn countermodel(s: &Sequent, cap: usize) -> Result<Option<Interpretation>, EvalError> {
    CNL4.countermodel(s, cap)
}
