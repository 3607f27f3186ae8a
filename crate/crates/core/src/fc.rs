//! Functional completeness of the matrix algebra.
//!
//! A four-element algebra whose unary clone is everything and which has a
//! surjective, essentially binary operation is functionally complete
//! (Słupecki). This module evaluates the explicit defining terms for the
//! indicator functions `delta_a` and the constants `C_a`, computes the unary
//! clone by closure, and searches it for defining terms of arbitrary unary
//! functions.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::formula::{parse_with_macro, Formula};
use crate::matrix::{Interpretation, TruthValue, CNL4};
use crate::relational::{FdeValue, OptionId};

/// Number of distinct unary functions on four values.
pub const UNARY_COUNT: usize = 256;

/// Default exploration budget for the closure (tables finalized).
pub const DEFAULT_CLOSURE_BUDGET: usize = 4096;

/// A unary function on the carrier, stored as its four outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnaryTable(pub [TruthValue; 4]);

impl UnaryTable {
    pub const IDENTITY: UnaryTable = UnaryTable(TruthValue::ALL);

    pub fn constant(v: TruthValue) -> UnaryTable {
        UnaryTable([v; 4])
    }

    /// `1` at `a`, `0` elsewhere.
    pub fn indicator(a: TruthValue) -> UnaryTable {
        UnaryTable(TruthValue::ALL.map(|b| if a == b { TruthValue::One } else { TruthValue::Zero }))
    }

    pub fn from_fn(f: impl Fn(TruthValue) -> TruthValue) -> UnaryTable {
        UnaryTable(TruthValue::ALL.map(f))
    }

    pub fn apply(&self, v: TruthValue) -> TruthValue {
        self.0[v.index()]
    }

    /// `self ∘ inner`
    pub fn compose(&self, inner: &UnaryTable) -> UnaryTable {
        UnaryTable(inner.0.map(|v| self.apply(v)))
    }

    /// Base-4 code in `0..256`, first input least significant.
    pub fn code(&self) -> usize {
        self.0.iter().rev().fold(0, |acc, v| acc * 4 + v.index())
    }

    pub fn from_code(code: usize) -> UnaryTable {
        assert!(code < UNARY_COUNT);
        UnaryTable([0, 1, 2, 3].map(|k| TruthValue::from_index((code >> (2 * k)) & 3)))
    }

    /// Parses `1:0,i:i,j:j,0:1`, or with `option` set, FDE names such as
    /// `t:f,b:b,n:n,f:t` read through that option's value map.
    pub fn parse(text: &str, option: Option<OptionId>) -> Result<UnaryTable, String> {
        let read = |s: &str| -> Result<TruthValue, String> {
            match option {
                None => s.parse::<TruthValue>(),
                Some(o) => {
                    let fde = s.parse::<FdeValue>()?;
                    Ok(o.reading().inverse(fde.to_set()))
                }
            }
        };
        let mut out: [Option<TruthValue>; 4] = [None; 4];
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once(':')
                .ok_or_else(|| format!("expected `input:output`, found `{part}`"))?;
            let k = read(k)?;
            if out[k.index()].replace(read(v)?).is_some() {
                return Err(format!("input `{}` given twice", k));
            }
        }
        let mut table = [TruthValue::One; 4];
        for (k, slot) in out.iter().enumerate() {
            table[k] = slot.ok_or_else(|| format!("no output for `{}`", TruthValue::from_index(k)))?;
        }
        Ok(UnaryTable(table))
    }
}

impl fmt::Display for UnaryTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in TruthValue::ALL.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}:{}", v, self.0[k])?;
        }
        Ok(())
    }
}

impl Serialize for UnaryTable {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A binary function on the carrier; entry `a*4 + b` holds `f(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BinaryTable(pub [TruthValue; 16]);

impl BinaryTable {
    pub fn from_fn(f: impl Fn(TruthValue, TruthValue) -> TruthValue) -> BinaryTable {
        let mut out = [TruthValue::One; 16];
        for a in TruthValue::ALL {
            for b in TruthValue::ALL {
                out[a.index() * 4 + b.index()] = f(a, b);
            }
        }
        BinaryTable(out)
    }

    pub fn and() -> BinaryTable {
        BinaryTable::from_fn(|a, b| CNL4.and(a, b))
    }

    pub fn or() -> BinaryTable {
        BinaryTable::from_fn(|a, b| CNL4.or(a, b))
    }

    pub fn apply(&self, a: TruthValue, b: TruthValue) -> TruthValue {
        self.0[a.index() * 4 + b.index()]
    }

    pub fn is_surjective(&self) -> bool {
        TruthValue::ALL.iter().all(|v| self.0.contains(v))
    }
}

/// True iff `f` depends on both arguments.
///
/// `f(x, y) = g(x)` for some `g` holds exactly when `f` ignores `y`, whatever
/// class `g` is drawn from, so coordinate dependence decides reducibility.
pub fn is_essentially_binary(f: &BinaryTable) -> bool {
    let all = TruthValue::ALL;
    let depends_on_y = all
        .iter()
        .any(|&x| all.iter().any(|&y| f.apply(x, y) != f.apply(x, all[0])));
    let depends_on_x = all
        .iter()
        .any(|&y| all.iter().any(|&x| f.apply(x, y) != f.apply(all[0], y)));
    depends_on_x && depends_on_y
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FcError {
    #[error("term mentions `{0}`, but only {1} may appear")]
    ReservedVariable(String, &'static str),
}

/// Table of a term in the single variable `x`.
pub fn fn_of_unary_term(term: &Formula) -> Result<UnaryTable, FcError> {
    if let Some(v) = term.variables().into_iter().find(|v| v != "x") {
        return Err(FcError::ReservedVariable(v, "`x`"));
    }
    Ok(UnaryTable::from_fn(|v| {
        CNL4.eval(term, &Interpretation::from_pairs([("x", v)]))
            .expect("x is bound")
    }))
}

/// Table of a term in `x` and `y`.
pub fn fn_of_binary_term(term: &Formula) -> Result<BinaryTable, FcError> {
    if let Some(v) = term.variables().into_iter().find(|v| v != "x" && v != "y") {
        return Err(FcError::ReservedVariable(v, "`x` and `y`"));
    }
    Ok(BinaryTable::from_fn(|a, b| {
        CNL4.eval(term, &Interpretation::from_pairs([("x", a), ("y", b)]))
            .expect("x and y are bound")
    }))
}

/// The Boolean-style complement `¬x`, written out in `~`, `&`, `|`.
pub const BOOL_NEG_SOURCE: &str =
    "~~~(~~((x & ~~~x) & ~~~(x & ~~~x)) & ((x & ~~~x) | ~~~(x & ~~~x)))";

/// Defining terms for the indicators and constants; `!` stands for `¬`.
pub const LIBRARY_SOURCE: [(&str, &str); 8] = [
    ("delta_1", "!(~~x | ~~~x)"),
    ("delta_i", "!(~~x | !~~~x)"),
    ("delta_j", "!(~~~x | !!x)"),
    ("delta_0", "!!(~~x & ~~~x)"),
    ("C_1", "x | ~~x"),
    ("C_i", "~(x | ~~x)"),
    ("C_j", "~(x & ~~x)"),
    ("C_0", "x & ~~x"),
];

#[derive(Debug, Clone)]
pub struct DefinedTermLibrary {
    pub bool_neg: Formula,
    /// Library names with fully expanded terms, in `LIBRARY_SOURCE` order.
    pub terms: Vec<(&'static str, Formula)>,
}

impl DefinedTermLibrary {
    pub fn standard() -> DefinedTermLibrary {
        let bool_neg = crate::formula::parse(BOOL_NEG_SOURCE).expect("library source parses");
        let expand = |arg: Formula| bool_neg.substitute("x", &arg);
        let terms = LIBRARY_SOURCE
            .iter()
            .map(|&(name, src)| (name, parse_with_macro(src, '!', &expand).expect("library source parses")))
            .collect();
        DefinedTermLibrary { bool_neg, terms }
    }

    pub fn get(&self, name: &str) -> Option<&Formula> {
        self.terms.iter().find(|(n, _)| *n == name).map(|(_, t)| t)
    }
}

/// The table a library name is meant to define.
pub fn expected_table(name: &str) -> Option<UnaryTable> {
    let (kind, value) = name.split_once('_')?;
    let mut chars = value.chars();
    let v = match (chars.next(), chars.next()) {
        (Some(c), None) => TruthValue::from_symbol(c)?,
        _ => return None,
    };
    match kind {
        "delta" => Some(UnaryTable::indicator(v)),
        "C" => Some(UnaryTable::constant(v)),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointCheck {
    pub term: String,
    pub input: TruthValue,
    pub expected: TruthValue,
    pub actual: TruthValue,
}

impl PointCheck {
    pub fn passed(&self) -> bool {
        self.expected == self.actual
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaCReport {
    pub bool_neg_table: UnaryTable,
    pub checks: Vec<PointCheck>,
}

impl DeltaCReport {
    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.passed()).count()
    }

    pub fn all_passed(&self) -> bool {
        self.passed() == self.checks.len()
    }

    pub fn failures(&self) -> impl Iterator<Item = &PointCheck> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

/// Point checks of computed tables against the tables their names promise.
/// Names without an expected table are skipped.
pub fn check_tables(tables: &[(&str, UnaryTable)]) -> Vec<PointCheck> {
    let mut out = Vec::new();
    for &(name, table) in tables {
        let Some(expected) = expected_table(name) else {
            continue;
        };
        for v in TruthValue::ALL {
            out.push(PointCheck {
                term: name.to_string(),
                input: v,
                expected: expected.apply(v),
                actual: table.apply(v),
            });
        }
    }
    out
}

/// Evaluates every library term and checks it pointwise.
pub fn verify_delta_c() -> DeltaCReport {
    let lib = DefinedTermLibrary::standard();
    let tables: Vec<(&str, UnaryTable)> = lib
        .terms
        .iter()
        .map(|(n, t)| (*n, fn_of_unary_term(t).expect("library terms use only x")))
        .collect();
    DeltaCReport {
        bool_neg_table: fn_of_unary_term(&lib.bool_neg).expect("library terms use only x"),
        checks: check_tables(&tables),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub table: UnaryTable,
    #[serde(serialize_with = "ser_formula")]
    pub term: Formula,
    pub size: usize,
}

fn ser_formula<S: Serializer>(f: &Formula, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(f)
}

/// Unary tables reached so far, each with the smallest term found for it.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Closure {
    /// In discovery order: nondecreasing size, ties by printed term.
    pub witnesses: Vec<Witness>,
    #[serde(skip)]
    index: Vec<Option<usize>>,
}

impl Closure {
    pub fn len(&self) -> usize {
        self.witnesses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.witnesses.is_empty()
    }

    pub fn contains(&self, t: &UnaryTable) -> bool {
        self.witness(t).is_some()
    }

    pub fn witness(&self, t: &UnaryTable) -> Option<&Witness> {
        self.index.get(t.code()).copied().flatten().map(|k| &self.witnesses[k])
    }

    pub fn is_complete(&self) -> bool {
        self.len() == UNARY_COUNT
    }
}

#[derive(Debug, Clone, Error)]
pub enum ClosureError {
    #[error("budget exhausted after {reached} tables without reaching a fixpoint")]
    BudgetExhausted { reached: usize, partial: Box<Closure> },
}

/// Smallest-first exploration: entries are popped by (term size, printed
/// term), so the first time a table is popped its term is minimal.
struct Explorer {
    closure: Closure,
    best: Vec<Option<(usize, String)>>,
    heap: BinaryHeap<Reverse<(usize, String, usize)>>,
    pending: Vec<Formula>,
}

enum Stop {
    Fixpoint,
    Budget,
    Target,
}

impl Explorer {
    fn new() -> Explorer {
        let mut e = Explorer {
            closure: Closure {
                witnesses: Vec::new(),
                index: vec![None; UNARY_COUNT],
            },
            best: vec![None; UNARY_COUNT],
            heap: BinaryHeap::new(),
            pending: Vec::new(),
        };
        let x = Formula::atom("x");
        e.offer(UnaryTable::IDENTITY, 1, || x.clone());
        let neg = UnaryTable::from_fn(|v| CNL4.neg(v));
        e.offer(neg, 2, || Formula::neg(Formula::atom("x")));
        e
    }

    fn offer(&mut self, table: UnaryTable, size: usize, build: impl FnOnce() -> Formula) {
        let code = table.code();
        if self.closure.index[code].is_some() {
            return;
        }
        if let Some((best_size, _)) = &self.best[code] {
            if size > *best_size {
                return;
            }
        }
        let term = build();
        let text = term.to_string();
        if let Some((best_size, best_text)) = &self.best[code] {
            if (size, &text) >= (*best_size, best_text) {
                return;
            }
        }
        self.best[code] = Some((size, text.clone()));
        self.pending.push(term);
        self.heap.push(Reverse((size, text, self.pending.len() - 1)));
    }

    fn run(&mut self, budget: usize, target: Option<UnaryTable>) -> Stop {
        while let Some(Reverse((size, _, slot))) = self.heap.pop() {
            let term = self.pending[slot].clone();
            let table = fn_of_unary_term(&term).expect("closure terms use only x");
            if self.closure.contains(&table) {
                continue;
            }
            if self.closure.len() >= budget {
                return Stop::Budget;
            }
            self.closure.index[table.code()] = Some(self.closure.len());
            self.closure.witnesses.push(Witness {
                table,
                term: term.clone(),
                size,
            });
            if Some(table) == target {
                return Stop::Target;
            }
            if self.closure.is_complete() {
                return Stop::Fixpoint;
            }
            self.expand(table, &term, size);
        }
        Stop::Fixpoint
    }

    /// Combines a newly finalized entry with every finalized entry.
    fn expand(&mut self, g: UnaryTable, g_term: &Formula, g_size: usize) {
        self.offer(UnaryTable::from_fn(|v| CNL4.neg(g.apply(v))), g_size + 1, || {
            Formula::neg(g_term.clone())
        });
        let done: Vec<Witness> = self.closure.witnesses.clone();
        for f in &done {
            let (ft, fs) = (f.table, f.size);
            let and_size = 1 + fs + g_size;
            self.offer(UnaryTable::from_fn(|v| CNL4.and(ft.apply(v), g.apply(v))), and_size, || {
                Formula::and(f.term.clone(), g_term.clone())
            });
            self.offer(UnaryTable::from_fn(|v| CNL4.and(g.apply(v), ft.apply(v))), and_size, || {
                Formula::and(g_term.clone(), f.term.clone())
            });
            self.offer(UnaryTable::from_fn(|v| CNL4.or(ft.apply(v), g.apply(v))), and_size, || {
                Formula::or(f.term.clone(), g_term.clone())
            });
            self.offer(UnaryTable::from_fn(|v| CNL4.or(g.apply(v), ft.apply(v))), and_size, || {
                Formula::or(g_term.clone(), f.term.clone())
            });
            let f_occ = f.term.occurrences("x");
            self.offer(ft.compose(&g), fs + f_occ * (g_size - 1), || {
                f.term.substitute("x", g_term)
            });
            let g_occ = g_term.occurrences("x");
            self.offer(g.compose(&ft), g_size + g_occ * (fs - 1), || {
                g_term.substitute("x", &f.term)
            });
        }
    }
}

/// Least set of unary tables containing the identity and `~`, closed under
/// composition, pointwise `&` and `|`, and `~`. `budget` caps the number of
/// tables finalized.
pub fn unary_clone_closure(budget: usize) -> Result<Closure, ClosureError> {
    let mut explorer = Explorer::new();
    match explorer.run(budget, None) {
        Stop::Budget => Err(ClosureError::BudgetExhausted {
            reached: explorer.closure.len(),
            partial: Box::new(explorer.closure),
        }),
        Stop::Fixpoint | Stop::Target => Ok(explorer.closure),
    }
}

/// Smallest term (in the closure's order) whose table is `target`.
pub fn find_term_for_unary(target: &UnaryTable, budget: usize) -> Option<Formula> {
    let mut explorer = Explorer::new();
    explorer.run(budget, Some(*target));
    explorer.closure.witness(target).map(|w| w.term.clone())
}

#[derive(Debug, Clone, Serialize)]
pub struct BinaryCheck {
    pub operation: &'static str,
    pub surjective: bool,
    pub essentially_binary: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SlupeckiReport {
    pub unary_tables: usize,
    pub all_unary_definable: bool,
    pub binary: Vec<BinaryCheck>,
    pub functionally_complete: bool,
}

/// Both conditions of Słupecki's criterion, with `&` and `|` as the binary candidates.
pub fn slupecki_check() -> SlupeckiReport {
    let unary_tables = match unary_clone_closure(DEFAULT_CLOSURE_BUDGET) {
        Ok(c) => c.len(),
        Err(ClosureError::BudgetExhausted { reached, .. }) => reached,
    };
    let binary: Vec<BinaryCheck> = [("&", BinaryTable::and()), ("|", BinaryTable::or())]
        .into_iter()
        .map(|(operation, t)| BinaryCheck {
            operation,
            surjective: t.is_surjective(),
            essentially_binary: is_essentially_binary(&t),
        })
        .collect();
    let all_unary_definable = unary_tables == UNARY_COUNT;
    let functionally_complete =
        all_unary_definable && binary.iter().any(|b| b.surjective && b.essentially_binary);
    SlupeckiReport {
        unary_tables,
        all_unary_definable,
        binary,
        functionally_complete,
    }
}
