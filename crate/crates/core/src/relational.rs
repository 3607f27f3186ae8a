//! Relational (Dunn-style) readings of the four matrix values.
//!
//! Each reading maps the values `1, i, j, 0` bijectively onto the FDE values
//! `t, b, n, f`, i.e. onto subsets of `{1, 0}`, and gives every connective a
//! truth clause (membership of 1) and a falsity clause (membership of 0).
//! Readings are plain data: the evaluators below never branch on the option id.
//!
//! | value | O1 | O2 | O3 | O4 |
//! |-------|----|----|----|----|
//! | 1     | t  | t  | b  | b  |
//! | i     | b  | n  | t  | f  |
//! | j     | n  | b  | f  | t  |
//! | 0     | f  | f  | n  | n  |

use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::formula::{Formula, Sequent};
use crate::matrix::{
    self, check_cap, for_each_assignment, Assignment, Compiled, EvalError, Interpretation,
    TruthValue, Verdict,
};
use crate::tables::{self, TableEntry};

/// A subset of `{1, 0}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TruthSet {
    pub contains1: bool,
    pub contains0: bool,
}

impl TruthSet {
    pub const EMPTY: TruthSet = TruthSet::new(false, false);
    pub const TRUE: TruthSet = TruthSet::new(true, false);
    pub const FALSE: TruthSet = TruthSet::new(false, true);
    pub const BOTH: TruthSet = TruthSet::new(true, true);

    /// Enumeration order for relational interpretations: `{1}, {1,0}, {}, {0}`.
    pub const ALL: [TruthSet; 4] = [TruthSet::TRUE, TruthSet::BOTH, TruthSet::EMPTY, TruthSet::FALSE];

    pub const fn new(contains1: bool, contains0: bool) -> TruthSet {
        TruthSet {
            contains1,
            contains0,
        }
    }

    pub fn has(self, pole: Pole) -> bool {
        match pole {
            Pole::True => self.contains1,
            Pole::False => self.contains0,
        }
    }
}

impl fmt::Display for TruthSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.contains1, self.contains0) {
            (false, false) => f.write_str("{}"),
            (true, false) => f.write_str("{1}"),
            (false, true) => f.write_str("{0}"),
            (true, true) => f.write_str("{1,0}"),
        }
    }
}

impl Serialize for TruthSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl FromStr for TruthSet {
    type Err = String;

    /// Accepts `{}`, `{1}`, `{0}`, `{1,0}` / `{0,1}`, or an FDE letter.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Ok(v) = s.parse::<FdeValue>() {
            return Ok(v.to_set());
        }
        let inner = s
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| format!("unknown truth set `{s}`"))?;
        let mut set = TruthSet::EMPTY;
        for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "1" => set.contains1 = true,
                "0" => set.contains0 = true,
                _ => return Err(format!("unknown truth set `{s}`")),
            }
        }
        Ok(set)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FdeValue {
    T,
    B,
    N,
    F,
}

impl FdeValue {
    pub const ALL: [FdeValue; 4] = [FdeValue::T, FdeValue::B, FdeValue::N, FdeValue::F];
    pub const SYMBOLS: [char; 4] = ['t', 'b', 'n', 'f'];

    pub fn symbol(self) -> char {
        FdeValue::SYMBOLS[self as usize]
    }

    pub fn from_symbol(c: char) -> Option<FdeValue> {
        FdeValue::SYMBOLS
            .iter()
            .position(|&s| s == c)
            .map(|k| FdeValue::ALL[k])
    }

    pub fn to_set(self) -> TruthSet {
        match self {
            FdeValue::T => TruthSet::TRUE,
            FdeValue::B => TruthSet::BOTH,
            FdeValue::N => TruthSet::EMPTY,
            FdeValue::F => TruthSet::FALSE,
        }
    }

    pub fn from_set(s: TruthSet) -> FdeValue {
        match (s.contains1, s.contains0) {
            (true, false) => FdeValue::T,
            (true, true) => FdeValue::B,
            (false, false) => FdeValue::N,
            (false, true) => FdeValue::F,
        }
    }
}

impl fmt::Display for FdeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl Serialize for FdeValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_char(self.symbol())
    }
}

impl FromStr for FdeValue {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.trim().chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => FdeValue::from_symbol(c).ok_or_else(|| format!("unknown FDE value `{s}`")),
            _ => Err(format!("unknown FDE value `{s}`")),
        }
    }
}

/// Which membership a clause talks about: `1 ∈ V(..)` or `0 ∈ V(..)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Pole {
    True,
    False,
}

/// `pole ∈ V(~A)` iff `source ∈ V(A)` (or `∉` when `negated`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct NegClause {
    pub source: Pole,
    pub negated: bool,
}

impl NegClause {
    fn apply(self, a: TruthSet) -> bool {
        a.has(self.source) != self.negated
    }
}

/// How a binary clause combines the memberships of its two arguments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Junction {
    Both,
    Either,
}

impl Junction {
    fn apply(self, a: bool, b: bool) -> bool {
        match self {
            Junction::Both => a && b,
            Junction::Either => a || b,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BinaryFalsityMode {
    /// FDE: `0 ∈ V(A∧B)` iff either is false, `0 ∈ V(A∨B)` iff both are.
    TruthFunctional,
    /// Information meet/join: `0 ∈ V(A∧B)` iff both are false, `0 ∈ V(A∨B)` iff either is.
    Informational,
}

/// Which membership the consequence relation preserves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Preservation {
    /// designated iff `1 ∈ V`
    Truth,
    /// designated iff `0 ∉ V`
    NonFalsity,
    /// designated iff `0 ∈ V`
    Falsity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum OptionId {
    O1,
    O2,
    O3,
    O4,
}

impl OptionId {
    pub const ALL: [OptionId; 4] = [OptionId::O1, OptionId::O2, OptionId::O3, OptionId::O4];

    pub fn reading(self) -> &'static OptionReading {
        &OPTIONS[self as usize]
    }
}

impl fmt::Display for OptionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O{}", *self as usize + 1)
    }
}

impl FromStr for OptionId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().trim_start_matches(['O', 'o']) {
            "1" => Ok(OptionId::O1),
            "2" => Ok(OptionId::O2),
            "3" => Ok(OptionId::O3),
            "4" => Ok(OptionId::O4),
            _ => Err(format!("unknown option `{s}` (expected O1..O4)")),
        }
    }
}

/// A relational reading of the matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OptionReading {
    pub id: OptionId,
    /// Indexed by `TruthValue::index()`.
    pub value_map: [FdeValue; 4],
    pub neg_truth: NegClause,
    pub neg_falsity: NegClause,
    pub and_truth: Junction,
    pub and_falsity: Junction,
    pub or_truth: Junction,
    pub or_falsity: Junction,
    pub preservation: Preservation,
}

const fn clause(source: Pole, negated: bool) -> NegClause {
    NegClause { source, negated }
}

// 1 ∈ V(~A) iff 0 ∉ V(A); 0 ∈ V(~A) iff 1 ∈ V(A)
const RUET_TRUTH: NegClause = clause(Pole::False, true);
const RUET_FALSITY: NegClause = clause(Pole::True, false);
// 1 ∈ V(~A) iff 0 ∈ V(A); 0 ∈ V(~A) iff 1 ∉ V(A)
const KAMIDE_TRUTH: NegClause = clause(Pole::False, false);
const KAMIDE_FALSITY: NegClause = clause(Pole::True, true);

pub static OPTIONS: [OptionReading; 4] = [
    OptionReading {
        id: OptionId::O1,
        value_map: [FdeValue::T, FdeValue::B, FdeValue::N, FdeValue::F],
        neg_truth: RUET_TRUTH,
        neg_falsity: RUET_FALSITY,
        and_truth: Junction::Both,
        and_falsity: Junction::Either,
        or_truth: Junction::Either,
        or_falsity: Junction::Both,
        preservation: Preservation::Truth,
    },
    OptionReading {
        id: OptionId::O2,
        value_map: [FdeValue::T, FdeValue::N, FdeValue::B, FdeValue::F],
        neg_truth: KAMIDE_TRUTH,
        neg_falsity: KAMIDE_FALSITY,
        and_truth: Junction::Both,
        and_falsity: Junction::Either,
        or_truth: Junction::Either,
        or_falsity: Junction::Both,
        preservation: Preservation::NonFalsity,
    },
    OptionReading {
        id: OptionId::O3,
        value_map: [FdeValue::B, FdeValue::T, FdeValue::F, FdeValue::N],
        neg_truth: KAMIDE_TRUTH,
        neg_falsity: KAMIDE_FALSITY,
        and_truth: Junction::Both,
        and_falsity: Junction::Both,
        or_truth: Junction::Either,
        or_falsity: Junction::Either,
        preservation: Preservation::Truth,
    },
    OptionReading {
        id: OptionId::O4,
        value_map: [FdeValue::B, FdeValue::F, FdeValue::T, FdeValue::N],
        neg_truth: RUET_TRUTH,
        neg_falsity: RUET_FALSITY,
        and_truth: Junction::Both,
        and_falsity: Junction::Both,
        or_truth: Junction::Either,
        or_falsity: Junction::Either,
        preservation: Preservation::Falsity,
    },
];

/// Transcriptions of the displayed option tables, rows in `t b n f` order.
pub const GOLDEN_OPTION_TABLES: [&str; 4] = [
    include_str!("../data/option1.tables"),
    include_str!("../data/option2.tables"),
    include_str!("../data/option3.tables"),
    include_str!("../data/option4.tables"),
];

pub type RelInterpretation = Assignment<TruthSet>;

impl OptionReading {
    pub fn fde(&self, v: TruthValue) -> FdeValue {
        self.value_map[v.index()]
    }

    pub fn correspond(&self, v: TruthValue) -> TruthSet {
        self.fde(v).to_set()
    }

    pub fn inverse(&self, s: TruthSet) -> TruthValue {
        let fde = FdeValue::from_set(s);
        let k = self
            .value_map
            .iter()
            .position(|&x| x == fde)
            .expect("value map is a bijection");
        TruthValue::from_index(k)
    }

    pub fn binary_falsity_mode(&self) -> BinaryFalsityMode {
        match (self.and_falsity, self.or_falsity) {
            (Junction::Either, Junction::Both) => BinaryFalsityMode::TruthFunctional,
            (Junction::Both, Junction::Either) => BinaryFalsityMode::Informational,
            _ => unreachable!("mixed binary falsity clauses"),
        }
    }

    pub fn neg(&self, a: TruthSet) -> TruthSet {
        TruthSet::new(self.neg_truth.apply(a), self.neg_falsity.apply(a))
    }

    pub fn and(&self, a: TruthSet, b: TruthSet) -> TruthSet {
        TruthSet::new(
            self.and_truth.apply(a.contains1, b.contains1),
            self.and_falsity.apply(a.contains0, b.contains0),
        )
    }

    pub fn or(&self, a: TruthSet, b: TruthSet) -> TruthSet {
        TruthSet::new(
            self.or_truth.apply(a.contains1, b.contains1),
            self.or_falsity.apply(a.contains0, b.contains0),
        )
    }

    pub fn is_designated(&self, s: TruthSet) -> bool {
        match self.preservation {
            Preservation::Truth => s.contains1,
            Preservation::NonFalsity => !s.contains0,
            Preservation::Falsity => s.contains0,
        }
    }

    fn eval_compiled(&self, c: &Compiled, env: &[TruthSet]) -> TruthSet {
        c.fold(env, &|a| self.neg(a), &|a, b| self.and(a, b), &|a, b| self.or(a, b))
    }

    pub fn eval(&self, f: &Formula, interp: &RelInterpretation) -> Result<TruthSet, EvalError> {
        let vars = f.variables();
        let env = interp.values_for(&vars)?;
        Ok(self.eval_compiled(&Compiled::new(f, &vars), &env))
    }

    /// Designation preservation over every relational interpretation.
    pub fn consequence(&self, s: &Sequent, cap: usize) -> Result<Verdict<RelInterpretation>, EvalError> {
        let vars = s.variables();
        check_cap(vars.len(), cap)?;
        let premises: Vec<Compiled> = s.premises.iter().map(|p| Compiled::new(p, &vars)).collect();
        let conclusion = Compiled::new(&s.conclusion, &vars);
        let witness = for_each_assignment(&TruthSet::ALL, vars.len(), |env| {
            let refutes = !self.is_designated(self.eval_compiled(&conclusion, env))
                && premises
                    .iter()
                    .all(|p| self.is_designated(self.eval_compiled(p, env)));
            if refutes {
                ControlFlow::Break(RelInterpretation::from_parts(&vars, env))
            } else {
                ControlFlow::Continue(())
            }
        });
        Ok(match witness {
            Some(w) => Verdict::Invalid(w),
            None => Verdict::Valid,
        })
    }

    pub fn transport(&self, interp: &Interpretation) -> RelInterpretation {
        interp.map(|v| self.correspond(v))
    }

    pub fn transport_back(&self, interp: &RelInterpretation) -> Interpretation {
        interp.map(|s| self.inverse(s))
    }

    /// Checks `correspond(eval(f, I)) = rel_eval(f, correspond ∘ I)` for every
    /// matrix interpretation of the variables of `f`.
    pub fn check_equivalence(&self, f: &Formula, cap: usize) -> Result<EquivalenceReport, EvalError> {
        let table = matrix::truth_table(f, cap)?;
        let mut violations = Vec::new();
        for row in &table.rows {
            let expected = self.correspond(row.value);
            let actual = self.eval(f, &self.transport(&row.interpretation))?;
            if expected != actual {
                violations.push(Violation {
                    interpretation: row.interpretation.clone(),
                    expected,
                    actual,
                });
            }
        }
        Ok(EquivalenceReport {
            option: self.id,
            formula: f.to_string(),
            checked: table.rows.len(),
            violations,
        })
    }

    /// The 36 entries produced by the clauses, over FDE names in `t b n f` order.
    pub fn table_entries(&self) -> Vec<TableEntry> {
        tables::build_entries(
            &FdeValue::ALL,
            FdeValue::symbol,
            |a| FdeValue::from_set(self.neg(a.to_set())),
            |a, b| FdeValue::from_set(self.and(a.to_set(), b.to_set())),
            |a, b| FdeValue::from_set(self.or(a.to_set(), b.to_set())),
        )
    }

    pub fn render_tables(&self) -> String {
        tables::render_table(&self.table_entries())
    }

    pub fn golden_tables(&self) -> &'static str {
        GOLDEN_OPTION_TABLES[self.id as usize]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub interpretation: Interpretation,
    pub expected: TruthSet,
    pub actual: TruthSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub option: OptionId,
    pub formula: String,
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl EquivalenceReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn correspond(o: OptionId, v: TruthValue) -> TruthSet {
    o.reading().correspond(v)
}

pub fn rel_eval(o: OptionId, f: &Formula, interp: &RelInterpretation) -> Result<TruthSet, EvalError> {
    o.reading().eval(f, interp)
}

pub fn rel_designated(o: OptionId, s: TruthSet) -> bool {
    o.reading().is_designated(s)
}

pub fn rel_consequence(o: OptionId, s: &Sequent, cap: usize) -> Result<Verdict<RelInterpretation>, EvalError> {
    o.reading().consequence(s, cap)
}

pub fn check_option_equivalence(o: OptionId, f: &Formula, cap: usize) -> Result<EquivalenceReport, EvalError> {
    o.reading().check_equivalence(f, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::tests::arb_formula;
    use crate::formula::{parse, parse_sequent};
    use crate::matrix::{is_consequence, TruthValue as TV, CNL4};
    use crate::tables::parse_table;
    use proptest::prelude::*;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn rel(pairs: &[(&str, TruthSet)]) -> RelInterpretation {
        RelInterpretation::from_pairs(pairs.iter().copied())
    }

    #[test]
    fn correspondence_examples() {
        assert_eq!(correspond(OptionId::O1, TV::I), TruthSet::BOTH);
        assert_eq!(correspond(OptionId::O2, TV::I), TruthSet::EMPTY);
        assert_eq!(correspond(OptionId::O4, TV::J), TruthSet::TRUE);
    }

    #[test]
    fn summary_table() {
        let expected = [
            ("tbnf", OptionId::O1),
            ("tnbf", OptionId::O2),
            ("btfn", OptionId::O3),
            ("bftn", OptionId::O4),
        ];
        for (column, o) in expected {
            let got: String = TV::ALL.iter().map(|&v| o.reading().fde(v).symbol()).collect();
            assert_eq!(got, column, "{o}");
        }
    }

    #[test]
    fn rel_eval_examples() {
        // Both ~-clauses fire on {1} under O1.
        let got = rel_eval(OptionId::O1, &f("~p"), &rel(&[("p", TruthSet::TRUE)])).unwrap();
        assert_eq!(got, TruthSet::BOTH);
        let back = OptionId::O1.reading().inverse(TruthSet::TRUE);
        let via_matrix = correspond(OptionId::O1, CNL4.neg(back));
        assert_eq!(got, via_matrix);

        let got = rel_eval(
            OptionId::O3,
            &f("p & q"),
            &rel(&[("p", TruthSet::BOTH), ("q", TruthSet::FALSE)]),
        )
        .unwrap();
        assert_eq!(got, TruthSet::FALSE);

        for o in OptionId::ALL {
            for s in TruthSet::ALL {
                assert_eq!(rel_eval(o, &f("p"), &rel(&[("p", s)])).unwrap(), s);
            }
        }
        assert!(matches!(
            rel_eval(OptionId::O2, &f("p | q"), &rel(&[("p", TruthSet::TRUE)])),
            Err(EvalError::UnboundVariable(_))
        ));
    }

    #[test]
    fn designation_examples() {
        assert!(rel_designated(OptionId::O1, TruthSet::BOTH));
        assert!(rel_designated(OptionId::O2, TruthSet::EMPTY));
        assert!(!rel_designated(OptionId::O4, TruthSet::TRUE));
    }

    #[test]
    fn designated_sets_are_images_of_one_and_i() {
        for o in OptionId::ALL {
            let r = o.reading();
            for v in TV::ALL {
                assert_eq!(r.is_designated(r.correspond(v)), CNL4.is_designated(v), "{o} {v}");
            }
        }
    }

    #[test]
    fn consequence_examples() {
        let s = |t: &str| parse_sequent(t).unwrap();
        assert!(rel_consequence(OptionId::O2, &s("q |- p | ~~p"), 10).unwrap().is_valid());
        let v = rel_consequence(OptionId::O4, &s("p & ~p |- q"), 10).unwrap();
        let w = v.witness().expect("invalid");
        let back = OptionId::O4.reading().transport_back(w);
        assert!(CNL4.refutes(&s("p & ~p |- q"), &back).unwrap());
        assert!(rel_consequence(OptionId::O3, &s("|- p | ~~p"), 10).unwrap().is_valid());
    }

    #[test]
    fn equivalence_examples() {
        for (o, text, n) in [
            (OptionId::O1, "~(p & q)", 16),
            (OptionId::O2, "~~p", 4),
            (OptionId::O4, "p | q", 16),
        ] {
            let r = check_option_equivalence(o, &f(text), 10).unwrap();
            assert_eq!(r.checked, n);
            assert!(r.holds(), "{r:?}");
        }
    }

    #[test]
    fn clause_tables_match_transcriptions() {
        for o in OptionId::ALL {
            let r = o.reading();
            let golden = parse_table(r.golden_tables(), &FdeValue::SYMBOLS).unwrap();
            assert_eq!(golden.len(), 36);
            assert_eq!(r.table_entries(), golden, "{o}");
        }
    }

    #[test]
    fn truth_clauses_shared_falsity_clauses_split() {
        let first = OptionId::O1.reading();
        for o in OptionId::ALL {
            let r = o.reading();
            assert_eq!(r.and_truth, first.and_truth);
            assert_eq!(r.or_truth, first.or_truth);
        }
        use BinaryFalsityMode::*;
        let modes: Vec<_> = OptionId::ALL.iter().map(|o| o.reading().binary_falsity_mode()).collect();
        assert_eq!(modes, vec![TruthFunctional, TruthFunctional, Informational, Informational]);
        assert_eq!(
            OptionId::ALL.map(|o| o.reading().preservation),
            [
                Preservation::Truth,
                Preservation::NonFalsity,
                Preservation::Truth,
                Preservation::Falsity
            ]
        );
    }

    #[test]
    fn value_map_round_trips() {
        for o in OptionId::ALL {
            let r = o.reading();
            for v in TV::ALL {
                assert_eq!(r.inverse(r.correspond(v)), v);
            }
        }
    }

    #[test]
    fn parsing() {
        assert_eq!("{1,0}".parse::<TruthSet>().unwrap(), TruthSet::BOTH);
        assert_eq!("{0, 1}".parse::<TruthSet>().unwrap(), TruthSet::BOTH);
        assert_eq!("{}".parse::<TruthSet>().unwrap(), TruthSet::EMPTY);
        assert_eq!("n".parse::<TruthSet>().unwrap(), TruthSet::EMPTY);
        assert!("{2}".parse::<TruthSet>().is_err());
        assert_eq!("o3".parse::<OptionId>().unwrap(), OptionId::O3);
        assert_eq!("O4".parse::<OptionId>().unwrap(), OptionId::O4);
        assert!("O5".parse::<OptionId>().is_err());
    }

    proptest! {
        #[test]
        fn bijection_commutes(a in arb_formula(&["p", "q", "r"], 5)) {
            for o in OptionId::ALL {
                let r = check_option_equivalence(o, &a, 10).unwrap();
                prop_assert!(r.holds(), "{:?}", r);
            }
        }

        #[test]
        fn verdicts_coincide(
            prem in proptest::collection::vec(arb_formula(&["p", "q"], 3), 0..3),
            concl in arb_formula(&["p", "q", "r"], 3),
        ) {
            let s = Sequent::new(prem, concl);
            let expected = is_consequence(&s, 10).unwrap().is_valid();
            for o in OptionId::ALL {
                prop_assert_eq!(rel_consequence(o, &s, 10).unwrap().is_valid(), expected);
            }
        }
    }
}
