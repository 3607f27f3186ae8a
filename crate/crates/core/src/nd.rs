//! Natural deduction: derivation trees, a checker with hypothesis discharge,
//! a corpus of worked derivations, and a depth-bounded backward proof search.
//!
//! Rules (premises above, conclusion after `=>`):
//!
//! ```text
//! AndI    A, B => A&B            NAndI    ~A, ~B => ~(A&B)
//! AndE_L  A&B => A               NAndE_L  ~(A&B) => ~A
//! AndE_R  A&B => B               NAndE_R  ~(A&B) => ~B
//! OrI_L   A => A|B               NOrI_L   ~A => ~(A|B)
//! OrI_R   B => A|B               NOrI_R   ~B => ~(A|B)
//! OrE     A|B, [A]..C, [B]..C => C
//! NOrE    ~(A|B), [~A]..C, [~B]..C => C
//! NN1     A, ~~A => B            NN2      => A | ~~A
//! ```
//!
//! Hypotheses are leaves carrying a label. `OrE`/`NOrE` list the labels they
//! discharge; every free occurrence of such a label in the second premise must
//! be the left case formula and in the third premise the right one.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{parse, Formula, ParseError, Sequent};
use crate::matrix::{self, EvalError};

pub const DEFAULT_SEARCH_DEPTH: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleName {
    AndI,
    AndEL,
    AndER,
    OrIL,
    OrIR,
    OrE,
    NN1,
    NN2,
    NAndI,
    NAndEL,
    NAndER,
    NOrIL,
    NOrIR,
    NOrE,
    Hyp,
}

impl RuleName {
    pub const ALL: [RuleName; 15] = [
        RuleName::AndI,
        RuleName::AndEL,
        RuleName::AndER,
        RuleName::OrIL,
        RuleName::OrIR,
        RuleName::OrE,
        RuleName::NN1,
        RuleName::NN2,
        RuleName::NAndI,
        RuleName::NAndEL,
        RuleName::NAndER,
        RuleName::NOrIL,
        RuleName::NOrIR,
        RuleName::NOrE,
        RuleName::Hyp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleName::AndI => "AndI",
            RuleName::AndEL => "AndE_L",
            RuleName::AndER => "AndE_R",
            RuleName::OrIL => "OrI_L",
            RuleName::OrIR => "OrI_R",
            RuleName::OrE => "OrE",
            RuleName::NN1 => "NN1",
            RuleName::NN2 => "NN2",
            RuleName::NAndI => "NAndI",
            RuleName::NAndEL => "NAndE_L",
            RuleName::NAndER => "NAndE_R",
            RuleName::NOrIL => "NOrI_L",
            RuleName::NOrIR => "NOrI_R",
            RuleName::NOrE => "NOrE",
            RuleName::Hyp => "Hyp",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            RuleName::NN2 | RuleName::Hyp => 0,
            RuleName::AndEL
            | RuleName::AndER
            | RuleName::OrIL
            | RuleName::OrIR
            | RuleName::NAndEL
            | RuleName::NAndER
            | RuleName::NOrIL
            | RuleName::NOrIR => 1,
            RuleName::AndI | RuleName::NN1 | RuleName::NAndI => 2,
            RuleName::OrE | RuleName::NOrE => 3,
        }
    }

    fn discharges(self) -> bool {
        matches!(self, RuleName::OrE | RuleName::NOrE)
    }
}

impl fmt::Display for RuleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleName::ALL
            .iter()
            .copied()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown rule `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Derivation {
    pub rule: RuleName,
    pub conclusion: Formula,
    pub premises: Vec<Derivation>,
    /// Labels discharged here (`OrE`/`NOrE` only).
    pub discharge: Vec<String>,
    /// Hypothesis label (`Hyp` only).
    pub label: Option<String>,
}

impl Derivation {
    fn node(rule: RuleName, conclusion: Formula, premises: Vec<Derivation>) -> Derivation {
        Derivation {
            rule,
            conclusion,
            premises,
            discharge: Vec::new(),
            label: None,
        }
    }

    pub fn hyp(label: impl Into<String>, formula: Formula) -> Derivation {
        Derivation {
            label: Some(label.into()),
            ..Derivation::node(RuleName::Hyp, formula, Vec::new())
        }
    }

    /// `A | ~~A` with no premises.
    pub fn nn2(a: Formula) -> Derivation {
        let concl = Formula::or(a.clone(), Formula::neg_n(a, 2));
        Derivation::node(RuleName::NN2, concl, Vec::new())
    }

    pub fn nn1(a: Derivation, nna: Derivation, conclusion: Formula) -> Derivation {
        Derivation::node(RuleName::NN1, conclusion, vec![a, nna])
    }

    pub fn and_i(left: Derivation, right: Derivation) -> Derivation {
        let concl = Formula::and(left.conclusion.clone(), right.conclusion.clone());
        Derivation::node(RuleName::AndI, concl, vec![left, right])
    }

    /// `AndE_L`/`AndE_R`; `None` if the premise is not a conjunction.
    pub fn and_e(premise: Derivation, left: bool) -> Option<Derivation> {
        let Formula::And(l, r) = &premise.conclusion else {
            return None;
        };
        let (rule, concl) = if left {
            (RuleName::AndEL, (**l).clone())
        } else {
            (RuleName::AndER, (**r).clone())
        };
        Some(Derivation::node(rule, concl, vec![premise]))
    }

    pub fn or_i_l(premise: Derivation, right: Formula) -> Derivation {
        let concl = Formula::or(premise.conclusion.clone(), right);
        Derivation::node(RuleName::OrIL, concl, vec![premise])
    }

    pub fn or_i_r(left: Formula, premise: Derivation) -> Derivation {
        let concl = Formula::or(left, premise.conclusion.clone());
        Derivation::node(RuleName::OrIR, concl, vec![premise])
    }

    /// `OrE` or `NOrE` (chosen by `rule`), discharging `labels`.
    pub fn cases(
        rule: RuleName,
        major: Derivation,
        left: Derivation,
        right: Derivation,
        labels: Vec<String>,
    ) -> Derivation {
        debug_assert!(rule.discharges());
        let concl = left.conclusion.clone();
        Derivation {
            discharge: labels,
            ..Derivation::node(rule, concl, vec![major, left, right])
        }
    }

    pub fn nand_i(left: Derivation, right: Derivation) -> Option<Derivation> {
        let (Formula::Neg(a), Formula::Neg(b)) = (&left.conclusion, &right.conclusion) else {
            return None;
        };
        let concl = Formula::neg(Formula::and((**a).clone(), (**b).clone()));
        Some(Derivation::node(RuleName::NAndI, concl, vec![left, right]))
    }

    /// `NAndE_L`/`NAndE_R`; `None` if the premise is not `~(A & B)`.
    pub fn nand_e(premise: Derivation, left: bool) -> Option<Derivation> {
        let Formula::Neg(inner) = &premise.conclusion else {
            return None;
        };
        let Formula::And(l, r) = &**inner else {
            return None;
        };
        let (rule, part) = if left {
            (RuleName::NAndEL, (**l).clone())
        } else {
            (RuleName::NAndER, (**r).clone())
        };
        Some(Derivation::node(rule, Formula::neg(part), vec![premise]))
    }

    /// `NOrI_L` from `~A` to `~(A | other)`.
    pub fn nor_i_l(premise: Derivation, other: Formula) -> Option<Derivation> {
        let Formula::Neg(a) = &premise.conclusion else {
            return None;
        };
        let concl = Formula::neg(Formula::or((**a).clone(), other));
        Some(Derivation::node(RuleName::NOrIL, concl, vec![premise]))
    }

    /// `NOrI_R` from `~B` to `~(other | B)`.
    pub fn nor_i_r(other: Formula, premise: Derivation) -> Option<Derivation> {
        let Formula::Neg(b) = &premise.conclusion else {
            return None;
        };
        let concl = Formula::neg(Formula::or(other, (**b).clone()));
        Some(Derivation::node(RuleName::NOrIR, concl, vec![premise]))
    }

    /// Tree height; a leaf has height 1.
    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(Derivation::height).max().unwrap_or(0)
    }

    /// Every node with its path (premise indices from the root), preorder.
    pub fn nodes(&self) -> Vec<(Vec<usize>, &Derivation)> {
        fn walk<'a>(d: &'a Derivation, path: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, &'a Derivation)>) {
            out.push((path.clone(), d));
            for (k, p) in d.premises.iter().enumerate() {
                path.push(k);
                walk(p, path, out);
                path.pop();
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn node_mut(&mut self, path: &[usize]) -> Option<&mut Derivation> {
        match path.split_first() {
            None => Some(self),
            Some((&k, rest)) => self.premises.get_mut(k)?.node_mut(rest),
        }
    }

    /// Paths of hypothesis leaves that some `OrE`/`NOrE` node discharges.
    pub fn discharged_hypotheses(&self) -> Vec<Vec<usize>> {
        fn walk(d: &Derivation, path: &mut Vec<usize>, bound: &mut Vec<String>, out: &mut Vec<Vec<usize>>) {
            if d.rule == RuleName::Hyp {
                if let Some(label) = &d.label {
                    if bound.contains(label) {
                        out.push(path.clone());
                    }
                }
                return;
            }
            for (k, p) in d.premises.iter().enumerate() {
                let scoped = d.rule.discharges() && k > 0;
                let before = bound.len();
                if scoped {
                    bound.extend(d.discharge.iter().cloned());
                }
                path.push(k);
                walk(p, path, bound, out);
                path.pop();
                bound.truncate(before);
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut Vec::new(), &mut out);
        out
    }
}

/// Result of a successful check: the formulas still assumed, and what was shown.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckedSequent {
    #[serde(serialize_with = "ser_formula_set")]
    pub open_assumptions: BTreeSet<Formula>,
    #[serde(serialize_with = "ser_formula")]
    pub conclusion: Formula,
}

fn ser_formula<S: serde::Serializer>(f: &Formula, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(f)
}

fn ser_formula_set<S: serde::Serializer>(fs: &BTreeSet<Formula>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(fs.iter().map(Formula::to_string))
}

impl CheckedSequent {
    pub fn to_sequent(&self) -> Sequent {
        Sequent::new(self.open_assumptions.iter().cloned().collect(), self.conclusion.clone())
    }
}

impl fmt::Display for CheckedSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sequent())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Mismatch {
    #[error("expected {expected} premises, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("{0}")]
    Schema(String),
    #[error("{0}")]
    Discharge(String),
    #[error("{0}")]
    Label(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{rule} at {}: {mismatch}", display_path(.path))]
pub struct CheckError {
    pub rule: RuleName,
    pub path: Vec<usize>,
    pub mismatch: Mismatch,
}

fn display_path(path: &[usize]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        path.iter().map(usize::to_string).collect::<Vec<_>>().join(".")
    }
}

#[derive(Debug, Error)]
pub enum NdError {
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

type Open = Vec<(String, Formula)>;

fn schema(msg: impl Into<String>) -> Mismatch {
    Mismatch::Schema(msg.into())
}

fn split_neg(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::Neg(b) => Some(b),
        _ => None,
    }
}

fn split_and(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::And(l, r) => Some((l, r)),
        _ => None,
    }
}

fn split_or(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::Or(l, r) => Some((l, r)),
        _ => None,
    }
}

/// Checks the node's conclusion against its rule and premise conclusions.
/// For the case rules, returns the two case hypotheses.
fn check_schema(d: &Derivation) -> Result<Option<(Formula, Formula)>, Mismatch> {
    let c: Vec<&Formula> = d.premises.iter().map(|p| &p.conclusion).collect();
    let concl = &d.conclusion;
    let expect = |ok: bool, what: &str| if ok { Ok(None) } else { Err(schema(what.to_string())) };
    match d.rule {
        RuleName::Hyp => Ok(None),
        RuleName::AndI => expect(
            split_and(concl) == Some((c[0], c[1])),
            "conclusion must be the conjunction of the premises",
        ),
        RuleName::AndEL | RuleName::AndER => {
            let (l, r) = split_and(c[0]).ok_or_else(|| schema("premise must be a conjunction"))?;
            let part = if d.rule == RuleName::AndEL { l } else { r };
            expect(part == concl, "conclusion must be the selected conjunct")
        }
        RuleName::OrIL | RuleName::OrIR => {
            let (l, r) = split_or(concl).ok_or_else(|| schema("conclusion must be a disjunction"))?;
            let part = if d.rule == RuleName::OrIL { l } else { r };
            expect(part == c[0], "premise must be the selected disjunct")
        }
        RuleName::OrE | RuleName::NOrE => {
            let (a, b) = if d.rule == RuleName::OrE {
                let (a, b) = split_or(c[0]).ok_or_else(|| schema("major premise must be a disjunction"))?;
                (a.clone(), b.clone())
            } else {
                let (a, b) = split_neg(c[0])
                    .and_then(split_or)
                    .ok_or_else(|| schema("major premise must be a negated disjunction"))?;
                (Formula::neg(a.clone()), Formula::neg(b.clone()))
            };
            if c[1] != concl || c[2] != concl {
                return Err(schema("both case branches must conclude the node's conclusion"));
            }
            Ok(Some((a, b)))
        }
        RuleName::NN1 => expect(
            *c[1] == Formula::neg_n(c[0].clone(), 2),
            "second premise must be the double ~ of the first",
        ),
        RuleName::NN2 => {
            let ok = split_or(concl).is_some_and(|(a, r)| *r == Formula::neg_n(a.clone(), 2));
            expect(ok, "conclusion must have the form A | ~~A")
        }
        RuleName::NAndI => {
            let ok = match (split_neg(c[0]), split_neg(c[1]), split_neg(concl).and_then(split_and)) {
                (Some(a), Some(b), Some((l, r))) => a == l && b == r,
                _ => false,
            };
            expect(ok, "expected ~A, ~B over ~(A & B)")
        }
        RuleName::NAndEL | RuleName::NAndER => {
            let (l, r) = split_neg(c[0])
                .and_then(split_and)
                .ok_or_else(|| schema("premise must be a negated conjunction"))?;
            let part = if d.rule == RuleName::NAndEL { l } else { r };
            expect(split_neg(concl) == Some(part), "conclusion must be ~ of the selected conjunct")
        }
        RuleName::NOrIL | RuleName::NOrIR => {
            let (l, r) = split_neg(concl)
                .and_then(split_or)
                .ok_or_else(|| schema("conclusion must be a negated disjunction"))?;
            let part = if d.rule == RuleName::NOrIL { l } else { r };
            expect(split_neg(c[0]) == Some(part), "premise must be ~ of the selected disjunct")
        }
    }
}

fn merge(into: &mut Open, more: Open) -> Result<(), Mismatch> {
    for (label, f) in more {
        if let Some((_, g)) = into.iter().find(|(l, _)| *l == label) {
            if *g != f {
                return Err(Mismatch::Label(format!(
                    "label `{label}` names both `{g}` and `{f}`"
                )));
            }
        }
        into.push((label, f));
    }
    Ok(())
}

fn check_node(d: &Derivation, path: &mut Vec<usize>, discharged: &mut BTreeSet<String>) -> Result<Open, CheckError> {
    let fail = |path: &Vec<usize>, mismatch| CheckError {
        rule: d.rule,
        path: path.clone(),
        mismatch,
    };
    if d.premises.len() != d.rule.arity() {
        return Err(fail(
            path,
            Mismatch::Arity {
                expected: d.rule.arity(),
                found: d.premises.len(),
            },
        ));
    }
    if !d.discharge.is_empty() && !d.rule.discharges() {
        return Err(fail(path, Mismatch::Discharge("only OrE/NOrE may discharge".into())));
    }
    match (&d.label, d.rule) {
        (Some(l), RuleName::Hyp) if !l.is_empty() => {}
        (_, RuleName::Hyp) => return Err(fail(path, Mismatch::Label("hypothesis needs a label".into()))),
        (Some(_), _) => return Err(fail(path, Mismatch::Label("only Hyp carries a label".into()))),
        (None, _) => {}
    }

    let mut opens = Vec::with_capacity(d.premises.len());
    for (k, p) in d.premises.iter().enumerate() {
        path.push(k);
        opens.push(check_node(p, path, discharged)?);
        path.pop();
    }
    let cases = check_schema(d).map_err(|m| fail(path, m))?;

    if d.rule == RuleName::Hyp {
        let label = d.label.clone().expect("checked above");
        return Ok(vec![(label, d.conclusion.clone())]);
    }

    let mut open = Open::new();
    for (k, branch) in opens.into_iter().enumerate() {
        let branch = match (&cases, k) {
            (Some((a, b)), 1 | 2) => {
                let case = if k == 1 { a } else { b };
                let mut kept = Open::new();
                for (label, f) in branch {
                    if d.discharge.contains(&label) {
                        if f != *case {
                            return Err(fail(
                                path,
                                Mismatch::Discharge(format!(
                                    "label `{label}` discharged as `{case}` but assumes `{f}`"
                                )),
                            ));
                        }
                    } else {
                        kept.push((label, f));
                    }
                }
                kept
            }
            _ => branch,
        };
        merge(&mut open, branch).map_err(|m| fail(path, m))?;
    }
    discharged.extend(d.discharge.iter().cloned());
    Ok(open)
}

/// Validates every node against its rule and the discharge discipline.
pub fn check(d: &Derivation) -> Result<CheckedSequent, CheckError> {
    let mut discharged = BTreeSet::new();
    let open = check_node(d, &mut Vec::new(), &mut discharged)?;
    if let Some((label, _)) = open.iter().find(|(l, _)| discharged.contains(l)) {
        return Err(CheckError {
            rule: d.rule,
            path: Vec::new(),
            mismatch: Mismatch::Label(format!("label `{label}` is discharged but also occurs free")),
        });
    }
    Ok(CheckedSequent {
        open_assumptions: open.into_iter().map(|(_, f)| f).collect(),
        conclusion: d.conclusion.clone(),
    })
}

/// Checks `d`, then decides whether its open assumptions semantically entail its conclusion.
pub fn soundness_check(d: &Derivation, cap: usize) -> Result<bool, NdError> {
    let checked = check(d)?;
    Ok(matrix::is_consequence(&checked.to_sequent(), cap)?.is_valid())
}

// ---- proof files ----

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProofNode {
    rule: String,
    conclusion: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    premises: Vec<ProofNode>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    discharge: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

#[derive(Debug, Error)]
pub enum ProofFileError {
    #[error("malformed proof JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("node {}: {source}", display_path(.path))]
    Formula { path: Vec<usize>, source: ParseError },
    #[error("node {}: {message}", display_path(.path))]
    Rule { path: Vec<usize>, message: String },
}

impl ProofNode {
    fn from_derivation(d: &Derivation) -> ProofNode {
        ProofNode {
            rule: d.rule.name().to_string(),
            conclusion: d.conclusion.to_string(),
            premises: d.premises.iter().map(ProofNode::from_derivation).collect(),
            discharge: d.discharge.clone(),
            label: d.label.clone(),
        }
    }

    fn into_derivation(self, path: &mut Vec<usize>) -> Result<Derivation, ProofFileError> {
        let rule = self.rule.parse::<RuleName>().map_err(|message| ProofFileError::Rule {
            path: path.clone(),
            message,
        })?;
        let conclusion = parse(&self.conclusion).map_err(|source| ProofFileError::Formula {
            path: path.clone(),
            source,
        })?;
        let mut premises = Vec::with_capacity(self.premises.len());
        for (k, p) in self.premises.into_iter().enumerate() {
            path.push(k);
            premises.push(p.into_derivation(path)?);
            path.pop();
        }
        Ok(Derivation {
            rule,
            conclusion,
            premises,
            discharge: self.discharge,
            label: self.label,
        })
    }
}

impl Serialize for Derivation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ProofNode::from_derivation(self).serialize(s)
    }
}

pub fn from_json(text: &str) -> Result<Derivation, ProofFileError> {
    let node: ProofNode = serde_json::from_str(text)?;
    node.into_derivation(&mut Vec::new())
}

pub fn to_json(d: &Derivation) -> String {
    serde_json::to_string_pretty(d).expect("derivations serialize")
}

// ---- corpus ----

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub sequent: Sequent,
    pub derivation: Derivation,
}

/// Worked derivations for the rules, over the atoms `p` and `q`.
pub fn corpus() -> Vec<CorpusEntry> {
    let p = Formula::atom("p");
    let q = Formula::atom("q");
    let np = Formula::neg(p.clone());
    let nq = Formula::neg(q.clone());
    let h = |l: &str, f: &Formula| Derivation::hyp(l, f.clone());
    let ok = |d: Option<Derivation>| d.expect("corpus derivations are well formed");

    let p_and_q = Formula::and(p.clone(), q.clone());
    let p_or_q = Formula::or(p.clone(), q.clone());
    let n_p_and_q = Formula::neg(p_and_q.clone());
    let n_p_or_q = Formula::neg(p_or_q.clone());
    let np_and_nq = Formula::and(np.clone(), nq.clone());
    let np_or_nq = Formula::or(np.clone(), nq.clone());

    let mut entries = Vec::new();
    let mut add = |name: &'static str, premises: Vec<&Formula>, derivation: Derivation| {
        let sequent = Sequent::new(premises.into_iter().cloned().collect(), derivation.conclusion.clone());
        entries.push(CorpusEntry {
            name,
            sequent,
            derivation,
        });
    };

    add("nn2", vec![], Derivation::nn2(p.clone()));
    add(
        "nn1-explosion",
        vec![&p, &Formula::neg_n(p.clone(), 2)],
        Derivation::nn1(h("a1", &p), h("a2", &Formula::neg_n(p.clone(), 2)), q.clone()),
    );
    add(
        "and-roundtrip",
        vec![&p_and_q],
        Derivation::and_i(
            ok(Derivation::and_e(h("a1", &p_and_q), false)),
            ok(Derivation::and_e(h("a1", &p_and_q), true)),
        ),
    );
    add(
        "or-roundtrip",
        vec![&p_or_q],
        Derivation::cases(
            RuleName::OrE,
            h("a1", &p_or_q),
            Derivation::or_i_r(q.clone(), h("c1", &p)),
            Derivation::or_i_l(h("c2", &q), p.clone()),
            vec!["c1".into(), "c2".into()],
        ),
    );
    let p_or_p = Formula::or(p.clone(), p.clone());
    add(
        "orE-roundtrip",
        vec![&p_or_p],
        Derivation::cases(
            RuleName::OrE,
            h("a1", &p_or_p),
            h("c", &p),
            h("c", &p),
            vec!["c".into()],
        ),
    );
    add(
        "deMorgan-and-L",
        vec![&n_p_and_q],
        ok(Derivation::nand_e(h("a1", &n_p_and_q), true)),
    );
    add(
        "deMorgan-and-R",
        vec![&n_p_and_q],
        ok(Derivation::nand_e(h("a1", &n_p_and_q), false)),
    );
    add(
        "deMorgan-and-I",
        vec![&np, &nq],
        ok(Derivation::nand_i(h("a1", &np), h("a2", &nq))),
    );
    add(
        "deMorgan-and-split",
        vec![&n_p_and_q],
        Derivation::and_i(
            ok(Derivation::nand_e(h("a1", &n_p_and_q), true)),
            ok(Derivation::nand_e(h("a1", &n_p_and_q), false)),
        ),
    );
    add(
        "deMorgan-and-join",
        vec![&np_and_nq],
        ok(Derivation::nand_i(
            ok(Derivation::and_e(h("a1", &np_and_nq), true)),
            ok(Derivation::and_e(h("a1", &np_and_nq), false)),
        )),
    );
    add(
        "deMorgan-or-L",
        vec![&np],
        ok(Derivation::nor_i_l(h("a1", &np), q.clone())),
    );
    add(
        "deMorgan-or-R",
        vec![&nq],
        ok(Derivation::nor_i_r(p.clone(), h("a1", &nq))),
    );
    add(
        "deMorgan-or-E",
        vec![&n_p_or_q],
        Derivation::cases(
            RuleName::NOrE,
            h("a1", &n_p_or_q),
            Derivation::or_i_l(h("c1", &np), nq.clone()),
            Derivation::or_i_r(np.clone(), h("c2", &nq)),
            vec!["c1".into(), "c2".into()],
        ),
    );
    add(
        "deMorgan-or-join",
        vec![&np_or_nq],
        Derivation::cases(
            RuleName::OrE,
            h("a1", &np_or_nq),
            ok(Derivation::nor_i_l(h("c1", &np), q.clone())),
            ok(Derivation::nor_i_r(p.clone(), h("c2", &nq))),
            vec!["c1".into(), "c2".into()],
        ),
    );
    entries
}

// ---- search ----

/// Backward proof search bounded by tree height. `None` does not mean the
/// sequent is underivable.
pub fn search(s: &Sequent, depth: usize) -> Option<Derivation> {
    let mut searcher = Searcher { fresh: 0 };
    let ctx: Vec<(String, Formula)> = s
        .premises
        .iter()
        .enumerate()
        .map(|(k, f)| (format!("a{}", k + 1), f.clone()))
        .collect();
    searcher.prove(&s.conclusion, &ctx, depth, &[])
}

struct Searcher {
    fresh: usize,
}

impl Searcher {
    fn label(&mut self) -> String {
        self.fresh += 1;
        format!("c{}", self.fresh)
    }

    /// Formulas obtainable from the assumptions by `AndE`/`NAndE` alone, each
    /// with its shortest such derivation, in discovery order.
    fn reachable(ctx: &[(String, Formula)], depth: usize) -> Vec<Derivation> {
        let mut out: Vec<Derivation> = Vec::new();
        for (label, f) in ctx {
            if !out.iter().any(|d| d.conclusion == *f) {
                out.push(Derivation::hyp(label.clone(), f.clone()));
            }
        }
        let mut k = 0;
        while k < out.len() {
            let d = out[k].clone();
            k += 1;
            if d.height() >= depth {
                continue;
            }
            for left in [true, false] {
                let next = Derivation::and_e(d.clone(), left).or_else(|| Derivation::nand_e(d.clone(), left));
                if let Some(n) = next {
                    if !out.iter().any(|e| e.conclusion == n.conclusion) {
                        out.push(n);
                    }
                }
            }
        }
        out
    }

    fn prove(&mut self, goal: &Formula, ctx: &[(String, Formula)], depth: usize, split: &[Formula]) -> Option<Derivation> {
        if depth == 0 {
            return None;
        }
        let reach = Searcher::reachable(ctx, depth);
        if let Some(d) = reach.iter().find(|d| d.conclusion == *goal) {
            return Some(d.clone());
        }
        if let Formula::Or(a, r) = goal {
            if **r == Formula::neg_n((**a).clone(), 2) {
                return Some(Derivation::nn2((**a).clone()));
            }
        }
        if depth == 1 {
            return None;
        }
        let sub = depth - 1;

        // introductions
        match goal {
            Formula::And(a, b) => {
                if let Some(da) = self.prove(a, ctx, sub, split) {
                    if let Some(db) = self.prove(b, ctx, sub, split) {
                        return Some(Derivation::and_i(da, db));
                    }
                }
            }
            Formula::Or(a, b) => {
                if let Some(da) = self.prove(a, ctx, sub, split) {
                    return Some(Derivation::or_i_l(da, (**b).clone()));
                }
                if let Some(db) = self.prove(b, ctx, sub, split) {
                    return Some(Derivation::or_i_r((**a).clone(), db));
                }
            }
            Formula::Neg(inner) => match &**inner {
                Formula::And(a, b) => {
                    let na = Formula::neg((**a).clone());
                    let nb = Formula::neg((**b).clone());
                    if let Some(da) = self.prove(&na, ctx, sub, split) {
                        if let Some(db) = self.prove(&nb, ctx, sub, split) {
                            return Derivation::nand_i(da, db);
                        }
                    }
                }
                Formula::Or(a, b) => {
                    let na = Formula::neg((**a).clone());
                    if let Some(da) = self.prove(&na, ctx, sub, split) {
                        return Derivation::nor_i_l(da, (**b).clone());
                    }
                    let nb = Formula::neg((**b).clone());
                    if let Some(db) = self.prove(&nb, ctx, sub, split) {
                        return Derivation::nor_i_r((**a).clone(), db);
                    }
                }
                _ => {}
            },
            Formula::Atom(_) => {}
        }

        // NN1 from A and ~~A already at hand
        let usable: Vec<&Derivation> = reach.iter().filter(|d| d.height() <= sub).collect();
        for da in &usable {
            let nna = Formula::neg_n(da.conclusion.clone(), 2);
            if let Some(dnna) = usable.iter().find(|d| d.conclusion == nna) {
                return Some(Derivation::nn1((*da).clone(), (*dnna).clone(), goal.clone()));
            }
        }

        // case splits on available (negated) disjunctions
        for major in &usable {
            let (rule, left, right) = match &major.conclusion {
                Formula::Or(a, b) => (RuleName::OrE, (**a).clone(), (**b).clone()),
                Formula::Neg(inner) => match &**inner {
                    Formula::Or(a, b) => (
                        RuleName::NOrE,
                        Formula::neg((**a).clone()),
                        Formula::neg((**b).clone()),
                    ),
                    _ => continue,
                },
                _ => continue,
            };
            if split.contains(&major.conclusion) {
                continue;
            }
            let mut split_now = split.to_vec();
            split_now.push(major.conclusion.clone());

            let left_label = self.label();
            let mut left_ctx = ctx.to_vec();
            left_ctx.push((left_label.clone(), left));
            let Some(dl) = self.prove(goal, &left_ctx, sub, &split_now) else {
                continue;
            };
            let right_label = self.label();
            let mut right_ctx = ctx.to_vec();
            right_ctx.push((right_label.clone(), right));
            let Some(dr) = self.prove(goal, &right_ctx, sub, &split_now) else {
                continue;
            };
            return Some(Derivation::cases(
                rule,
                (*major).clone(),
                dl,
                dr,
                vec![left_label, right_label],
            ));
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_sequent;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn nn2_axiom() {
        let checked = check(&Derivation::nn2(f("p"))).unwrap();
        assert!(checked.open_assumptions.is_empty());
        assert_eq!(checked.conclusion, f("p | ~~p"));
    }

    #[test]
    fn nn1_explosion() {
        let d = Derivation::nn1(Derivation::hyp("h1", f("p")), Derivation::hyp("h2", f("~~p")), f("q"));
        let checked = check(&d).unwrap();
        assert_eq!(checked.open_assumptions, [f("p"), f("~~p")].into_iter().collect());
        assert_eq!(checked.conclusion, f("q"));
        assert!(soundness_check(&d, 10).unwrap());
    }

    #[test]
    fn corrupted_nn1_fails_before_semantics() {
        let d = Derivation::nn1(Derivation::hyp("h1", f("p")), Derivation::hyp("h2", f("~p")), f("q"));
        let err = check(&d).unwrap_err();
        assert_eq!(err.rule, RuleName::NN1);
        assert!(matches!(soundness_check(&d, 10), Err(NdError::Check(_))));
    }

    #[test]
    fn or_e_branches_must_agree() {
        let d = Derivation {
            rule: RuleName::OrE,
            conclusion: f("p"),
            premises: vec![
                Derivation::hyp("a", f("p | q")),
                Derivation::hyp("c1", f("p")),
                Derivation::hyp("c2", f("q")),
            ],
            discharge: vec!["c1".into(), "c2".into()],
            label: None,
        };
        let err = check(&d).unwrap_err();
        assert_eq!(err.path, Vec::<usize>::new());
        assert!(matches!(err.mismatch, Mismatch::Schema(_)));
    }

    #[test]
    fn structural_errors() {
        let mut d = Derivation::and_i(Derivation::hyp("a", f("p")), Derivation::hyp("b", f("q")));
        d.premises.pop();
        assert!(matches!(check(&d).unwrap_err().mismatch, Mismatch::Arity { expected: 2, found: 1 }));

        let mut d = Derivation::hyp("a", f("p"));
        d.label = None;
        assert!(matches!(check(&d).unwrap_err().mismatch, Mismatch::Label(_)));

        let mut d = Derivation::nn2(f("p"));
        d.discharge = vec!["x".into()];
        assert!(matches!(check(&d).unwrap_err().mismatch, Mismatch::Discharge(_)));

        // one label, two formulas
        let d = Derivation::and_i(Derivation::hyp("a", f("p")), Derivation::hyp("a", f("q")));
        assert!(matches!(check(&d).unwrap_err().mismatch, Mismatch::Label(_)));
    }

    #[test]
    fn error_path_points_at_node() {
        let bad = Derivation {
            rule: RuleName::AndEL,
            conclusion: f("q"),
            premises: vec![Derivation::hyp("a", f("p & q"))],
            discharge: vec![],
            label: None,
        };
        let d = Derivation::and_i(Derivation::hyp("b", f("r")), bad);
        let err = check(&d).unwrap_err();
        assert_eq!(err.path, vec![1]);
        assert_eq!(err.rule, RuleName::AndEL);
        assert!(err.to_string().starts_with("AndE_L at 1:"));
    }

    #[test]
    fn discharged_label_may_not_escape() {
        let inner = Derivation::cases(
            RuleName::OrE,
            Derivation::hyp("a", f("p | p")),
            Derivation::hyp("c", f("p")),
            Derivation::hyp("c", f("p")),
            vec!["c".into()],
        );
        let d = Derivation::and_i(inner, Derivation::hyp("c", f("p")));
        let err = check(&d).unwrap_err();
        assert!(matches!(err.mismatch, Mismatch::Label(_)));
    }

    #[test]
    fn corpus_checks_and_is_sound() {
        let entries = corpus();
        assert!(entries.len() >= 12);
        for e in &entries {
            let checked = check(&e.derivation).unwrap_or_else(|err| panic!("{}: {err}", e.name));
            assert_eq!(checked.conclusion, e.sequent.conclusion, "{}", e.name);
            assert!(
                checked.open_assumptions.iter().all(|a| e.sequent.premises.contains(a)),
                "{}",
                e.name
            );
            assert!(soundness_check(&e.derivation, 10).unwrap(), "{}", e.name);
        }
        let named = |n: &str| entries.iter().find(|e| e.name == n).unwrap().sequent.to_string();
        assert_eq!(named("deMorgan-and-L"), "~(p & q) |- ~p");
        assert_eq!(named("nn2"), "|- p | ~~p");
        assert_eq!(named("orE-roundtrip"), "p | p |- p");
    }

    #[test]
    fn discharge_corruption_is_caught() {
        let mut mutated = 0;
        for e in corpus() {
            for path in e.derivation.discharged_hypotheses() {
                let mut d = e.derivation.clone();
                let node = d.node_mut(&path).unwrap();
                node.conclusion = Formula::neg(node.conclusion.clone());
                assert!(check(&d).is_err(), "{} at {path:?}", e.name);
                mutated += 1;
            }
        }
        assert!(mutated >= 8);
    }

    #[test]
    fn json_roundtrip() {
        for e in corpus() {
            let text = to_json(&e.derivation);
            assert_eq!(from_json(&text).unwrap(), e.derivation, "{}", e.name);
        }
        let text = r#"{"rule":"NN2","conclusion":"p | ~~p"}"#;
        assert_eq!(from_json(text).unwrap(), Derivation::nn2(f("p")));
        assert!(matches!(from_json("{"), Err(ProofFileError::Json(_))));
        assert!(matches!(
            from_json(r#"{"rule":"NN2","conclusion":"p |"}"#),
            Err(ProofFileError::Formula { .. })
        ));
        assert!(matches!(
            from_json(r#"{"rule":"Cut","conclusion":"p"}"#),
            Err(ProofFileError::Rule { .. })
        ));
    }

    #[test]
    fn search_examples() {
        let s = |t: &str| parse_sequent(t).unwrap();
        let d = search(&s("|- p | ~~p"), 1).unwrap();
        assert_eq!(d.rule, RuleName::NN2);
        let d = search(&s("p, ~~p |- q"), 2).unwrap();
        assert_eq!(d.rule, RuleName::NN1);
        let d = search(&s("~p, ~q |- ~(p & q)"), 2).unwrap();
        assert_eq!(d.rule, RuleName::NAndI);
        let d = search(&s("~(p | q) |- ~p | ~q"), 4).unwrap();
        assert_eq!(d.rule, RuleName::NOrE);
        assert!(search(&s("p |- q"), 6).is_none());
        assert!(search(&s("p, ~~p |- q"), 1).is_none());
    }

    #[test]
    fn search_results_check() {
        for text in [
            "p & q |- q & p",
            "p | q |- q | p",
            "~(p & q) |- ~p & ~q",
            "~p | ~q |- ~(p | q)",
            "p & ~~p |- r",
            "(p | q) & r |- p & r | q & r",
        ] {
            let s = parse_sequent(text).unwrap();
            let d = search(&s, DEFAULT_SEARCH_DEPTH).unwrap_or_else(|| panic!("no proof of {text}"));
            let checked = check(&d).unwrap();
            assert_eq!(checked.conclusion, s.conclusion);
            assert!(checked.open_assumptions.iter().all(|a| s.premises.contains(a)), "{text}");
            assert!(soundness_check(&d, 10).unwrap());
        }
    }
}
