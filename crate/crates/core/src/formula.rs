//! Abstract syntax, parsing and printing for formulas over `~`, `&` and `|`.
//!
//! Concrete syntax:
//!
//! ```text
//! formula := disj
//! disj    := conj ("|" conj)*
//! conj    := neg ("&" neg)*
//! neg     := "~" neg | atom | "(" formula ")"
//! atom    := [a-z][a-zA-Z0-9_]*
//! ```
//!
//! Binary operators associate to the left. Sequents are written
//! `P1, P2, ... |- C`, and `|- C` when there are no premises.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A propositional formula.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(String),
    Neg(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    pub fn neg(body: Formula) -> Formula {
        Formula::Neg(Box::new(body))
    }

    pub fn and(left: Formula, right: Formula) -> Formula {
        Formula::And(Box::new(left), Box::new(right))
    }

    pub fn or(left: Formula, right: Formula) -> Formula {
        Formula::Or(Box::new(left), Box::new(right))
    }

    /// `~` applied `n` times.
    pub fn neg_n(body: Formula, n: usize) -> Formula {
        (0..n).fold(body, |acc, _| Formula::neg(acc))
    }

    /// Atom names in first-occurrence order, without duplicates.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_variables(&mut out);
        out
    }

    pub(crate) fn collect_variables(&self, out: &mut Vec<String>) {
        match self {
            Formula::Atom(name) => {
                if !out.iter().any(|v| v == name) {
                    out.push(name.clone());
                }
            }
            Formula::Neg(body) => body.collect_variables(out),
            Formula::And(l, r) | Formula::Or(l, r) => {
                l.collect_variables(out);
                r.collect_variables(out);
            }
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::Neg(body) => 1 + body.size(),
            Formula::And(l, r) | Formula::Or(l, r) => 1 + l.size() + r.size(),
        }
    }

    /// Height of the tree; an atom has depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Neg(body) => 1 + body.depth(),
            Formula::And(l, r) | Formula::Or(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    /// Replaces every occurrence of atom `name` with `replacement`.
    pub fn substitute(&self, name: &str, replacement: &Formula) -> Formula {
        match self {
            Formula::Atom(n) if n == name => replacement.clone(),
            Formula::Atom(_) => self.clone(),
            Formula::Neg(body) => Formula::neg(body.substitute(name, replacement)),
            Formula::And(l, r) => Formula::and(
                l.substitute(name, replacement),
                r.substitute(name, replacement),
            ),
            Formula::Or(l, r) => Formula::or(
                l.substitute(name, replacement),
                r.substitute(name, replacement),
            ),
        }
    }

    /// Occurrences of atom `name`.
    pub fn occurrences(&self, name: &str) -> usize {
        match self {
            Formula::Atom(n) => usize::from(n == name),
            Formula::Neg(body) => body.occurrences(name),
            Formula::And(l, r) | Formula::Or(l, r) => l.occurrences(name) + r.occurrences(name),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Or(..) => 1,
            Formula::And(..) => 2,
            Formula::Neg(_) | Formula::Atom(_) => 3,
        }
    }
}

/// Minimal parenthesization: a child is wrapped only when its precedence is
/// lower than the operator's, or when it is a right operand of equal
/// precedence (left associativity).
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, sub: &Formula, parens: bool) -> fmt::Result {
            if parens {
                write!(f, "({sub})")
            } else {
                write!(f, "{sub}")
            }
        }
        match self {
            Formula::Atom(name) => f.write_str(name),
            Formula::Neg(body) => {
                f.write_str("~")?;
                child(f, body, body.precedence() < 3)
            }
            Formula::And(l, r) | Formula::Or(l, r) => {
                let prec = self.precedence();
                let op = if prec == 2 { " & " } else { " | " };
                child(f, l, l.precedence() < prec)?;
                f.write_str(op)?;
                child(f, r, r.precedence() <= prec)
            }
        }
    }
}

impl FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

/// A finite list of premises and a conclusion.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
}

impl Sequent {
    pub fn new(premises: Vec<Formula>, conclusion: Formula) -> Sequent {
        Sequent {
            premises,
            conclusion,
        }
    }

    /// Variables of the premises, then of the conclusion, in first-occurrence order.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        for p in &self.premises {
            p.collect_variables(&mut out);
        }
        self.conclusion.collect_variables(&mut out);
        out
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, p) in self.premises.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        if !self.premises.is_empty() {
            f.write_str(" ")?;
        }
        write!(f, "|- {}", self.conclusion)
    }
}

impl FromStr for Sequent {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_sequent(s)
    }
}

/// Parse failure. `position` is the 1-based character offset of the first
/// offending character; end of input is reported as `len + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at offset {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    fn new(position: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            position,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Tilde,
    Amp,
    Bar,
    Turnstile,
    Comma,
    LParen,
    RParen,
    /// A prefix macro symbol, only produced when the caller registers one.
    Macro,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(name) => format!("identifier `{name}`"),
            Tok::Tilde => "`~`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Turnstile => "`|-`".into(),
            Tok::Comma => "`,`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Macro => "macro symbol".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str, macro_symbol: Option<char>) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let pos = k + 1;
        match c {
            c if c.is_whitespace() => {
                k += 1;
                continue;
            }
            '~' => toks.push((Tok::Tilde, pos)),
            '&' => toks.push((Tok::Amp, pos)),
            '|' if chars.get(k + 1) == Some(&'-') => {
                toks.push((Tok::Turnstile, pos));
                k += 1;
            }
            '|' => toks.push((Tok::Bar, pos)),
            ',' => toks.push((Tok::Comma, pos)),
            '(' => toks.push((Tok::LParen, pos)),
            ')' => toks.push((Tok::RParen, pos)),
            c if Some(c) == macro_symbol => toks.push((Tok::Macro, pos)),
            'a'..='z' => {
                let start = k;
                while k + 1 < chars.len()
                    && (chars[k + 1].is_ascii_alphanumeric() || chars[k + 1] == '_')
                {
                    k += 1;
                }
                toks.push((Tok::Ident(chars[start..=k].iter().collect()), pos));
            }
            other => {
                return Err(ParseError::new(pos, format!("unexpected character `{other}`")));
            }
        }
        k += 1;
    }
    toks.push((Tok::End, chars.len() + 1));
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    expand: Option<&'a dyn Fn(Formula) -> Formula>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let tok = self.toks[self.at].0.clone();
        if tok != Tok::End {
            self.at += 1;
        }
        tok
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        ParseError::new(
            self.pos(),
            format!("expected {wanted}, found {}", self.peek().describe()),
        )
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.conj()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let right = self.conj()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.neg()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let right = self.neg()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn neg(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::neg(self.neg()?))
            }
            Tok::Macro => {
                self.bump();
                let body = self.neg()?;
                let expand = self.expand.expect("macro token without expander");
                Ok(expand(body))
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::Atom(name))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.formula()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected("`)`"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.unexpected("a formula")),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }
}

/// Parses a single formula.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut parser = Parser {
        toks: lex(text, None)?,
        at: 0,
        expand: None,
    };
    let f = parser.formula()?;
    parser.finish()?;
    Ok(f)
}

/// Parses a formula in which `symbol` is an extra prefix operator (binding
/// like `~`) that is expanded on the spot by `expand`. Used for transcribing
/// defined connectives.
pub fn parse_with_macro(
    text: &str,
    symbol: char,
    expand: &dyn Fn(Formula) -> Formula,
) -> Result<Formula, ParseError> {
    let mut parser = Parser {
        toks: lex(text, Some(symbol))?,
        at: 0,
        expand: Some(expand),
    };
    let f = parser.formula()?;
    parser.finish()?;
    Ok(f)
}

/// Parses `P1, P2, ... |- C`.
pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    let mut parser = Parser {
        toks: lex(text, None)?,
        at: 0,
        expand: None,
    };
    let mut premises = Vec::new();
    if *parser.peek() != Tok::Turnstile {
        premises.push(parser.formula()?);
        while *parser.peek() == Tok::Comma {
            parser.bump();
            premises.push(parser.formula()?);
        }
    }
    if *parser.peek() != Tok::Turnstile {
        return Err(parser.unexpected("`,` or `|-`"));
    }
    parser.bump();
    let conclusion = parser.formula()?;
    parser.finish()?;
    Ok(Sequent::new(premises, conclusion))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn arb_formula(vars: &'static [&'static str], depth: u32) -> BoxedStrategy<Formula> {
        let leaf = proptest::sample::select(vars).prop_map(Formula::atom);
        leaf.prop_recursive(depth, 64, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::neg),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::and(l, r)),
                (inner.clone(), inner).prop_map(|(l, r)| Formula::or(l, r)),
            ]
        })
        .boxed()
    }

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn atom() {
        assert_eq!(p("p"), Formula::atom("p"));
        assert_eq!(p("  foo_Bar9 "), Formula::atom("foo_Bar9"));
    }

    #[test]
    fn precedence_and_associativity() {
        let expected = Formula::or(
            Formula::and(Formula::neg(Formula::atom("p")), Formula::atom("q")),
            Formula::atom("r"),
        );
        assert_eq!(p("~p & q | r"), expected);
        assert_eq!(
            p("p & q & r"),
            Formula::and(Formula::and(p("p"), p("q")), p("r"))
        );
        assert_eq!(
            p("p | q | r"),
            Formula::or(Formula::or(p("p"), p("q")), p("r"))
        );
    }

    #[test]
    fn unbalanced_paren_offset() {
        let err = parse("p & (q").unwrap_err();
        assert_eq!(err.position, 7);
    }

    #[test]
    fn error_offsets() {
        assert_eq!(parse("").unwrap_err().position, 1);
        assert_eq!(parse("p &").unwrap_err().position, 4);
        assert_eq!(parse("p q").unwrap_err().position, 3);
        assert_eq!(parse("P").unwrap_err().position, 1);
        assert_eq!(parse("p # q").unwrap_err().position, 3);
        assert_eq!(parse("(p))").unwrap_err().position, 4);
    }

    #[test]
    fn printing() {
        assert_eq!(p("~p & q | r").to_string(), "~p & q | r");
        assert_eq!(Formula::neg(Formula::neg(p("p"))).to_string(), "~~p");
        assert_eq!(
            Formula::and(p("p"), Formula::or(p("q"), p("r"))).to_string(),
            "p & (q | r)"
        );
        assert_eq!(p("p & (q & r)").to_string(), "p & (q & r)");
        assert_eq!(p("(p & q) & r").to_string(), "p & q & r");
        assert_eq!(p("~(p | q)").to_string(), "~(p | q)");
    }

    #[test]
    fn variables_first_occurrence() {
        assert_eq!(p("p & ~p").variables(), vec!["p"]);
        assert_eq!(p("q | p & q").variables(), vec!["q", "p"]);
        assert_eq!(p("~~r").variables(), vec!["r"]);
    }

    #[test]
    fn sequents() {
        let s = parse_sequent("p, ~~p |- q").unwrap();
        assert_eq!(s.premises, vec![p("p"), p("~~p")]);
        assert_eq!(s.conclusion, p("q"));
        assert_eq!(s.to_string(), "p, ~~p |- q");

        let s = parse_sequent("|- p | ~~p").unwrap();
        assert!(s.premises.is_empty());
        assert_eq!(s.to_string(), "|- p | ~~p");

        let s = parse_sequent("q |- p | ~p").unwrap();
        assert_eq!(s.variables(), vec!["q", "p"]);

        assert!(parse_sequent("p, |- q").is_err());
        assert!(parse_sequent("p q").is_err());
        assert!(parse_sequent("p |- q |- r").is_err());
    }

    #[test]
    fn macro_expansion() {
        let double = |f: Formula| Formula::neg(Formula::neg(f));
        let f = parse_with_macro("!x & !(x | y)", '!', &double).unwrap();
        assert_eq!(f, p("~~x & ~~(x | y)"));
        assert!(parse("!x").is_err());
    }

    #[test]
    fn substitution() {
        let f = p("x | ~~x");
        assert_eq!(f.substitute("x", &p("p & q")), p("(p & q) | ~~(p & q)"));
        assert_eq!(f.occurrences("x"), 2);
        assert_eq!(f.size(), 5);
        assert_eq!(f.depth(), 3);
    }

    proptest! {
        #[test]
        fn print_parse_roundtrip(f in arb_formula(&["p", "q", "r", "s1", "long_name"], 8)) {
            let text = f.to_string();
            prop_assert_eq!(parse(&text).unwrap(), f.clone());
            prop_assert_eq!(text, f.to_string());
        }
    }
}
