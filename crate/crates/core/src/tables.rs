//! Plain-text operation tables: one entry per line, `op lhs [rhs] result`.
//!
//! `op` is one of `~`, `&`, `|`. Values are single-character symbols; the
//! matrix uses `1 i j 0` and the relational readings use `t b n f`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Op {
    Neg,
    And,
    Or,
}

impl Op {
    pub fn symbol(self) -> char {
        match self {
            Op::Neg => '~',
            Op::And => '&',
            Op::Or => '|',
        }
    }

    fn from_symbol(s: &str) -> Option<Op> {
        match s {
            "~" => Some(Op::Neg),
            "&" => Some(Op::And),
            "|" => Some(Op::Or),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TableEntry {
    pub op: Op,
    pub lhs: char,
    pub rhs: Option<char>,
    pub result: char,
}

impl fmt::Display for TableEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rhs {
            Some(rhs) => write!(f, "{} {} {} {}", self.op.symbol(), self.lhs, rhs, self.result),
            None => write!(f, "{} {} {}", self.op.symbol(), self.lhs, self.result),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("table line {line}: {message}")]
pub struct TableFormatError {
    pub line: usize,
    pub message: String,
}

/// Reads a table file. Blank lines and lines starting with `#` are skipped.
/// Every value symbol must be in `alphabet`.
pub fn parse_table(text: &str, alphabet: &[char]) -> Result<Vec<TableEntry>, TableFormatError> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| TableFormatError {
            line: k + 1,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let op = Op::from_symbol(fields[0]).ok_or_else(|| err(format!("unknown op `{}`", fields[0])))?;
        let arity = if op == Op::Neg { 1 } else { 2 };
        if fields.len() != arity + 2 {
            return Err(err(format!(
                "expected {} fields for `{}`, found {}",
                arity + 2,
                fields[0],
                fields.len()
            )));
        }
        let mut values = Vec::with_capacity(arity + 1);
        for field in &fields[1..] {
            let mut chars = field.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) if alphabet.contains(&c) => values.push(c),
                _ => return Err(err(format!("bad value `{field}`"))),
            }
        }
        out.push(TableEntry {
            op,
            lhs: values[0],
            rhs: if arity == 2 { Some(values[1]) } else { None },
            result: values[arity],
        });
    }
    Ok(out)
}

pub fn render_table(entries: &[TableEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        out.push_str(&e.to_string());
        out.push('\n');
    }
    out
}

/// Builds the 36 entries of a four-element algebra, rows in `order`.
pub(crate) fn build_entries<V: Copy>(
    order: &[V; 4],
    symbol: impl Fn(V) -> char,
    neg: impl Fn(V) -> V,
    and: impl Fn(V, V) -> V,
    or: impl Fn(V, V) -> V,
) -> Vec<TableEntry> {
    let mut out = Vec::with_capacity(36);
    for &a in order {
        out.push(TableEntry {
            op: Op::Neg,
            lhs: symbol(a),
            rhs: None,
            result: symbol(neg(a)),
        });
    }
    for (op, f) in [(Op::And, &and as &dyn Fn(V, V) -> V), (Op::Or, &or)] {
        for &a in order {
            for &b in order {
                out.push(TableEntry {
                    op,
                    lhs: symbol(a),
                    rhs: Some(symbol(b)),
                    result: symbol(f(a, b)),
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render() {
        let text = "# comment\n~ 1 i\n\n& 1 i i\n";
        let entries = parse_table(text, &['1', 'i', 'j', '0']).unwrap();
        assert_eq!(entries.len(), 2);
        assert_eq!(render_table(&entries), "~ 1 i\n& 1 i i\n");
    }

    #[test]
    fn rejects_malformed_lines() {
        let alphabet = ['1', 'i', 'j', '0'];
        assert_eq!(parse_table("~ 1 i i", &alphabet).unwrap_err().line, 1);
        assert!(parse_table("& 1 i", &alphabet).is_err());
        assert!(parse_table("> 1 i", &alphabet).is_err());
        assert!(parse_table("~ 1 t", &alphabet).is_err());
        assert!(parse_table("~ 10 i", &alphabet).is_err());
    }
}
