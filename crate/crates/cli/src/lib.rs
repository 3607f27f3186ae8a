//! `cnl4` command-line front end.
//!
//! Exit codes: 0 success or valid, 1 semantically invalid (a countermodel is
//! printed), 2 a check or verification failed, 3 usage or parse error.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cnl4_core::fc::{self, ClosureError, UnaryTable, DEFAULT_CLOSURE_BUDGET};
use cnl4_core::formula::{parse, parse_sequent, Formula, Sequent};
use cnl4_core::matrix::{Interpretation, TruthValue, Verdict, CNL4, DEFAULT_VAR_CAP};
use cnl4_core::nd::{self, DEFAULT_SEARCH_DEPTH};
use cnl4_core::relational::{OptionId, OPTIONS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "cnl4", version, about = "Four-valued logic workbench")]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Config {
    /// Maximum number of distinct variables to enumerate
    #[arg(long, global = true, env = "CNL4_CAP", default_value_t = DEFAULT_VAR_CAP, value_parser = positive)]
    pub cap: usize,
    /// Proof search depth (tree height)
    #[arg(long, global = true, default_value_t = DEFAULT_SEARCH_DEPTH, value_parser = positive)]
    pub depth: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Relational reading used by --fde, `options table` and `fc find`
    #[arg(long, global = true, default_value = "O1")]
    pub option: OptionId,
    /// Print values as t/b/n/f through the option's value map
    #[arg(long, global = true)]
    pub fde: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a formula or sequent and print it back
    Parse { input: String },
    /// Evaluate a formula under an assignment such as "p=1, q=i"
    Eval { formula: String, assignment: String },
    /// Print the full truth table of a formula
    Truthtable { formula: String },
    /// Decide a sequent "A, B |- C"
    Conseq { sequent: String },
    /// Print the first countermodel of a sequent, or all with --all
    Countermodel {
        sequent: String,
        #[arg(long)]
        all: bool,
    },
    /// Check a JSON proof file
    CheckProof { file: std::path::PathBuf },
    /// Search for a derivation of a sequent
    SearchProof { sequent: String },
    /// Check every derivation in the built-in corpus
    Corpus,
    /// Functional completeness checks
    #[command(subcommand)]
    Fc(FcCommand),
    /// Relational readings
    #[command(subcommand)]
    Options(OptionsCommand),
}

#[derive(Debug, Subcommand)]
enum FcCommand {
    /// Evaluate the indicator and constant terms pointwise
    Verify,
    /// Compute the unary clone and check Słupecki's conditions
    Closure {
        #[arg(long, default_value_t = DEFAULT_CLOSURE_BUDGET)]
        budget: usize,
    },
    /// Find a term for a unary function, e.g. "1:0,i:i,j:j,0:1" or "t:f,b:b,n:n,f:t"
    Find {
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = DEFAULT_CLOSURE_BUDGET)]
        budget: usize,
    },
}

#[derive(Debug, Subcommand)]
enum OptionsCommand {
    /// Print the operation tables of the selected option
    Table,
    /// Compare the four options, optionally checking a formula under each
    Compare { formula: Option<String> },
}

struct Ctx<'a> {
    config: Config,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

type Outcome = std::io::Result<i32>;

/// Runs the command line `argv` (including the program name).
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(rendered.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(rendered.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let mut ctx = Ctx {
        config: cli.config,
        out,
        err,
    };
    ctx.dispatch(cli.command).unwrap_or(EXIT_USAGE)
}

impl Ctx<'_> {
    fn dispatch(&mut self, command: Command) -> Outcome {
        match command {
            Command::Parse { input } => self.parse(&input),
            Command::Eval { formula, assignment } => self.eval(&formula, &assignment),
            Command::Truthtable { formula } => self.truthtable(&formula),
            Command::Conseq { sequent } => self.conseq(&sequent),
            Command::Countermodel { sequent, all } => self.countermodel(&sequent, all),
            Command::CheckProof { file } => self.check_proof(&file),
            Command::SearchProof { sequent } => self.search_proof(&sequent),
            Command::Corpus => self.corpus(),
            Command::Fc(FcCommand::Verify) => self.fc_verify(),
            Command::Fc(FcCommand::Closure { budget }) => self.fc_closure(budget),
            Command::Fc(FcCommand::Find { target, budget }) => self.fc_find(&target, budget),
            Command::Options(OptionsCommand::Table) => self.options_table(),
            Command::Options(OptionsCommand::Compare { formula }) => self.options_compare(formula.as_deref()),
        }
    }

    fn json(&mut self, v: &Value) -> std::io::Result<()> {
        writeln!(self.out, "{}", serde_json::to_string_pretty(v).expect("json values serialize"))
    }

    fn usage(&mut self, msg: impl std::fmt::Display) -> Outcome {
        writeln!(self.err, "error: {msg}")?;
        Ok(EXIT_USAGE)
    }

    fn value(&self, v: TruthValue) -> char {
        if self.config.fde {
            self.config.option.reading().fde(v).symbol()
        } else {
            v.symbol()
        }
    }

    fn interp_text(&self, i: &Interpretation) -> String {
        i.iter()
            .map(|(n, v)| format!("{n}={}", self.value(v)))
            .collect::<Vec<_>>()
            .join(", ")
    }

    fn interp_json(&self, i: &Interpretation) -> Value {
        Value::Array(
            i.iter()
                .map(|(n, v)| json!({"variable": n, "value": self.value(v).to_string()}))
                .collect(),
        )
    }

    fn formula(&mut self, text: &str) -> Result<Formula, Outcome> {
        parse(text).map_err(|e| self.usage(format!("cannot parse formula: {e}")))
    }

    fn sequent(&mut self, text: &str) -> Result<Sequent, Outcome> {
        parse_sequent(text).map_err(|e| self.usage(format!("cannot parse sequent: {e}")))
    }

    fn parse(&mut self, input: &str) -> Outcome {
        let (printed, variables, extra) = if input.contains("|-") {
            let s = match self.sequent(input) {
                Ok(s) => s,
                Err(o) => return o,
            };
            (s.to_string(), s.variables(), json!({"kind": "sequent"}))
        } else {
            let f = match self.formula(input) {
                Ok(f) => f,
                Err(o) => return o,
            };
            (
                f.to_string(),
                f.variables(),
                json!({"kind": "formula", "size": f.size(), "depth": f.depth()}),
            )
        };
        match self.config.format {
            Format::Text => writeln!(self.out, "{printed}")?,
            Format::Json => {
                let mut v = json!({"input": input, "printed": printed, "variables": variables});
                v.as_object_mut()
                    .unwrap()
                    .extend(extra.as_object().unwrap().clone());
                self.json(&v)?
            }
        }
        Ok(EXIT_OK)
    }

    fn eval(&mut self, formula: &str, assignment: &str) -> Outcome {
        let f = match self.formula(formula) {
            Ok(f) => f,
            Err(o) => return o,
        };
        let interp: Interpretation = match assignment.parse() {
            Ok(i) => i,
            Err(e) => return self.usage(format!("cannot parse assignment: {e}")),
        };
        let v = match CNL4.eval(&f, &interp) {
            Ok(v) => v,
            Err(e) => return self.usage(e),
        };
        match self.config.format {
            Format::Text => writeln!(self.out, "{}", self.value(v))?,
            Format::Json => {
                let body = json!({
                    "formula": f.to_string(),
                    "interpretation": self.interp_json(&interp),
                    "value": self.value(v).to_string(),
                    "designated": v.is_designated(),
                });
                self.json(&body)?
            }
        }
        Ok(EXIT_OK)
    }

    fn truthtable(&mut self, formula: &str) -> Outcome {
        let f = match self.formula(formula) {
            Ok(f) => f,
            Err(o) => return o,
        };
        let table = match CNL4.truth_table(&f, self.config.cap) {
            Ok(t) => t,
            Err(e) => return self.usage(e),
        };
        match self.config.format {
            Format::Text => {
                let mut header = table.variables.join(" ");
                if !header.is_empty() {
                    header.push(' ');
                }
                writeln!(self.out, "{header}: {f}")?;
                for row in &table.rows {
                    let cells: Vec<String> = row.interpretation.iter().map(|(_, v)| self.value(v).to_string()).collect();
                    let mut line = String::new();
                    for (name, cell) in table.variables.iter().zip(&cells) {
                        line.push_str(&format!("{cell:<width$} ", width = name.chars().count()));
                    }
                    writeln!(self.out, "{line}: {}", self.value(row.value))?;
                }
            }
            Format::Json => {
                let rows: Vec<Value> = table
                    .rows
                    .iter()
                    .map(|r| json!({"interpretation": self.interp_json(&r.interpretation), "value": self.value(r.value).to_string()}))
                    .collect();
                let body = json!({"formula": f.to_string(), "variables": table.variables, "rows": rows});
                self.json(&body)?
            }
        }
        Ok(EXIT_OK)
    }

    fn conseq(&mut self, sequent: &str) -> Outcome {
        let s = match self.sequent(sequent) {
            Ok(s) => s,
            Err(o) => return o,
        };
        let verdict = match CNL4.is_consequence(&s, self.config.cap) {
            Ok(v) => v,
            Err(e) => return self.usage(e),
        };
        match (&verdict, self.config.format) {
            (Verdict::Valid, Format::Text) => writeln!(self.out, "valid: {s}")?,
            (Verdict::Invalid(w), Format::Text) => {
                writeln!(self.out, "invalid: {s}")?;
                writeln!(self.out, "countermodel: {}", self.interp_text(w))?;
            }
            (_, Format::Json) => {
                let body = json!({
                    "sequent": s.to_string(),
                    "valid": verdict.is_valid(),
                    "countermodel": verdict.witness().map(|w| self.interp_json(w)),
                });
                self.json(&body)?
            }
        }
        Ok(if verdict.is_valid() { EXIT_OK } else { EXIT_INVALID })
    }

    fn countermodel(&mut self, sequent: &str, all: bool) -> Outcome {
        let s = match self.sequent(sequent) {
            Ok(s) => s,
            Err(o) => return o,
        };
        let found = if all {
            CNL4.countermodels(&s, self.config.cap)
        } else {
            CNL4.countermodel(&s, self.config.cap).map(|c| c.into_iter().collect())
        };
        let found = match found {
            Ok(f) => f,
            Err(e) => return self.usage(e),
        };
        match self.config.format {
            Format::Text if found.is_empty() => writeln!(self.out, "none")?,
            Format::Text => {
                for c in &found {
                    writeln!(self.out, "{}", self.interp_text(c))?;
                }
            }
            Format::Json => {
                let list: Vec<Value> = found.iter().map(|c| self.interp_json(c)).collect();
                self.json(&json!({"sequent": s.to_string(), "countermodels": list}))?
            }
        }
        Ok(if found.is_empty() { EXIT_OK } else { EXIT_INVALID })
    }

    fn check_proof(&mut self, file: &std::path::Path) -> Outcome {
        let text = match std::fs::read_to_string(file) {
            Ok(t) => t,
            Err(e) => return self.usage(format!("cannot read {}: {e}", file.display())),
        };
        let d = match nd::from_json(&text) {
            Ok(d) => d,
            Err(e) => return self.usage(e),
        };
        match nd::check(&d) {
            Ok(checked) => {
                match self.config.format {
                    Format::Text => writeln!(self.out, "ok: {checked} (height {})", d.height())?,
                    Format::Json => {
                        self.json(&json!({"ok": true, "sequent": checked.to_string(), "height": d.height()}))?
                    }
                }
                Ok(EXIT_OK)
            }
            Err(e) => {
                match self.config.format {
                    Format::Text => writeln!(self.out, "rule error: {e}")?,
                    Format::Json => self.json(&json!({
                        "ok": false,
                        "rule": e.rule.name(),
                        "path": e.path,
                        "error": e.mismatch.to_string(),
                    }))?,
                }
                Ok(EXIT_CHECK_FAILED)
            }
        }
    }

    fn search_proof(&mut self, sequent: &str) -> Outcome {
        let s = match self.sequent(sequent) {
            Ok(s) => s,
            Err(o) => return o,
        };
        match nd::search(&s, self.config.depth) {
            Some(d) => {
                match self.config.format {
                    Format::Text => {
                        writeln!(self.out, "found: {s} (height {})", d.height())?;
                        write_tree(self.out, &d, 0)?;
                    }
                    Format::Json => writeln!(self.out, "{}", nd::to_json(&d))?,
                }
                Ok(EXIT_OK)
            }
            None => {
                let counter = CNL4.countermodel(&s, self.config.cap).ok().flatten();
                match self.config.format {
                    Format::Text => {
                        writeln!(self.out, "no derivation within depth {}", self.config.depth)?;
                        if let Some(c) = &counter {
                            writeln!(self.out, "countermodel: {}", self.interp_text(c))?;
                        }
                    }
                    Format::Json => {
                        let body = json!({
                            "sequent": s.to_string(),
                            "found": false,
                            "depth": self.config.depth,
                            "countermodel": counter.as_ref().map(|c| self.interp_json(c)),
                        });
                        self.json(&body)?
                    }
                }
                Ok(EXIT_INVALID)
            }
        }
    }

    fn corpus(&mut self) -> Outcome {
        let mut failed = 0;
        let mut rows = Vec::new();
        for entry in nd::corpus() {
            let checked = nd::check(&entry.derivation);
            let sound = nd::soundness_check(&entry.derivation, self.config.cap).unwrap_or(false);
            let ok = matches!(&checked, Ok(c) if c.to_sequent() == entry.sequent) && sound;
            if !ok {
                failed += 1;
            }
            rows.push((entry, ok, sound));
        }
        match self.config.format {
            Format::Text => {
                for (entry, ok, _) in &rows {
                    let mark = if *ok { "ok  " } else { "FAIL" };
                    writeln!(self.out, "{mark} {:<20} {}", entry.name, entry.sequent)?;
                }
                writeln!(self.out, "{}/{} derivations check and are sound", rows.len() - failed, rows.len())?;
            }
            Format::Json => {
                let list: Vec<Value> = rows
                    .iter()
                    .map(|(e, ok, sound)| {
                        json!({"name": e.name, "sequent": e.sequent.to_string(), "ok": ok, "sound": sound, "derivation": e.derivation})
                    })
                    .collect();
                self.json(&Value::Array(list))?
            }
        }
        Ok(if failed == 0 { EXIT_OK } else { EXIT_CHECK_FAILED })
    }

    fn fc_verify(&mut self) -> Outcome {
        let report = fc::verify_delta_c();
        match self.config.format {
            Format::Text => {
                for c in &report.checks {
                    let mark = if c.passed() { "ok" } else { "FAIL" };
                    writeln!(
                        self.out,
                        "{:<7} ({}) = {}  expected {}  {mark}",
                        c.term, c.input, c.actual, c.expected
                    )?;
                }
                writeln!(self.out, "bool_neg table (derived): {}", report.bool_neg_table)?;
                writeln!(self.out, "{}/{} checks pass", report.passed(), report.checks.len())?;
            }
            Format::Json => self.json(&serde_json::to_value(&report).expect("report serializes"))?,
        }
        Ok(if report.all_passed() { EXIT_OK } else { EXIT_CHECK_FAILED })
    }

    fn fc_closure(&mut self, budget: usize) -> Outcome {
        let (closure, complete) = match fc::unary_clone_closure(budget) {
            Ok(c) => (c, true),
            Err(ClosureError::BudgetExhausted { partial, .. }) => (*partial, false),
        };
        let slupecki = fc::slupecki_check();
        let ok = complete && closure.is_complete() && slupecki.functionally_complete;
        match self.config.format {
            Format::Text => {
                for w in &closure.witnesses {
                    writeln!(self.out, "{}  size {:>3}  {}", w.table, w.size, w.term)?;
                }
                writeln!(self.out, "{}/{} unary functions definable", closure.len(), fc::UNARY_COUNT)?;
                if !complete {
                    writeln!(self.out, "budget {budget} exhausted")?;
                }
                for b in &slupecki.binary {
                    writeln!(
                        self.out,
                        "{}: surjective {}, essentially binary {}",
                        b.operation, b.surjective, b.essentially_binary
                    )?;
                }
                writeln!(self.out, "functionally complete: {}", slupecki.functionally_complete)?;
            }
            Format::Json => {
                let body = json!({"complete": complete, "closure": closure, "slupecki": slupecki});
                self.json(&body)?
            }
        }
        Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
    }

    fn fc_find(&mut self, target: &str, budget: usize) -> Outcome {
        let table = match UnaryTable::parse(target, None)
            .or_else(|_| UnaryTable::parse(target, Some(self.config.option)))
        {
            Ok(t) => t,
            Err(e) => return self.usage(format!("cannot parse target: {e}")),
        };
        let found = fc::find_term_for_unary(&table, budget);
        match (self.config.format, &found) {
            (Format::Text, Some(t)) => writeln!(self.out, "{table}  {t}")?,
            (Format::Text, None) => writeln!(self.out, "{table}  not found within budget {budget}")?,
            (Format::Json, _) => self.json(&json!({
                "target": table,
                "term": found.as_ref().map(|t| t.to_string()),
            }))?,
        }
        Ok(if found.is_some() { EXIT_OK } else { EXIT_INVALID })
    }

    fn options_table(&mut self) -> Outcome {
        let reading = self.config.option.reading();
        let rendered = reading.render_tables();
        let matches_golden = strip_comments(reading.golden_tables()) == rendered;
        match self.config.format {
            Format::Text => {
                writeln!(self.out, "# {}", self.config.option)?;
                write!(self.out, "{rendered}")?;
            }
            Format::Json => {
                let entries: Vec<String> = rendered.lines().map(str::to_string).collect();
                self.json(&json!({"option": self.config.option, "entries": entries, "matches_golden": matches_golden}))?
            }
        }
        Ok(if matches_golden { EXIT_OK } else { EXIT_CHECK_FAILED })
    }

    fn options_compare(&mut self, formula: Option<&str>) -> Outcome {
        let f = match formula.map(|t| self.formula(t)).transpose() {
            Ok(f) => f,
            Err(o) => return o,
        };
        let mut ok = true;
        let mut rows = Vec::new();
        for reading in &OPTIONS {
            let golden = strip_comments(reading.golden_tables()) == reading.render_tables();
            let report = match &f {
                Some(f) => match reading.check_equivalence(f, self.config.cap) {
                    Ok(r) => Some(r),
                    Err(e) => return self.usage(e),
                },
                None => None,
            };
            ok &= golden && report.as_ref().is_none_or(|r| r.holds());
            rows.push((reading, golden, report));
        }
        match self.config.format {
            Format::Text => {
                writeln!(self.out, "option  1 i j 0  negation  binaries         preservation  golden")?;
                for (r, golden, report) in &rows {
                    let map: Vec<String> = r.value_map.iter().map(|v| v.symbol().to_string()).collect();
                    write!(
                        self.out,
                        "{:<7} {}  {:<9} {:<16} {:<13} {}",
                        r.id.to_string(),
                        map.join(" "),
                        format!("{:?}", negation_kind(r)),
                        format!("{:?}", r.binary_falsity_mode()),
                        format!("{:?}", r.preservation),
                        if *golden { "ok" } else { "FAIL" },
                    )?;
                    if let Some(rep) = report {
                        write!(self.out, "  {}: {}/{} agree", rep.formula, rep.checked - rep.violations.len(), rep.checked)?;
                    }
                    writeln!(self.out)?;
                }
            }
            Format::Json => {
                let list: Vec<Value> = rows
                    .iter()
                    .map(|(r, golden, report)| {
                        json!({
                            "option": r.id,
                            "value_map": r.value_map.iter().map(|v| v.symbol().to_string()).collect::<Vec<_>>(),
                            "negation": format!("{:?}", negation_kind(r)),
                            "binaries": format!("{:?}", r.binary_falsity_mode()),
                            "preservation": format!("{:?}", r.preservation),
                            "golden": golden,
                            "equivalence": report,
                        })
                    })
                    .collect();
                self.json(&Value::Array(list))?
            }
        }
        Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
    }
}

#[derive(Debug)]
enum NegationKind {
    Ruet,
    Kamide,
}

fn negation_kind(r: &cnl4_core::relational::OptionReading) -> NegationKind {
    use cnl4_core::relational::TruthSet;
    // Ruet: 1 ∈ ~A iff 0 ∉ A, so ~{} contains 1
    if r.neg(TruthSet::EMPTY).contains1 {
        NegationKind::Ruet
    } else {
        NegationKind::Kamide
    }
}

fn strip_comments(text: &str) -> String {
    let mut out = String::new();
    for line in text.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push_str(line);
        out.push('\n');
    }
    out
}

fn write_tree(out: &mut dyn Write, d: &nd::Derivation, indent: usize) -> std::io::Result<()> {
    let mut tag = d.rule.name().to_string();
    if let Some(l) = &d.label {
        tag.push_str(&format!(" [{l}]"));
    }
    if !d.discharge.is_empty() {
        tag.push_str(&format!(" discharges {}", d.discharge.join(",")));
    }
    writeln!(out, "{:indent$}{}    {tag}", "", d.conclusion)?;
    for p in &d.premises {
        write_tree(out, p, indent + 2)?;
    }
    Ok(())
}
