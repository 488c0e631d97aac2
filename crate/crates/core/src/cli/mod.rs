//! The `bqltl` command line.
//!
//! Exit codes: 0 sat (or success), 1 unsat (or a failed check), 2 unknown
//! within bounds or out of resources, 3 usage or parse error.

mod suite;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::budget::Budget;
use crate::error::Error;
use crate::formula::{parse, parse_matrix, QuantifiedFormula, VarSet};
use crate::games::{build_multi_game, sequentialize};
use crate::skolem::{enumerate_oracle, validate, Mode, OracleOutcome, Validation};
use crate::solver::{close_formula, solve, validate_witness, Semantics, Status, Witness};
use crate::tree::build_synthesis_apt;
use crate::word::{ltl_to_nbw, nbw_to_dpw};

pub const EXIT_SAT: i32 = 0;
pub const EXIT_UNSAT: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "bqltl",
    version,
    about = "Quantified LTL satisfiability under classic, behavioral and weak-behavioral semantics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide satisfiability.
    Check {
        /// Formula text, or a path to a file holding it.
        formula: String,
        #[arg(long, value_enum, default_value = "classic")]
        sem: Sem,
        /// Print the witness after the verdict.
        #[arg(long, value_enum)]
        witness: Option<Render>,
        /// Print the whole verdict as JSON.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Search Skolem machines up to a memory bound.
    Oracle {
        formula: String,
        #[arg(long, alias = "sem", value_enum, default_value = "behavioral")]
        mode: OracleMode,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
        memory: u64,
        #[arg(long, value_enum, default_value = "json")]
        witness: Render,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Wrap a goal matrix into a planning-shaped formula.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        /// The goal matrix.
        matrix: String,
        /// Controllable variables, comma separated.
        #[arg(long)]
        y: String,
        /// Disturbances the controller observes (pond only); the remaining
        /// variables are hidden from it.
        #[arg(long)]
        x1: Option<String>,
    },
    /// Randomized property suites; the same seed gives the same report.
    Suite {
        /// Comma-separated subset of: determinacy, lattice, fragment-collapse,
        /// single-block.
        #[arg(long, default_value = "all")]
        props: String,
        #[arg(long, default_value_t = 50)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Re-check a witness file (Skolem family, single machine or lasso).
    Validate {
        witness: String,
        formula: String,
        /// Defaults to classic for a lasso and to the strictest semantics
        /// the machines conform to otherwise.
        #[arg(long, value_enum)]
        sem: Option<Sem>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Print an intermediate automaton of the formula.
    ExportAutomaton {
        formula: String,
        #[arg(long, value_enum, default_value = "nbw")]
        kind: AutomatonKind,
        #[arg(long, value_enum, default_value = "dot")]
        format: Render,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Args, Debug, Clone)]
struct BudgetArgs {
    #[arg(long)]
    state_cap: Option<usize>,
    /// Seconds.
    #[arg(long)]
    timeout: Option<f64>,
}

impl BudgetArgs {
    fn budget(&self) -> Result<Budget, String> {
        let mut b = Budget::default();
        if let Some(c) = self.state_cap {
            if c == 0 {
                return Err("--state-cap must be positive".into());
            }
            b = b.with_state_cap(c);
        }
        if let Some(t) = self.timeout {
            if !(t > 0.0 && t.is_finite()) {
                return Err("--timeout must be a positive number of seconds".into());
            }
            b = b.with_time_cap(Duration::from_secs_f64(t));
        }
        Ok(b)
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Sem {
    Classic,
    Behavioral,
    Weak,
}

impl From<Sem> for Semantics {
    fn from(s: Sem) -> Self {
        match s {
            Sem::Classic => Semantics::Classic,
            Sem::Behavioral => Semantics::Behavioral,
            Sem::Weak => Semantics::WeakBehavioral,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum OracleMode {
    Behavioral,
    Weak,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Render {
    Json,
    Dot,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum GenKind {
    Conformant,
    Fond,
    Pond,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum AutomatonKind {
    Nbw,
    Dpw,
    Apt,
    Game,
}

/// A failed command: what to print on stderr and the exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_resource() || matches!(e, Error::AlphabetTooLarge { .. }) {
            EXIT_UNKNOWN
        } else {
            EXIT_USAGE
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

type Outcome = Result<i32, Failure>;

/// Runs the command line `args` (program name first), writing results to
/// `out` and diagnostics to `err`; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Check {
            formula,
            sem,
            witness,
            json,
            budget,
        } => check(
            &read_formula(&formula)?,
            sem.into(),
            witness,
            json,
            &budget.budget().map_err(usage)?,
            out,
            err,
        ),
        Command::Oracle {
            formula,
            mode,
            memory,
            witness,
            budget,
        } => {
            let mode = match mode {
                OracleMode::Behavioral => Mode::Behavioral,
                OracleMode::Weak => Mode::WeakBehavioral,
            };
            let b = budget.budget().map_err(usage)?;
            oracle(
                &read_formula(&formula)?,
                mode,
                memory as usize,
                witness,
                &b,
                out,
                err,
            )
        }
        Command::Gen {
            kind,
            matrix,
            y,
            x1,
        } => gen(kind, &matrix, &y, x1.as_deref(), out),
        Command::Suite {
            props,
            n,
            seed,
            budget,
        } => {
            let props = suite::Property::parse_list(&props).map_err(usage)?;
            let b = budget.budget().map_err(usage)?;
            let report = suite::run(&props, n, seed, &b);
            emit(
                out,
                &format!(
                    "{}\n",
                    serde_json::to_string_pretty(&report.to_json()).expect("json")
                ),
            )?;
            Ok(if report.all_pass() {
                EXIT_SAT
            } else {
                EXIT_UNSAT
            })
        }
        Command::Validate {
            witness,
            formula,
            sem,
            budget,
        } => {
            let b = budget.budget().map_err(usage)?;
            validate_cmd(
                &witness,
                &read_formula(&formula)?,
                sem.map(Into::into),
                &b,
                out,
            )
        }
        Command::ExportAutomaton {
            formula,
            kind,
            format,
            budget,
        } => {
            let b = budget.budget().map_err(usage)?;
            export(&read_formula(&formula)?, kind, format, &b, out)
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|e| Failure {
        code: EXIT_USAGE,
        message: format!("cannot write output: {e}"),
    })
}

/// Inline text, or the contents of the file it names.
fn read_source(arg: &str) -> Result<String, Failure> {
    let p = Path::new(arg);
    if p.is_file() {
        std::fs::read_to_string(p).map_err(|e| usage(format!("cannot read {arg}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn read_formula(arg: &str) -> Result<QuantifiedFormula, Failure> {
    Ok(parse(&read_source(arg)?)?)
}

fn check(
    f: &QuantifiedFormula,
    sem: Semantics,
    witness: Option<Render>,
    json: bool,
    budget: &Budget,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let v = solve(f, sem, budget)?;
    if json {
        emit(
            out,
            &format!(
                "{}\n",
                serde_json::to_string_pretty(&v.to_json(false)).expect("json")
            ),
        )?;
    } else {
        // a requested witness owns stdout, so it can be fed back to validate
        let status = format!("{}\n", v.status);
        if witness.is_some() {
            emit(err, &status)?;
        } else {
            emit(out, &status)?;
        }
        match (witness, &v.witness) {
            (Some(Render::Json), Some(w)) => emit(
                out,
                &format!(
                    "{}\n",
                    serde_json::to_string_pretty(&w.to_json()).expect("json")
                ),
            )?,
            (Some(Render::Dot), Some(w)) => match (&v.tree, w) {
                (Some(t), _) => emit(out, &t.to_dot())?,
                (None, Witness::Family(fam)) => emit(out, &fam.to_dot())?,
                (None, Witness::Lasso(l)) => emit(out, &format!("// {l}\n"))?,
            },
            _ => {}
        }
    }
    Ok(code_of(v.status))
}

fn code_of(s: Status) -> i32 {
    match s {
        Status::Sat => EXIT_SAT,
        Status::Unsat => EXIT_UNSAT,
        Status::UnknownWithinBounds => EXIT_UNKNOWN,
    }
}

fn oracle(
    f: &QuantifiedFormula,
    mode: Mode,
    memory: usize,
    render: Render,
    budget: &Budget,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let r = enumerate_oracle(f, mode, memory, budget)?;
    match r.outcome {
        OracleOutcome::Sat(fam) => {
            emit(err, "sat\n")?;
            let body = match render {
                Render::Json => format!(
                    "{}\n",
                    serde_json::to_string_pretty(&fam.to_json()).expect("json")
                ),
                Render::Dot => fam.to_dot(),
            };
            emit(out, &body)?;
            Ok(EXIT_SAT)
        }
        OracleOutcome::UnknownWithinBounds => {
            emit(
                err,
                &format!(
                    "unknown within memory {memory} ({} candidates)\n",
                    r.candidates
                ),
            )?;
            Ok(EXIT_UNKNOWN)
        }
    }
}

fn var_list(text: &str) -> Result<VarSet, Failure> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| crate::formula::Var::new(s).map_err(Failure::from))
        .collect()
}

fn gen(kind: GenKind, matrix: &str, y: &str, x1: Option<&str>, out: &mut dyn Write) -> Outcome {
    let text = read_source(matrix)?;
    let m = parse_matrix(&text)?;
    let vars = m.vars();
    let y = var_list(y)?;
    if y.is_empty() || !y.is_subset(&vars) {
        return Err(usage("--y must name variables of the matrix"));
    }
    let rest: VarSet = vars.difference(&y).cloned().collect();
    let block = |q: &str, vs: &VarSet| {
        let names: Vec<&str> = vs.iter().map(|v| v.as_str()).collect();
        format!("{q}{{{}}} ", names.join(","))
    };
    let prefix = match kind {
        GenKind::Conformant | GenKind::Fond if x1.is_some() => {
            return Err(usage("--x1 applies to pond only"))
        }
        GenKind::Conformant => format!("{}{}", block("E", &y), block("A", &rest)),
        GenKind::Fond => format!("{}{}", block("A", &rest), block("E", &y)),
        GenKind::Pond => {
            let x1 = var_list(x1.ok_or_else(|| usage("pond needs --x1"))?)?;
            if x1.is_empty() || !x1.is_subset(&rest) {
                return Err(usage("--x1 must name matrix variables outside --y"));
            }
            let x2: VarSet = rest.difference(&x1).cloned().collect();
            if x2.is_empty() {
                return Err(usage("pond needs hidden variables beyond --x1 and --y"));
            }
            format!("{}{}{}", block("A", &x1), block("E", &y), block("A", &x2))
        }
    };
    if rest.is_empty() {
        return Err(usage("the matrix has no variables outside --y"));
    }
    emit(out, &format!("{prefix}({})\n", text.trim()))?;
    Ok(EXIT_SAT)
}

fn validate_cmd(
    path: &str,
    f: &QuantifiedFormula,
    sem: Option<Semantics>,
    budget: &Budget,
    out: &mut dyn Write,
) -> Outcome {
    let text = read_source(path)?;
    let v: Value =
        serde_json::from_str(&text).map_err(|e| usage(format!("witness is not JSON: {e}")))?;
    let witness = Witness::from_json(&v).map_err(|e| usage(e.to_string()))?;
    let closed = close_formula(f);
    let sem = sem.unwrap_or(match &witness {
        Witness::Lasso(_) => Semantics::Classic,
        Witness::Family(fam) => {
            if crate::skolem::check_conformance(fam, &closed, Mode::Behavioral) {
                Semantics::Behavioral
            } else {
                Semantics::WeakBehavioral
            }
        }
    });
    let ok = validate_witness(f, sem, &witness, budget)?;
    emit(
        out,
        &format!("{} under {sem}\n", if ok { "valid" } else { "invalid" }),
    )?;
    if !ok {
        if let Witness::Family(fam) = &witness {
            if let Ok(Validation::Counterexample(c)) = validate(fam, &closed, budget) {
                emit(out, &format!("counterexample: {c}\n"))?;
            }
        }
    }
    Ok(if ok { EXIT_SAT } else { EXIT_UNSAT })
}

fn export(
    f: &QuantifiedFormula,
    kind: AutomatonKind,
    format: Render,
    budget: &Budget,
    out: &mut dyn Write,
) -> Outcome {
    let f = close_formula(f);
    let nbw = ltl_to_nbw(f.matrix(), &f.all_vars(), budget)?;
    if format == Render::Json && !matches!(kind, AutomatonKind::Apt) {
        return Err(usage(
            "JSON export is available for the tree automaton only",
        ));
    }
    let text = match kind {
        AutomatonKind::Nbw => nbw.to_dot(),
        AutomatonKind::Dpw => nbw_to_dpw(&nbw, budget)?.to_dot(),
        AutomatonKind::Apt => {
            let d = nbw_to_dpw(&nbw, budget)?;
            let a = build_synthesis_apt(&d, &f.universal_vars(), &f.existential_vars())?;
            match format {
                Render::Json => format!(
                    "{}\n",
                    serde_json::to_string_pretty(&a.to_json()).expect("json")
                ),
                Render::Dot => a.to_dot(),
            }
        }
        AutomatonKind::Game => {
            let d = nbw_to_dpw(&nbw, budget)?;
            sequentialize(&build_multi_game(&d, f.prefix())?)
                .game
                .to_dot()
        }
    };
    emit(out, &text)?;
    Ok(EXIT_SAT)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["bqltl"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn check_exit_codes() {
        assert_eq!(
            run_str(&["check", "--sem", "behavioral", "A{x} E{y} (G x <-> y)"]).0,
            1
        );
        assert_eq!(
            run_str(&["check", "--sem", "classic", "A{x} E{y} (G x <-> y)"]).0,
            0
        );
        assert_eq!(
            run_str(&["check", "--sem", "classic", "E{y} (G (y & X !y))"]).0,
            1
        );
        let (code, out, err) = run_str(&[
            "check",
            "--sem",
            "weak",
            "E{y} A{x} (F x <-> F y)",
            "--witness",
            "json",
        ]);
        assert_eq!(code, 0);
        assert_eq!(err, "sat\n");
        let family: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(family[0].get("readsNow").is_some());
        assert_eq!(run_str(&["check", "A{x} E{y"]).0, 3);
        assert_eq!(run_str(&["check", "--sem", "nope", "true"]).0, 3);
    }

    #[test]
    fn oracle_exit_codes() {
        let (code, out, err) = run_str(&[
            "oracle",
            "--mode",
            "behavioral",
            "--memory",
            "2",
            "A{x} E{y} G (y <-> x)",
        ]);
        assert_eq!(code, 0);
        assert!(err.starts_with("sat") && out.starts_with('['));
        assert_eq!(
            run_str(&["oracle", "--memory", "2", "A{x} E{y} (G x <-> y)"]).0,
            2
        );
        assert_eq!(
            run_str(&["oracle", "--memory", "0", "A{x} E{y} G (y <-> x)"]).0,
            3
        );
    }

    #[test]
    fn generators() {
        let (code, out, _) = run_str(&["gen", "conformant", "G (x -> y)", "--y", "y"]);
        assert_eq!((code, out.as_str()), (0, "E{y} A{x} (G (x -> y))\n"));
        let (_, out, _) = run_str(&["gen", "fond", "G (x -> y)", "--y", "y"]);
        assert_eq!(out, "A{x} E{y} (G (x -> y))\n");
        let (_, out, _) = run_str(&[
            "gen",
            "pond",
            "G (x1 -> X y) & F x2",
            "--y",
            "y",
            "--x1",
            "x1",
        ]);
        assert_eq!(out, "A{x1} E{y} A{x2} (G (x1 -> X y) & F x2)\n");
        assert_eq!(run_str(&["gen", "fond", "G x", "--y", "y"]).0, 3);
        assert_eq!(
            run_str(&["gen", "pond", "G (x -> y)", "--y", "y", "--x1", "y"]).0,
            3
        );
    }

    #[test]
    fn export_kinds() {
        for kind in ["nbw", "dpw", "apt", "game"] {
            let (code, out, _) =
                run_str(&["export-automaton", "--kind", kind, "A{x} E{y} G (y <-> x)"]);
            assert_eq!(code, 0);
            assert!(out.starts_with("digraph"), "{kind}");
        }
        assert_eq!(
            run_str(&[
                "export-automaton",
                "--kind",
                "apt",
                "--format",
                "json",
                "A{x} E{y} G (y <-> x)"
            ])
            .0,
            0
        );
        assert_eq!(
            run_str(&[
                "export-automaton",
                "--format",
                "json",
                "A{x} E{y} G (y <-> x)"
            ])
            .0,
            3
        );
    }

    #[test]
    fn resource_errors_exit_two() {
        let (code, _, err) = run_str(&[
            "check",
            "--sem",
            "behavioral",
            "--state-cap",
            "2",
            "A{x} E{y} G F (x <-> X y)",
        ]);
        assert_eq!(code, 2, "{err}");
    }
}
