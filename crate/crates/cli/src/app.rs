//! Command dispatch, verification suites and exports.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use qcomm_core::braided::{
    check_antisymmetry, check_chi_yang_baxter, check_covariance, check_leibniz, check_unit_braiding,
    check_unit_commutators, export_qlie, jacobi_operator_residual, jacobi_residual, verify_qlie,
};
use qcomm_core::hopf::{check_hopf_axioms, check_qt_axioms, check_r_counit_antipode, check_yang_baxter};
use qcomm_core::qplane::check_module_algebra;
use qcomm_core::tensor::TermJson;
use qcomm_core::Report;
use serde::Serialize;

use crate::error::CliError;
use crate::expr::{parse, typecheck, Expr, Node};
use crate::session::{Session, Space, Value};

#[derive(Debug, Parser)]
#[command(name = "qcomm", version, about = "Exact braided commutators on module-algebras of quasi-triangular Hopf algebras")]
pub struct Cli {
    /// Order N of the root of unity q (odd, at least 3).
    #[arg(long, global = true, default_value_t = 3)]
    pub order: u32,
    /// Module-algebra: A0, E, Z3, or a comma-separated list of basis elements.
    #[arg(long, global = true, default_value = "A0")]
    pub space: String,
    /// Output file for `export`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Builds the structures and prints their dimensions.
    Build,
    /// Evaluates an expression.
    Eval { expr: String },
    /// Braiding of two elements.
    Chi { left: String, right: String },
    /// Braided commutator of two elements.
    Comm { left: String, right: String },
    /// Action of a Hopf-algebra element on an element or tensor.
    Act { h: String, e: String },
    /// Runs a verification suite.
    Verify { suite: Suite },
    /// Writes structure data as JSON.
    Export { kind: ExportKind },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Hopf,
    Qt,
    Yb,
    Module,
    Leibniz,
    Covariance,
    Antisym,
    ChiYb,
    Jacobi,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Hopf => "hopf",
            Suite::Qt => "qt",
            Suite::Yb => "yb",
            Suite::Module => "module",
            Suite::Leibniz => "leibniz",
            Suite::Covariance => "covariance",
            Suite::Antisym => "antisym",
            Suite::ChiYb => "chi-yb",
            Suite::Jacobi => "jacobi",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportKind {
    Qlie,
    Hopf,
    Module,
}

/// Outcome of `verify`, serialisable with `--json`.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub order: u32,
    pub space: String,
    pub passed: bool,
    pub wall_time_s: f64,
    pub reports: Vec<Report>,
    pub notes: Vec<String>,
}

#[derive(Serialize)]
struct ValueJson {
    kind: &'static str,
    value: String,
    terms: Vec<TermJson>,
}

/// The jacobi suite passes when the Jacobi residual behaves as the
/// triangularity of H predicts, and records the witness it found.
fn jacobi_suite(s: &Session, notes: &mut Vec<String>) -> Result<Vec<Report>, CliError> {
    let b = s.braiding()?;
    let analysis = jacobi_operator_residual(b)?;
    notes.push(format!(
        "H is {}triangular; operator display {}",
        if analysis.triangular { "" } else { "not " },
        if analysis.operator_vanishes { "vanishes identically" } else { "is nonzero" }
    ));
    if let Some((inputs, value)) = &analysis.witness {
        notes.push(format!("operator display at ({}) = {value}", inputs.join(", ")));
    }
    let n = b.dim() as u32;
    let el = |i: u32| b.algebra().basis_element(i);
    let nonzero = (0..n * n * n).find_map(|t| {
        let (i, j, k) = (t / (n * n), (t / n) % n, t % n);
        let r = jacobi_residual(b, &el(i), &el(j), &el(k));
        (!r.is_zero()).then_some((i, j, k, r))
    });
    if let Some((i, j, k, r)) = nonzero {
        let name = |i: u32| b.basis().display(i).to_string();
        notes.push(format!(
            "first nonzero residual at ({}, {}, {}) = {}",
            name(i),
            name(j),
            name(k),
            r.pretty(b.basis())
        ));
    }
    if let Some(x) = b.basis().find("x") {
        let x = b.algebra().basis_element(x);
        let r = jacobi_residual(b, &x, &x, &x);
        notes.push(format!("residual at (x, x, x) = {}", r.pretty(b.basis())));
    }
    Ok(analysis.reports)
}

pub fn run_verify(s: &Session, suite: Suite) -> Result<VerifyReport, CliError> {
    let t = Instant::now();
    let mut notes = Vec::new();
    let h = s.hopf();
    let mut reports = Vec::new();
    let want = |x: Suite| suite == x || suite == Suite::All;
    if want(Suite::Hopf) {
        reports.extend(check_hopf_axioms(h));
    }
    if want(Suite::Qt) {
        reports.extend(check_qt_axioms(h)?);
        reports.extend(check_r_counit_antipode(h)?);
    }
    if want(Suite::Yb) {
        reports.push(check_yang_baxter(h)?);
    }
    if want(Suite::Module) {
        reports.extend(check_module_algebra(s.module()?));
    }
    if want(Suite::Leibniz) {
        let b = s.braiding()?;
        reports.push(check_unit_braiding(b));
        reports.push(check_unit_commutators(b));
        reports.extend(check_leibniz(b));
    }
    if want(Suite::Covariance) {
        reports.push(check_covariance(s.braiding()?));
    }
    if want(Suite::Antisym) {
        reports.extend(check_antisymmetry(s.braiding()?));
    }
    if want(Suite::ChiYb) {
        reports.push(check_chi_yang_baxter(s.braiding()?));
    }
    if want(Suite::Jacobi) {
        reports.extend(jacobi_suite(s, &mut notes)?);
    }
    Ok(VerifyReport {
        suite: suite.name().to_string(),
        order: s.order(),
        space: s.space().to_string(),
        passed: reports.iter().all(Report::passed),
        wall_time_s: t.elapsed().as_secs_f64(),
        reports,
        notes,
    })
}

/// JSON text for `export`, with a trailing newline.
pub fn export(s: &Session, kind: ExportKind) -> Result<String, CliError> {
    let mut text = match kind {
        ExportKind::Qlie => {
            let ex = export_qlie(s.braiding()?, &s.span()?)?;
            let failed: Vec<_> = verify_qlie(s.braiding()?, &ex).into_iter().filter(|r| !r.passed()).collect();
            if let Some(r) = failed.first() {
                return Err(CliError::Usage(format!("export failed its own check: {r}")));
            }
            serde_json::to_string_pretty(&ex.to_json())?
        }
        ExportKind::Hopf => serde_json::to_string_pretty(&s.hopf().to_json())?,
        ExportKind::Module => serde_json::to_string_pretty(&s.module()?.to_json())?,
    };
    text.push('\n');
    Ok(text)
}

fn value_json(s: &Session, v: &Value) -> Result<ValueJson, CliError> {
    let (kind, terms) = match v {
        Value::Scalar(_) => ("scalar", vec![]),
        Value::Hopf(e) => ("hopf", e.to_json(s.hopf().basis())),
        Value::Module(e) => ("module", e.to_json(s.braiding()?.basis())),
        Value::Tensor(e) => ("tensor", e.to_json(s.braiding()?.basis())),
    };
    Ok(ValueJson {
        kind,
        value: s.print(v)?,
        terms,
    })
}

fn print_value(s: &Session, v: &Value, json: bool, out: &mut dyn Write) -> Result<(), CliError> {
    if json {
        writeln!(out, "{}", serde_json::to_string(&value_json(s, v)?)?)?;
    } else {
        writeln!(out, "{}", s.print(v)?)?;
    }
    Ok(())
}

fn eval_parts(s: &Session, build: fn(Box<Expr>, Box<Expr>) -> Node, left: &str, right: &str) -> Result<Value, CliError> {
    let (a, _) = parse(left)?;
    let (b, _) = parse(right)?;
    let e = Expr {
        node: build(Box::new(a), Box::new(b)),
        pos: 0,
    };
    typecheck(&e)?;
    s.eval(&e)
}

/// Runs one command; returns the exit code (0 pass, 1 verification failure).
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let space: Space = cli.space.parse()?;
    let s = Session::new(cli.order, space)?;
    match &cli.command {
        Command::Build => {
            let b = s.braiding()?;
            let h = s.hopf();
            if cli.json {
                let j = serde_json::json!({
                    "order": s.order(),
                    "space": s.space().to_string(),
                    "hopf_dim": h.dim(),
                    "quasi_triangular": h.qt().is_some(),
                    "triangular": h.is_triangular(),
                    "module_dim": b.dim(),
                    "basis": b.basis().labels(),
                });
                writeln!(out, "{}", serde_json::to_string(&j)?)?;
            } else {
                writeln!(out, "order {} space {}", s.order(), s.space())?;
                writeln!(
                    out,
                    "Hopf algebra: dimension {}, {}triangular",
                    h.dim(),
                    if h.is_triangular() { "" } else { "not " }
                )?;
                writeln!(out, "module-algebra: dimension {}", b.dim())?;
                if matches!(s.space(), Space::E) {
                    let ext = s.extended_plane()?;
                    let m = ext.model;
                    writeln!(
                        out,
                        "derivative model: q-integer base q^{}, twists q^{} and q^{}",
                        m.base, m.x_twist, m.y_twist
                    )?;
                }
            }
            Ok(0)
        }
        Command::Eval { expr } => {
            let v = s.eval_str(expr)?;
            print_value(&s, &v, cli.json, out)?;
            Ok(0)
        }
        Command::Chi { left, right } => {
            print_value(&s, &eval_parts(&s, Node::Chi, left, right)?, cli.json, out)?;
            Ok(0)
        }
        Command::Comm { left, right } => {
            let v = eval_parts(&s, Node::Comm, left, right)?;
            print_value(&s, &v, cli.json, out)?;
            Ok(0)
        }
        Command::Act { h, e } => {
            print_value(&s, &eval_parts(&s, Node::Act, h, e)?, cli.json, out)?;
            Ok(0)
        }
        Command::Verify { suite } => {
            let r = run_verify(&s, *suite)?;
            if cli.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&r)?)?;
            } else {
                writeln!(out, "suite {} (order {}, space {})", r.suite, r.order, r.space)?;
                for rep in &r.reports {
                    writeln!(out, "{rep}")?;
                }
                for n in &r.notes {
                    writeln!(out, "note: {n}")?;
                }
                let ok = r.reports.iter().filter(|x| x.passed()).count();
                writeln!(
                    out,
                    "{}: {ok} of {} checks passed in {:.2} s",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.reports.len(),
                    r.wall_time_s
                )?;
            }
            Ok(if r.passed { 0 } else { 1 })
        }
        Command::Export { kind } => {
            let text = export(&s, *kind)?;
            match &cli.out {
                Some(path) => std::fs::write(path, text)?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(0)
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcomm_core::tensor;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("qcomm").chain(args.iter().copied()), &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn commands_on_the_plane() {
        assert_eq!(run_str(&["comm", "x", "x"]).1, "(1-q^2) x^2\n");
        assert_eq!(run_str(&["chi", "y", "x"]).1, "q * x (x) y\n");
        assert_eq!(run_str(&["act", "Xm", "x"]).1, "y\n");
        assert_eq!(run_str(&["eval", "[x, K]"]).0, 2);
        assert_eq!(run_str(&["verify", "nonsense"]).0, 2);
    }

    #[test]
    fn tensor_values_distribute_under_act() {
        let (code, out, _) = run_str(&["act", "Xp", "y (x) y"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), run_str(&["eval", "act(Xp, y) (x) y + act(K, y) (x) act(Xp, y)"]).1.trim());
    }

    #[test]
    fn jacobi_suite_records_the_witness() {
        let s = Session::new(3, Space::A0).unwrap();
        let r = run_verify(&s, Suite::Jacobi).unwrap();
        assert!(r.passed);
        assert!(r.notes.iter().any(|n| n == "residual at (x, x, x) = -3q^2"), "{:?}", r.notes);
    }

    #[test]
    fn qlie_on_a_span() {
        let (code, out, err) = run_str(&["export", "qlie", "--space", "x,y"]);
        assert_eq!(code, 0, "{err}");
        let j: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(j["closed"], false);
        assert_eq!(j["basis"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn tensor_helper_matches_the_tensor_sign() {
        let s = Session::new(3, Space::A0).unwrap();
        let x = s.eval_str("x").unwrap();
        let Value::Module(x) = x else { panic!() };
        assert_eq!(s.eval_str("x (x) x").unwrap(), Value::Tensor(tensor(&x, &x)));
    }
}
