//! Command-line front end.
//!
//! ```text
//! twistlen derive  --input FILE --order K [--format text|structured]
//! twistlen check   --input FILE --max-order K [--tol X] [--fd-tol Y] [--fd-step H]
//! twistlen table   --n N --k K
//! twistlen formula --n N --k K [--latex]
//! ```
//!
//! Exit codes: 0 success, 1 tolerance breach, 2 input error, 3 numeric
//! domain error (branch point, finite-difference step guard).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde::Deserialize;

use crate::closed_form;
use crate::combinatorics::{binomial, coefficient_b, parity};
use crate::error::Error;
use crate::formula;
use crate::model::{IntersectionConfig, IntersectionPoint};
use crate::oracle;
use crate::relative_difference;
use crate::report::{fmt_real, DerivativeReport, Source};

pub const EXIT_OK: i32 = 0;
pub const EXIT_TOLERANCE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// Largest derivative order accepted on the command line.
pub const MAX_ORDER: usize = 20;

/// Partition enumerations larger than this are refused by `table`.
const MAX_PARTITIONS: u128 = 50_000_000;

#[derive(Debug, Parser)]
#[command(
    name = "twistlen",
    version,
    about = "Twist and bend derivatives of geodesic trace and length functions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form trace and length derivatives up to a given order.
    Derive {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Compare the closed form against the jet oracle and finite differences.
    Check {
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "max-order")]
        max_order: usize,
        /// Tolerance for closed form vs jet oracle.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Tolerance for closed form vs finite differences (orders ≤ 3).
        #[arg(long = "fd-tol", default_value_t = 1e-4)]
        fd_tol: f64,
        #[arg(long = "fd-step", default_value_t = 1e-3)]
        fd_step: f64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Table of the coefficients B(n, k, r).
    Table {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Fully expanded symbolic k-th trace derivative for n intersections.
    Formula {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        latex: bool,
    },
}

/// On-disk configuration: `{"L": 2.0, "points": [{"l": 0.0, "theta": 1.2}], "degrees": false}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(rename = "L")]
    pub total_length: f64,
    #[serde(default)]
    pub points: Vec<IntersectionPoint>,
    #[serde(default)]
    pub degrees: bool,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BranchPoint { .. } => Failure {
                code: EXIT_NUMERIC,
                message: format!("{e}; hint: L too small, the length function is singular there"),
            },
            Error::StepTooSmall { .. } => Failure {
                code: EXIT_NUMERIC,
                message: e.to_string(),
            },
            _ => Failure::input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::input(format!("write failed: {e}"))
    }
}

/// Parses a configuration document.
pub fn parse_config(text: &str) -> Result<IntersectionConfig, String> {
    let file: ConfigFile = serde_json::from_str(text)
        .map_err(|e| format!("line {}, column {}: {e}", e.line(), e.column()))?;
    let mut points = file.points;
    if file.degrees {
        for p in &mut points {
            p.angle = p.angle.to_radians();
        }
    }
    IntersectionConfig::new(file.total_length, points).map_err(|e| e.to_string())
}

pub fn load_config(path: &Path) -> Result<IntersectionConfig, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    parse_config(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn check_order(k: usize) -> Result<(), Failure> {
    if k > MAX_ORDER {
        return Err(Failure::input(format!(
            "order {k} exceeds the supported maximum {MAX_ORDER}"
        )));
    }
    Ok(())
}

/// Closed-form report for orders `0..=k`.
pub fn derive_report(config: &IntersectionConfig, k: usize) -> crate::Result<DerivativeReport> {
    let trace_derivs = closed_form::trace_derivatives(config, k);
    let mut length_derivs = closed_form::length_derivatives(config, k)?;
    length_derivs[0] = config.total_length();
    Ok(DerivativeReport {
        n: config.n(),
        total_length: config.total_length(),
        order: k,
        trace_derivs,
        length_derivs,
        source: Source::ClosedForm,
        deltas: None,
    })
}

fn render_text(report: &DerivativeReport, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(
        out,
        "n = {}, L = {}, order = {} ({})",
        report.n, report.total_length, report.order, report.source
    )?;
    writeln!(out, "{:>3}  {:>24}  {:>24}", "m", "T^(m)(0)", "L^(m)(0)")?;
    for (m, (t, l)) in report
        .trace_derivs
        .iter()
        .zip(&report.length_derivs)
        .enumerate()
    {
        writeln!(out, "{m:>3}  {:>24}  {:>24}", fmt_real(*t), fmt_real(*l))?;
    }
    Ok(())
}

fn cmd_derive(
    input: &Path,
    order: usize,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    check_order(order)?;
    let config = load_config(input).map_err(Failure::input)?;
    let report = derive_report(&config, order)?;
    match format {
        Format::Text => render_text(&report, out)?,
        Format::Structured => out.write_all(report.render_structured().as_bytes())?,
    }
    Ok(EXIT_OK)
}

/// Per-order comparison of the closed form against the oracles.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub order: usize,
    pub trace: f64,
    pub jet_delta: f64,
    pub length_delta: f64,
    pub fd_delta: Option<f64>,
}

pub fn check_rows(
    config: &IntersectionConfig,
    max_order: usize,
    fd_step: f64,
) -> crate::Result<Vec<CheckRow>> {
    let closed_t = closed_form::trace_derivatives(config, max_order);
    let closed_l = closed_form::length_derivatives(config, max_order)?;
    let jet_t = oracle::oracle_trace_derivatives(config, max_order)?;
    let jet_l = oracle::oracle_length_derivatives(config, max_order)?;
    (0..=max_order)
        .map(|m| {
            let fd_delta = if m <= 3 {
                let fd = oracle::finite_difference_check(config, m, fd_step)?;
                Some(relative_difference(fd, closed_t[m]))
            } else {
                None
            };
            Ok(CheckRow {
                order: m,
                trace: closed_t[m],
                jet_delta: relative_difference(jet_t[m], closed_t[m]),
                length_delta: relative_difference(jet_l[m], closed_l[m]),
                fd_delta,
            })
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_check(
    input: &Path,
    max_order: usize,
    tol: f64,
    fd_tol: f64,
    fd_step: f64,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    check_order(max_order)?;
    if !(tol > 0.0 && fd_tol > 0.0) {
        return Err(Failure::input("tolerances must be positive"));
    }
    let config = load_config(input).map_err(Failure::input)?;
    let rows = check_rows(&config, max_order, fd_step)?;
    let jet_ok = rows
        .iter()
        .all(|r| r.jet_delta <= tol && r.length_delta <= tol);
    let fd_ok = rows.iter().all(|r| r.fd_delta.is_none_or(|d| d <= fd_tol));
    match format {
        Format::Structured => {
            let mut report = derive_report(&config, max_order)?;
            report.deltas = Some(rows.iter().map(|r| r.jet_delta).collect());
            out.write_all(report.render_structured().as_bytes())?;
        }
        Format::Text => {
            writeln!(
                out,
                "n = {}, L = {}, max order = {}, tol = {tol:e}, fd tol = {fd_tol:e}, fd step = {fd_step:e}",
                config.n(),
                config.total_length(),
                max_order
            )?;
            writeln!(
                out,
                "{:>3}  {:>24}  {:>10}  {:>10}  {:>10}",
                "m", "T^(m)(0)", "jet T", "jet L", "fd T"
            )?;
            for r in &rows {
                let fd = r
                    .fd_delta
                    .map_or_else(|| "-".to_string(), |d| format!("{d:.2e}"));
                writeln!(
                    out,
                    "{:>3}  {:>24}  {:>10.2e}  {:>10.2e}  {:>10}",
                    r.order,
                    fmt_real(r.trace),
                    r.jet_delta,
                    r.length_delta,
                    fd
                )?;
            }
            let max_jet = rows
                .iter()
                .map(|r| r.jet_delta.max(r.length_delta))
                .fold(0.0, f64::max);
            let max_fd = rows.iter().filter_map(|r| r.fd_delta).fold(0.0, f64::max);
            writeln!(out, "max jet delta {max_jet:.3e}, max fd delta {max_fd:.3e}")?;
            writeln!(out, "{}", if jet_ok && fd_ok { "PASS" } else { "FAIL" })?;
        }
    }
    Ok(if jet_ok && fd_ok { EXIT_OK } else { EXIT_TOLERANCE })
}

fn cmd_table(n: usize, k: usize, out: &mut dyn Write) -> Result<i32, Failure> {
    if n == 0 {
        return Err(Failure::input("table needs n >= 1"));
    }
    let partitions = binomial((k + n - 1) as u64, (n - 1) as u64);
    let count = partitions.to_u128().unwrap_or(u128::MAX);
    if count > MAX_PARTITIONS {
        return Err(Error::SizeGuard {
            terms: count,
            limit: MAX_PARTITIONS,
        }
        .into());
    }
    writeln!(out, "B(n = {n}, k = {k}, r)")?;
    for r in (parity(k as u64) as usize..=k.min(n)).step_by(2) {
        let b = coefficient_b(n, k as u64, r)?;
        writeln!(out, "r = {r}: {b}")?;
    }
    Ok(EXIT_OK)
}

fn cmd_formula(n: usize, k: usize, latex: bool, out: &mut dyn Write) -> Result<i32, Failure> {
    let expansion = formula::expand(n, k)?;
    if latex {
        writeln!(out, "{}", expansion.render_latex())?;
    } else {
        out.write_all(expansion.render_text().as_bytes())?;
    }
    Ok(EXIT_OK)
}

/// Runs one invocation and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Derive {
            input,
            order,
            format,
        } => cmd_derive(&input, order, format, out),
        Command::Check {
            input,
            max_order,
            tol,
            fd_tol,
            fd_step,
            format,
        } => cmd_check(&input, max_order, tol, fd_tol, fd_step, format, out),
        Command::Table { n, k } => cmd_table(n, k, out),
        Command::Formula { n, k, latex } => cmd_formula(n, k, latex, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parsing() {
        let c = parse_config(r#"{"L": 2.0, "points": [{"l": 0.0, "theta": 90.0}], "degrees": true}"#)
            .unwrap();
        assert!((c.angles()[0] - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        let c = parse_config(r#"{"L": 1.5}"#).unwrap();
        assert_eq!(c.n(), 0);
        let err = parse_config("{\n  \"L\": 2.0,\n  \"points\": [oops]\n}").unwrap_err();
        assert!(err.starts_with("line 3"), "{err}");
        let err = parse_config(r#"{"L": 2.0, "points": [{"l": 0.5, "theta": 1.0}]}"#).unwrap_err();
        assert!(err.contains("intersection 0"), "{err}");
        assert!(parse_config(r#"{"L": 2.0, "extra": 1}"#).is_err());
    }

    #[test]
    fn table_output() {
        let mut out = Vec::new();
        assert_eq!(cmd_table(3, 3, &mut out).unwrap(), EXIT_OK);
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "B(n = 3, k = 3, r)\nr = 1: 7\nr = 3: 6\n"
        );
        let mut out = Vec::new();
        cmd_table(1, 2, &mut out).unwrap();
        assert!(String::from_utf8(out).unwrap().ends_with("r = 0: 1\n"));
        let mut out = Vec::new();
        cmd_table(2, 2, &mut out).unwrap();
        assert!(String::from_utf8(out).unwrap().ends_with("r = 0: 2\nr = 2: 2\n"));
        assert_eq!(cmd_table(0, 2, &mut Vec::new()).unwrap_err().code, EXIT_INPUT);
        assert_eq!(cmd_table(30, 30, &mut Vec::new()).unwrap_err().code, EXIT_INPUT);
    }
}
