//! Derivative reports and their line-oriented structured encoding.
//!
//! Schema (version 1), one `key = value` pair per line, keys in this order:
//!
//! ```text
//! format = twistlen-report
//! version = 1
//! source = closed_form | jet_oracle | finite_difference
//! n = <intersection count>
//! L = <real>
//! order = <k>
//! trace_derivs = [<real>, …]      k + 1 entries
//! length_derivs = [<real>, …]     k + 1 entries
//! deltas = [<real>, …]            optional
//! ```
//!
//! Reals are written in scientific notation with 17 significant digits, so
//! every `f64` survives a render/parse round trip unchanged.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub const FORMAT_NAME: &str = "twistlen-report";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    ClosedForm,
    JetOracle,
    FiniteDifference,
}

impl Source {
    pub fn as_str(&self) -> &'static str {
        match self {
            Source::ClosedForm => "closed_form",
            Source::JetOracle => "jet_oracle",
            Source::FiniteDifference => "finite_difference",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Source {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        match s {
            "closed_form" => Ok(Source::ClosedForm),
            "jet_oracle" => Ok(Source::JetOracle),
            "finite_difference" => Ok(Source::FiniteDifference),
            other => Err(ParseError::new(0, format!("unknown source `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeReport {
    pub n: usize,
    pub total_length: f64,
    pub order: usize,
    /// `T(0), …, T^(k)(0)`.
    pub trace_derivs: Vec<f64>,
    /// `L(0), …, L^(k)(0)`.
    pub length_derivs: Vec<f64>,
    pub source: Source,
    /// Absolute differences against a second source, when one was run.
    pub deltas: Option<Vec<f64>>,
}

impl DerivativeReport {
    /// Checks array sizes and `T(0) = 2cosh(L(0)/2)`.
    pub fn is_consistent(&self) -> bool {
        let sizes = self.trace_derivs.len() == self.order + 1
            && self.length_derivs.len() == self.order + 1;
        sizes && {
            let t0 = self.trace_derivs[0];
            let expected = 2.0 * (0.5 * self.length_derivs[0]).cosh();
            (t0 - expected).abs() <= 1e-12 * expected.abs()
        }
    }

    pub fn render_structured(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        line("format", FORMAT_NAME.to_string());
        line("version", FORMAT_VERSION.to_string());
        line("source", self.source.to_string());
        line("n", self.n.to_string());
        line("L", fmt_real(self.total_length));
        line("order", self.order.to_string());
        line("trace_derivs", fmt_array(&self.trace_derivs));
        line("length_derivs", fmt_array(&self.length_derivs));
        if let Some(deltas) = &self.deltas {
            line("deltas", fmt_array(deltas));
        }
        out
    }

    pub fn parse_structured(text: &str) -> Result<Self, ParseError> {
        let mut fields = Fields::default();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, value) = trimmed
                .split_once('=')
                .ok_or_else(|| ParseError::new(lineno, "expected `key = value`"))?;
            fields.set(lineno, key.trim(), value.trim())?;
        }
        fields.finish()
    }
}

/// 17 significant digits.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_array(xs: &[f64]) -> String {
    let items: Vec<String> = xs.iter().map(|&x| fmt_real(x)).collect();
    format!("[{}]", items.join(", "))
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

#[derive(Default)]
struct Fields {
    format: Option<String>,
    version: Option<u32>,
    source: Option<Source>,
    n: Option<usize>,
    total_length: Option<f64>,
    order: Option<usize>,
    trace: Option<Vec<f64>>,
    length: Option<Vec<f64>>,
    deltas: Option<Vec<f64>>,
}

fn parse_num<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T, ParseError> {
    value
        .parse()
        .map_err(|_| ParseError::new(line, format!("invalid value for `{key}`: `{value}`")))
}

fn parse_array(line: usize, key: &str, value: &str) -> Result<Vec<f64>, ParseError> {
    let inner = value
        .strip_prefix('[')
        .and_then(|v| v.strip_suffix(']'))
        .ok_or_else(|| ParseError::new(line, format!("`{key}` must be a bracketed list")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|item| parse_num(line, key, item.trim()))
        .collect()
}

impl Fields {
    fn set(&mut self, line: usize, key: &str, value: &str) -> Result<(), ParseError> {
        match key {
            "format" => self.format = Some(value.to_string()),
            "version" => self.version = Some(parse_num(line, key, value)?),
            "source" => {
                self.source = Some(value.parse().map_err(|e: ParseError| ParseError {
                    line,
                    ..e
                })?)
            }
            "n" => self.n = Some(parse_num(line, key, value)?),
            "L" => self.total_length = Some(parse_num(line, key, value)?),
            "order" => self.order = Some(parse_num(line, key, value)?),
            "trace_derivs" => self.trace = Some(parse_array(line, key, value)?),
            "length_derivs" => self.length = Some(parse_array(line, key, value)?),
            "deltas" => self.deltas = Some(parse_array(line, key, value)?),
            other => return Err(ParseError::new(line, format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    fn finish(self) -> Result<DerivativeReport, ParseError> {
        fn need<T>(v: Option<T>, key: &str) -> Result<T, ParseError> {
            v.ok_or_else(|| ParseError::new(0, format!("missing key `{key}`")))
        }
        if need(self.format, "format")? != FORMAT_NAME {
            return Err(ParseError::new(0, "not a twistlen report"));
        }
        let version = need(self.version, "version")?;
        if version != FORMAT_VERSION {
            return Err(ParseError::new(0, format!("unsupported version {version}")));
        }
        let report = DerivativeReport {
            n: need(self.n, "n")?,
            total_length: need(self.total_length, "L")?,
            order: need(self.order, "order")?,
            trace_derivs: need(self.trace, "trace_derivs")?,
            length_derivs: need(self.length, "length_derivs")?,
            source: need(self.source, "source")?,
            deltas: self.deltas,
        };
        if report.trace_derivs.len() != report.order + 1
            || report.length_derivs.len() != report.order + 1
        {
            return Err(ParseError::new(0, "derivative arrays must have order + 1 entries"));
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> DerivativeReport {
        DerivativeReport {
            n: 2,
            total_length: 2.0,
            order: 1,
            trace_derivs: vec![2.0 * 1.0f64.cosh(), 1.0f64.sinh() * 1.2071],
            length_derivs: vec![2.0, 1.2071],
            source: Source::ClosedForm,
            deltas: None,
        }
    }

    #[test]
    fn renders_documented_layout() {
        let text = sample().render_structured();
        let keys: Vec<&str> = text
            .lines()
            .map(|l| l.split(" = ").next().unwrap())
            .collect();
        assert_eq!(
            keys,
            ["format", "version", "source", "n", "L", "order", "trace_derivs", "length_derivs"]
        );
        assert!(text.contains("L = 2.0000000000000000e0\n"));
        assert!(sample().is_consistent());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = sample().render_structured().replace("order = 1", "order = x");
        let err = DerivativeReport::parse_structured(&text).unwrap_err();
        assert_eq!(err.line, 6);
        let text = sample().render_structured().replace("source = closed_form", "source = guess");
        assert_eq!(DerivativeReport::parse_structured(&text).unwrap_err().line, 3);
        let text = sample().render_structured().replace("order = 1", "order = 2");
        assert!(DerivativeReport::parse_structured(&text).is_err());
    }

    proptest! {
        #[test]
        fn structured_round_trip(
            n in 0usize..20,
            total_length in 1e-3f64..50.0,
            trace in prop::collection::vec(-1e6f64..1e6, 1..8),
            with_deltas in any::<bool>(),
            source_ix in 0usize..3,
        ) {
            let order = trace.len() - 1;
            let length: Vec<f64> = trace.iter().map(|x| x * 0.37 - 1e-9).collect();
            let report = DerivativeReport {
                n,
                total_length,
                order,
                length_derivs: length,
                deltas: with_deltas.then(|| trace.iter().map(|x| x.abs() * 1e-15).collect()),
                trace_derivs: trace,
                source: [Source::ClosedForm, Source::JetOracle, Source::FiniteDifference][source_ix],
            };
            let parsed = DerivativeReport::parse_structured(&report.render_structured()).unwrap();
            prop_assert_eq!(parsed, report);
        }
    }
}
