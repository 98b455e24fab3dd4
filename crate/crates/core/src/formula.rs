//! Fully expanded symbolic form of `T^(k)(0)` for a given `n`.
//!
//! Every term is a rational coefficient times a product of `sin θ_i`,
//! `cos θ_i` and one `cosh`/`sinh` of `L/2` shifted by a sum of distances
//! `l_ij`. Indices in rendered output are one-based.

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::combinatorics::{coefficient_b, even_subsets, parity, subsets_of_size};
use crate::error::{Error, Result};
use crate::model::IntersectionConfig;

/// Expansions with more terms than this are refused.
pub const MAX_TERMS: u128 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hyperbolic {
    Cosh,
    Sinh,
}

/// `(numerator / denominator) · Π sin θ · Π cos θ · H(L/2 - Σ l_ij)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FormulaTerm {
    pub numerator: BigInt,
    pub denominator: BigUint,
    /// Zero-based point indices.
    pub sin: Vec<usize>,
    pub cos: Vec<usize>,
    pub hyperbolic: Hyperbolic,
    /// Pairs `(i, j)`, `i < j`, whose distances `l_ij` are subtracted from `L/2`.
    pub shift: Vec<(usize, usize)>,
}

impl FormulaTerm {
    pub fn coefficient(&self) -> f64 {
        self.numerator.to_f64().unwrap() / self.denominator.to_f64().unwrap()
    }

    pub fn evaluate(&self, config: &IntersectionConfig) -> f64 {
        let points = config.points();
        let trig: f64 = self.sin.iter().map(|&i| points[i].angle.sin()).product::<f64>()
            * self.cos.iter().map(|&i| points[i].angle.cos()).product::<f64>();
        let arg = 0.5 * config.total_length()
            - self
                .shift
                .iter()
                .map(|&(i, j)| config.distance(i, j))
                .sum::<f64>();
        let h = match self.hyperbolic {
            Hyperbolic::Cosh => arg.cosh(),
            Hyperbolic::Sinh => arg.sinh(),
        };
        self.coefficient() * trig * h
    }
}

/// Terms grouped by the subset size `r` they come from.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    pub n: usize,
    pub k: usize,
    pub groups: Vec<TermGroup>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TermGroup {
    pub r: usize,
    pub b: BigUint,
    pub terms: Vec<FormulaTerm>,
}

/// Number of terms the expansion of `T^(k)(0)` would have.
pub fn term_count(n: usize, k: usize) -> u128 {
    (parity(k as u64) as usize..=k.min(n))
        .step_by(2)
        .map(|r| {
            let choose = crate::combinatorics::binomial(n as u64, r as u64)
                .to_u128()
                .unwrap_or(u128::MAX);
            let per = if r == 0 { 1u128 } else { 1u128 << (r - 1).min(100) };
            choose.saturating_mul(per)
        })
        .fold(0u128, u128::saturating_add)
}

fn reduced(mut num: BigInt, mut den_log2: usize) -> (BigInt, BigUint) {
    let two = BigInt::from(2);
    while den_log2 > 0 && !num.is_zero() && (&num % &two).is_zero() {
        num /= &two;
        den_log2 -= 1;
    }
    (num, BigUint::one() << den_log2)
}

/// Expands `T^(k)(0) = 2^{-k} Σ_r B_{n,k,r} Σ_{|J|=r} F_r(u_J)` term by term.
pub fn expand(n: usize, k: usize) -> Result<Expansion> {
    let terms = term_count(n, k);
    if terms > MAX_TERMS {
        return Err(Error::SizeGuard {
            terms,
            limit: MAX_TERMS,
        });
    }
    let mut groups = Vec::new();
    for r in (parity(k as u64) as usize..=k.min(n)).step_by(2) {
        let b = coefficient_b(n, k as u64, r)?;
        if b.is_zero() {
            continue;
        }
        let hyperbolic = if r % 2 == 0 {
            Hyperbolic::Cosh
        } else {
            Hyperbolic::Sinh
        };
        let mut terms = Vec::new();
        for chosen in subsets_of_size(n, r)? {
            let j = chosen.indices();
            for inner in even_subsets(r) {
                let sign = if inner.signature() % 2 == 0 { 1 } else { -1 };
                // 2·B / 2^k, the 2 coming from F_r
                let (numerator, denominator) =
                    reduced(BigInt::from(2 * sign) * BigInt::from(b.clone()), k);
                let sin: Vec<usize> = inner.indices().iter().map(|&p| j[p]).collect();
                let cos: Vec<usize> = inner.complement().iter().map(|&p| j[p]).collect();
                let shift = sin.chunks_exact(2).map(|c| (c[0], c[1])).collect();
                terms.push(FormulaTerm {
                    numerator,
                    denominator,
                    sin,
                    cos,
                    hyperbolic,
                    shift,
                });
            }
        }
        groups.push(TermGroup { r, b, terms });
    }
    Ok(Expansion { n, k, groups })
}

impl Expansion {
    pub fn terms(&self) -> impl Iterator<Item = &FormulaTerm> {
        self.groups.iter().flat_map(|g| g.terms.iter())
    }

    pub fn evaluate(&self, config: &IntersectionConfig) -> f64 {
        self.terms().map(|t| t.evaluate(config)).sum()
    }

    /// Plain text, one signed term per line; `#` lines are comments.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let count = self.terms().count();
        let _ = writeln!(out, "# T^({k})(0) for n = {n}: {count} terms", k = self.k, n = self.n);
        if count == 0 {
            out.push_str("0\n");
        }
        for g in &self.groups {
            let _ = writeln!(
                out,
                "# r = {}: B = {}, weight B/2^{} times 2 from F_{}",
                g.r, g.b, self.k, g.r
            );
            for t in &g.terms {
                out.push_str(&render_text_term(t));
                out.push('\n');
            }
        }
        out
    }

    pub fn render_latex(&self) -> String {
        let mut out = format!("T^{{({})}}(0) = ", self.k);
        let mut first = true;
        for t in self.terms() {
            let negative = t.numerator.is_negative();
            if first {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            first = false;
            let abs = t.numerator.abs();
            if t.denominator.is_one() {
                if !abs.is_one() {
                    let _ = write!(out, "{abs}");
                }
            } else {
                let _ = write!(out, "\\frac{{{abs}}}{{{}}}", t.denominator);
            }
            for &i in &t.sin {
                let _ = write!(out, "\\sin\\theta_{{{}}}", i + 1);
            }
            for &i in &t.cos {
                let _ = write!(out, "\\cos\\theta_{{{}}}", i + 1);
            }
            let h = match t.hyperbolic {
                Hyperbolic::Cosh => "\\cosh",
                Hyperbolic::Sinh => "\\sinh",
            };
            let _ = write!(out, "{h}\\left(\\frac{{L}}{{2}}");
            for &(i, j) in &t.shift {
                if i < 9 && j < 9 {
                    let _ = write!(out, " - l_{{{}{}}}", i + 1, j + 1);
                } else {
                    let _ = write!(out, " - l_{{{},{}}}", i + 1, j + 1);
                }
            }
            out.push_str("\\right)");
        }
        if first {
            out.push('0');
        }
        out
    }
}

fn render_text_term(t: &FormulaTerm) -> String {
    let mut factors = Vec::new();
    let abs = t.numerator.abs();
    if !(abs.is_one() && t.denominator.is_one()) {
        if t.denominator.is_one() {
            factors.push(abs.to_string());
        } else {
            factors.push(format!("{abs}/{}", t.denominator));
        }
    }
    factors.extend(t.sin.iter().map(|i| format!("sin(t[{}])", i + 1)));
    factors.extend(t.cos.iter().map(|i| format!("cos(t[{}])", i + 1)));
    let mut arg = String::from("L/2");
    for &(i, j) in &t.shift {
        let _ = write!(arg, " - l[{},{}]", i + 1, j + 1);
    }
    factors.push(match t.hyperbolic {
        Hyperbolic::Cosh => format!("cosh({arg})"),
        Hyperbolic::Sinh => format!("sinh({arg})"),
    });
    let sign = if t.numerator.is_negative() { '-' } else { '+' };
    format!("{sign} {}", factors.join(" * "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_order_is_cosine_sum() {
        let e = expand(3, 1).unwrap();
        let text = e.render_text();
        let lines: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(
            lines,
            [
                "+ cos(t[1]) * sinh(L/2)",
                "+ cos(t[2]) * sinh(L/2)",
                "+ cos(t[3]) * sinh(L/2)"
            ]
        );
    }

    #[test]
    fn second_order_two_points() {
        let e = expand(2, 2).unwrap();
        let lines: Vec<String> = e.terms().map(render_text_term).collect();
        assert_eq!(
            lines,
            [
                "+ cosh(L/2)",
                "+ cos(t[1]) * cos(t[2]) * cosh(L/2)",
                "+ sin(t[1]) * sin(t[2]) * cosh(L/2 - l[1,2])",
            ]
        );
    }

    #[test]
    fn zeroth_order_is_trace() {
        let e = expand(4, 0).unwrap();
        let t: Vec<_> = e.terms().collect();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].coefficient(), 2.0);
        assert_eq!(e.render_latex(), "T^{(0)}(0) = 2\\cosh\\left(\\frac{L}{2}\\right)");
    }

    #[test]
    fn size_guard() {
        assert!(matches!(expand(20, 12), Err(Error::SizeGuard { .. })));
        assert_eq!(term_count(3, 3), 3 + 4);
        assert_eq!(term_count(2, 2), 1 + 2);
    }

    #[test]
    fn empty_configuration_has_no_terms() {
        let e = expand(0, 3).unwrap();
        assert_eq!(e.terms().count(), 0);
        assert!(e.render_latex().ends_with("= 0"));
    }
}
