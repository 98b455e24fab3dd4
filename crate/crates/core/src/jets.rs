//! Dense truncated power series ("jets") of fixed order.
//!
//! A `Jet<S>` of order `K` stores `c_0..c_K` and stands for
//! `Σ c_m z^m + O(z^{K+1})`. Products truncate at `K`; the elementary
//! functions are computed with the usual O(K²) coefficient recurrences
//! obtained from `f' = g(f)·a'`.
//!
//! The arithmetic operators require equal orders and panic otherwise; the
//! `checked_*` methods report [`Error::OrderMismatch`] instead.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Below `cosh(L/2) - 1 < BRANCH_EPS` the inversion of `T = 2cosh(L/2)` is
/// refused: its coefficients carry a `1/sinh(L/2)` amplification.
pub const BRANCH_EPS: f64 = 1e-9;

/// Coefficient field of a jet.
pub trait Scalar:
    Copy
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(x: f64) -> Self;
    fn exp(self) -> Self;
    fn acosh(self) -> Self;
    fn sinh(self) -> Self;
    /// Modulus.
    fn norm(self) -> f64;
    /// Distance from `self` to the nearest branch point `±1` of `acosh`,
    /// negative if a real argument lies on the wrong side of `1`.
    fn branch_gap(self) -> f64;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn acosh(self) -> Self {
        f64::acosh(self)
    }
    fn sinh(self) -> Self {
        f64::sinh(self)
    }
    fn norm(self) -> f64 {
        self.abs()
    }
    fn branch_gap(self) -> f64 {
        self - 1.0
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn exp(self) -> Self {
        Complex64::exp(self)
    }
    fn acosh(self) -> Self {
        Complex64::acosh(self)
    }
    fn sinh(self) -> Self {
        Complex64::sinh(self)
    }
    fn norm(self) -> f64 {
        Complex64::norm(self)
    }
    fn branch_gap(self) -> f64 {
        (self - Self::one()).norm().min((self + Self::one()).norm())
    }
}

/// Truncated power series with coefficients in `S`.
#[derive(Clone, PartialEq)]
pub struct Jet<S = f64> {
    coeffs: Vec<S>,
}

impl<S: Scalar> fmt::Debug for Jet<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()
    }
}

impl<S: Scalar> Jet<S> {
    /// Jet from explicit coefficients; its order is `coeffs.len() - 1`.
    pub fn from_coeffs(coeffs: Vec<S>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least one coefficient");
        Self { coeffs }
    }

    pub fn constant(value: S, order: usize) -> Self {
        let mut coeffs = vec![S::zero(); order + 1];
        coeffs[0] = value;
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::constant(S::zero(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(S::one(), order)
    }

    /// The independent variable `z`.
    pub fn variable(order: usize) -> Self {
        Self::direction(S::one(), order)
    }

    /// `w·z` for a fixed direction `w`.
    pub fn direction(w: S, order: usize) -> Self {
        let mut jet = Self::zero(order);
        if order >= 1 {
            jet.coeffs[1] = w;
        }
        jet
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn value(&self) -> S {
        self.coeffs[0]
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() == other.order() {
            Ok(())
        } else {
            Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    /// Cauchy product truncated at the common order.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let k = self.order();
        let coeffs = (0..=k)
            .map(|m| {
                (0..=m).fold(S::zero(), |acc, j| {
                    acc + self.coeffs[j] * other.coeffs[m - j]
                })
            })
            .collect();
        Ok(Self { coeffs })
    }

    fn zip_with(&self, other: &Self, f: impl Fn(S, S) -> S) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Self { coeffs }
    }

    pub fn scale(&self, factor: S) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&c| c * factor).collect(),
        }
    }

    pub fn exp(&self) -> Self {
        let k = self.order();
        let mut out = vec![S::zero(); k + 1];
        out[0] = self.coeffs[0].exp();
        for m in 1..=k {
            let sum = (1..=m).fold(S::zero(), |acc, j| {
                acc + S::from_f64(j as f64) * self.coeffs[j] * out[m - j]
            });
            out[m] = sum / S::from_f64(m as f64);
        }
        Self { coeffs: out }
    }

    pub fn cosh(&self) -> Self {
        let (p, q) = (self.exp(), (-self).exp());
        (&p + &q).scale(S::from_f64(0.5))
    }

    pub fn sinh(&self) -> Self {
        let (p, q) = (self.exp(), (-self).exp());
        (&p - &q).scale(S::from_f64(0.5))
    }

    /// Inverse of [`Jet::cosh`] on the principal branch.
    ///
    /// With `b = acosh(a)` and `s = sinh(b)`, differentiating `cosh(b) = a`
    /// and `sinh(b)' = a·b'` gives
    /// `m·a_m = Σ_{j=1}^{m} j·b_j·s_{m-j}` and `m·s_m = Σ_{j=1}^{m} j·b_j·a_{m-j}`,
    /// solved order by order; the only division is by `s_0 = sinh(b_0)`.
    pub fn acosh(&self) -> Result<Self> {
        let a0 = self.coeffs[0];
        let gap = a0.branch_gap();
        if gap.is_nan() || gap <= BRANCH_EPS {
            return Err(Error::BranchPoint {
                value: a0.norm(),
                eps: BRANCH_EPS,
            });
        }
        let k = self.order();
        let mut b = vec![S::zero(); k + 1];
        let mut s = vec![S::zero(); k + 1];
        b[0] = a0.acosh();
        s[0] = b[0].sinh();
        for m in 1..=k {
            let mf = S::from_f64(m as f64);
            let partial = (1..m).fold(S::zero(), |acc, j| {
                acc + S::from_f64(j as f64) * b[j] * s[m - j]
            });
            b[m] = (mf * self.coeffs[m] - partial) / (mf * s[0]);
            let ds = (1..=m).fold(S::zero(), |acc, j| {
                acc + S::from_f64(j as f64) * b[j] * self.coeffs[m - j]
            });
            s[m] = ds / mf;
        }
        Ok(Self { coeffs: b })
    }

    /// `m!·c_m`, the `m`-th derivative at the expansion point.
    pub fn derivative(&self, m: usize) -> Result<S> {
        let c = *self.coeffs.get(m).ok_or(Error::OrderExceeded {
            requested: m,
            order: self.order(),
        })?;
        let fact = (1..=m).fold(1.0, |acc, i| acc * i as f64);
        Ok(c * S::from_f64(fact))
    }

    /// All derivatives `f(0), f'(0), …, f^(K)(0)`.
    pub fn derivatives(&self) -> Vec<S> {
        let mut fact = 1.0;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(m, &c)| {
                if m > 0 {
                    fact *= m as f64;
                }
                c * S::from_f64(fact)
            })
            .collect()
    }

    /// Jet whose derivatives at the expansion point are `derivs`.
    pub fn from_derivatives(derivs: &[S]) -> Self {
        let mut fact = 1.0;
        let coeffs = derivs
            .iter()
            .enumerate()
            .map(|(m, &d)| {
                if m > 0 {
                    fact *= m as f64;
                }
                d / S::from_f64(fact)
            })
            .collect();
        Self::from_coeffs(coeffs)
    }

    /// Largest coefficient modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl<S: Scalar> From<S> for Jet<S> {
    /// Order-zero jet.
    fn from(value: S) -> Self {
        Self::constant(value, 0)
    }
}

impl<S: Scalar> Neg for &Jet<S> {
    type Output = Jet<S>;
    fn neg(self) -> Jet<S> {
        Jet {
            coeffs: self.coeffs.iter().map(|&c| -c).collect(),
        }
    }
}

impl<S: Scalar> Neg for Jet<S> {
    type Output = Jet<S>;
    fn neg(self) -> Jet<S> {
        -&self
    }
}

macro_rules! jet_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<S: Scalar> $trait<&Jet<S>> for &Jet<S> {
            type Output = Jet<S>;
            fn $method(self, rhs: &Jet<S>) -> Jet<S> {
                self.$checked(rhs).expect("jet orders must match")
            }
        }

        impl<S: Scalar> $trait for Jet<S> {
            type Output = Jet<S>;
            fn $method(self, rhs: Jet<S>) -> Jet<S> {
                (&self).$method(&rhs)
            }
        }
    };
}

jet_binop!(Add, add, checked_add);
jet_binop!(Sub, sub, checked_sub);
jet_binop!(Mul, mul, checked_mul);
