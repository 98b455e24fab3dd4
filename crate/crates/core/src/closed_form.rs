//! Closed-form twist derivatives of the trace and length functions.
//!
//! With `A(u) = [[cos θ, -e^l sin θ], [-e^{-l} sin θ, -cos θ]]` for
//! `u = l + iθ` and `γ = diag(e^{L/2}, e^{-L/2})`,
//!
//! ```text
//! F_r(u_1..u_r, L) = Tr(A(u_1)⋯A(u_r)γ)
//!                  = Σ_{I ⊆ {1..r}, |I| even} (-1)^{s(I)} 2 sin θ_I cos θ_Î H(L/2 - L_I)
//! ```
//!
//! where `H = cosh` for even `r` and `sinh` for odd `r`. Summing over all
//! size-`r` choices of intersection points gives `G_r`, and
//!
//! ```text
//! T^(k)(0) = 2^{-k} Σ_{r ≡ k (2)} B_{n,k,r} G_r.
//! ```
//!
//! Length derivatives follow from `L(z) = 2 acosh(T(z)/2)` applied to the
//! trace jet.

use num_traits::ToPrimitive;

use crate::combinatorics::{coefficient_b, even_subsets, parity, subsets_of_size, IndexSubset};
use crate::error::Result;
use crate::jets::Jet;
use crate::model::{IntersectionConfig, IntersectionPoint};

/// One summand of `F_r`.
#[derive(Debug, Clone, PartialEq)]
pub struct FTerm {
    pub subset: IndexSubset,
    /// `(-1)^{s(I)}`.
    pub sign: f64,
    /// `Π_{i∈I} sin θ_i`.
    pub sin_product: f64,
    /// `Π_{i∉I} cos θ_i`.
    pub cos_product: f64,
    /// `2·cosh(L/2 - L_I)` or `2·sinh(L/2 - L_I)`.
    pub hyperbolic: f64,
    pub total: f64,
}

/// The even-subset expansion of `F_r` for `r = points.len()`, term by term.
///
/// No geometric validation is done here: the identity is purely algebraic
/// and holds for any finite offsets and angles.
pub fn f_terms(points: &[IntersectionPoint], total_length: f64) -> Vec<FTerm> {
    let r = points.len();
    let offsets: Vec<f64> = points.iter().map(|p| p.offset).collect();
    let half = 0.5 * total_length;
    even_subsets(r)
        .map(|subset| {
            let sign = if subset.signature() % 2 == 0 { 1.0 } else { -1.0 };
            let mut sin_product = 1.0;
            let mut cos_product = 1.0;
            for (i, p) in points.iter().enumerate() {
                if subset.contains(i) {
                    sin_product *= p.angle.sin();
                } else {
                    cos_product *= p.angle.cos();
                }
            }
            let shift = subset
                .alternating_length(&offsets)
                .expect("subset positions index the points");
            let hyperbolic = if r.is_multiple_of(2) {
                2.0 * (half - shift).cosh()
            } else {
                2.0 * (half - shift).sinh()
            };
            FTerm {
                total: sign * sin_product * cos_product * hyperbolic,
                subset,
                sign,
                sin_product,
                cos_product,
                hyperbolic,
            }
        })
        .collect()
}

/// `F_r` evaluated at the given points (`r = points.len()`).
pub fn eval_f(points: &[IntersectionPoint], total_length: f64) -> f64 {
    f_terms(points, total_length).iter().map(|t| t.total).sum()
}

/// `G_r`: sum of `F_r` over every size-`r` choice of intersection points.
pub fn eval_g(r: usize, config: &IntersectionConfig) -> Result<f64> {
    let points = config.points();
    let mut chosen = Vec::with_capacity(r);
    let mut total = 0.0;
    for subset in subsets_of_size(config.n(), r)? {
        chosen.clear();
        chosen.extend(subset.indices().iter().map(|&i| points[i]));
        total += eval_f(&chosen, config.total_length());
    }
    Ok(total)
}

/// `T^(k)(0)` from the closed-form expansion.
pub fn trace_derivative(config: &IntersectionConfig, k: usize) -> f64 {
    let n = config.n();
    let mut total = 0.0;
    for r in (parity(k as u64) as usize..=k.min(n)).step_by(2) {
        let b = coefficient_b(n, k as u64, r)
            .expect("r <= min(k, n)")
            .to_f64()
            .expect("finite coefficient");
        if b != 0.0 {
            total += b * eval_g(r, config).expect("r <= n");
        }
    }
    total / 2f64.powi(k as i32)
}

/// `T(0), T'(0), …, T^(k)(0)`.
pub fn trace_derivatives(config: &IntersectionConfig, k: usize) -> Vec<f64> {
    (0..=k).map(|m| trace_derivative(config, m)).collect()
}

/// Length derivatives `L(0), …, L^(k)(0)` from a trace jet, via
/// `L = 2·acosh(T/2)`.
pub fn length_from_trace(trace: &Jet) -> Result<Jet> {
    Ok(trace.scale(0.5).acosh()?.scale(2.0))
}

/// `L(0), L'(0), …, L^(k)(0)` from the closed-form trace derivatives.
pub fn length_derivatives(config: &IntersectionConfig, k: usize) -> Result<Vec<f64>> {
    let trace = Jet::from_derivatives(&trace_derivatives(config, k));
    Ok(length_from_trace(&trace)?.derivatives())
}

/// `L^(k)(0)` from the closed-form trace derivatives.
pub fn length_derivative(config: &IntersectionConfig, k: usize) -> Result<f64> {
    Ok(length_derivatives(config, k)?[k])
}

/// Second twist derivative of length as the classical double sum over
/// ordered pairs of intersection points:
/// `Σ_{p,q} (e^{l_pq} + e^{l_qp}) / (2(e^L - 1)) · sin θ_p sin θ_q`,
/// with `l_pp = 0` and `l_qp = L - l_pq`.
pub fn wolpert_second_literal(config: &IntersectionConfig) -> f64 {
    let total_length = config.total_length();
    let points = config.points();
    let denom = 2.0 * total_length.exp_m1();
    let mut sum = 0.0;
    for (p, x) in points.iter().enumerate() {
        for (q, y) in points.iter().enumerate() {
            let l_pq = config.distance(p, q);
            let l_qp = total_length - l_pq;
            sum += (l_pq.exp() + l_qp.exp()) / denom * x.angle.sin() * y.angle.sin();
        }
    }
    sum
}

/// The worked third-derivative formula written out by hand:
///
/// ```text
/// T'''(0) = 1/8 [ (6n-4) sinh(L/2) Σ cos θ_i
///               + 12 Σ_{i<j<k} ( sinh(L/2)         cos θ_i cos θ_j cos θ_k
///                              + sinh(L/2 - l_ij) sin θ_i sin θ_j cos θ_k
///                              - sinh(L/2 - l_ik) sin θ_i cos θ_j sin θ_k
///                              + sinh(L/2 - l_jk) cos θ_i sin θ_j sin θ_k ) ]
/// ```
pub fn third_derivative_literal(config: &IntersectionConfig) -> f64 {
    let n = config.n();
    let half = 0.5 * config.total_length();
    let (s, c): (Vec<f64>, Vec<f64>) = config
        .points()
        .iter()
        .map(|p| (p.angle.sin(), p.angle.cos()))
        .unzip();
    let linear = (6.0 * n as f64 - 4.0) * half.sinh() * c.iter().sum::<f64>();
    let mut triple = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let l_ij = config.distance(i, j);
                let l_ik = config.distance(i, k);
                let l_jk = config.distance(j, k);
                triple += half.sinh() * c[i] * c[j] * c[k]
                    + (half - l_ij).sinh() * s[i] * s[j] * c[k]
                    - (half - l_ik).sinh() * s[i] * c[j] * s[k]
                    + (half - l_jk).sinh() * c[i] * s[j] * s[k];
            }
        }
    }
    (linear + 12.0 * triple) / 8.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

    fn pts(offsets: &[f64], angles: &[f64]) -> Vec<IntersectionPoint> {
        offsets
            .iter()
            .zip(angles)
            .map(|(&l, &t)| IntersectionPoint::new(l, t))
            .collect()
    }

    #[test]
    fn low_order_f_closed_forms() {
        let big_l = 2.3;
        assert_relative_eq!(eval_f(&[], big_l), 2.0 * (big_l / 2.0).cosh());
        let t = 0.8;
        assert_relative_eq!(
            eval_f(&pts(&[0.4], &[t]), big_l),
            2.0 * (big_l / 2.0).sinh() * t.cos(),
            max_relative = 1e-15
        );
        let (t1, t2, l12): (f64, f64, f64) = (0.7, 2.1, 0.9);
        let expected = 2.0
            * (t1.cos() * t2.cos() * (big_l / 2.0).cosh()
                + t1.sin() * t2.sin() * (big_l / 2.0 - l12).cosh());
        assert_relative_eq!(
            eval_f(&pts(&[0.0, l12], &[t1, t2]), big_l),
            expected,
            max_relative = 1e-14
        );
    }

    #[test]
    fn f_term_breakdown_is_consistent() {
        let p = pts(&[0.0, 0.5, 1.2, 1.9], &[0.6, 1.1, 2.0, 2.9]);
        let terms = f_terms(&p, 2.5);
        assert_eq!(terms.len(), 8);
        for t in &terms {
            assert_eq!(t.total, t.sign * t.sin_product * t.cos_product * t.hyperbolic);
            assert_eq!(t.subset.len() % 2, 0);
        }
    }

    #[test]
    fn g_low_orders() {
        let c = IntersectionConfig::from_arrays(3.0, &[0.0, 0.8, 2.0], &[0.5, 1.5, 2.5]).unwrap();
        let half: f64 = 1.5;
        assert_relative_eq!(eval_g(0, &c).unwrap(), 2.0 * half.cosh());
        let cos_sum: f64 = c.angles().iter().map(|t| t.cos()).sum();
        assert_relative_eq!(
            eval_g(1, &c).unwrap(),
            2.0 * half.sinh() * cos_sum,
            max_relative = 1e-14
        );
        assert!(eval_g(4, &c).is_err());
    }

    #[test]
    fn first_two_trace_derivatives() {
        let c = IntersectionConfig::from_arrays(2.0, &[0.0, 0.7], &[FRAC_PI_3, FRAC_PI_4]).unwrap();
        let half: f64 = 1.0;
        let cos_sum: f64 = c.angles().iter().map(|t| t.cos()).sum();
        assert_relative_eq!(
            trace_derivative(&c, 1),
            half.sinh() * cos_sum,
            max_relative = 1e-14
        );
        // T''(0) = Σ_{i<j}(cc cosh(L/2) + ss cosh(L/2 - l_ij)) + n cosh(L/2)/2
        let (t1, t2): (f64, f64) = (FRAC_PI_3, FRAC_PI_4);
        let expected = t1.cos() * t2.cos() * half.cosh()
            + t1.sin() * t2.sin() * (half - 0.7).cosh()
            + 2.0 * half.cosh() / 2.0;
        assert_relative_eq!(trace_derivative(&c, 2), expected, max_relative = 1e-14);
        assert_eq!(trace_derivative(&c, 0), 2.0 * half.cosh());
    }

    #[test]
    fn no_intersections_means_constant_trace() {
        let c = IntersectionConfig::new(1.7, vec![]).unwrap();
        assert_eq!(trace_derivative(&c, 0), 2.0 * 0.85f64.cosh());
        for k in 1..6 {
            assert_eq!(trace_derivative(&c, k), 0.0);
            assert_eq!(length_derivative(&c, k).unwrap(), 0.0);
        }
        assert_eq!(third_derivative_literal(&c), 0.0);
    }

    #[test]
    fn first_length_derivative_is_cosine_sum() {
        let c = IntersectionConfig::from_arrays(2.0, &[0.0, 0.7], &[1.05, 0.8]).unwrap();
        assert_relative_eq!(
            length_derivative(&c, 1).unwrap(),
            1.05f64.cos() + 0.8f64.cos(),
            max_relative = 1e-13
        );
    }

    #[test]
    fn single_perpendicular_crossing_second_derivative() {
        let big_l: f64 = 1.6;
        let c = IntersectionConfig::from_arrays(big_l, &[0.0], &[FRAC_PI_2]).unwrap();
        let expected = (1.0 + big_l.exp()) / (2.0 * (big_l.exp() - 1.0));
        assert_relative_eq!(wolpert_second_literal(&c), expected, max_relative = 1e-15);
        assert_relative_eq!(
            length_derivative(&c, 2).unwrap(),
            expected,
            max_relative = 1e-12
        );
    }

    #[test]
    fn third_derivative_perpendicular_equal_spacing() {
        // θ ↦ π - θ fixes this config, so odd orders vanish; every F_3 term
        // carries one cos factor.
        let big_l = 2.7;
        let third = big_l / 3.0;
        let c = IntersectionConfig::from_arrays(big_l, &[0.0, third, 2.0 * third], &[FRAC_PI_2; 3])
            .unwrap();
        assert!(third_derivative_literal(&c).abs() < 1e-14);
        assert!(trace_derivative(&c, 3).abs() < 1e-14);
        // n = 2 has no triple terms
        let c = IntersectionConfig::from_arrays(big_l, &[0.0, 1.1], &[0.4, 2.2]).unwrap();
        let expected = (6.0 * 2.0 - 4.0) / 8.0 * (big_l / 2.0).sinh() * (0.4f64.cos() + 2.2f64.cos());
        assert_relative_eq!(third_derivative_literal(&c), expected, max_relative = 1e-14);
        assert_relative_eq!(trace_derivative(&c, 3), expected, max_relative = 1e-13);
    }

    #[test]
    fn reflection_flips_odd_orders() {
        let c = IntersectionConfig::from_arrays(2.2, &[0.0, 0.4, 1.5], &[0.3, 1.9, 2.4]).unwrap();
        let r = c.reflected().unwrap();
        for k in 0..6 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert_relative_eq!(
                trace_derivative(&r, k),
                sign * trace_derivative(&c, k),
                max_relative = 1e-12
            );
        }
    }
}
