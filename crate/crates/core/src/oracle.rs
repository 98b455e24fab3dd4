//! Brute-force reference values straight from the deformed holonomy.
//!
//! Normalize `γ` to `diag(e^{L/2}, e^{-L/2})` with axis `0 → ∞`. The lift
//! of `β` through the `i`-th intersection is the geodesic with endpoints
//! `a_i > 0 > b_i`, crossing the axis at height `e^{l_i}`. A complex
//! shear-bend by `z` about that lift is `R_i(z) = f_i^{-1} S(z) f_i` with
//! `f_i(w) = (w - a_i)/(w - b_i)` and `S(z) = diag(e^{z/2}, e^{-z/2})`, and
//! the deformed element is `R_1(z)⋯R_n(z)γ`. Its trace is expanded as a jet
//! in `z`, which yields every derivative without any of the closed-form
//! combinatorics.

use num_complex::Complex64;

use crate::closed_form::length_from_trace;
use crate::error::{Error, Result};
use crate::jets::{Jet, Scalar};
use crate::mat2::Mat2;
use crate::model::{IntersectionConfig, IntersectionPoint};

/// Smallest finite-difference step accepted.
pub const MIN_FD_STEP: f64 = 1e-6;

/// Endpoints of the lift of `β` through one intersection point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftGeometry {
    pub a: f64,
    pub b: f64,
}

impl LiftGeometry {
    /// Height at which the lift crosses the axis, `sqrt(-ab)`.
    pub fn height(&self) -> f64 {
        (-self.a * self.b).sqrt()
    }

    pub fn cos_angle(&self) -> f64 {
        -(self.a + self.b) / (self.a - self.b)
    }

    pub fn sin_angle(&self) -> f64 {
        2.0 * self.height() / (self.a - self.b)
    }

    /// `f(w) = (w - a)/(w - b)` scaled to unit determinant.
    pub fn frame(&self) -> Mat2<f64> {
        let s = (self.a - self.b).sqrt().recip();
        Mat2::new(s, -self.a * s, s, -self.b * s)
    }
}

/// Solves `sqrt(-ab) = e^l` and `-(a+b)/(a-b) = cos θ` for `a > 0 > b`.
///
/// Writing `a = e^l u`, `b = -e^l/u` the second relation becomes
/// `(1 - u²)/(1 + u²) = cos θ`, so `u = tan(θ/2)`.
pub fn lift_endpoints(offset: f64, angle: f64) -> Result<LiftGeometry> {
    if !(angle > 0.0 && angle < std::f64::consts::PI) {
        return Err(Error::DegenerateAngle { index: 0, angle });
    }
    let height = offset.exp();
    let u = (0.5 * angle).tan();
    Ok(LiftGeometry {
        a: height * u,
        b: -height / u,
    })
}

/// `R'(0) = f^{-1} S'(0) f` for the lift with endpoints `(a, b)`.
pub fn twist_generator_matrix(a: f64, b: f64) -> Mat2<f64> {
    let k = 0.5 / (a - b);
    Mat2::new(-(a + b) * k, 2.0 * a * b * k, -2.0 * k, (a + b) * k)
}

/// `A(u) = [[cos θ, -e^l sin θ], [-e^{-l} sin θ, -cos θ]]`.
pub fn a_matrix(point: &IntersectionPoint) -> Mat2<f64> {
    let (s, c) = point.angle.sin_cos();
    let e = point.offset.exp();
    Mat2::new(c, -e * s, -s / e, -c)
}

/// `diag(e^{L/2}, e^{-L/2})`.
pub fn gamma_matrix(total_length: f64) -> Mat2<f64> {
    let half = 0.5 * total_length;
    Mat2::new(half.exp(), 0.0, 0.0, (-half).exp())
}

/// `Tr(A(u_1)⋯A(u_r)γ)`, the matrix-side definition of `F_r`.
pub fn trace_a_product(points: &[IntersectionPoint], total_length: f64) -> f64 {
    points
        .iter()
        .map(a_matrix)
        .chain(std::iter::once(gamma_matrix(total_length)))
        .reduce(|acc, m| &acc * &m)
        .expect("at least gamma")
        .trace()
}

fn lift_matrix<S: Scalar>(m: &Mat2<f64>, order: usize) -> Mat2<Jet<S>> {
    m.clone().map(|x| Jet::constant(S::from_f64(x), order))
}

/// `(R_1(z), …, R_n(z))` and `γ`.
pub type HolonomyFactors<S> = (Vec<Mat2<Jet<S>>>, Mat2<Jet<S>>);

/// The factors `R_1(z), …, R_n(z)` and `γ`, expanded as jets in `z = w·t`
/// for a fixed direction `w` (`1` for twisting, `i` for bending).
pub fn holonomy_factors<S: Scalar>(
    config: &IntersectionConfig,
    order: usize,
    direction: S,
) -> Result<HolonomyFactors<S>> {
    let half_step = Jet::direction(direction * S::from_f64(0.5), order);
    let shear = Mat2::diagonal(half_step.exp(), (-&half_step).exp(), Jet::zero(order));
    let factors = config
        .points()
        .iter()
        .map(|p| {
            let frame = lift_endpoints(p.offset, p.angle)?.frame();
            let f = lift_matrix::<S>(&frame, order);
            let f_inv = lift_matrix::<S>(&frame.inverse_unimodular(), order);
            Ok(&(&f_inv * &shear) * &f)
        })
        .collect::<Result<Vec<_>>>()?;
    let gamma = lift_matrix(&gamma_matrix(config.total_length()), order);
    Ok((factors, gamma))
}

/// Multiplies `R_1⋯R_n γ` and takes the trace.
pub fn trace_of_product<S: Scalar>(factors: &[Mat2<Jet<S>>], gamma: &Mat2<Jet<S>>) -> Jet<S> {
    factors
        .iter()
        .fold(None::<Mat2<Jet<S>>>, |acc, m| match acc {
            None => Some(m.clone()),
            Some(p) => Some(&p * m),
        })
        .map_or_else(|| gamma.clone(), |p| &p * gamma)
        .trace()
}

/// Trace of the deformed holonomy as a jet in the direction `w`.
pub fn holonomy_jet_in_direction<S: Scalar>(
    config: &IntersectionConfig,
    order: usize,
    direction: S,
) -> Result<Jet<S>> {
    let (factors, gamma) = holonomy_factors(config, order, direction)?;
    Ok(trace_of_product(&factors, &gamma))
}

/// Trace of the twisted holonomy, `T(z)`, to order `order`.
pub fn holonomy_jet(config: &IntersectionConfig, order: usize) -> Result<Jet> {
    holonomy_jet_in_direction(config, order, 1.0)
}

pub fn oracle_trace_derivatives(config: &IntersectionConfig, k: usize) -> Result<Vec<f64>> {
    Ok(holonomy_jet(config, k)?.derivatives())
}

pub fn oracle_trace_derivative(config: &IntersectionConfig, k: usize) -> Result<f64> {
    holonomy_jet(config, k)?.derivative(k)
}

pub fn oracle_length_derivatives(config: &IntersectionConfig, k: usize) -> Result<Vec<f64>> {
    Ok(length_from_trace(&holonomy_jet(config, k)?)?.derivatives())
}

pub fn oracle_length_derivative(config: &IntersectionConfig, k: usize) -> Result<f64> {
    Ok(oracle_length_derivatives(config, k)?[k])
}

fn i_pow(k: usize) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `k`-th bend derivative of length, `i^k · L^(k)(0)`.
pub fn bend_derivative(config: &IntersectionConfig, k: usize) -> Result<Complex64> {
    Ok(i_pow(k) * oracle_length_derivative(config, k)?)
}

/// `k`-th bend derivative of length computed directly: expand the holonomy
/// along the imaginary direction with complex jets and invert the trace.
pub fn bend_derivative_direct(config: &IntersectionConfig, k: usize) -> Result<Complex64> {
    let trace = holonomy_jet_in_direction(config, k, Complex64::new(0.0, 1.0))?;
    let length = trace
        .scale(Complex64::new(0.5, 0.0))
        .acosh()?
        .scale(Complex64::new(2.0, 0.0));
    length.derivative(k)
}

/// `T(s)` at a real twist parameter `s`, with `R_i(s) = cosh(s/2) I + sinh(s/2) G_i`
/// and `G_i = f_i^{-1} diag(1, -1) f_i`.
pub fn trace_at_twist(config: &IntersectionConfig, s: f64) -> Result<f64> {
    let (ch, sh) = ((0.5 * s).cosh(), (0.5 * s).sinh());
    let mut product = Mat2::identity();
    for p in config.points() {
        let lift = lift_endpoints(p.offset, p.angle)?;
        let g = twist_generator_matrix(lift.a, lift.b);
        let r = Mat2::new(
            ch + 2.0 * sh * g.a,
            2.0 * sh * g.b,
            2.0 * sh * g.c,
            ch + 2.0 * sh * g.d,
        );
        product = &product * &r;
    }
    Ok((&product * &gamma_matrix(config.total_length())).trace())
}

/// Central-difference estimate of `T^(k)(0)` for `k ≤ 3`, with one level of
/// Richardson extrapolation between steps `h` and `h/2`.
pub fn finite_difference_check(config: &IntersectionConfig, k: usize, step: f64) -> Result<f64> {
    if k > 3 {
        return Err(Error::UnsupportedOrder(k));
    }
    if step.is_nan() || step < MIN_FD_STEP {
        return Err(Error::StepTooSmall {
            step,
            min: MIN_FD_STEP,
        });
    }
    let t = |s: f64| trace_at_twist(config, s);
    let central = |h: f64| -> Result<f64> {
        Ok(match k {
            0 => t(0.0)?,
            1 => (t(h)? - t(-h)?) / (2.0 * h),
            2 => (t(h)? - 2.0 * t(0.0)? + t(-h)?) / (h * h),
            _ => (t(2.0 * h)? - 2.0 * t(h)? + 2.0 * t(-h)? - t(-2.0 * h)?) / (2.0 * h * h * h),
        })
    };
    let coarse = central(step)?;
    let fine = central(0.5 * step)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::{eval_f, trace_derivative};
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn sample() -> IntersectionConfig {
        IntersectionConfig::from_arrays(2.0, &[0.0, 0.5, 1.2], &[0.6, 1.1, 2.0]).unwrap()
    }

    #[test]
    fn lift_examples() {
        let g = lift_endpoints(0.0, FRAC_PI_2).unwrap();
        assert_relative_eq!(g.a, 1.0, epsilon = 1e-15);
        assert_relative_eq!(g.b, -1.0, epsilon = 1e-15);
        let g = lift_endpoints(0.7, FRAC_PI_2).unwrap();
        assert_relative_eq!(g.a, 0.7f64.exp(), max_relative = 1e-15);
        assert_relative_eq!(g.b, -(0.7f64.exp()), max_relative = 1e-15);
        assert!(lift_endpoints(0.0, PI).is_err());
        assert!(lift_endpoints(0.0, 0.0).is_err());
    }

    #[test]
    fn lift_relations_hold() {
        for (l, t) in [(0.0, 0.3), (1.3, 2.9), (2.7, 1.2), (0.4, 0.01)] {
            let g = lift_endpoints(l, t).unwrap();
            assert!(g.a > 0.0 && g.b < 0.0);
            assert_relative_eq!(-g.a * g.b, (2.0 * l).exp(), max_relative = 1e-12);
            assert!((g.cos_angle() - t.cos()).abs() < 1e-12);
            assert!((g.sin_angle() - t.sin()).abs() < 1e-12);
            assert!((g.frame().det() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn generator_matches_half_a_matrix() {
        let g = twist_generator_matrix(1.0, -1.0);
        assert_eq!(g, Mat2::new(0.0, -0.5, -0.5, 0.0));
        for (l, t) in [(0.0, 0.3), (1.3, 2.9), (2.7, 1.2), (0.4, 0.5)] {
            let lift = lift_endpoints(l, t).unwrap();
            let g = twist_generator_matrix(lift.a, lift.b);
            let half_a = a_matrix(&IntersectionPoint::new(l, t)).scale(&0.5);
            assert!(g.max_abs_diff(&half_a) < 1e-13 * l.exp().max(1.0));
            assert!(g.trace().abs() < 1e-15);
        }
    }

    #[test]
    fn empty_product_is_gamma() {
        let c = IntersectionConfig::new(1.3, vec![]).unwrap();
        let jet = holonomy_jet(&c, 3).unwrap();
        assert_eq!(jet.coeffs(), &[2.0 * 0.65f64.cosh(), 0.0, 0.0, 0.0]);
    }

    #[test]
    fn low_order_coefficients() {
        let c = sample();
        let jet = holonomy_jet(&c, 2).unwrap();
        assert_relative_eq!(jet.value(), 2.0 * 1.0f64.cosh(), max_relative = 1e-12);
        let cos_sum: f64 = c.angles().iter().map(|t| t.cos()).sum();
        assert_relative_eq!(jet.derivative(1).unwrap(), 1.0f64.sinh() * cos_sum, max_relative = 1e-12);
        assert_relative_eq!(
            jet.derivative(2).unwrap(),
            trace_derivative(&c, 2),
            max_relative = 1e-12
        );
        let c = IntersectionConfig::from_arrays(2.0, &[0.0, 1.0], &[FRAC_PI_2; 2]).unwrap();
        assert!(oracle_trace_derivative(&c, 1).unwrap().abs() < 1e-14);
    }

    #[test]
    fn subset_sum_on_fixed_points() {
        let c = sample();
        let direct = trace_a_product(c.points(), 2.0);
        assert_relative_eq!(eval_f(c.points(), 2.0), direct, max_relative = 1e-12);
        assert_relative_eq!(trace_a_product(&[], 2.0), 2.0 * 1.0f64.cosh());
    }

    #[test]
    fn third_order_matches_closed_form() {
        let c = sample();
        assert_relative_eq!(
            oracle_trace_derivative(&c, 3).unwrap(),
            trace_derivative(&c, 3),
            max_relative = 1e-10
        );
    }

    #[test]
    fn bend_low_orders() {
        let c = sample();
        let cos_sum: f64 = c.angles().iter().map(|t| t.cos()).sum();
        let b1 = bend_derivative(&c, 1).unwrap();
        assert_eq!(b1.re, 0.0);
        assert_relative_eq!(b1.im, cos_sum, max_relative = 1e-12);
        let b2 = bend_derivative_direct(&c, 2).unwrap();
        assert!(b2.re < 0.0 && b2.im.abs() < 1e-12);
        let b4 = bend_derivative_direct(&c, 4).unwrap();
        assert!(b4.im.abs() < 1e-10);
        assert_relative_eq!(b4.re, oracle_length_derivative(&c, 4).unwrap(), max_relative = 1e-10);
    }

    #[test]
    fn finite_differences() {
        let c = sample();
        assert_relative_eq!(
            finite_difference_check(&c, 1, 1e-3).unwrap(),
            trace_derivative(&c, 1),
            max_relative = 1e-6
        );
        assert_relative_eq!(
            finite_difference_check(&c, 2, 1e-3).unwrap(),
            trace_derivative(&c, 2),
            max_relative = 1e-5
        );
        assert_relative_eq!(
            finite_difference_check(&c, 3, 1e-2).unwrap(),
            trace_derivative(&c, 3),
            max_relative = 1e-4
        );
        assert!(matches!(
            finite_difference_check(&c, 1, 1e-7),
            Err(Error::StepTooSmall { .. })
        ));
        assert_eq!(
            finite_difference_check(&c, 4, 1e-2),
            Err(Error::UnsupportedOrder(4))
        );
    }
}
