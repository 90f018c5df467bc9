//! Numerical Laplace transform and two independent inversion algorithms.
//!
//! Every central object downstream (inverse-subordinator kernels, the
//! time-changed density transform) is defined through Laplace transforms, so
//! a single inversion method would have no error control. The fixed-Talbot
//! contour handles transforms with a globally evaluable closed form; the
//! Gaver-Stehfest ladder only touches the positive real axis and is the
//! cross-check channel (and the only valid route for transforms that are
//! computed by quadratures convergent on a right half-plane).

use num_complex::Complex64;

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::quad::{self, Tolerance};

/// A transform value together with its accuracy estimate.
#[derive(Clone, Copy, Debug)]
pub struct Inversion {
    pub value: f64,
    pub abs_error: f64,
}

/// Forward transform: integral of e^{-lambda t} f(t) over (0, inf).
///
/// `growth` declares f(t) = O(e^{growth * t}); the transform is evaluated
/// only for Re(lambda) > growth. Returns the value and an error estimate.
pub fn forward_laplace(
    f: impl Fn(f64) -> f64,
    lambda: Complex64,
    growth: f64,
    tol: Tolerance,
) -> Result<quad::Quad<Complex64>> {
    let margin = lambda.re - growth;
    if margin <= 0.0 {
        return Err(Error::domain(format!(
            "forward transform needs Re(lambda) = {} > growth hint {}",
            lambda.re, growth
        )));
    }
    let scale = 3.0 / margin;
    quad::integrate_to_inf(|t| (-lambda * t).exp() * f(t), 0.0, scale, tol)
}

fn talbot_once(f_hat: &impl Fn(Complex64) -> Complex64, t: f64, n: usize) -> f64 {
    // Fixed-Talbot contour (Abate-Valko). Nodes delta_k/t, k = 0..n-1.
    let mut sum = 0.0;
    for k in 0..n {
        let (delta, gamma) = if k == 0 {
            let d = Complex64::new(2.0 * n as f64 / 5.0, 0.0);
            (d, 0.5 * d.exp())
        } else {
            let theta = k as f64 * std::f64::consts::PI / n as f64;
            let cot = theta.cos() / theta.sin();
            let d = Complex64::new(
                2.0 * k as f64 * std::f64::consts::PI / 5.0 * cot,
                2.0 * k as f64 * std::f64::consts::PI / 5.0,
            );
            let g = (Complex64::new(1.0, 0.0)
                + Complex64::new(0.0, theta * (1.0 + cot * cot) - cot))
                * d.exp();
            (d, g)
        };
        sum += (gamma * f_hat(delta / t)).re;
    }
    2.0 / (5.0 * t) * sum
}

/// Fixed-Talbot inversion with a two-N agreement estimate.
///
/// The value uses `nodes` contour points (default call sites pass 32); the
/// estimate compares against `nodes / 2`. The pair runs upward from below
/// because in f64 the e^{delta} contour weights start amplifying roundoff
/// past ~40 nodes, so "double N" would step over the accuracy peak.
///
/// Requires F analytic off the negative real axis and evaluable on the
/// whole contour (closed forms qualify; half-plane quadratures do not --
/// route those through [`invert_gaver_stehfest`]).
pub fn invert_talbot(
    f_hat: impl Fn(Complex64) -> Complex64,
    t: f64,
    nodes: usize,
    tol: Tolerance,
) -> Result<Inversion> {
    if t <= 0.0 {
        return Err(Error::domain("Talbot inversion needs t > 0"));
    }
    let n = nodes.max(16);
    let coarse = talbot_once(&f_hat, t, n / 2);
    let fine = talbot_once(&f_hat, t, n);
    let est = (fine - coarse).abs();
    if est > 1e3 * tol.bound(fine.abs()).max(1e-13) {
        return Err(Error::Oscillation {
            what: "Talbot inversion",
            estimate: est,
        });
    }
    Ok(Inversion {
        value: fine,
        abs_error: est,
    })
}

/// Stehfest weights in double-double arithmetic, exact combinatorics via
/// u128 (valid through order 24: all factorial products stay below 2^107).
fn stehfest_weights(m: usize) -> Vec<Dd> {
    let fact = |k: usize| -> u128 { (1..=k as u128).product::<u128>().max(1) };
    let half = m / 2;
    let mut w = vec![Dd::ZERO; m + 1];
    for (k, slot) in w.iter_mut().enumerate().skip(1) {
        let mut sum = Dd::ZERO;
        for j in k.div_ceil(2)..=k.min(half) {
            let num = (j as u128).pow(half as u32) * fact(2 * j);
            let den =
                fact(half - j) * fact(j) * fact(j - 1) * fact(k - j) * fact(2 * j - k);
            sum = sum.add(Dd::from_u128(num).div(Dd::from_u128(den)));
        }
        *slot = if (half + k) % 2 == 0 { sum } else { sum.neg() };
    }
    w
}

fn gaver_stehfest_once(f_hat: &impl Fn(f64) -> f64, t: f64, m: usize) -> f64 {
    let w = stehfest_weights(m);
    let ln2t = std::f64::consts::LN_2 / t;
    let mut sum = Dd::ZERO;
    for (k, wk) in w.iter().enumerate().skip(1) {
        sum = sum.add(wk.mul(Dd::from_f64(f_hat(k as f64 * ln2t))));
    }
    sum.mul(Dd::LN2).mul_f64(1.0 / t).to_f64()
}

fn gaver_stehfest_once_dd(f_hat: &impl Fn(Dd) -> Dd, t: f64, m: usize) -> f64 {
    let w = stehfest_weights(m);
    let ln2t = Dd::LN2.mul_f64(1.0 / t);
    let mut sum = Dd::ZERO;
    for (k, wk) in w.iter().enumerate().skip(1) {
        sum = sum.add(wk.mul(f_hat(ln2t.mul_f64(k as f64))));
    }
    sum.mul(ln2t).to_f64()
}

fn check_gs_order(order: usize) -> Result<usize> {
    if !(4..=24).contains(&order) || order % 2 != 0 {
        return Err(Error::domain(
            "Gaver-Stehfest order must be even, in [4, 24]",
        ));
    }
    Ok(order)
}

fn gs_result(full: f64, reduced: f64) -> Result<Inversion> {
    let est = (full - reduced).abs();
    if est > 1e-2 * full.abs().max(1e-8) {
        return Err(Error::Precision(format!(
            "Gaver-Stehfest digit estimate collapsed: order step changed the value by {est:.3e}"
        )));
    }
    Ok(Inversion {
        value: full,
        abs_error: est,
    })
}

/// Gaver-Stehfest inversion of even order `order` (default call sites use
/// 14). Only evaluates F at real lambda > 0; the alternating ladder is
/// summed in double-double so the weights never eat into the f64 budget of
/// F itself. The error estimate compares orders `order` and `order - 2`.
pub fn invert_gaver_stehfest(
    f_hat: impl Fn(f64) -> f64,
    t: f64,
    order: usize,
) -> Result<Inversion> {
    if t <= 0.0 {
        return Err(Error::domain("Gaver-Stehfest inversion needs t > 0"));
    }
    let order = check_gs_order(order)?;
    let full = gaver_stehfest_once(&f_hat, t, order);
    let reduced = gaver_stehfest_once(&f_hat, t, order - 2);
    gs_result(full, reduced)
}

/// Gaver-Stehfest with the transform evaluated in double-double; for
/// closed-form transforms this pushes the attainable accuracy well past the
/// f64 noise floor (orders up to 24 are meaningful).
pub fn invert_gaver_stehfest_dd(
    f_hat: impl Fn(Dd) -> Dd,
    t: f64,
    order: usize,
) -> Result<Inversion> {
    if t <= 0.0 {
        return Err(Error::domain("Gaver-Stehfest inversion needs t > 0"));
    }
    let order = check_gs_order(order)?;
    let full = gaver_stehfest_once_dd(&f_hat, t, order);
    let reduced = gaver_stehfest_once_dd(&f_hat, t, order - 2);
    gs_result(full, reduced)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const TOL: Tolerance = Tolerance {
        abs: 1e-10,
        rel: 1e-8,
    };

    #[test]
    fn forward_exponential() {
        // L[e^{-t}](1) = 1/2
        let q = forward_laplace(|t| (-t).exp(), Complex64::new(1.0, 0.0), -1.0, TOL).unwrap();
        assert_relative_eq!(q.value.re, 0.5, max_relative = 1e-9);
        assert!(q.value.im.abs() < 1e-12);
    }

    #[test]
    fn forward_constant() {
        // L[1](2) = 1/2
        let q = forward_laplace(|_| 1.0, Complex64::new(2.0, 0.0), 0.0, TOL).unwrap();
        assert_relative_eq!(q.value.re, 0.5, max_relative = 1e-9);
    }

    #[test]
    fn forward_rejects_wrong_halfplane() {
        assert!(forward_laplace(|_| 1.0, Complex64::new(0.0, 1.0), 0.0, TOL).is_err());
    }

    #[test]
    fn talbot_ramp() {
        // L^{-1}[1/lambda^2](3) = 3
        let inv = invert_talbot(|s| 1.0 / (s * s), 3.0, 32, TOL).unwrap();
        assert_relative_eq!(inv.value, 3.0, max_relative = 1e-10);
    }

    #[test]
    fn talbot_exponential() {
        let inv = invert_talbot(|s| 1.0 / (s + 1.0), 1.0, 32, TOL).unwrap();
        assert_relative_eq!(inv.value, 0.367_879_441_171_442_321_6, max_relative = 1e-9);
    }

    #[test]
    fn talbot_half_stable_kernel() {
        // F = (sqrt(lambda)/lambda) e^{-y sqrt(lambda)}, inverse is
        // e^{-y^2/(4t)} / sqrt(pi t); frozen value at t = 1, y = 1.
        let y = 1.0;
        let f = move |s: Complex64| s.powf(-0.5) * (-y * s.powf(0.5)).exp();
        let inv = invert_talbot(f, 1.0, 32, TOL).unwrap();
        assert_relative_eq!(inv.value, 0.439_391_289_467_722_397_0, epsilon = 1e-8);
    }

    #[test]
    fn gaver_stehfest_matches_closed_forms_in_dd() {
        // F evaluated in double-double: the three reference transforms all
        // land within 1e-6 at order 18.
        let cases: [(Box<dyn Fn(Dd) -> Dd>, f64, f64); 3] = [
            (
                Box::new(|s: Dd| s.add(Dd::ONE).recip()),
                1.0,
                0.367_879_441_171_442_321_6,
            ),
            (Box::new(|s: Dd| s.mul(s).recip()), 3.0, 3.0),
            (
                Box::new(|s: Dd| {
                    let r = s.sqrt();
                    r.recip().mul(r.neg().exp())
                }),
                1.0,
                0.439_391_289_467_722_397_0,
            ),
        ];
        for (f, t, expect) in cases {
            let inv = invert_gaver_stehfest_dd(&f, t, 18).unwrap();
            assert!(
                (inv.value - expect).abs() < 1e-6,
                "value {} expect {expect}",
                inv.value
            );
        }
    }

    #[test]
    fn gaver_stehfest_f64_transforms() {
        // plain f64 transform evaluations at the default order 14
        let inv = invert_gaver_stehfest(|s| 1.0 / (s + 1.0), 1.0, 14).unwrap();
        assert_relative_eq!(inv.value, 0.367_879_441_171_442_321_6, epsilon = 2e-6);
        let inv = invert_gaver_stehfest(|s| 1.0 / (s * s), 3.0, 14).unwrap();
        assert_relative_eq!(inv.value, 3.0, max_relative = 1e-6);
    }

    #[test]
    fn talbot_and_gaver_stehfest_agree_on_cm_transforms() {
        // cross-method agreement on completely monotone targets
        let cases: [(Box<dyn Fn(Complex64) -> Complex64>, Box<dyn Fn(Dd) -> Dd>, f64); 3] = [
            (
                Box::new(|s: Complex64| 1.0 / (s + 1.0)),
                Box::new(|s: Dd| s.add(Dd::ONE).recip()),
                1.0,
            ),
            (
                Box::new(|s: Complex64| 1.0 / (s * s)),
                Box::new(|s: Dd| s.mul(s).recip()),
                3.0,
            ),
            (
                Box::new(|s: Complex64| s.powf(-0.5) * (-s.powf(0.5)).exp()),
                Box::new(|s: Dd| {
                    let r = s.sqrt();
                    r.recip().mul(r.neg().exp())
                }),
                1.0,
            ),
        ];
        for (ft, fg, t) in cases {
            let a = invert_talbot(&ft, t, 32, TOL).unwrap();
            let b = invert_gaver_stehfest_dd(&fg, t, 18).unwrap();
            assert!(
                (a.value - b.value).abs() < 1e-6 * a.value.abs().max(1.0),
                "talbot {} gs {}",
                a.value,
                b.value
            );
        }
    }

    #[test]
    fn roundtrip_through_forward_transform() {
        // invert(forward(f)) = f for decaying test functions, within 1e-6.
        for f in [
            (|t: f64| (-t).exp()) as fn(f64) -> f64,
            (|t: f64| t * (-t).exp()) as fn(f64) -> f64,
        ] {
            for t in [0.5, 1.0, 5.0] {
                let f_hat = |s: f64| {
                    forward_laplace(f, Complex64::new(s, 0.0), -0.5, TOL)
                        .unwrap()
                        .value
                        .re
                };
                let inv = invert_gaver_stehfest(f_hat, t, 14).unwrap();
                assert_relative_eq!(inv.value, f(t), max_relative = 2e-6, epsilon = 1e-7);
            }
        }
    }

    #[test]
    fn gs_order_gates() {
        assert!(invert_gaver_stehfest(|s| 1.0 / s, 1.0, 13).is_err());
        assert!(invert_gaver_stehfest(|s| 1.0 / s, 1.0, 26).is_err());
        assert!(invert_gaver_stehfest(|s| 1.0 / s, 0.0, 14).is_err());
        assert!(invert_talbot(|s| 1.0 / s, -1.0, 32, TOL).is_err());
    }

    #[test]
    fn stehfest_weights_cancel() {
        // sum_k w_k = 0: constants transform to 1/lambda and the ladder
        // reproduces them exactly through massive cancellation.
        let w = stehfest_weights(14);
        let s = w.iter().fold(Dd::ZERO, |acc, x| acc.add(*x));
        let mag: f64 = w.iter().map(|x| x.to_f64().abs()).sum();
        assert!(s.to_f64().abs() < 1e-12 * mag);
    }
}
