//! Floating-point theta functions and Dedekind eta.
//!
//! Arguments are first reduced into the strip `|Im v| ≤ Im τ / 2`,
//! `|Re v| ≤ 1/2` using the quasi-periodicity laws, and the accumulated
//! multiplier is applied afterwards. Without the reduction, factors such as
//! `e^{-2πiv}` overflow long before the product converges.

use num_complex::Complex;
use num_traits::{One, Zero};

use super::ThetaKind;
use crate::error::{Error, Result};
use crate::scalar::{c, exp_i_pi, Real};

/// Number of product factors used at `tau`: `|q|^K < 10^{-18}` in double
/// precision, `|q|^K < ε_F / 100` for narrower types.
pub fn product_terms<F: Real>(tau: Complex<F>) -> usize {
    let eps = F::epsilon().as_f64();
    let digits = if eps < 1e-12 {
        18.0 * std::f64::consts::LN_10
    } else {
        (100.0 / eps).ln()
    };
    let im = tau.im.as_f64();
    (digits / (2.0 * std::f64::consts::PI * im)).ceil() as usize + 2
}

/// Size of the neglected tail of the truncated products, `|q|^K`.
pub fn truncation_bound<F: Real>(tau: Complex<F>) -> f64 {
    let k = product_terms(tau) as f64;
    (-2.0 * std::f64::consts::PI * tau.im.as_f64() * k).exp()
}

fn check_tau<F: Real>(tau: Complex<F>) -> Result<()> {
    if !(tau.im > F::zero()) {
        return Err(Error::Domain(format!(
            "Im tau must be positive, got {}",
            tau.im.as_f64()
        )));
    }
    Ok(())
}

/// Value and first `v`-derivative carried together.
#[derive(Clone, Copy, Debug)]
struct Dual<F> {
    val: Complex<F>,
    der: Complex<F>,
}

impl<F: Real> Dual<F> {
    fn constant(val: Complex<F>) -> Self {
        Dual {
            val,
            der: Complex::zero(),
        }
    }

    fn mul(self, o: Dual<F>) -> Self {
        Dual {
            val: self.val * o.val,
            der: self.der * o.val + self.val * o.der,
        }
    }
}

/// Sign picked up by `v -> v + 1` and `v -> v + τ` (the latter besides
/// `q^{-1/2} e^{-2πiv}`).
fn period_signs(kind: ThetaKind) -> (bool, bool) {
    match kind {
        ThetaKind::Theta => (true, true),
        ThetaKind::Theta1 => (true, false),
        ThetaKind::Theta2 => (false, true),
        ThetaKind::Theta3 => (false, false),
    }
}

/// Raw product at an already reduced argument.
fn product<F: Real>(kind: ThetaKind, w: Complex<F>, tau: Complex<F>) -> Dual<F> {
    let two_pi_i = Complex::new(F::zero(), F::from_f64(2.0) * F::PI());
    let x = (two_pi_i * w).exp();
    let x_inv = Complex::<F>::one() / x;
    let q = (two_pi_i * tau).exp();
    let half_q = exp_i_pi(tau);
    let k_max = product_terms(tau);

    // Leading factor and the (exponent offset, sign) of the x and 1/x factors:
    // factor_k = (1 + sign q^{k + off} x^{±1}).
    let (lead, x_off, xinv_off, sign): (Dual<F>, u8, u8, F) = match kind {
        ThetaKind::Theta => {
            let p = Complex::new(F::zero(), F::one()) * exp_i_pi(tau * c(0.25)) * exp_i_pi(-w);
            (
                Dual {
                    val: p,
                    der: p * Complex::new(F::zero(), -F::PI()),
                },
                // (1 - q^{k-1} x)(1 - q^k / x)
                0,
                1,
                -F::one(),
            )
        }
        ThetaKind::Theta1 => {
            let p = exp_i_pi(tau * c(0.25)) * exp_i_pi(w);
            (
                Dual {
                    val: p,
                    der: p * Complex::new(F::zero(), F::PI()),
                },
                // (1 + q^k x)(1 + q^{k-1} / x)
                1,
                0,
                F::one(),
            )
        }
        ThetaKind::Theta2 => (Dual::constant(Complex::one()), 2, 2, -F::one()),
        ThetaKind::Theta3 => (Dual::constant(Complex::one()), 2, 2, F::one()),
    };

    // off: 0 => q^{k-1}, 1 => q^k, 2 => q^{k-1/2}
    let start = |off: u8| match off {
        0 => Complex::<F>::one(),
        1 => q,
        _ => half_q,
    };
    let mut qx = start(x_off);
    let mut qxi = start(xinv_off);
    let mut qk = q;
    let mut acc = lead;
    for _ in 0..k_max {
        let a = qx * x;
        let b = qxi * x_inv;
        let f_x = Dual {
            val: Complex::<F>::one() + a * sign,
            der: a * two_pi_i * sign,
        };
        let f_xi = Dual {
            val: Complex::<F>::one() + b * sign,
            der: -(b * two_pi_i * sign),
        };
        acc = acc
            .mul(Dual::constant(Complex::<F>::one() - qk))
            .mul(f_x)
            .mul(f_xi);
        qx = qx * q;
        qxi = qxi * q;
        qk = qk * q;
    }
    acc
}

/// `θ_kind(v)` and `θ_kind'(v)` with quasi-periodic argument reduction.
pub fn theta_with_deriv<F: Real>(
    kind: ThetaKind,
    v: Complex<F>,
    tau: Complex<F>,
) -> Result<(Complex<F>, Complex<F>)> {
    check_tau(tau)?;
    let n = (v.im / tau.im).round();
    let w1 = v - tau * n;
    let l = w1.re.round();
    let w = w1 - c(l.as_f64());
    let n_i = n.as_f64() as i64;
    let l_i = l.as_f64() as i64;

    let (sign_1, sign_tau) = period_signs(kind);
    let mut negate = false;
    if sign_1 && l_i.rem_euclid(2) == 1 {
        negate = !negate;
    }
    if sign_tau && n_i.rem_euclid(2) == 1 {
        negate = !negate;
    }
    // θ(w + l + nτ) = ± q^{-n²/2} e^{-2πinw} θ(w)
    let nf = c::<F>(n.as_f64());
    let log_mult = Complex::new(F::zero(), -F::PI()) * (tau * nf * nf + w * nf * c(2.0));
    let mut mult = log_mult.exp();
    if negate {
        mult = -mult;
    }
    let p = product(kind, w, tau);
    let dlog_mult = Complex::new(F::zero(), -F::from_f64(2.0) * F::PI()) * nf;
    Ok((mult * p.val, mult * (p.der + dlog_mult * p.val)))
}

pub fn theta_num<F: Real>(kind: ThetaKind, v: Complex<F>, tau: Complex<F>) -> Result<Complex<F>> {
    theta_with_deriv(kind, v, tau).map(|(t, _)| t)
}

/// `d/dv θ_kind(v, τ)`.
pub fn theta_deriv_num<F: Real>(
    kind: ThetaKind,
    v: Complex<F>,
    tau: Complex<F>,
) -> Result<Complex<F>> {
    theta_with_deriv(kind, v, tau).map(|(_, d)| d)
}

/// Dedekind eta `q^{1/24} ∏ (1 - q^k)`.
pub fn eta_num<F: Real>(tau: Complex<F>) -> Result<Complex<F>> {
    check_tau(tau)?;
    let q = (Complex::new(F::zero(), F::from_f64(2.0) * F::PI()) * tau).exp();
    let mut acc = exp_i_pi(tau * c(1.0 / 12.0));
    let mut qk = q;
    for _ in 0..product_terms(tau) {
        acc = acc * (Complex::<F>::one() - qk);
        qk = qk * q;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    type C = Complex<f64>;

    fn close(a: C, b: C, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn zeros_on_the_lattice() {
        let tau = C::new(0.2, 1.0);
        for a in 0..2 {
            for b in 0..2 {
                let v = C::new(a as f64, 0.0) + tau * b as f64;
                let t = theta_num(ThetaKind::Theta, v, tau).unwrap();
                assert!(t.norm() < 1e-12, "theta({a}+{b}tau) = {t}");
            }
        }
    }

    #[test]
    fn odd_and_even() {
        let tau = C::new(0.1, 1.1);
        let v = C::new(0.23, 0.17);
        let t = theta_num(ThetaKind::Theta, v, tau).unwrap();
        let tm = theta_num(ThetaKind::Theta, -v, tau).unwrap();
        assert!(close(tm, -t, 1e-12));
        for kind in [ThetaKind::Theta1, ThetaKind::Theta2, ThetaKind::Theta3] {
            let a = theta_num(kind, v, tau).unwrap();
            let b = theta_num(kind, -v, tau).unwrap();
            assert!(close(a, b, 1e-12));
        }
    }

    #[test]
    fn theta3_is_shifted_theta2() {
        let tau = C::new(-0.3, 0.9);
        for v in [C::new(0.1, 0.2), C::new(-0.4, 0.05), C::new(0.77, -0.3)] {
            let a = theta_num(ThetaKind::Theta3, v, tau).unwrap();
            let b = theta_num(ThetaKind::Theta2, v + 0.5, tau).unwrap();
            assert!(close(a, b, 1e-12));
        }
    }

    #[test]
    fn derivative_at_zero_is_two_pi_eta_cubed() {
        let tau = C::new(0.0, 1.0);
        let d = theta_deriv_num(ThetaKind::Theta, C::zero(), tau).unwrap();
        let e = eta_num(tau).unwrap();
        assert!(close(d, e * e * e * 2.0 * PI, 1e-12));
    }

    #[test]
    fn finite_difference_derivative() {
        let tau = C::new(0.15, 0.8);
        let v = C::new(0.31, 0.4);
        let h = 1e-5;
        for kind in ThetaKind::ALL {
            let d = theta_deriv_num(kind, v, tau).unwrap();
            let fd = (theta_num(kind, v + h, tau).unwrap() - theta_num(kind, v - h, tau).unwrap())
                / (2.0 * h);
            assert!((d - fd).norm() < 1e-6, "{kind:?}");
        }
    }

    #[test]
    fn far_arguments_are_reduced() {
        let tau = C::new(0.0, 1.2);
        let v = C::new(0.3, 0.1);
        let far = v + tau * 7.0 + 3.0;
        let t = theta_num(ThetaKind::Theta, v, tau).unwrap();
        let tf = theta_num(ThetaKind::Theta, far, tau).unwrap();
        // θ(v + 3 + 7τ) = (-1)^{10} q^{-49/2} e^{-14πi v} θ(v)
        let q = (C::new(0.0, 2.0 * PI) * tau).exp();
        let expect = q.powf(-24.5) * (C::new(0.0, -14.0 * PI) * v).exp() * t;
        assert!(close(tf, expect, 1e-10));
    }

    #[test]
    fn eta_values() {
        let eta_i = eta_num(C::new(0.0, 1.0)).unwrap();
        assert!((eta_i.re - 0.768_225_422_326_056_7).abs() < 1e-14);
        let tau = C::new(0.0, 1.3);
        let shifted = eta_num(tau + 1.0).unwrap();
        let expect = eta_num(tau).unwrap() * (C::new(0.0, PI / 12.0)).exp();
        assert!(close(shifted, expect, 1e-12));
        assert!(eta_num(C::new(0.0, 5.0)).unwrap().norm() < eta_i.norm());
        assert!(matches!(eta_num(C::new(0.0, -1.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn single_precision_is_usable() {
        let tau = Complex::<f32>::new(0.0, 1.0);
        let d = theta_deriv_num(ThetaKind::Theta, Complex::zero(), tau).unwrap();
        let e = eta_num(tau).unwrap();
        let rhs = e * e * e * (2.0 * std::f32::consts::PI);
        assert!((d - rhs).norm() / rhs.norm() < 1e-5);
    }
}
