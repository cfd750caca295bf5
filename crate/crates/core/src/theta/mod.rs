//! Jacobi theta functions and Dedekind eta: exact z-jets of the theta ratios
//! used by the residue formulas, and complex floating-point evaluation.

mod numeric;
mod symbolic;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{exp_i_pi, Real};

pub use numeric::{
    eta_num, product_terms, theta_deriv_num, theta_num, theta_with_deriv, truncation_bound,
};
pub use symbolic::{
    big_g, big_g_ns, cached_f_ratio_keys, cached_f_ratio_tail_keys, clear_cache, f_ns_ratio, f_ratio,
    f_ratio_tail, phi_jet, prime_f_ratio, prime_f_ratio_tail, F_NS_PREFACTOR,
};

/// The four product-defined theta functions.
///
/// `Theta` is odd with zeros on `Z + Zτ`; `Theta1`, `Theta2`, `Theta3` are its
/// translates by `1/2`, `τ/2` and `(1 + τ)/2` up to elementary factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThetaKind {
    Theta,
    Theta1,
    Theta2,
    Theta3,
}

impl ThetaKind {
    pub const ALL: [ThetaKind; 4] = [
        ThetaKind::Theta,
        ThetaKind::Theta1,
        ThetaKind::Theta2,
        ThetaKind::Theta3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ThetaKind::Theta => "theta",
            ThetaKind::Theta1 => "theta1",
            ThetaKind::Theta2 => "theta2",
            ThetaKind::Theta3 => "theta3",
        }
    }
}

impl fmt::Display for ThetaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ThetaKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ThetaKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown theta function '{s}'")))
    }
}

/// A point `(v, τ)` of the upper half-plane with its exponentials
/// `y = e^{2πiv}`, `q = e^{2πiτ}`, `s = e^{πiv}`, `u = e^{πiτ}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalPoint<F> {
    pub v: Complex<F>,
    pub tau: Complex<F>,
    pub y: Complex<F>,
    pub q: Complex<F>,
    pub s: Complex<F>,
    pub u: Complex<F>,
}

impl<F: Real> EvalPoint<F> {
    pub fn new(v: Complex<F>, tau: Complex<F>) -> Result<Self> {
        if !(tau.im > F::zero()) {
            return Err(Error::Domain(format!(
                "Im tau must be positive, got {}",
                tau.im.as_f64()
            )));
        }
        let s = exp_i_pi(v);
        let u = exp_i_pi(tau);
        Ok(EvalPoint {
            v,
            tau,
            y: s * s,
            q: u * u,
            s,
            u,
        })
    }

    pub fn theta(&self, kind: ThetaKind) -> Result<Complex<F>> {
        theta_num(kind, self.v, self.tau)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::{QSeries, RatFunc};
    use crate::series::ZLaurent;
    use num_rational::BigRational;
    use std::f64::consts::PI;

    type C = Complex<f64>;
    type K = BigRational;

    fn i() -> C {
        C::new(0.0, 1.0)
    }

    #[test]
    fn f_ratio_q0_part() {
        // s (1 - e^{-z}) / (1 - s^2 e^{-z}), z^1 coefficient s/(1 - s^2)
        let f = f_ratio::<K>(3, 5);
        assert!(f.coeff(0).is_zero());
        let lin = f.coeff(1).coeff(0);
        let expect = RatFunc::s()
            .checked_div(&(&RatFunc::one() - &RatFunc::y_pow(1)))
            .unwrap();
        assert_eq!(lin, expect);
        let oracle = {
            let one_minus = ZLaurent::<K>::from_rationals(
                &[(1, 1, 1), (2, -1, 2), (3, 1, 6), (4, -1, 24), (5, 1, 120)],
                0,
                5,
                0,
            )
            .unwrap();
            let y = RatFunc::<K>::y_pow(1);
            // den = 1 - y e^{-z} = 1 - y (1 - (1 - e^{-z}))
            let den = ZLaurent::one(5, 0)
                .sub(&ZLaurent::one(5, 0).scale(&y))
                .add(&one_minus.scale(&y));
            one_minus.mul(&den.inv().unwrap()).scale(&RatFunc::s())
        };
        for k in 0..=5 {
            assert_eq!(f.coeff(k).coeff(0), oracle.coeff(k).coeff(0), "z^{k}");
        }
    }

    #[test]
    fn f_prime_times_g_is_one() {
        let f = f_ratio::<K>(6, 3);
        let g = big_g::<K>(6);
        let prod = f.coeff(1).mul(&g).fold().unwrap();
        assert_eq!(prod, QSeries::one(12));
    }

    #[test]
    fn f_ns_prime_times_g_ns_is_one() {
        let f = f_ns_ratio::<K>(4, 3);
        let g = big_g_ns::<K>(4);
        let prod = f
            .coeff(1)
            .with_prefactor(F_NS_PREFACTOR)
            .mul(&g)
            .fold()
            .unwrap();
        assert_eq!(prod, QSeries::one(8));
    }

    #[test]
    fn f_ns_u0_body() {
        // (1 - e^{-z}) e^{z/2} = z - z^3/24 + ...
        let f = f_ns_ratio::<K>(2, 4);
        let expect = ZLaurent::<K>::from_rationals(&[(1, 1, 1), (3, 1, 24)], 0, 4, 0).unwrap();
        for k in 0..=4 {
            assert_eq!(f.coeff(k).coeff(0), expect.coeff(k).coeff(0), "z^{k}");
        }
    }

    #[test]
    fn reflection_symmetry() {
        let f = f_ratio::<K>(3, 5);
        let g = f_ns_ratio::<K>(3, 5);
        for k in 0..=5 {
            let sign: i64 = if k % 2 == 0 { 1 } else { -1 };
            let fk = f.coeff(k);
            let flipped = fk.map_coeffs(|c| c.invert_var().scale(&BigRational::from_integer(sign.into())));
            assert_eq!(flipped, fk, "f z^{k}");
            let gk = g.coeff(k);
            let flipped = gk.map_coeffs(|c| c.invert_var().scale(&BigRational::from_integer((-sign).into())));
            assert_eq!(flipped, gk, "f_ns z^{k}");
        }
    }

    #[test]
    fn big_g_low_terms() {
        let g = big_g::<K>(2);
        assert_eq!(g.prefactor(), crate::coeffring::Prefactor::new(0, 0, -1));
        assert_eq!(g.coeff(0), &RatFunc::one() - &RatFunc::y_pow(1));
        // (1-y)(1 - yq)(1 - q/y)/(1-q)^2 at q^1: (1-y)(2 - y - 1/y)
        let y = RatFunc::y_pow(1);
        let yi = RatFunc::y_pow(-1);
        let two = RatFunc::from_int(2);
        let expect = &(&RatFunc::one() - &y) * &(&(&two - &y) - &yi);
        assert_eq!(g.coeff(2), expect);
        assert!(g.coeff(1).is_zero());

        let gns = big_g_ns::<K>(2);
        assert_eq!(gns.coeff(0), RatFunc::one());
        let u1 = -(&y + &yi);
        assert_eq!(gns.coeff(1), u1);
    }

    #[test]
    fn big_g_matches_theta_over_eta_cubed() {
        let (v, tau) = (C::new(0.31, 0.0), C::new(0.0, 1.3));
        let g = big_g::<K>(10).eval(v, tau).unwrap();
        let eta = eta_num(tau).unwrap();
        let expect = theta_num(ThetaKind::Theta, v, tau).unwrap() / (i() * eta * eta * eta);
        assert!((g - expect).norm() < 1e-10 * expect.norm());
    }

    #[test]
    fn f_linear_coefficient_numerically() {
        let (v, tau) = (C::new(0.27, 0.05), C::new(0.1, 1.2));
        let lin = f_ratio::<K>(10, 2).coeff(1).eval(v, tau).unwrap();
        let d0 = theta_deriv_num(ThetaKind::Theta, C::new(0.0, 0.0), tau).unwrap();
        let expect = i() / (2.0 * PI) * d0 / theta_num(ThetaKind::Theta, v, tau).unwrap();
        assert!((lin - expect).norm() < 1e-9 * expect.norm());
    }

    #[test]
    fn f_ratio_numerically_at_small_z() {
        // f(z) = θ(iz/2π)/θ(v + iz/2π)
        let (v, tau) = (C::new(0.2, 0.0), C::new(0.0, 1.4));
        let z: f64 = 0.05;
        let f = f_ratio::<K>(10, 8);
        let mut sum = C::new(0.0, 0.0);
        for k in 0..=8 {
            sum += f.coeff(k).eval(v, tau).unwrap() * z.powi(k as i32);
        }
        let w = i() * z / (2.0 * PI);
        let expect = theta_num(ThetaKind::Theta, w, tau).unwrap()
            / theta_num(ThetaKind::Theta, v + w, tau).unwrap();
        assert!((sum - expect).norm() < 1e-9 * expect.norm());
    }

    #[test]
    fn f_ns_ratio_numerically_at_small_z() {
        // f_NS(z) = θ(iz/2π)/θ₂(v + iz/2π) up to the constant 1/θ₂-normalization
        let (v, tau) = (C::new(0.2, 0.0), C::new(0.0, 1.4));
        let f = f_ns_ratio::<K>(10, 8);
        let eval = |z: f64| {
            let mut sum = C::new(0.0, 0.0);
            for k in 0..=8 {
                sum += f.coeff(k).eval(v, tau).unwrap() * z.powi(k as i32);
            }
            sum * F_NS_PREFACTOR.eval(v, tau)
        };
        let direct = |z: f64| {
            let w = i() * z / (2.0 * PI);
            theta_num(ThetaKind::Theta, w, tau).unwrap()
                / theta_num(ThetaKind::Theta2, v + w, tau).unwrap()
        };
        // The ratio of the two is independent of z.
        let r1 = eval(0.05) / direct(0.05);
        let r2 = eval(-0.08) / direct(-0.08);
        assert!((r1 - r2).norm() < 1e-9 * r1.norm());
    }

    #[test]
    fn cache_is_transparent() {
        let a = f_ratio::<K>(2, 4);
        let b = f_ratio::<K>(2, 4);
        assert_eq!(a, b);
        assert!(cached_f_ratio_keys::<K>().contains(&(2, 4)));
    }

    #[test]
    fn eval_point() {
        let p = EvalPoint::new(C::new(0.25, 0.0), C::new(0.0, 1.0)).unwrap();
        assert!((p.y - i()).norm() < 1e-15);
        assert!((p.q - C::new((-2.0 * PI).exp(), 0.0)).norm() < 1e-15);
        assert!(EvalPoint::new(C::new(0.0, 0.0), C::new(1.0, 0.0)).is_err());
        assert_eq!("theta2".parse::<ThetaKind>().unwrap(), ThetaKind::Theta2);
    }
}
