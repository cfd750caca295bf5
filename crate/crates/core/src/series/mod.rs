//! Truncated Laurent series in `z` and power series in `t` over q-series
//! coefficients: products, inverses, `z ↦ mz`, residues, reversion and
//! composition.

mod tseries;
mod zlaurent;

pub use tseries::TSeries;
pub use zlaurent::ZLaurent;

use crate::coeffring::QSeries;
use crate::error::{Error, Result};
use crate::scalar::Field;

pub fn zl_mul<K: Field>(a: &ZLaurent<K>, b: &ZLaurent<K>) -> ZLaurent<K> {
    a.mul(b)
}

pub fn zl_inv<K: Field>(a: &ZLaurent<K>) -> Result<ZLaurent<K>> {
    a.inv()
}

pub fn zl_scale<K: Field>(a: &ZLaurent<K>, m: i64) -> ZLaurent<K> {
    a.scale_var(m)
}

pub fn residue<K: Field>(a: &ZLaurent<K>) -> Result<QSeries<K>> {
    a.residue()
}

/// Evaluate `f(g(t))` where `g` has no constant term and `f` no pole.
pub fn compose<K: Field>(f: &ZLaurent<K>, g: &TSeries<K>) -> Result<TSeries<K>> {
    if !g.coeff(0).is_zero() {
        return Err(Error::Composition(
            "inner series must have zero constant term".into(),
        ));
    }
    if f.valuation().is_some_and(|v| v < 0) {
        return Err(Error::Composition("outer series has a pole at z = 0".into()));
    }
    // Unknown z^{Z+1} terms first matter at t^{Z+1}.
    let t_order = g.t_order().min(f.z_order().max(0) as u32);
    let q_order = g.q_order().min(f.q_order());
    let g = g.truncate(t_order);
    let top = f.z_order().max(0);
    let mut acc = TSeries::zero(t_order, q_order);
    for k in (0..=top).rev() {
        acc = acc.mul(&g);
        let c = f.coeff(k);
        if !c.is_zero() {
            acc = acc.add(&TSeries::monomial(c, 0, t_order));
        }
    }
    Ok(acc)
}

/// Compositional inverse `g` of `f` (`f(g(t)) = t`), by matching coefficients
/// of `t^n` one order at a time.
pub fn revert<K: Field>(f: &ZLaurent<K>, t_order: u32) -> Result<TSeries<K>> {
    if f.valuation().is_none_or(|v| v != 1) {
        return Err(Error::NotInvertible(
            "reversion needs f(0) = 0 and a nonzero linear term".into(),
        ));
    }
    if f.z_order() < t_order as i64 {
        return Err(Error::Window {
            min_exp: f.min_exp(),
            z_order: f.z_order(),
        });
    }
    let q_order = f.q_order();
    let f1_inv = f
        .coeff(1)
        .inv()
        .map_err(|_| Error::NotInvertible("f'(0) is not an invertible q-series".into()))?;
    let mut g = TSeries::monomial(f1_inv.clone(), 1, t_order);
    for n in 2..=t_order {
        let partial = g.truncate(n);
        let partial = TSeries::from_coeffs(partial.terms().map(|(k, c)| (k, c.clone())), n, q_order);
        let fg = compose(&f.truncate(n as i64, q_order), &partial)?;
        // f(g + g_n t^n) = f(g) + f_1 g_n t^n + O(t^{n+1})
        let c = fg.coeff(n);
        if !c.is_zero() {
            let g_n = c.mul(&f1_inv).neg();
            g = g.add(&TSeries::monomial(g_n, n, t_order));
        }
    }
    Ok(g)
}

/// `Σ_{n=r}^{t_order} t^n Res_z f(m_1 z)⋯f(m_r z) / f(z)^{n+1}`, term by term.
pub fn residue_series<K: Field>(f: &ZLaurent<K>, ms: &[i64], t_order: u32) -> Result<TSeries<K>> {
    if ms.is_empty() {
        return Err(Error::Domain("at least one multiplier is required".into()));
    }
    let r = ms.len() as u32;
    let mut numer = ZLaurent::one(f.precision(), f.q_order());
    for &m in ms {
        numer = numer.mul(&f.scale_var(m));
    }
    let f_inv = f.inv()?;
    let mut out = TSeries::zero(t_order, f.q_order());
    if r > t_order {
        return Ok(out);
    }
    // f^{-(n+1)} built incrementally.
    let mut inv_pow = f_inv.pow(r as i64 + 1)?;
    for n in r..=t_order {
        let res = numer.mul(&inv_pow).residue()?;
        out = out.add(&TSeries::monomial(res, n, t_order));
        if n < t_order {
            inv_pow = inv_pow.mul(&f_inv);
        }
    }
    Ok(out)
}

/// `f(m_1 g(t))⋯f(m_r g(t)) / f'(g(t))` with `g` the compositional inverse of `f`.
pub fn inversion_series<K: Field>(f: &ZLaurent<K>, ms: &[i64], t_order: u32) -> Result<TSeries<K>> {
    let g = revert(f, t_order)?;
    let mut acc = TSeries::one(t_order, f.q_order());
    for &m in ms {
        acc = acc.mul(&compose(&f.scale_var(m), &g)?);
    }
    let fprime_g = compose(&f.derivative(), &g)?;
    Ok(acc.mul(&fprime_g.inv()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::RatFunc;
    use num_rational::BigRational;

    type Z = ZLaurent<BigRational>;
    type T = TSeries<BigRational>;

    fn z_over_one_plus_z(z_order: i64) -> Z {
        let terms: Vec<(i64, i64, i64)> = (1..=z_order)
            .map(|k| (k, if k % 2 == 1 { 1 } else { -1 }, 1))
            .collect();
        Z::from_rationals(&terms, 1, z_order, 0).unwrap()
    }

    fn ints(cs: &[(u32, i64)], t_order: u32) -> T {
        T::from_ratfuncs(cs.iter().map(|&(k, c)| (k, RatFunc::from_int(c))), t_order, 0)
    }

    #[test]
    fn revert_z_over_one_plus_z() {
        let g = revert(&z_over_one_plus_z(8), 8).unwrap();
        assert_eq!(g, ints(&(1..=8).map(|k| (k, 1)).collect::<Vec<_>>(), 8));
    }

    #[test]
    fn revert_identity() {
        let f = Z::from_rationals(&[(1, 1, 1)], 1, 6, 0).unwrap();
        assert_eq!(revert(&f, 6).unwrap(), ints(&[(1, 1)], 6));
    }

    #[test]
    fn compose_square() {
        let f = Z::from_rationals(&[(2, 1, 1)], 2, 6, 0).unwrap();
        let g = ints(&[(1, 1), (2, 1)], 6);
        assert_eq!(compose(&f, &g).unwrap(), ints(&[(2, 1), (3, 2), (4, 1)], 6));
    }

    #[test]
    fn compose_rejects_constant_term() {
        let f = Z::from_rationals(&[(1, 1, 1)], 1, 3, 0).unwrap();
        let g = ints(&[(0, 1), (1, 1)], 3);
        assert!(matches!(compose(&f, &g), Err(Error::Composition(_))));
    }

    #[test]
    fn revert_rejects_degenerate_input() {
        let f = Z::from_rationals(&[(2, 1, 1)], 2, 6, 0).unwrap();
        assert!(matches!(revert(&f, 4), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn residue_inversion_linear_f() {
        let f = Z::from_rationals(&[(1, 1, 1)], 1, 8, 0).unwrap();
        assert_eq!(residue_series(&f, &[1], 6).unwrap(), ints(&[(1, 1)], 6));
        assert_eq!(inversion_series(&f, &[3], 6).unwrap(), ints(&[(1, 3)], 6));
    }

    #[test]
    fn residue_inversion_agree_for_m2() {
        let f = z_over_one_plus_z(9);
        let lhs = residue_series(&f, &[2], 3).unwrap();
        let rhs = inversion_series(&f, &[2], 3).unwrap();
        assert_eq!(lhs, rhs);
    }
}
