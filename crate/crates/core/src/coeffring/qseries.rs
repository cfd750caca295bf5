//! Truncated power series in `u = q^{1/2}` with `K(s)` coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::ratfunc::RatFunc;
use crate::error::{Error, Result};
use crate::scalar::{c, exp_i_pi, Field, Real};

/// Monomial factor kept outside a series body: `(√−1)^i_pow · q^{q8_pow/8} · s^s_pow`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Prefactor {
    i_pow: u8,
    pub q8_pow: i64,
    pub s_pow: i64,
}

impl Prefactor {
    pub const TRIVIAL: Prefactor = Prefactor {
        i_pow: 0,
        q8_pow: 0,
        s_pow: 0,
    };

    pub const fn new(i_pow: i64, q8_pow: i64, s_pow: i64) -> Self {
        Prefactor {
            i_pow: i_pow.rem_euclid(4) as u8,
            q8_pow,
            s_pow,
        }
    }

    pub fn i_pow(&self) -> u8 {
        self.i_pow
    }

    pub fn is_trivial(&self) -> bool {
        *self == Self::TRIVIAL
    }

    /// Componentwise sum (the prefactor of a product).
    pub fn combine(&self, other: &Prefactor) -> Prefactor {
        Prefactor::new(
            self.i_pow as i64 + other.i_pow as i64,
            self.q8_pow + other.q8_pow,
            self.s_pow + other.s_pow,
        )
    }

    pub fn inverse(&self) -> Prefactor {
        Prefactor::new(-(self.i_pow as i64), -self.q8_pow, -self.s_pow)
    }

    pub fn pow(&self, e: i64) -> Prefactor {
        Prefactor::new(self.i_pow as i64 * e, self.q8_pow * e, self.s_pow * e)
    }

    /// Numeric value at `s = e^{iπv}`, `q = e^{2πiτ}`.
    pub fn eval<F: Real>(&self, v: Complex<F>, tau: Complex<F>) -> Complex<F> {
        let i_part = match self.i_pow {
            0 => c(1.0),
            1 => Complex::new(F::zero(), F::one()),
            2 => c(-1.0),
            _ => Complex::new(F::zero(), -F::one()),
        };
        let q_part = exp_i_pi(tau * c(self.q8_pow as f64 / 4.0));
        let s_part = exp_i_pi(v * c(self.s_pow as f64));
        i_part * q_part * s_part
    }
}

/// `prefactor · Σ_{k ≤ order} coeffs[k] u^k`. Exponents above `order` are unknown.
#[derive(Clone, Debug, PartialEq)]
pub struct QSeries<K> {
    coeffs: BTreeMap<u32, RatFunc<K>>,
    order: u32,
    prefactor: Prefactor,
}

impl<K: Field> QSeries<K> {
    pub fn zero(order: u32) -> Self {
        QSeries {
            coeffs: BTreeMap::new(),
            order,
            prefactor: Prefactor::TRIVIAL,
        }
    }

    pub fn constant(c: RatFunc<K>, order: u32) -> Self {
        Self::monomial(c, 0, order)
    }

    pub fn one(order: u32) -> Self {
        Self::constant(RatFunc::one(), order)
    }

    /// `c · u^k`, or zero if `k > order`.
    pub fn monomial(c: RatFunc<K>, k: u32, order: u32) -> Self {
        let mut coeffs = BTreeMap::new();
        if k <= order && !c.is_zero() {
            coeffs.insert(k, c);
        }
        QSeries {
            coeffs,
            order,
            prefactor: Prefactor::TRIVIAL,
        }
    }

    pub fn from_coeffs<I>(terms: I, order: u32) -> Self
    where
        I: IntoIterator<Item = (u32, RatFunc<K>)>,
    {
        let mut s = Self::zero(order);
        for (k, c) in terms {
            s.add_term(k, c);
        }
        s
    }

    pub fn with_prefactor(mut self, prefactor: Prefactor) -> Self {
        self.prefactor = prefactor;
        self
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn prefactor(&self) -> Prefactor {
        self.prefactor
    }

    pub fn coeff(&self, k: u32) -> RatFunc<K> {
        self.coeffs.get(&k).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn coeff_ref(&self, k: u32) -> Option<&RatFunc<K>> {
        self.coeffs.get(&k)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &RatFunc<K>)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.prefactor.is_trivial()
            && self.coeffs.len() == 1
            && self.coeffs.get(&0).is_some_and(|c| c.is_one())
    }

    /// Body constant term.
    pub fn constant_term(&self) -> RatFunc<K> {
        self.coeff(0)
    }

    fn add_term(&mut self, k: u32, c: RatFunc<K>) {
        if k > self.order || c.is_zero() {
            return;
        }
        let sum = match self.coeffs.remove(&k) {
            Some(prev) => &prev + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.coeffs.insert(k, sum);
        }
    }

    /// Drop terms above `order` (only narrows).
    pub fn truncate(&self, order: u32) -> Self {
        let order = order.min(self.order);
        QSeries {
            coeffs: self
                .coeffs
                .range(..=order)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
            order,
            prefactor: self.prefactor,
        }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.check_prefactors(rhs)?;
        let order = self.order.min(rhs.order);
        let mut out = self.truncate(order);
        for (k, c) in rhs.coeffs.range(..=order) {
            out.add_term(*k, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.checked_add(&rhs.neg())
    }

    fn check_prefactors(&self, rhs: &Self) -> Result<()> {
        if self.prefactor != rhs.prefactor {
            // A zero body carries no information about its prefactor.
            if self.is_zero() || rhs.is_zero() {
                return Ok(());
            }
            return Err(Error::Prefactor(format!(
                "{:?} vs {:?}",
                self.prefactor, rhs.prefactor
            )));
        }
        Ok(())
    }

    pub fn neg(&self) -> Self {
        QSeries {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(),
            order: self.order,
            prefactor: self.prefactor,
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let order = self.order.min(rhs.order);
        let mut acc: BTreeMap<u32, RatFunc<K>> = BTreeMap::new();
        for (i, a) in self.coeffs.range(..=order) {
            for (j, b) in rhs.coeffs.range(..=order - i) {
                let p = a * b;
                let e = acc.entry(i + j).or_insert_with(RatFunc::zero);
                *e = &*e + &p;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        QSeries {
            coeffs: acc,
            order,
            prefactor: self.prefactor.combine(&rhs.prefactor),
        }
    }

    pub fn scale(&self, c: &RatFunc<K>) -> Self {
        if c.is_zero() {
            return QSeries::zero(self.order).with_prefactor(self.prefactor);
        }
        QSeries {
            coeffs: self.coeffs.iter().map(|(k, a)| (*k, a * c)).collect(),
            order: self.order,
            prefactor: self.prefactor,
        }
    }

    pub fn scale_field(&self, c: &K) -> Self {
        self.scale(&RatFunc::constant(c.clone()))
    }

    /// Multiply the body by `u^k`.
    pub fn shift(&self, k: u32) -> Self {
        QSeries {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(e, _)| **e + k <= self.order)
                .map(|(e, c)| (e + k, c.clone()))
                .collect(),
            order: self.order,
            prefactor: self.prefactor,
        }
    }

    /// Multiply by `(1 - a u^j)`, `j >= 1`.
    pub fn mul_binomial(&self, a: &RatFunc<K>, j: u32) -> Self {
        let mut out = self.clone();
        for (k, c) in self.coeffs.range(..=self.order.saturating_sub(j)) {
            out.add_term(k + j, -&(c * a));
        }
        out
    }

    /// Divide by `(1 - a u^j)`, `j >= 1`, via `b_k = c_k + a b_{k-j}`.
    pub fn div_binomial(&self, a: &RatFunc<K>, j: u32) -> Self {
        assert!(j >= 1, "div_binomial needs a positive u-power");
        let mut out: BTreeMap<u32, RatFunc<K>> = BTreeMap::new();
        for k in 0..=self.order {
            let mut v = self.coeff(k);
            if k >= j {
                if let Some(prev) = out.get(&(k - j)) {
                    v = &v + &(prev * a);
                }
            }
            if !v.is_zero() {
                out.insert(k, v);
            }
        }
        QSeries {
            coeffs: out,
            order: self.order,
            prefactor: self.prefactor,
        }
    }

    /// Multiplicative inverse up to `order`; prefactor is inverted.
    pub fn inv(&self) -> Result<Self> {
        let a0 = self.constant_term();
        if a0.is_zero() {
            return Err(Error::NotInvertible("q-series with zero constant term".into()));
        }
        let a0_inv = a0.recip()?;
        let mut b: BTreeMap<u32, RatFunc<K>> = BTreeMap::new();
        b.insert(0, a0_inv.clone());
        for n in 1..=self.order {
            let mut sum = RatFunc::zero();
            for (k, ak) in self.coeffs.range(1..=n) {
                if let Some(bk) = b.get(&(n - k)) {
                    sum = &sum + &(ak * bk);
                }
            }
            if !sum.is_zero() {
                b.insert(n, -&(&sum * &a0_inv));
            }
        }
        Ok(QSeries {
            coeffs: b,
            order: self.order,
            prefactor: self.prefactor.inverse(),
        })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.order);
        let mut base = self.clone();
        let mut n = e;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Move the prefactor into the body. Valid only when it is a power of
    /// `u` times `s^k` times `±1`; the body exponents must stay non-negative.
    pub fn fold(&self) -> Result<Self> {
        let p = self.prefactor;
        if p.i_pow % 2 != 0 {
            return Err(Error::Prefactor("odd power of sqrt(-1) cannot be folded".into()));
        }
        if p.q8_pow % 4 != 0 {
            return Err(Error::Prefactor(format!(
                "q^({}/8) is not an integral power of u",
                p.q8_pow
            )));
        }
        let du = p.q8_pow / 4;
        let mut body = self.clone().with_prefactor(Prefactor::TRIVIAL);
        if p.i_pow == 2 {
            body = body.neg();
        }
        if p.s_pow != 0 {
            body = body.scale(&RatFunc::s_pow(p.s_pow));
        }
        if du > 0 {
            body = body.shift(du as u32);
        } else if du < 0 {
            let d = du.unsigned_abs() as u32;
            if body.coeffs.keys().next().is_some_and(|k| *k < d) || d > body.order {
                return Err(Error::Prefactor("negative u-power would leave the series ring".into()));
            }
            body = QSeries {
                coeffs: body.coeffs.iter().map(|(k, c)| (k - d, c.clone())).collect(),
                order: body.order - d,
                prefactor: Prefactor::TRIVIAL,
            };
        }
        Ok(body)
    }

    pub fn map_coeffs<M: Fn(&RatFunc<K>) -> RatFunc<K>>(&self, f: M) -> Self {
        let mut out = QSeries::zero(self.order).with_prefactor(self.prefactor);
        for (k, c) in &self.coeffs {
            out.add_term(*k, f(c));
        }
        out
    }

    /// Numeric value with `s = e^{iπv}` and `u = e^{iπτ}`.
    pub fn eval<F: Real>(&self, v: Complex<F>, tau: Complex<F>) -> Result<Complex<F>> {
        if tau.im <= F::zero() {
            return Err(Error::Domain("Im tau must be positive".into()));
        }
        let s = exp_i_pi(v);
        let u = exp_i_pi(tau);
        let mut acc = Complex::<F>::zero();
        // Sum from the highest power down (smallest terms first).
        for (k, coeff) in self.coeffs.iter().rev() {
            acc = acc + coeff.eval(s)? * u.powu(*k);
        }
        Ok(acc * self.prefactor.eval(v, tau))
    }
}

impl<K: Field + fmt::Display> fmt::Display for QSeries<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.prefactor.is_trivial() {
            write!(f, "{:?} * [", self.prefactor)?;
        }
        for (k, c) in &self.coeffs {
            write!(f, "({c}) u^{k} + ")?;
        }
        write!(f, "O(u^{})", self.order + 1)?;
        if !self.prefactor.is_trivial() {
            write!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::poly::Poly;
    use num_rational::BigRational;

    type Q = QSeries<BigRational>;
    type R = RatFunc<BigRational>;

    fn int(n: i64) -> R {
        R::from_int(n)
    }

    #[test]
    fn product_of_conjugates() {
        let a = Q::from_coeffs([(0, int(1)), (2, int(1))], 4);
        let b = Q::from_coeffs([(0, int(1)), (2, int(-1))], 4);
        assert_eq!(a.mul(&b), Q::from_coeffs([(0, int(1)), (4, int(-1))], 4));
    }

    #[test]
    fn add_and_order_narrowing() {
        let a = Q::one(10);
        assert_eq!(a.checked_add(&a).unwrap(), Q::constant(int(2), 10));
        let b = Q::one(3);
        assert_eq!(a.checked_add(&b).unwrap().order(), 3);
        assert_eq!(a.mul(&b).order(), 3);
    }

    #[test]
    fn prefactor_bookkeeping_mod_4() {
        let p = Prefactor::new(1, 0, 0);
        let a = Q::one(5).with_prefactor(p);
        let cube = a.mul(&a).mul(&a);
        assert_eq!(cube.prefactor().i_pow(), 3);
        assert!(cube.body_is_one());
        let fourth = cube.mul(&a);
        assert_eq!(fourth.prefactor().i_pow(), 0);
    }

    #[test]
    fn mismatched_prefactor_add_fails() {
        let a = Q::one(3);
        let b = Q::one(3).with_prefactor(Prefactor::new(0, 1, 0));
        assert!(matches!(a.checked_add(&b), Err(Error::Prefactor(_))));
    }

    #[test]
    fn geometric_inverse() {
        let a = Q::from_coeffs([(0, int(1)), (1, int(-1))], 6);
        let inv = a.inv().unwrap();
        for k in 0..=6 {
            assert_eq!(inv.coeff(k), int(1));
        }
        assert_eq!(Q::one(4).inv().unwrap(), Q::one(4));
        assert!(matches!(Q::monomial(int(1), 1, 3).inv(), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn inverse_with_rational_function_constant() {
        let c0 = R::from_poly(Poly::from_ints(&[1, 0, -1]));
        let a = Q::from_coeffs([(0, c0.clone()), (1, int(1))], 2);
        let inv = a.inv().unwrap();
        assert!(a.mul(&inv).is_one());
        let den = |k: u32| inv.coeff(k).den().clone();
        assert_eq!(den(0), Poly::from_ints(&[-1, 0, 1]));
        assert_eq!(den(1).degree(), Some(4));
        assert_eq!(den(2).degree(), Some(6));
    }

    #[test]
    fn numeric_evaluation() {
        let v = Complex::new(0.37, 0.0);
        let tau = Complex::new(0.0, 1.0);
        assert!((Q::one(3).eval(v, tau).unwrap() - Complex::new(1.0, 0.0)).norm() < 1e-15);
        let u2 = Q::monomial(int(1), 2, 4);
        let got = u2.eval(v, tau).unwrap();
        assert!((got.re - (-2.0 * std::f64::consts::PI).exp()).abs() < 1e-15);
        let s = Q::constant(R::s(), 2);
        let got = s.eval(Complex::new(0.5, 0.0), tau).unwrap();
        assert!((got - Complex::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn fold_rules() {
        let a = Q::one(6).with_prefactor(Prefactor::new(2, 8, 1));
        let f = a.fold().unwrap();
        assert_eq!(f, Q::monomial(-R::s(), 2, 6));
        assert!(Q::one(6).with_prefactor(Prefactor::new(1, 0, 0)).fold().is_err());
        assert!(Q::one(6).with_prefactor(Prefactor::new(0, 1, 0)).fold().is_err());
    }

    impl Q {
        fn body_is_one(&self) -> bool {
            self.coeffs.len() == 1 && self.coeff(0).is_one()
        }
    }
}
