use std::collections::BTreeMap;

use crate::coeffring::{QSeries, RatFunc};
use crate::error::{Error, Result};
use crate::scalar::Field;

/// Truncated power series `Σ_{k ≤ t_order} c_k t^k` with [`QSeries`] coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct TSeries<K> {
    coeffs: BTreeMap<u32, QSeries<K>>,
    t_order: u32,
    q_order: u32,
}

impl<K: Field> TSeries<K> {
    pub fn zero(t_order: u32, q_order: u32) -> Self {
        TSeries {
            coeffs: BTreeMap::new(),
            t_order,
            q_order,
        }
    }

    pub fn one(t_order: u32, q_order: u32) -> Self {
        Self::monomial(QSeries::one(q_order), 0, t_order)
    }

    /// `c t^k`.
    pub fn monomial(c: QSeries<K>, k: u32, t_order: u32) -> Self {
        let q_order = c.order();
        let mut s = Self::zero(t_order, q_order);
        s.add_term(k, c);
        s
    }

    pub fn from_coeffs<I>(terms: I, t_order: u32, q_order: u32) -> Self
    where
        I: IntoIterator<Item = (u32, QSeries<K>)>,
    {
        let mut s = Self::zero(t_order, q_order);
        for (k, c) in terms {
            s.add_term(k, c);
        }
        s
    }

    /// Coefficients constant in q.
    pub fn from_ratfuncs<I>(terms: I, t_order: u32, q_order: u32) -> Self
    where
        I: IntoIterator<Item = (u32, RatFunc<K>)>,
    {
        Self::from_coeffs(
            terms
                .into_iter()
                .map(|(k, c)| (k, QSeries::constant(c, q_order))),
            t_order,
            q_order,
        )
    }

    fn add_term(&mut self, k: u32, c: QSeries<K>) {
        if k > self.t_order || c.is_zero() {
            return;
        }
        let c = c.truncate(self.q_order);
        let sum = match self.coeffs.remove(&k) {
            Some(prev) => prev.checked_add(&c).expect("matching prefactors"),
            None => c,
        };
        if !sum.is_zero() {
            self.coeffs.insert(k, sum);
        }
    }

    pub fn t_order(&self) -> u32 {
        self.t_order
    }

    pub fn q_order(&self) -> u32 {
        self.q_order
    }

    pub fn coeff(&self, k: u32) -> QSeries<K> {
        self.coeffs
            .get(&k)
            .cloned()
            .unwrap_or_else(|| QSeries::zero(self.q_order))
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &QSeries<K>)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn truncate(&self, t_order: u32) -> Self {
        let t_order = t_order.min(self.t_order);
        TSeries {
            coeffs: self
                .coeffs
                .range(..=t_order)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
            t_order,
            q_order: self.q_order,
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let t_order = self.t_order.min(rhs.t_order);
        let q_order = self.q_order.min(rhs.q_order);
        let mut out = Self::zero(t_order, q_order);
        for (k, c) in self.coeffs.iter().chain(rhs.coeffs.iter()) {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        TSeries {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, c.neg())).collect(),
            ..*self
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let t_order = self.t_order.min(rhs.t_order);
        let q_order = self.q_order.min(rhs.q_order);
        let mut out = Self::zero(t_order, q_order);
        for (i, a) in self.coeffs.range(..=t_order) {
            for (j, b) in rhs.coeffs.range(..=t_order - i) {
                out.add_term(i + j, a.mul(b));
            }
        }
        out
    }

    pub fn scale_q(&self, c: &QSeries<K>) -> Self {
        let q_order = self.q_order.min(c.order());
        let mut out = Self::zero(self.t_order, q_order);
        for (k, a) in &self.coeffs {
            out.add_term(*k, a.mul(c));
        }
        out
    }

    /// Multiplicative inverse; needs an invertible `t^0` coefficient.
    pub fn inv(&self) -> Result<Self> {
        let c0 = self.coeff(0);
        let c0_inv = c0
            .inv()
            .map_err(|_| Error::NotInvertible("t-series constant term".into()))?;
        let mut out = Self::zero(self.t_order, self.q_order);
        let mut b: Vec<QSeries<K>> = vec![c0_inv.clone()];
        for n in 1..=self.t_order {
            let mut sum = QSeries::zero(self.q_order);
            for (k, a) in self.coeffs.range(1..=n) {
                let prev = &b[(n - k) as usize];
                if !prev.is_zero() {
                    sum = sum.checked_add(&a.mul(prev))?;
                }
            }
            b.push(sum.mul(&c0_inv).neg());
        }
        for (k, c) in b.into_iter().enumerate() {
            out.add_term(k as u32, c);
        }
        Ok(out)
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: u32) -> Self {
        let mut out = Self::zero(self.t_order, self.q_order);
        for (e, c) in &self.coeffs {
            out.add_term(e + k, c.clone());
        }
        out
    }

    pub fn map_coeffs<M: Fn(&QSeries<K>) -> QSeries<K>>(&self, f: M) -> Self {
        let mut out = Self::zero(self.t_order, self.q_order);
        for (k, c) in &self.coeffs {
            out.add_term(*k, f(c));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type T = TSeries<BigRational>;

    #[test]
    fn inverse_of_one_minus_t() {
        let a = T::from_ratfuncs([(0, RatFunc::from_int(1)), (1, RatFunc::from_int(-1))], 6, 0);
        let inv = a.inv().unwrap();
        for k in 0..=6 {
            assert_eq!(inv.coeff(k), QSeries::one(0));
        }
        assert_eq!(a.mul(&inv), T::one(6, 0));
    }

    #[test]
    fn zero_constant_is_not_invertible() {
        let a = T::from_ratfuncs([(1, RatFunc::from_int(1))], 4, 0);
        assert!(matches!(a.inv(), Err(Error::NotInvertible(_))));
    }
}
