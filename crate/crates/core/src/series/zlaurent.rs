use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::coeffring::{QSeries, RatFunc};
use crate::error::{Error, Result};
use crate::scalar::{field_pow, Field};

/// Truncated Laurent series `Σ_{min_exp ≤ k ≤ z_order} c_k z^k` with
/// [`QSeries`] coefficients.
///
/// Every coefficient below `min_exp` is known to vanish; every coefficient
/// above `z_order` is unknown. All coefficients share the q-order `q_order`
/// and carry the trivial prefactor.
#[derive(Clone, Debug, PartialEq)]
pub struct ZLaurent<K> {
    coeffs: BTreeMap<i64, QSeries<K>>,
    min_exp: i64,
    z_order: i64,
    q_order: u32,
}

impl<K: Field> ZLaurent<K> {
    pub fn new<I>(terms: I, min_exp: i64, z_order: i64, q_order: u32) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, QSeries<K>)>,
    {
        if min_exp > z_order {
            return Err(Error::Domain(format!(
                "empty z-window: min_exp {min_exp} > z_order {z_order}"
            )));
        }
        let mut out = ZLaurent {
            coeffs: BTreeMap::new(),
            min_exp,
            z_order,
            q_order,
        };
        for (k, c) in terms {
            if k < min_exp {
                return Err(Error::Domain(format!(
                    "coefficient at z^{k} below min_exp {min_exp}"
                )));
            }
            if !c.prefactor().is_trivial() {
                return Err(Error::Prefactor(
                    "z-series coefficients must have their prefactor folded".into(),
                ));
            }
            out.add_term(k, c);
        }
        Ok(out)
    }

    /// A series with RatFunc coefficients (constant in q).
    pub fn from_ratfuncs<I>(terms: I, min_exp: i64, z_order: i64, q_order: u32) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, RatFunc<K>)>,
    {
        Self::new(
            terms
                .into_iter()
                .map(|(k, c)| (k, QSeries::constant(c, q_order))),
            min_exp,
            z_order,
            q_order,
        )
    }

    /// A series with rational-number coefficients given as `(k, num, den)`.
    pub fn from_rationals(
        terms: &[(i64, i64, i64)],
        min_exp: i64,
        z_order: i64,
        q_order: u32,
    ) -> Result<Self> {
        Self::from_ratfuncs(
            terms
                .iter()
                .map(|&(k, n, d)| (k, RatFunc::constant(K::from_int(n) / K::from_int(d)))),
            min_exp,
            z_order,
            q_order,
        )
    }

    pub fn one(z_order: i64, q_order: u32) -> Self {
        let mut coeffs = BTreeMap::new();
        if z_order >= 0 {
            coeffs.insert(0, QSeries::one(q_order));
        }
        ZLaurent {
            coeffs,
            min_exp: 0,
            z_order: z_order.max(0),
            q_order,
        }
    }

    /// `z^k` known exactly through `z_order`.
    pub fn z_pow(k: i64, z_order: i64, q_order: u32) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(k, QSeries::one(q_order));
        ZLaurent {
            coeffs,
            min_exp: k,
            z_order: z_order.max(k),
            q_order,
        }
    }

    /// Jet of `e^{c z}` through `z^{z_order}`.
    pub fn exp_jet(c: &K, z_order: i64, q_order: u32) -> Self {
        let mut terms = Vec::new();
        let mut coeff = K::one();
        for k in 0..=z_order.max(0) {
            if k > 0 {
                coeff = coeff * c.clone() / K::from_int(k);
            }
            terms.push((k, RatFunc::constant(coeff.clone())));
        }
        Self::from_ratfuncs(terms, 0, z_order.max(0), q_order).expect("valid window")
    }

    fn add_term(&mut self, k: i64, c: QSeries<K>) {
        if k > self.z_order || c.is_zero() {
            return;
        }
        let c = if c.order() > self.q_order {
            c.truncate(self.q_order)
        } else {
            c
        };
        let sum = match self.coeffs.remove(&k) {
            Some(prev) => prev.checked_add(&c).expect("trivial prefactors"),
            None => c,
        };
        if !sum.is_zero() {
            self.coeffs.insert(k, sum);
        }
    }

    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    pub fn z_order(&self) -> i64 {
        self.z_order
    }

    pub fn q_order(&self) -> u32 {
        self.q_order
    }

    pub fn coeff(&self, k: i64) -> QSeries<K> {
        self.coeffs
            .get(&k)
            .cloned()
            .unwrap_or_else(|| QSeries::zero(self.q_order))
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &QSeries<K>)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Number of reliable terms counted from `min_exp`.
    pub fn precision(&self) -> i64 {
        self.z_order - self.min_exp
    }

    /// Narrow the window and/or the q-order.
    pub fn truncate(&self, z_order: i64, q_order: u32) -> Self {
        let z_order = z_order.min(self.z_order).max(self.min_exp);
        let q_order = q_order.min(self.q_order);
        ZLaurent {
            coeffs: self
                .coeffs
                .range(..=z_order)
                .map(|(k, c)| (*k, c.truncate(q_order)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
            min_exp: self.min_exp,
            z_order,
            q_order,
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let z_order = self.z_order.min(rhs.z_order);
        let q_order = self.q_order.min(rhs.q_order);
        let mut out = self.truncate(z_order, q_order);
        out.min_exp = self.min_exp.min(rhs.min_exp);
        for (k, c) in rhs.coeffs.range(..=z_order) {
            out.add_term(*k, c.truncate(q_order));
        }
        out
    }

    pub fn neg(&self) -> Self {
        ZLaurent {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, c.neg())).collect(),
            ..*self
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    /// Cauchy product. The window is
    /// `[a.min + b.min, min(a.z_order + b.min, b.z_order + a.min)]`.
    pub fn mul(&self, rhs: &Self) -> Self {
        let min_exp = self.min_exp + rhs.min_exp;
        let z_order = (self.z_order + rhs.min_exp).min(rhs.z_order + self.min_exp);
        let q_order = self.q_order.min(rhs.q_order);
        let mut out = ZLaurent {
            coeffs: BTreeMap::new(),
            min_exp,
            z_order,
            q_order,
        };
        for (i, a) in &self.coeffs {
            let room = z_order - i;
            for (j, b) in rhs.coeffs.range(..=room) {
                out.add_term(i + j, a.mul(b));
            }
        }
        out
    }

    pub fn scale(&self, c: &RatFunc<K>) -> Self {
        ZLaurent {
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, a)| (*k, a.scale(c)))
                .filter(|(_, a)| !a.is_zero())
                .collect(),
            ..*self
        }
    }

    pub fn scale_q(&self, c: &QSeries<K>) -> Result<Self> {
        if !c.prefactor().is_trivial() {
            return Err(Error::Prefactor("fold the prefactor before scaling".into()));
        }
        let q_order = self.q_order.min(c.order());
        let mut out = ZLaurent {
            coeffs: BTreeMap::new(),
            q_order,
            ..*self
        };
        for (k, a) in &self.coeffs {
            out.add_term(*k, a.mul(c));
        }
        Ok(out)
    }

    /// Leading exponent with a nonzero coefficient inside the window.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Multiplicative inverse. The leading coefficient must be an invertible
    /// q-series; the reliable relative precision is preserved.
    pub fn inv(&self) -> Result<Self> {
        let lead_exp = match self.valuation() {
            Some(v) => v,
            None => return Err(Error::NotInvertible("zero z-series".into())),
        };
        let lead = &self.coeffs[&lead_exp];
        let lead_inv = lead
            .inv()
            .map_err(|_| Error::NotInvertible(format!("leading coefficient at z^{lead_exp}")))?;
        let prec = self.z_order - lead_exp;
        // Unit part a(z) = Σ a_k z^k with a_0 = lead; b = 1/a recursively.
        let a: Vec<QSeries<K>> = (0..=prec).map(|k| self.coeff(lead_exp + k)).collect();
        let mut b: Vec<QSeries<K>> = Vec::with_capacity(prec as usize + 1);
        b.push(lead_inv.clone());
        for n in 1..=prec as usize {
            let mut sum = QSeries::zero(self.q_order);
            for k in 1..=n {
                if a[k].is_zero() || b[n - k].is_zero() {
                    continue;
                }
                sum = sum.checked_add(&a[k].mul(&b[n - k]))?;
            }
            b.push(sum.mul(&lead_inv).neg());
        }
        ZLaurent::new(
            b.into_iter()
                .enumerate()
                .map(|(k, c)| (k as i64 - lead_exp, c)),
            -lead_exp,
            prec - lead_exp,
            self.q_order,
        )
    }

    /// `self^e` for `e ≥ 0`; negative powers go through [`ZLaurent::inv`].
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc: Option<Self> = None;
        for _ in 0..e.unsigned_abs() {
            acc = Some(match acc {
                None => base.clone(),
                Some(a) => a.mul(&base),
            });
        }
        Ok(acc.unwrap_or_else(|| ZLaurent::one(base.precision(), self.q_order)))
    }

    /// `f(z) ↦ f(m z)`: the `z^k` coefficient picks up `m^k`.
    pub fn scale_var(&self, m: i64) -> Self {
        let m_k = K::from_bigint(&BigInt::from(m));
        ZLaurent {
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, c)| (*k, c.scale_field(&field_pow(&m_k, *k))))
                .collect(),
            ..*self
        }
    }

    /// Termwise `d/dz`.
    pub fn derivative(&self) -> Self {
        let mut coeffs = BTreeMap::new();
        for (k, c) in &self.coeffs {
            if *k != 0 {
                coeffs.insert(k - 1, c.scale_field(&K::from_int(*k)));
            }
        }
        let min_exp = if self.min_exp == 0 { 0 } else { self.min_exp - 1 };
        ZLaurent {
            coeffs,
            min_exp: min_exp.min(self.z_order - 1),
            z_order: self.z_order - 1,
            q_order: self.q_order,
        }
    }

    /// The `z^{-1}` coefficient, provided it is inside the reliable window.
    pub fn residue(&self) -> Result<QSeries<K>> {
        if self.z_order < -1 {
            return Err(Error::Window {
                min_exp: self.min_exp,
                z_order: self.z_order,
            });
        }
        Ok(self.coeff(-1))
    }

    pub fn map_coeffs<M: Fn(&QSeries<K>) -> QSeries<K>>(&self, f: M) -> Self {
        let mut out = ZLaurent {
            coeffs: BTreeMap::new(),
            ..*self
        };
        for (k, c) in &self.coeffs {
            out.add_term(*k, f(c));
        }
        out
    }
}
