//! Exact z-jets of the theta ratios entering the residue formulas, and the
//! normalizing q-series `G` and `G_NS`.
//!
//! The ratios are assembled as finite sums `Σ P_{j,c}(s) u^j e^{cz/2}` by
//! multiplying and dividing by binomials `(1 - a u^j e^{cz/2})`, and only then
//! expanded in `z`. Every such coefficient is a Laurent polynomial in `s`, so
//! the rational-function arithmetic stays cheap until the final factor
//! `1/(1 - y e^{-z})` is applied.

use std::any::{Any, TypeId};
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use once_cell::sync::Lazy;
use parking_lot::RwLock;

use crate::coeffring::{Prefactor, QSeries, RatFunc};
use crate::scalar::Field;
use crate::series::ZLaurent;

/// Keys are `(u-exponent, 2c)` for the term `u^j e^{cz}`.
#[derive(Clone, Debug)]
struct ExpPoly<K> {
    terms: BTreeMap<(u32, i64), RatFunc<K>>,
    u_order: u32,
}

impl<K: Field> ExpPoly<K> {
    fn exp_half(c2: i64, u_order: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((0, c2), RatFunc::one());
        ExpPoly { terms, u_order }
    }

    fn add_term(map: &mut BTreeMap<(u32, i64), RatFunc<K>>, key: (u32, i64), c: RatFunc<K>) {
        let sum = match map.remove(&key) {
            Some(prev) => &prev + &c,
            None => c,
        };
        if !sum.is_zero() {
            map.insert(key, sum);
        }
    }

    /// Multiply by `1 - a u^du e^{c2 z/2}`.
    fn mul_binomial(&mut self, a: &RatFunc<K>, du: u32, c2: i64) {
        if du > self.u_order {
            return;
        }
        let mut out = self.terms.clone();
        for (&(j, c), p) in &self.terms {
            if j + du <= self.u_order {
                Self::add_term(&mut out, (j + du, c + c2), -&(p * a));
            }
        }
        self.terms = out;
    }

    /// Divide by `1 - a u^du e^{c2 z/2}` with `du >= 1`, expanding geometrically.
    fn div_binomial(&mut self, a: &RatFunc<K>, du: u32, c2: i64) {
        assert!(du >= 1);
        if du > self.u_order {
            return;
        }
        let mut out: BTreeMap<(u32, i64), RatFunc<K>> = BTreeMap::new();
        for j in 0..=self.u_order {
            let mut row: BTreeMap<i64, RatFunc<K>> = self
                .terms
                .range((j, i64::MIN)..=(j, i64::MAX))
                .map(|(&(_, c), p)| (c, p.clone()))
                .collect();
            if j >= du {
                for (&(_, c), p) in out.range((j - du, i64::MIN)..=(j - du, i64::MAX)) {
                    let add = p * a;
                    let e = row.entry(c + c2).or_insert_with(RatFunc::zero);
                    *e = &*e + &add;
                }
            }
            for (c, p) in row {
                if !p.is_zero() {
                    out.insert((j, c), p);
                }
            }
        }
        self.terms = out;
    }

    /// Expand `Σ P u^j e^{c2 z/2}` in `z` through `z_order`.
    fn to_jet(&self, z_order: i64) -> ZLaurent<K> {
        let mut coeffs: Vec<BTreeMap<u32, RatFunc<K>>> = vec![BTreeMap::new(); z_order as usize + 1];
        for (&(j, c2), p) in &self.terms {
            let c = K::from_int(c2) / K::from_int(2);
            let mut w = K::one();
            for (n, slot) in coeffs.iter_mut().enumerate() {
                if n > 0 {
                    w = w * c.clone() / K::from_int(n as i64);
                }
                if w.is_zero() {
                    break;
                }
                let t = p.scale(&w);
                let e = slot.entry(j).or_insert_with(RatFunc::zero);
                *e = &*e + &t;
            }
        }
        let terms = coeffs.into_iter().enumerate().map(|(n, m)| {
            (
                n as i64,
                QSeries::from_coeffs(m.into_iter().filter(|(_, c)| !c.is_zero()), self.u_order),
            )
        });
        ZLaurent::new(terms, 0, z_order, self.u_order).expect("valid window")
    }
}

/// Jet of `φ(z) = (1 - e^{-z})/(1 - y e^{-z})`, constant in `q`.
pub fn phi_jet<K: Field>(z_order: i64, u_order: u32) -> ZLaurent<K> {
    let y = RatFunc::<K>::y_pow(1);
    let one_minus_y = &RatFunc::one() - &y;
    // 1 - e^{-z} = Σ_{n≥1} (-1)^{n+1} z^n / n!
    let mut terms = Vec::new();
    let mut fact = K::one();
    for n in 1..=z_order {
        fact = fact * K::from_int(n);
        let sign = if n % 2 == 1 { K::one() } else { -K::one() };
        terms.push((n, RatFunc::constant(sign / fact.clone())));
    }
    let num = ZLaurent::from_ratfuncs(terms, 0, z_order, u_order).expect("valid window");
    // 1 - y e^{-z} = (1 - y) + y (1 - e^{-z})
    let den = ZLaurent::one(z_order, u_order)
        .scale(&one_minus_y)
        .add(&num.scale(&y));
    num.mul(&den.inv().expect("unit constant term"))
}

/// `f(z) = θ(iz/2π)/θ(v + iz/2π)` as a z-jet through `z^{z_order}` with
/// q-coefficients through `q^{q_order}` (the series are graded by
/// `u = q^{1/2}`, so the body order is `2 q_order`).
pub fn f_ratio<K: Field>(q_order: u32, z_order: i64) -> ZLaurent<K> {
    cached(Kind::F, q_order, z_order, || build_f_ratio(q_order, z_order))
}

fn build_f_ratio<K: Field>(q_order: u32, z_order: i64) -> ZLaurent<K> {
    let z_order = z_order.max(1);
    f_ratio_tail::<K>(q_order, z_order)
        .mul(&phi_jet(z_order, 2 * q_order))
        .scale(&RatFunc::s())
}

/// The factor `R(z)` in `f = s φ(z) R(z)`:
/// `∏_{k≥1} (1 - q^k e^z)(1 - q^k e^{-z}) / ((1 - y q^k e^{-z})(1 - y^{-1} q^k e^z))`.
/// Its coefficients are Laurent polynomials in `s` and `R = 1 + O(q)`.
pub fn f_ratio_tail<K: Field>(q_order: u32, z_order: i64) -> ZLaurent<K> {
    cached(Kind::FTail, q_order, z_order, || {
        let u_order = 2 * q_order;
        let one = RatFunc::<K>::one();
        let y = RatFunc::<K>::y_pow(1);
        let y_inv = RatFunc::<K>::y_pow(-1);
        let mut p = ExpPoly::exp_half(0, u_order);
        for k in 1..=q_order {
            let du = 2 * k;
            p.mul_binomial(&one, du, 2);
            p.mul_binomial(&one, du, -2);
            p.div_binomial(&y, du, -2);
            p.div_binomial(&y_inv, du, 2);
        }
        p.to_jet(z_order.max(0))
    })
}

/// Body of the NS ratio `f_NS(z)`; the full function is the body times
/// [`F_NS_PREFACTOR`] `= √−1 q^{1/8}`.
pub fn f_ns_ratio<K: Field>(q_order: u32, z_order: i64) -> ZLaurent<K> {
    cached(Kind::FNs, q_order, z_order, || build_f_ns_ratio(q_order, z_order))
}

pub const F_NS_PREFACTOR: Prefactor = Prefactor::new(1, 1, 0);

fn build_f_ns_ratio<K: Field>(q_order: u32, z_order: i64) -> ZLaurent<K> {
    let z_order = z_order.max(1);
    let u_order = 2 * q_order;
    let one = RatFunc::<K>::one();
    let y = RatFunc::<K>::y_pow(1);
    let y_inv = RatFunc::<K>::y_pow(-1);

    let mut p = ExpPoly::exp_half(1, u_order);
    p.mul_binomial(&one, 0, -2);
    for k in 1..=q_order + 1 {
        p.mul_binomial(&one, 2 * k, 2);
        p.mul_binomial(&one, 2 * k, -2);
        p.div_binomial(&y, 2 * k - 1, -2);
        p.div_binomial(&y_inv, 2 * k - 1, 2);
    }
    p.to_jet(z_order)
}

/// `G(y, q) = y^{-1/2} ∏_{k≥1} (1 - y q^{k-1})(1 - y^{-1} q^k)/(1 - q^k)^2`.
pub fn big_g<K: Field>(q_order: u32) -> QSeries<K> {
    let u_order = 2 * q_order;
    let one = RatFunc::<K>::one();
    let y = RatFunc::<K>::y_pow(1);
    let y_inv = RatFunc::<K>::y_pow(-1);
    let mut g = QSeries::constant(&one - &y, u_order);
    for k in 1..=q_order {
        g = g
            .mul_binomial(&y, 2 * k)
            .mul_binomial(&y_inv, 2 * k)
            .div_binomial(&one, 2 * k)
            .div_binomial(&one, 2 * k);
    }
    g.with_prefactor(Prefactor::new(0, 0, -1))
}

/// `G_NS(y, q) = (√−1 q^{1/8})^{-1} ∏_{k≥1} (1 - y q^{k-1/2})(1 - y^{-1} q^{k-1/2})/(1 - q^k)^2`.
pub fn big_g_ns<K: Field>(q_order: u32) -> QSeries<K> {
    let u_order = 2 * q_order;
    let one = RatFunc::<K>::one();
    let y = RatFunc::<K>::y_pow(1);
    let y_inv = RatFunc::<K>::y_pow(-1);
    let mut g = QSeries::one(u_order);
    for k in 1..=q_order {
        g = g
            .mul_binomial(&y, 2 * k - 1)
            .mul_binomial(&y_inv, 2 * k - 1)
            .div_binomial(&one, 2 * k)
            .div_binomial(&one, 2 * k);
    }
    g.with_prefactor(F_NS_PREFACTOR.inverse())
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Kind {
    F,
    FTail,
    FNs,
}

type CacheKey = (TypeId, Kind, u32, i64);

static CACHE: Lazy<RwLock<HashMap<CacheKey, Arc<dyn Any + Send + Sync>>>> =
    Lazy::new(|| RwLock::new(HashMap::new()));

fn cached<K: Field, B: FnOnce() -> ZLaurent<K>>(
    kind: Kind,
    q_order: u32,
    z_order: i64,
    build: B,
) -> ZLaurent<K> {
    let key = (TypeId::of::<K>(), kind, q_order, z_order);
    if let Some(hit) = CACHE.read().get(&key) {
        if let Some(z) = hit.downcast_ref::<ZLaurent<K>>() {
            return z.clone();
        }
    }
    let value = build();
    CACHE.write().insert(key, Arc::new(value.clone()));
    value
}

/// Seed the in-memory cache with a precomputed `f_ratio(q_order, z_order)`.
pub fn prime_f_ratio<K: Field>(q_order: u32, z_order: i64, value: ZLaurent<K>) {
    let key = (TypeId::of::<K>(), Kind::F, q_order, z_order);
    CACHE.write().insert(key, Arc::new(value));
}

/// Seed the cache of [`f_ratio_tail`] with a previously computed value.
pub fn prime_f_ratio_tail<K: Field>(q_order: u32, z_order: i64, value: ZLaurent<K>) {
    let key = (TypeId::of::<K>(), Kind::FTail, q_order, z_order);
    CACHE.write().insert(key, Arc::new(value));
}

fn cached_keys<K: Field>(kind: Kind) -> Vec<(u32, i64)> {
    let id = TypeId::of::<K>();
    let mut keys: Vec<_> = CACHE
        .read()
        .keys()
        .filter(|(t, k, _, _)| *t == id && *k == kind)
        .map(|&(_, _, q, z)| (q, z))
        .collect();
    keys.sort_unstable();
    keys
}

/// `(q_order, z_order)` pairs of `f_ratio` values currently cached for `K`.
pub fn cached_f_ratio_keys<K: Field>() -> Vec<(u32, i64)> {
    cached_keys::<K>(Kind::F)
}

/// `(q_order, z_order)` pairs of `f_ratio_tail` values currently cached for `K`.
pub fn cached_f_ratio_tail_keys<K: Field>() -> Vec<(u32, i64)> {
    cached_keys::<K>(Kind::FTail)
}

pub fn clear_cache() {
    CACHE.write().clear();
}
