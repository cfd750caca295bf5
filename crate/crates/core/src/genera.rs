//! Genera of (virtual) complete intersections `Y^N_{m_1..m_r} ⊂ CP^{N-1}`:
//! Euler numbers, χ_y-genera, elliptic genera, NS elliptic genera and the
//! Witten-type specializations, all as residues at `z = 0`, together with the
//! closed-form generating functions used as independent checks.
//!
//! No smoothness is assumed: for arbitrary degrees the residue formula is
//! taken as the definition (a "virtual" genus).

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::coeffring::{Prefactor, QSeries, RatFunc};
use crate::error::{Error, Result};
use crate::scalar::{exp_i_pi, Field};
use crate::series::{inversion_series, TSeries, ZLaurent};
use crate::theta::{big_g, big_g_ns, f_ns_ratio, f_ratio, f_ratio_tail, phi_jet, F_NS_PREFACTOR};

/// A complete intersection of hypersurfaces of the given degrees in
/// `CP^{n-1}`, of complex dimension `d = n - 1 - r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CISpec {
    n: u32,
    degrees: Vec<u32>,
}

impl CISpec {
    pub fn new(n: u32, degrees: impl Into<Vec<u32>>) -> Result<Self> {
        let mut degrees = degrees.into();
        if degrees.is_empty() {
            return Err(Error::Domain("at least one degree is required".into()));
        }
        if degrees.contains(&0) {
            return Err(Error::Domain("degrees must be positive".into()));
        }
        if n < 2 {
            return Err(Error::Domain(format!("ambient CP^{} is too small", n as i64 - 1)));
        }
        if degrees.len() as u32 + 1 > n {
            return Err(Error::Rank(format!(
                "{} equations in CP^{} leave negative dimension",
                degrees.len(),
                n - 1
            )));
        }
        degrees.sort_unstable();
        Ok(CISpec { n, degrees })
    }

    pub fn hypersurface(n: u32, m: u32) -> Result<Self> {
        Self::new(n, vec![m])
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn r(&self) -> u32 {
        self.degrees.len() as u32
    }

    pub fn dim(&self) -> u32 {
        self.n - 1 - self.r()
    }

    pub fn degree_sum(&self) -> u64 {
        self.degrees.iter().map(|&m| m as u64).sum()
    }

    /// Calabi-Yau condition `Σ m_i = N`.
    pub fn is_calabi_yau(&self) -> bool {
        self.degree_sum() == self.n as u64
    }
}

impl fmt::Display for CISpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ds: Vec<String> = self.degrees.iter().map(|m| m.to_string()).collect();
        if ds.len() == 1 {
            write!(f, "Y^{}_{}", self.n, ds[0])
        } else {
            write!(f, "Y^{}_{{{}}}", self.n, ds.join(","))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenusKind {
    Euler,
    ChiY,
    Elliptic,
    NsElliptic,
}

impl GenusKind {
    pub fn name(self) -> &'static str {
        match self {
            GenusKind::Euler => "euler",
            GenusKind::ChiY => "chi_y",
            GenusKind::Elliptic => "elliptic",
            GenusKind::NsElliptic => "ns_elliptic",
        }
    }
}

/// A computed genus. Euler numbers and χ_y-genera are stored as constant
/// series; `certified` records that every coefficient passed the
/// Laurent-polynomial check.
#[derive(Clone, Debug, PartialEq)]
pub struct GenusResult<K> {
    pub spec: CISpec,
    pub kind: GenusKind,
    pub body: QSeries<K>,
    pub q_order: u32,
    pub certified: bool,
    pub warnings: Vec<String>,
}

impl<K: Field> GenusResult<K> {
    /// The Euler number, for `kind == Euler`.
    pub fn euler_value(&self) -> Option<BigInt> {
        if self.kind != GenusKind::Euler {
            return None;
        }
        let c = self.body.constant_term().as_constant()?;
        let (n, d) = c.to_ratio_parts();
        d.is_one().then_some(n)
    }
}

/// `χ(Y)`: the `z^{N-1}` coefficient of `∏ m_i z/(1 + m_i z) · (1 + z)^N`.
pub fn euler_ci(spec: &CISpec) -> BigInt {
    let d = spec.dim() as usize;
    // Work with ∏ m_i/(1 + m_i z) · (1 + z)^N through z^d.
    let mut acc = vec![BigInt::zero(); d + 1];
    acc[0] = BigInt::one();
    for &m in spec.degrees() {
        let m = BigInt::from(m);
        // multiply by m Σ (-m z)^k
        let mut out = vec![BigInt::zero(); d + 1];
        for (i, a) in acc.iter().enumerate() {
            let mut p = m.clone();
            for slot in out.iter_mut().skip(i) {
                *slot += a * &p;
                p = -(p * &m);
            }
        }
        acc = out;
    }
    // (1 + z)^N coefficients
    let n = spec.n() as usize;
    let mut binom = vec![BigInt::zero(); d + 1];
    let mut c = BigInt::one();
    for (k, slot) in binom.iter_mut().enumerate() {
        if k > n {
            break;
        }
        *slot = c.clone();
        c = c * BigInt::from(n - k) / BigInt::from(k + 1);
    }
    (0..=d).map(|k| &acc[k] * &binom[d - k]).sum()
}

/// `Σ_{k=2}^N (-1)^k C(N,k) m^{k-1}`, the hypersurface Euler number in closed form.
pub fn euler_oracle(spec: &CISpec) -> Result<BigInt> {
    if spec.r() != 1 {
        return Err(Error::Rank(format!(
            "closed form needs a hypersurface, got {} equations",
            spec.r()
        )));
    }
    let n = spec.n() as u64;
    let m = BigInt::from(spec.degrees()[0]);
    let mut total = BigInt::zero();
    let mut binom = BigInt::from(n * (n - 1) / 2);
    let mut m_pow = m.clone();
    for k in 2..=n {
        let term = &binom * &m_pow;
        if k % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
        binom = binom * BigInt::from(n - k) / BigInt::from(k + 1);
        m_pow *= &m;
    }
    Ok(total)
}

/// `∏ h(m_i z) / h(z)^N`.
fn integrand<K: Field>(h: &ZLaurent<K>, spec: &CISpec) -> Result<ZLaurent<K>> {
    let mut out = h.inv()?.pow(spec.n() as i64)?;
    for &m in spec.degrees() {
        out = out.mul(&h.scale_var(m as i64));
    }
    Ok(out)
}

/// `χ_{-y}(Y)` as a polynomial in `y = s^2` of degree at most `d`.
///
/// The ambient factor `∏ z(1 - y e^{-z})/(1 - e^{-z})` over `CP^{N-1}`
/// describes `T ⊕ O`, so the residue carries one extra `(1 - y)`.
pub fn chi_y_ci<K: Field>(spec: &CISpec) -> Result<RatFunc<K>> {
    let phi = phi_jet::<K>(spec.n() as i64 + 1, 0);
    let res = integrand(&phi, spec)?.residue()?.constant_term();
    let one_minus_y = &RatFunc::one() - &RatFunc::y_pow(1);
    let chi = res.checked_div(&one_minus_y)?;
    certify_polynomial_in_y(&chi, spec.dim())?;
    Ok(chi)
}

fn certify_polynomial_in_y<K: Field>(c: &RatFunc<K>, d: u32) -> Result<()> {
    let terms = c
        .laurent_terms()
        .ok_or_else(|| Error::Certificate(format!("chi_y did not reduce to a polynomial: {c:?}")))?;
    for (e, _) in terms {
        if e < 0 || e % 2 != 0 || e > 2 * d as i64 {
            return Err(Error::Certificate(format!(
                "chi_y has a y^{}/2 term outside [0, {d}]",
                e
            )));
        }
    }
    Ok(())
}

/// `Σ_N t^{N-1} χ_{-y}(Y^N_{m_1..m_r})`, as
/// `1/((1-t)(1-yt)) ∏ ((1-yt)^m - (1-t)^m)/((1-yt)^m - y(1-t)^m)`.
pub fn chi_y_genfun<K: Field>(degrees: &[u32], t_order: u32) -> Result<TSeries<K>> {
    let y = RatFunc::<K>::y_pow(1);
    let one = RatFunc::<K>::one();
    let lin = |a: &RatFunc<K>| {
        TSeries::from_ratfuncs([(0, one.clone()), (1, -a)], t_order, 0)
    };
    let one_minus_t = lin(&one);
    let one_minus_yt = lin(&y);
    let pow = |base: &TSeries<K>, e: u32| {
        let mut acc = TSeries::one(t_order, 0);
        for _ in 0..e {
            acc = acc.mul(base);
        }
        acc
    };
    let mut acc = one_minus_t.mul(&one_minus_yt).inv()?;
    let y_q = QSeries::constant(y.clone(), 0);
    for &m in degrees {
        let a = pow(&one_minus_yt, m);
        let b = pow(&one_minus_t, m);
        let num = a.sub(&b);
        let den = a.sub(&b.scale_q(&y_q));
        acc = acc.mul(&num).mul(&den.inv()?);
    }
    Ok(acc)
}

/// Coefficient of `u^k = q^{k/2}` must be a Laurent polynomial in `s` with
/// exponents `e ≡ d (mod 2)` and `|e| ≤ d + k`: each power of `q` in the
/// product expansion carries at most one power of `y^{±1}`.
fn check_elliptic_body<K: Field>(body: &QSeries<K>, d: u32) -> Result<()> {
    for (k, c) in body.terms() {
        let terms = c.laurent_terms().ok_or_else(|| {
            Error::Certificate(format!("u^{k} coefficient is not a Laurent polynomial in s"))
        })?;
        let bound = d as i64 + k as i64;
        if let Some((e, _)) = terms
            .iter()
            .find(|(e, _)| e.abs() > bound || (e - d as i64) % 2 != 0)
        {
            return Err(Error::Certificate(format!(
                "u^{k} coefficient has s^{e}, outside the admissible exponents for dimension {d}"
            )));
        }
    }
    Ok(())
}

fn check_ns_body<K: Field>(body: &QSeries<K>) -> Result<()> {
    for (k, c) in body.terms() {
        let terms = c.laurent_terms().ok_or_else(|| {
            Error::Certificate(format!("u^{k} coefficient is not a Laurent polynomial in s"))
        })?;
        if let Some((e, _)) = terms.iter().find(|(e, _)| e % 2 != 0) {
            return Err(Error::Certificate(format!(
                "u^{k} coefficient has an odd power s^{e}"
            )));
        }
    }
    Ok(())
}

/// The two-variable elliptic genus `χ(Y; q, y)` through `q^{q_order}`.
///
/// With `f = s φ R` and `G = s^{-1} (1 - y) G'`, the genus is
/// `s^{-d} / ((1 - y) G') · Res ∏ φ(m_i z)/φ(z)^N · ∏ R(m_i z)/R(z)^N`.
/// The first product is constant in `q`; the second and `G'` have Laurent
/// polynomial coefficients, so rational arithmetic is confined to the
/// residue pairing.
pub fn elliptic_genus<K: Field>(spec: &CISpec, q_order: u32) -> Result<GenusResult<K>> {
    let z_order = spec.n() as i64 + 1;
    let u_order = 2 * q_order;
    let a = integrand(&phi_jet::<K>(z_order, 0), spec)?;
    let b = integrand(&f_ratio_tail::<K>(q_order, z_order), spec)?;
    let mut res = QSeries::zero(u_order);
    for (k, ak) in a.terms() {
        let bk = b.coeff(-1 - k);
        if !bk.is_zero() {
            res = res.checked_add(&bk.scale(&ak.constant_term()))?;
        }
    }
    let one_minus_y = &RatFunc::one() - &RatFunc::y_pow(1);
    let g_tail = big_g::<K>(q_order)
        .with_prefactor(Prefactor::TRIVIAL)
        .scale(&one_minus_y.recip()?);
    let d = spec.dim() as i64;
    let body = res
        .mul(&g_tail.inv()?)
        .scale(&RatFunc::s_pow(-d).checked_div(&one_minus_y)?);
    check_elliptic_body(&body, spec.dim())?;
    Ok(GenusResult {
        spec: spec.clone(),
        kind: GenusKind::Elliptic,
        body,
        q_order,
        certified: true,
        warnings: Vec::new(),
    })
}

/// The same genus through the full ratio `f`, without factoring out `φ`.
pub fn elliptic_genus_direct<K: Field>(spec: &CISpec, q_order: u32) -> Result<QSeries<K>> {
    let f = f_ratio::<K>(q_order, spec.n() as i64 + 1);
    let g_inv = big_g::<K>(q_order).inv()?;
    integrand(&f, spec)?.residue()?.mul(&g_inv).fold()
}

/// `Σ_N t^{N-1} χ(Y^N_{m_1..m_r}; q, y) = ∏ f(m_j g(t)) / (G f'(g(t)))`
/// with `g` the compositional inverse of `f`.
pub fn elliptic_genfun<K: Field>(degrees: &[u32], t_order: u32, q_order: u32) -> Result<TSeries<K>> {
    let f = f_ratio::<K>(q_order, t_order as i64 + 1);
    let ms: Vec<i64> = degrees.iter().map(|&m| m as i64).collect();
    let g_inv = big_g::<K>(q_order).inv()?.fold()?;
    Ok(inversion_series(&f, &ms, t_order)?.scale_q(&g_inv))
}

/// The NS elliptic genus. The body is a series in `u = q^{1/2}` with even
/// powers of `s`; the prefactor is `(√−1 q^{1/8})^{-d}`.
pub fn ns_elliptic_genus<K: Field>(spec: &CISpec, q_order: u32) -> Result<GenusResult<K>> {
    let mut warnings = Vec::new();
    if (spec.n() as u64 + spec.degree_sum()) % 2 != 0 {
        warnings.push(format!(
            "N - sum(m) = {} is odd; the NS genus is outside its usual parity range",
            spec.n() as i64 - spec.degree_sum() as i64
        ));
    }
    let f = f_ns_ratio::<K>(q_order, spec.n() as i64 + 1);
    let g_inv = big_g_ns::<K>(q_order)
        .with_prefactor(Prefactor::TRIVIAL)
        .inv()?;
    let body = integrand(&f, spec)?.residue()?.mul(&g_inv);
    check_ns_body(&body)?;
    let prefactor = F_NS_PREFACTOR.pow(-(spec.dim() as i64));
    Ok(GenusResult {
        spec: spec.clone(),
        kind: GenusKind::NsElliptic,
        body: body.with_prefactor(prefactor),
        q_order,
        certified: true,
        warnings,
    })
}

pub fn euler_result<K: Field>(spec: &CISpec) -> GenusResult<K> {
    let e = euler_ci(spec);
    GenusResult {
        spec: spec.clone(),
        kind: GenusKind::Euler,
        body: QSeries::constant(RatFunc::constant(K::from_bigint(&e)), 0),
        q_order: 0,
        certified: true,
        warnings: Vec::new(),
    }
}

pub fn chi_y_result<K: Field>(spec: &CISpec) -> Result<GenusResult<K>> {
    Ok(GenusResult {
        spec: spec.clone(),
        kind: GenusKind::ChiY,
        body: QSeries::constant(chi_y_ci(spec)?, 0),
        q_order: 0,
        certified: true,
        warnings: Vec::new(),
    })
}

/// A Witten-type genus: a specialization of the elliptic or NS genus at
/// `y = ±1`, evaluated at `τ`.
#[derive(Clone, Debug, PartialEq)]
pub struct WittenValue<K> {
    pub k: u8,
    pub value: Complex<f64>,
    /// Exact body coefficients `(u-exponent, re, im)` at the specialized `s`.
    pub body: Vec<(u32, K, K)>,
    pub prefactor: Prefactor,
    pub q_order: u32,
}

/// Evaluate a Laurent polynomial in `s` at `s = 1` (`at_i = false`) or `s = i`.
fn specialize<K: Field>(c: &RatFunc<K>, at_i: bool) -> Result<(K, K)> {
    let terms = c
        .laurent_terms()
        .ok_or_else(|| Error::Certificate("coefficient is not a Laurent polynomial".into()))?;
    let (mut re, mut im) = (K::zero(), K::zero());
    for (e, a) in terms {
        if !at_i {
            re = re + a;
            continue;
        }
        match e.rem_euclid(4) {
            0 => re = re + a,
            1 => im = im + a,
            2 => re = re - a,
            _ => im = im - a,
        }
    }
    Ok((re, im))
}

/// σ_1 (`k = 1`, elliptic genus at `y = -1`), σ_2 (`k = 2`, NS genus at
/// `y = 1`) or σ_3 (`k = 3`, NS genus at `y = -1`).
pub fn witten_sigma<K: Field>(
    k: u8,
    spec: &CISpec,
    q_order: u32,
    tau: Complex<f64>,
) -> Result<WittenValue<K>> {
    if !(tau.im > 0.0) {
        return Err(Error::Domain("Im tau must be positive".into()));
    }
    let (genus, at_i) = match k {
        1 => (elliptic_genus::<K>(spec, q_order)?, true),
        2 => (ns_elliptic_genus::<K>(spec, q_order)?, false),
        3 => (ns_elliptic_genus::<K>(spec, q_order)?, true),
        _ => return Err(Error::Domain(format!("sigma index must be 1, 2 or 3, got {k}"))),
    };
    let prefactor = genus.body.prefactor();
    let mut body = Vec::new();
    for (j, c) in genus.body.terms() {
        let (re, im) = specialize(c, at_i)?;
        if !(re.is_zero() && im.is_zero()) {
            body.push((j, re, im));
        }
    }
    let v = Complex::new(if at_i { 0.5 } else { 0.0 }, 0.0);
    let u = exp_i_pi(tau);
    let mut sum = Complex::new(0.0, 0.0);
    for (j, re, im) in &body {
        sum += Complex::new(re.to_f64(), im.to_f64()) * u.powu(*j);
    }
    Ok(WittenValue {
        k,
        value: sum * prefactor.eval(v, tau),
        body,
        prefactor,
        q_order,
    })
}

/// `true` when every coefficient of `body` has integer Laurent coefficients.
pub fn has_integral_coefficients<K: Field>(body: &QSeries<K>) -> bool {
    body.terms().all(|(_, c)| {
        c.laurent_terms()
            .is_some_and(|ts| ts.iter().all(|(_, a)| a.is_integer()))
    })
}
