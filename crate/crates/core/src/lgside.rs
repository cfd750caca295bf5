//! Landau-Ginzburg orbifold sums: finite sums over twisted sectors `(a, b)`
//! of theta-function ratios, evaluated in floating point, and a checker that
//! compares them with the exact geometric series.
//!
//! Every sum refuses to evaluate when the hypothesis of its correspondence
//! theorem fails. For complete intersections the sector poles
//! `(-v + a + bτ)/m_i` of different degrees must be pairwise distinct modulo
//! the lattice; in particular equal degrees are rejected.

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genera::{elliptic_genus, ns_elliptic_genus, CISpec};
use crate::scalar::{c, Real};
use crate::theta::{theta_num, EvalPoint, ThetaKind};
use num_rational::BigRational;

/// Tolerance for "is an integer" preconditions.
pub const INTEGER_TOL: f64 = 1e-9;
/// Minimum lattice distance between sector poles of different degrees.
pub const POLE_SEPARATION: f64 = 1e-6;

/// Evaluation point and tolerance for the sector sums.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LGParams<F> {
    pub point: EvalPoint<F>,
    pub tol: F,
}

impl<F: Real> LGParams<F> {
    pub fn new(v: Complex<F>, tau: Complex<F>) -> Result<Self> {
        Self::with_tol(v, tau, F::from_f64(1e-9))
    }

    pub fn with_tol(v: Complex<F>, tau: Complex<F>, tol: F) -> Result<Self> {
        if !(tol > F::zero()) {
            return Err(Error::Domain("tolerance must be positive".into()));
        }
        Ok(LGParams {
            point: EvalPoint::new(v, tau)?,
            tol,
        })
    }

    pub fn v(&self) -> Complex<F> {
        self.point.v
    }

    pub fn tau(&self) -> Complex<F> {
        self.point.tau
    }

    fn at_v(&self, v: Complex<F>) -> Result<Self> {
        Self::with_tol(v, self.tau(), self.tol)
    }
}

/// Compensated complex summation.
#[derive(Clone, Copy, Debug)]
struct Kahan<F> {
    sum: Complex<F>,
    comp: Complex<F>,
}

impl<F: Real> Kahan<F> {
    fn new() -> Self {
        Kahan {
            sum: Complex::zero(),
            comp: Complex::zero(),
        }
    }

    fn add(&mut self, x: Complex<F>) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }
}

fn is_integer<F: Real>(x: Complex<F>) -> bool {
    let re = x.re.as_f64();
    (re - re.round()).abs() < INTEGER_TOL && x.im.as_f64().abs() < INTEGER_TOL
}

fn require(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Precondition(what()))
    }
}

fn require_positive(n: u32, degrees: &[u32]) -> Result<()> {
    require(n >= 1 && !degrees.is_empty() && !degrees.contains(&0), || {
        "N and all degrees must be positive".into()
    })
}

fn excess(n: u32, degrees: &[u32]) -> i64 {
    n as i64 - degrees.iter().map(|&m| m as i64).sum::<i64>()
}

fn require_even(n: u32, degrees: &[u32]) -> Result<()> {
    let e = excess(n, degrees);
    require(e % 2 == 0, || format!("N - sum(m) = {e} must be even"))
}

fn require_integral_shift<F: Real>(n: u32, degrees: &[u32], v: Complex<F>) -> Result<()> {
    let e = excess(n, degrees);
    let x = v * c::<F>(e as f64);
    require(is_integer(x), || {
        format!(
            "(N - sum(m)) v = {}{:+}i must be an integer",
            x.re.as_f64(),
            x.im.as_f64()
        )
    })
}

fn pow_n<F: Real>(x: Complex<F>, n: u32) -> Complex<F> {
    x.powu(n)
}

fn e2pi_i<F: Real>(x: Complex<F>) -> Complex<F> {
    (Complex::new(F::zero(), F::from_f64(2.0) * F::PI()) * x).exp()
}

/// Sector pole `(-v + a + bτ + shift)/m`.
fn sector_point<F: Real>(v: Complex<F>, tau: Complex<F>, m: u32, a: i64, b: i64, ns: bool) -> Complex<F> {
    let mut x = -v + c::<F>(a as f64) + tau * c::<F>(b as f64);
    if ns {
        x = x + tau * c::<F>(0.5);
    }
    x / c::<F>(m as f64)
}

/// Distance from `d` to the lattice `Z + Zτ`.
fn lattice_distance<F: Real>(d: Complex<F>, tau: Complex<F>) -> f64 {
    let n = (d.im / tau.im).round();
    let w = d - tau * n;
    let w = w - c::<F>(w.re.round().as_f64());
    let mut best = f64::INFINITY;
    for i in -1..=1 {
        for j in -1..=1 {
            let z = w + c::<F>(i as f64) + tau * c::<F>(j as f64);
            best = best.min(z.norm().as_f64());
        }
    }
    best
}

/// Reject degree lists whose shifted sector poles meet modulo the lattice.
pub fn check_pole_collision<F: Real>(
    degrees: &[u32],
    v: Complex<F>,
    tau: Complex<F>,
    ns: bool,
) -> Result<()> {
    for (i, &mi) in degrees.iter().enumerate() {
        for &mj in &degrees[i + 1..] {
            if mi == mj {
                return Err(Error::PoleCollision {
                    m_i: mi,
                    sector_i: (0, 0),
                    m_j: mj,
                    sector_j: (0, 0),
                });
            }
            for a in 0..mi {
                for b in 0..mi {
                    let p = sector_point(v, tau, mi, a as i64, b as i64, ns);
                    for a2 in 0..mj {
                        for b2 in 0..mj {
                            let q = sector_point(v, tau, mj, a2 as i64, b2 as i64, ns);
                            if lattice_distance(p - q, tau) <= POLE_SEPARATION {
                                return Err(Error::PoleCollision {
                                    m_i: mi,
                                    sector_i: (a, b),
                                    m_j: mj,
                                    sector_j: (a2, b2),
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Summand of the hypersurface elliptic sum at sector `(a, b)`:
/// `e^{2πi b v} (θ((m-1)v/m + a/m + bτ/m) / θ(-v/m + a/m + bτ/m))^N`.
pub fn elliptic_sector_term<F: Real>(
    n: u32,
    m: u32,
    a: i64,
    b: i64,
    p: &LGParams<F>,
) -> Result<Complex<F>> {
    let (v, tau) = (p.v(), p.tau());
    let mf = c::<F>(m as f64);
    let shift = (c::<F>(a as f64) + tau * c::<F>(b as f64)) / mf;
    let num = theta_num(ThetaKind::Theta, v * c::<F>(m as f64 - 1.0) / mf + shift, tau)?;
    let den = theta_num(ThetaKind::Theta, -v / mf + shift, tau)?;
    Ok(e2pi_i(v * c::<F>(b as f64)) * pow_n(num / den, n))
}

/// Summand of the hypersurface NS sum at sector `(a, b)`, without the
/// overall `-1/m`: `(-1)^a y^{b+1/2} (θ₂(v + x)/θ(x))^N`, `x = (-v + a + bτ + τ/2)/m`.
pub fn ns_sector_term<F: Real>(
    n: u32,
    m: u32,
    a: i64,
    b: i64,
    p: &LGParams<F>,
) -> Result<Complex<F>> {
    let (v, tau) = (p.v(), p.tau());
    let x = sector_point(v, tau, m, a, b, true);
    let num = theta_num(ThetaKind::Theta2, v + x, tau)?;
    let den = theta_num(ThetaKind::Theta, x, tau)?;
    let sign = if a.rem_euclid(2) == 0 { F::one() } else { -F::one() };
    Ok(e2pi_i(v * c::<F>(b as f64 + 0.5)) * pow_n(num / den, n) * sign)
}

/// `(1/m) Σ_{a,b} e^{2πi b v} (θ((m-1)v/m + a/m + bτ/m)/θ(-v/m + a/m + bτ/m))^N`,
/// the LG counterpart of `χ(Y^N_m; q, y)`. Needs `(N - m) v ∈ Z`.
pub fn lg_elliptic_hyp<F: Real>(n: u32, m: u32, p: &LGParams<F>) -> Result<Complex<F>> {
    require_positive(n, &[m])?;
    require_integral_shift(n, &[m], p.v())?;
    let mut acc = Kahan::new();
    for a in 0..m as i64 {
        for b in 0..m as i64 {
            acc.add(elliptic_sector_term(n, m, a, b, p)?);
        }
    }
    Ok(acc.sum / c::<F>(m as f64))
}

/// `(1/m) Σ (-1)^b (θ(1/2 - 1/2m + a/m + bτ/m)/θ(-1/2m + a/m + bτ/m))^N`.
/// Needs `N - m` even.
pub fn lg_sigma1_hyp<F: Real>(n: u32, m: u32, tau: Complex<F>) -> Result<Complex<F>> {
    require_positive(n, &[m])?;
    require_even(n, &[m])?;
    let p = LGParams::new(c(0.5), tau)?;
    let mf = m as f64;
    let mut acc = Kahan::new();
    for a in 0..m {
        for b in 0..m {
            let shift = (c::<F>(a as f64) + tau * c::<F>(b as f64)) / c::<F>(mf);
            let num = theta_num(ThetaKind::Theta, c::<F>(0.5 - 0.5 / mf) + shift, p.tau())?;
            let den = theta_num(ThetaKind::Theta, c::<F>(-0.5 / mf) + shift, p.tau())?;
            let sign = if b % 2 == 0 { F::one() } else { -F::one() };
            acc.add(pow_n(num / den, n) * sign);
        }
    }
    Ok(acc.sum / c::<F>(mf))
}

/// `-(1/m) Σ (-1)^a y^{b+1/2} (θ₂(v - v/m + a/m + bτ/m + τ/2m)/θ(-v/m + a/m + bτ/m + τ/2m))^N`,
/// the LG counterpart of the NS genus. Needs `N - m` even and `(N - m) v ∈ Z`.
pub fn lg_ns_hyp<F: Real>(n: u32, m: u32, p: &LGParams<F>) -> Result<Complex<F>> {
    require_positive(n, &[m])?;
    require_even(n, &[m])?;
    require_integral_shift(n, &[m], p.v())?;
    let mut acc = Kahan::new();
    for a in 0..m as i64 {
        for b in 0..m as i64 {
            acc.add(ns_sector_term(n, m, a, b, p)?);
        }
    }
    Ok(-acc.sum / c::<F>(m as f64))
}

/// σ₂ (`k = 2`): `-(1/m) Σ (-1)^a (θ₂(x)/θ(x))^N`, `x = a/m + bτ/m + τ/2m`;
/// σ₃ (`k = 3`): `(i/m) Σ (-1)^{a+b} (θ₃(1/2m + x)/θ(1/2m + x))^N`.
/// Needs `N - m` even.
pub fn lg_sigma23_hyp<F: Real>(k: u8, n: u32, m: u32, tau: Complex<F>) -> Result<Complex<F>> {
    require_positive(n, &[m])?;
    require_even(n, &[m])?;
    let mf = m as f64;
    let mut acc = Kahan::new();
    for a in 0..m {
        for b in 0..m {
            let x = (c::<F>(a as f64) + tau * c::<F>(b as f64 + 0.5)) / c::<F>(mf);
            let term = match k {
                2 => {
                    let r = theta_num(ThetaKind::Theta2, x, tau)? / theta_num(ThetaKind::Theta, x, tau)?;
                    let sign = if a % 2 == 0 { F::one() } else { -F::one() };
                    pow_n(r, n) * sign
                }
                3 => {
                    let w = x + c::<F>(0.5 / mf);
                    let r = theta_num(ThetaKind::Theta3, w, tau)? / theta_num(ThetaKind::Theta, w, tau)?;
                    let sign = if (a + b) % 2 == 0 { F::one() } else { -F::one() };
                    pow_n(r, n) * sign
                }
                _ => return Err(Error::Domain(format!("sigma index must be 2 or 3, got {k}"))),
            };
            acc.add(term);
        }
    }
    let scale = if k == 2 {
        Complex::new(-F::one(), F::zero())
    } else {
        Complex::new(F::zero(), F::one())
    };
    Ok(acc.sum * scale / c::<F>(mf))
}

/// `Σ_h (1/m_h) Σ_{a,b} y^b (θ(v + x)/θ(x))^N ∏_{i≠h} θ(m_i x)/θ(v + m_i x)`
/// with `x = (-v + a + bτ)/m_h`. Needs `(N - Σ m_i) v ∈ Z` and separated poles.
pub fn lg_elliptic_ci<F: Real>(n: u32, degrees: &[u32], p: &LGParams<F>) -> Result<Complex<F>> {
    require_positive(n, degrees)?;
    require_integral_shift(n, degrees, p.v())?;
    check_pole_collision(degrees, p.v(), p.tau(), false)?;
    ci_sum(n, degrees, p, false)
}

/// NS analogue of [`lg_elliptic_ci`]:
/// `-Σ_h (1/m_h) Σ (-1)^a y^{b+1/2} (θ₂(v + x)/θ(x))^N ∏_{i≠h} θ(m_i x)/θ₂(v + m_i x)`,
/// `x = (-v + a + bτ + τ/2)/m_h`. Needs `N - Σ m_i` even, `(N - Σ m_i) v ∈ Z`.
pub fn lg_ns_ci<F: Real>(n: u32, degrees: &[u32], p: &LGParams<F>) -> Result<Complex<F>> {
    require_positive(n, degrees)?;
    require_even(n, degrees)?;
    require_integral_shift(n, degrees, p.v())?;
    check_pole_collision(degrees, p.v(), p.tau(), true)?;
    ci_sum(n, degrees, p, true)
}

/// The elliptic CI sum at `v = 1/2`. Needs `N - Σ m_i` even.
pub fn lg_sigma1_ci<F: Real>(n: u32, degrees: &[u32], tau: Complex<F>) -> Result<Complex<F>> {
    require_positive(n, degrees)?;
    require_even(n, degrees)?;
    let p = LGParams::new(c(0.5), tau)?;
    check_pole_collision(degrees, p.v(), tau, false)?;
    ci_sum(n, degrees, &p, false)
}

fn ci_sum<F: Real>(n: u32, degrees: &[u32], p: &LGParams<F>, ns: bool) -> Result<Complex<F>> {
    let (v, tau) = (p.v(), p.tau());
    let (top, side) = if ns {
        (ThetaKind::Theta2, ThetaKind::Theta2)
    } else {
        (ThetaKind::Theta, ThetaKind::Theta)
    };
    let mut total = Kahan::new();
    for (h, &mh) in degrees.iter().enumerate() {
        let mut acc = Kahan::new();
        for a in 0..mh as i64 {
            for b in 0..mh as i64 {
                let x = sector_point(v, tau, mh, a, b, ns);
                let ratio = theta_num(top, v + x, tau)? / theta_num(ThetaKind::Theta, x, tau)?;
                let mut term = pow_n(ratio, n);
                for (i, &mi) in degrees.iter().enumerate() {
                    if i != h {
                        let mx = x * c::<F>(mi as f64);
                        term = term * theta_num(ThetaKind::Theta, mx, tau)? / theta_num(side, v + mx, tau)?;
                    }
                }
                if ns {
                    let sign = if a.rem_euclid(2) == 0 { F::one() } else { -F::one() };
                    term = term * e2pi_i(v * c::<F>(b as f64 + 0.5)) * sign;
                } else {
                    term = term * e2pi_i(v * c::<F>(b as f64));
                }
                acc.add(term);
            }
        }
        total.add(acc.sum / c::<F>(mh as f64));
    }
    Ok(if ns { -total.sum } else { total.sum })
}

/// Which correspondence to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Correspondence {
    /// Elliptic genus at `(v, τ)`.
    Elliptic,
    /// NS elliptic genus at `(v, τ)`.
    Ns,
    /// σ₁: elliptic genus at `v = 1/2`.
    Sigma1,
    /// σ₂: NS genus at `v = 0`.
    Sigma2,
    /// σ₃: NS genus at `v = 1/2`.
    Sigma3,
}

impl Correspondence {
    pub fn name(self) -> &'static str {
        match self {
            Correspondence::Elliptic => "elliptic",
            Correspondence::Ns => "ns",
            Correspondence::Sigma1 => "sigma1",
            Correspondence::Sigma2 => "sigma2",
            Correspondence::Sigma3 => "sigma3",
        }
    }
}

/// Outcome of comparing the geometric series with the LG sector sum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrespondenceReport {
    pub spec: CISpec,
    pub kind: Correspondence,
    pub v: Complex<f64>,
    pub tau: Complex<f64>,
    pub geometric_value: Complex<f64>,
    pub lg_value: Complex<f64>,
    pub abs_diff: f64,
    pub rel_diff: f64,
    pub q_order_used: u32,
    pub truncation_bound: f64,
    pub preconditions: Vec<(String, bool)>,
}

impl CorrespondenceReport {
    /// `rel_diff` below `tol`, or both sides below `tol` in absolute value.
    pub fn agrees(&self, tol: f64) -> bool {
        self.rel_diff < tol || (self.geometric_value.norm() < tol && self.lg_value.norm() < tol)
    }
}

/// Evaluate the exact geometric series at `(v, τ)` and the matching LG sum.
///
/// Fails with a truncation error when `|q|^{q_order+1} ≥ tol/10`.
pub fn check_correspondence(
    spec: &CISpec,
    p: &LGParams<f64>,
    q_order: u32,
    kind: Correspondence,
) -> Result<CorrespondenceReport> {
    let tau = p.tau();
    let q_abs = p.point.q.norm();
    let bound = q_abs.powi(q_order as i32 + 1);
    let budget = p.tol / 10.0;
    if bound >= budget {
        return Err(Error::Truncation {
            exponent: q_order + 1,
            bound,
            budget,
        });
    }
    let p = match kind {
        Correspondence::Sigma1 | Correspondence::Sigma3 => p.at_v(c(0.5))?,
        Correspondence::Sigma2 => p.at_v(c(0.0))?,
        _ => *p,
    };
    let v = p.v();
    let (n, ds) = (spec.n(), spec.degrees());
    let hyp = ds.len() == 1;
    let mut preconditions = Vec::new();
    let e = excess(n, ds);
    let ns_like = matches!(
        kind,
        Correspondence::Ns | Correspondence::Sigma2 | Correspondence::Sigma3
    );
    if ns_like || kind == Correspondence::Sigma1 {
        preconditions.push((format!("N - sum(m) = {e} is even"), e % 2 == 0));
    }
    if kind != Correspondence::Sigma1 {
        preconditions.push((
            "(N - sum(m)) v is an integer".to_string(),
            is_integer(v * e as f64),
        ));
    }
    if !hyp {
        preconditions.push((
            "sector pole sets {(-v + a + b tau)/m_i} pairwise disjoint modulo the lattice"
                .to_string(),
            check_pole_collision(ds, v, tau, ns_like).is_ok(),
        ));
        if ns_like {
            preconditions.push(("NS sectors summed without a q^{-1/2} factor".to_string(), true));
        }
    }

    let geometric_value = if ns_like {
        ns_elliptic_genus::<BigRational>(spec, q_order)?.body.eval(v, tau)?
    } else {
        elliptic_genus::<BigRational>(spec, q_order)?.body.eval(v, tau)?
    };
    let lg_value = match (kind, hyp) {
        (Correspondence::Elliptic, true) => lg_elliptic_hyp(n, ds[0], &p)?,
        (Correspondence::Elliptic, false) => lg_elliptic_ci(n, ds, &p)?,
        (Correspondence::Sigma1, true) => lg_sigma1_hyp(n, ds[0], tau)?,
        (Correspondence::Sigma1, false) => lg_sigma1_ci(n, ds, tau)?,
        (Correspondence::Ns, true) => lg_ns_hyp(n, ds[0], &p)?,
        (Correspondence::Sigma2, true) => lg_sigma23_hyp(2, n, ds[0], tau)?,
        (Correspondence::Sigma3, true) => lg_sigma23_hyp(3, n, ds[0], tau)?,
        (_, false) => lg_ns_ci(n, ds, &p)?,
    };
    let abs_diff = (geometric_value - lg_value).norm();
    let scale = geometric_value.norm().max(lg_value.norm());
    let rel_diff = if scale > 0.0 { abs_diff / scale } else { 0.0 };
    Ok(CorrespondenceReport {
        spec: spec.clone(),
        kind,
        v,
        tau,
        geometric_value,
        lg_value,
        abs_diff,
        rel_diff,
        q_order_used: q_order,
        truncation_bound: bound,
        preconditions,
    })
}
