//! Invariant suite covering every module, runnable from a release binary.
//!
//! Random inputs come from a seeded generator, so a run is reproducible.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::coeffring::{Poly, QSeries, RatFunc};
use crate::genera::{
    chi_y_ci, elliptic_genfun, elliptic_genus, euler_ci, euler_oracle, has_integral_coefficients,
    witten_sigma, CISpec,
};
use crate::lgside::{
    check_correspondence, elliptic_sector_term, lg_elliptic_ci, lg_elliptic_hyp, lg_ns_ci,
    lg_ns_hyp, lg_sigma23_hyp, Correspondence, LGParams,
};
use crate::serial::{genus_from_json, genus_to_json};
use crate::series::{compose, residue_series, inversion_series, revert, ZLaurent};
use crate::theta::{big_g, eta_num, f_ratio, theta_deriv_num, theta_num, ThetaKind};

type K = BigRational;
type C = Complex<f64>;
type Check = std::result::Result<(), String>;

const SEED: u64 = 0x5eed_e11e;

/// Outcome of one named invariant.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub module: &'static str,
    pub name: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SelftestReport {
    pub checks: Vec<CheckOutcome>,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: std::result::Result<T, E>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

const CHECKS: &[(&str, &str, fn() -> Check)] = &[
    ("coeffring", "ratfunc ring axioms", ratfunc_ring_axioms),
    ("coeffring", "ratfunc reciprocal", ratfunc_reciprocal),
    ("coeffring", "qseries inverse", qseries_inverse),
    ("coeffring", "evaluation is a ring homomorphism", eval_homomorphism),
    ("series", "residue of a derivative vanishes", residue_of_derivative),
    ("series", "composition with the reversion", compose_revert),
    ("series", "residue generating-function lemma", residue_inversion),
    ("series", "low-order residue closed forms", residue_closed_forms),
    ("theta", "theta'(0) = 2 pi eta^3", theta_eta),
    ("theta", "quasi-periodicity", quasi_periodicity),
    ("theta", "translates of theta", theta_translates),
    ("theta", "symbolic f'(0) matches numeric theta", f_linear_numeric),
    ("theta", "G residues at lattice points", lemma_g),
    ("genera", "Euler number and oracle", euler_numbers),
    ("genera", "chi_y at y = 1 is the Euler number", chi_y_at_one),
    ("genera", "base cases", base_cases),
    ("genera", "q^0 slice is chi_y", q0_slice),
    ("genera", "duality and integrality", duality),
    ("genera", "generating function agrees", genfun),
    ("lgside", "sector shift invariance", sector_shift),
    ("lgside", "single-degree CI sums equal hypersurface sums", degeneration),
    ("lgside", "preconditions are enforced", preconditions),
    ("lgside", "geometric and LG sides agree", correspondence),
    ("serial", "JSON round trip", json_round_trip),
];

/// Run every check. Panics inside a check are reported as failures.
pub fn run() -> SelftestReport {
    let checks = CHECKS
        .iter()
        .map(|&(module, name, f)| {
            let (passed, detail) = match catch_unwind(AssertUnwindSafe(f)) {
                Ok(Ok(())) => (true, String::new()),
                Ok(Err(e)) => (false, e),
                Err(p) => {
                    let msg = p
                        .downcast_ref::<String>()
                        .cloned()
                        .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                        .unwrap_or_default();
                    (false, format!("panicked: {msg}"))
                }
            };
            CheckOutcome {
                module,
                name,
                passed,
                detail,
            }
        })
        .collect();
    SelftestReport { checks }
}

fn rng() -> StdRng {
    StdRng::seed_from_u64(SEED)
}

fn rat(n: i64, d: i64) -> K {
    K::new(n.into(), d.into())
}

fn rand_poly(r: &mut StdRng, max_deg: usize) -> Poly<K> {
    let deg = r.gen_range(0..=max_deg);
    Poly::from_ints(&(0..=deg).map(|_| r.gen_range(-9..=9)).collect::<Vec<_>>())
}

fn rand_ratfunc(r: &mut StdRng) -> RatFunc<K> {
    loop {
        if let Ok(f) = RatFunc::new(rand_poly(r, 4), rand_poly(r, 4)) {
            return f;
        }
    }
}

fn rand_rat(r: &mut StdRng) -> K {
    loop {
        let n = r.gen_range(-9..=9);
        if n != 0 {
            return rat(n, r.gen_range(1..=5));
        }
    }
}

fn jet(cs: &[K]) -> ZLaurent<K> {
    let terms = cs
        .iter()
        .enumerate()
        .map(|(i, c)| (i as i64 + 1, RatFunc::constant(c.clone())));
    ZLaurent::from_ratfuncs(terms, 1, cs.len() as i64, 0).expect("valid jet")
}

fn close(a: C, b: C, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm())
}

fn ci(n: u32, d: &[u32]) -> CISpec {
    CISpec::new(n, d.to_vec()).expect("valid spec")
}

fn ratfunc_ring_axioms() -> Check {
    let mut r = rng();
    for _ in 0..30 {
        let (a, b, c) = (rand_ratfunc(&mut r), rand_ratfunc(&mut r), rand_ratfunc(&mut r));
        ensure!(&(&a * &b) * &c == &a * &(&b * &c), "associativity");
        ensure!(&a * &b == &b * &a && &a + &b == &b + &a, "commutativity");
        ensure!(&a * &(&b + &c) == &(&a * &b) + &(&a * &c), "distributivity");
    }
    Ok(())
}

fn ratfunc_reciprocal() -> Check {
    let mut r = rng();
    for _ in 0..30 {
        let a = rand_ratfunc(&mut r);
        if a.is_zero() {
            continue;
        }
        ensure!((&a * &ok(a.recip())?).is_one(), "a * (1/a) != 1 for {a}");
    }
    Ok(())
}

fn qseries_inverse() -> Check {
    let mut r = rng();
    for _ in 0..50 {
        let c0 = rand_poly(&mut r, 2);
        if c0.is_zero() {
            continue;
        }
        let mut terms = vec![(0, RatFunc::from_poly(c0))];
        terms.extend((1..=8).map(|k| (k, RatFunc::from_poly(rand_poly(&mut r, 4)))));
        let a = QSeries::from_coeffs(terms, 8);
        ensure!(a.mul(&ok(a.inv())?).is_one(), "a * a^-1 != 1");
    }
    Ok(())
}

fn eval_homomorphism() -> Check {
    let mut r = rng();
    let mut tested = 0;
    while tested < 10 {
        let (a, b) = (rand_ratfunc(&mut r), rand_ratfunc(&mut r));
        let s = C::from_polar(r.gen_range(0.5..2.0), r.gen_range(0.0..2.0 * PI));
        let (Ok(ea), Ok(eb), Ok(eab)) = (a.eval(s), b.eval(s), (&a * &b).eval(s)) else {
            continue;
        };
        tested += 1;
        let scale = eab.norm().max((ea * eb).norm()).max(1.0);
        ensure!((eab - ea * eb).norm() <= 1e-12 * scale, "eval(ab) != eval(a)eval(b) at {s}");
    }
    Ok(())
}

fn residue_of_derivative() -> Check {
    let mut r = rng();
    for _ in 0..100 {
        let min_exp: i64 = r.gen_range(-4..=0);
        let len: i64 = r.gen_range(1..=8);
        let terms: Vec<_> = (0..len)
            .map(|i| (min_exp + i, r.gen_range(-9..=9), r.gen_range(1..=4)))
            .collect();
        let f = ok(ZLaurent::<K>::from_rationals(&terms, min_exp, (min_exp + len).max(0), 2))?;
        ensure!(ok(f.derivative().residue())?.is_zero(), "Res F' != 0");
    }
    Ok(())
}

fn compose_revert() -> Check {
    let mut r = rng();
    for _ in 0..20 {
        let cs: Vec<K> = (0..7)
            .map(|i| if i == 0 { rand_rat(&mut r) } else { rat(r.gen_range(-9..=9), r.gen_range(1..=4)) })
            .collect();
        let terms = cs.iter().enumerate().map(|(i, c)| {
            let q = QSeries::from_coeffs(
                [(0, RatFunc::constant(c.clone())), (2, RatFunc::from_int(r.gen_range(-3..=3)))],
                8,
            );
            (i as i64 + 1, q)
        });
        let terms: Vec<_> = terms.collect();
        let f = ok(ZLaurent::new(terms, 1, 7, 8))?;
        let fg = ok(compose(&f, &ok(revert(&f, 6))?))?;
        for k in 0..=6 {
            let expect = if k == 1 { QSeries::one(8) } else { QSeries::zero(8) };
            ensure!(fg.coeff(k) == expect, "f(g(t)) at t^{k}");
        }
    }
    Ok(())
}

fn residue_inversion() -> Check {
    let mut r = rng();
    for _ in 0..10 {
        let cs: Vec<K> = (0..8)
            .map(|i| if i == 0 { rand_rat(&mut r) } else { rat(r.gen_range(-9..=9), r.gen_range(1..=4)) })
            .collect();
        let ms: Vec<i64> = (0..r.gen_range(1..=3)).map(|_| r.gen_range(1..=4)).collect();
        let f = jet(&cs);
        let (lhs, rhs) = (ok(residue_series(&f, &ms, 6))?, ok(inversion_series(&f, &ms, 6))?);
        for n in 0..=6 {
            ensure!(lhs.coeff(n) == rhs.coeff(n), "t^{n} for ms = {ms:?}");
        }
    }
    Ok(())
}

fn residue_closed_forms() -> Check {
    let mut r = rng();
    for _ in 0..20 {
        let (a, b, c) = (rand_rat(&mut r), rand_rat(&mut r), rand_rat(&mut r));
        let f = jet(&[a.clone(), b.clone() / rat(2, 1), c.clone() / rat(6, 1), rat(1, 7)]);
        let f_inv = ok(f.inv())?;
        for m in 1..=5i64 {
            let scaled = f.scale_var(m);
            let res = |n: i64| -> std::result::Result<K, String> {
                let p = ok(f_inv.pow(n + 1))?;
                ok(scaled.mul(&p).residue())?
                    .coeff(0)
                    .as_constant()
                    .ok_or_else(|| "non-constant residue".to_string())
            };
            let mk = rat(m, 1);
            let a2 = a.clone() * a.clone();
            let a3 = a2.clone() * a.clone();
            ensure!(res(1)? == mk.clone() / a.clone(), "n = 1, m = {m}");
            let n2 = mk.clone() * (mk.clone() - rat(3, 1)) / rat(2, 1) * b.clone() / a3.clone();
            ensure!(res(2)? == n2, "n = 2, m = {m}");
            let n3 = (mk.clone() * mk.clone() * mk.clone() - rat(4, 1) * mk.clone()) / rat(6, 1) * c.clone()
                / (a3.clone() * a.clone())
                - (rat(2, 1) * mk.clone() * mk.clone() - rat(5, 1) * mk.clone()) / rat(2, 1) * b.clone() * b.clone()
                    / (a3.clone() * a2.clone());
            ensure!(res(3)? == n3, "n = 3, m = {m}");
        }
    }
    Ok(())
}

fn theta_eta() -> Check {
    for tau in [C::new(0.0, 1.0), C::new(0.3, 1.1), C::new(0.0, 2.0)] {
        let d = ok(theta_deriv_num(ThetaKind::Theta, C::zero(), tau))?;
        let eta = ok(eta_num(tau))?;
        ensure!(close(d, eta * eta * eta * (2.0 * PI), 1e-10), "tau = {tau}");
    }
    Ok(())
}

fn rand_point(r: &mut StdRng) -> (C, C) {
    (
        C::new(r.gen_range(-1.0..1.0), r.gen_range(-0.4..0.4)),
        C::new(r.gen_range(-0.5..0.5), r.gen_range(0.8..1.6)),
    )
}

fn quasi_periodicity() -> Check {
    let mut r = rng();
    let table = [
        (ThetaKind::Theta, -1.0, -1.0),
        (ThetaKind::Theta1, -1.0, 1.0),
        (ThetaKind::Theta2, 1.0, -1.0),
        (ThetaKind::Theta3, 1.0, 1.0),
    ];
    for _ in 0..20 {
        let (v, tau) = rand_point(&mut r);
        let mult = (C::new(0.0, -2.0 * PI) * v).exp() / (C::new(0.0, PI) * tau).exp();
        for (kind, one, sign) in table {
            let t = ok(theta_num(kind, v, tau))?;
            ensure!(close(ok(theta_num(kind, v + 1.0, tau))?, t * one, 1e-11), "{kind}(v+1)");
            ensure!(close(ok(theta_num(kind, v + tau, tau))?, t * mult * sign, 1e-11), "{kind}(v+tau)");
        }
    }
    Ok(())
}

fn theta_translates() -> Check {
    let mut r = rng();
    let i = C::i();
    for _ in 0..10 {
        let (v, tau) = rand_point(&mut r);
        let th = |w: C| theta_num(ThetaKind::Theta, w, tau).map_err(|e| e.to_string());
        let q8 = (C::new(0.0, PI / 4.0) * tau).exp();
        let e = (C::new(0.0, -PI) * v).exp();
        ensure!(close(ok(theta_num(ThetaKind::Theta1, v, tau))?, th(0.5 - v)?, 1e-11), "theta1");
        ensure!(
            close(ok(theta_num(ThetaKind::Theta2, v, tau))?, -i * q8 * e * th(tau / 2.0 - v)?, 1e-11),
            "theta2"
        );
        ensure!(
            close(ok(theta_num(ThetaKind::Theta3, v, tau))?, q8 * e * th(0.5 + tau / 2.0 - v)?, 1e-11),
            "theta3"
        );
    }
    Ok(())
}

fn f_linear_numeric() -> Check {
    let lin = f_ratio::<K>(10, 2).coeff(1);
    for (v, tau) in [(C::new(0.27, 0.05), C::new(0.1, 1.2)), (C::new(0.4, 0.0), C::new(0.0, 1.5))] {
        let got = ok(lin.eval(v, tau))?;
        let d0 = ok(theta_deriv_num(ThetaKind::Theta, C::zero(), tau))?;
        let expect = C::i() / (2.0 * PI) * d0 / ok(theta_num(ThetaKind::Theta, v, tau))?;
        ensure!(close(got, expect, 1e-9), "f'(0) at v = {v}");
    }
    Ok(())
}

fn lemma_g() -> Check {
    let (v, tau) = (C::new(0.23, 0.04), C::new(0.1, 1.2));
    let g = ok(big_g::<K>(12).eval(v, tau))?;
    for a in 0..3 {
        for b in 0..3 {
            let pt = C::new(a as f64, 0.0) + tau * b as f64;
            let lhs = ok(theta_num(ThetaKind::Theta, -v + pt, tau))?
                / ok(theta_deriv_num(ThetaKind::Theta, pt, tau))?;
            let rhs = (2.0 * PI * C::i() * v * b as f64).exp() / (2.0 * PI * C::i()) * g;
            ensure!(close(lhs, rhs, 1e-9), "(a, b) = ({a}, {b})");
        }
    }
    Ok(())
}

fn euler_numbers() -> Check {
    ensure!(euler_ci(&ci(5, &[5])) == (-200).into(), "quintic");
    ensure!(euler_ci(&ci(4, &[4])) == 24.into(), "quartic");
    for n in 2..=10 {
        for m in 1..=6 {
            let s = ci(n, &[m]);
            ensure!(euler_ci(&s) == ok(euler_oracle(&s))?, "{s}");
        }
    }
    Ok(())
}

fn small_specs(max_n: u32) -> Vec<CISpec> {
    let mut out = Vec::new();
    for n in 2..=max_n {
        for m1 in 1..=5 {
            out.push(ci(n, &[m1]));
            if n >= 3 {
                out.extend((m1..=5).map(|m2| ci(n, &[m1, m2])));
            }
        }
    }
    out
}

fn chi_y_at_one() -> Check {
    for s in small_specs(9) {
        let at_one = ok(ok(chi_y_ci::<K>(&s))?.eval_exact(&K::one()))?;
        ensure!(at_one == K::from_integer(euler_ci(&s)), "{s}");
    }
    Ok(())
}

fn base_cases() -> Check {
    for m in 1..=6 {
        let g = ok(elliptic_genus::<K>(&ci(2, &[m]), 8))?;
        ensure!(g.body == QSeries::constant(RatFunc::from_int(m as i64), 16), "Y^2_{m}");
    }
    ensure!(ok(elliptic_genus::<K>(&ci(3, &[3]), 8))?.body.is_zero(), "Y^3_3");
    Ok(())
}

fn q0_slice() -> Check {
    for s in small_specs(7) {
        let g = ok(elliptic_genus::<K>(&s, 0))?;
        let expect = &ok(chi_y_ci::<K>(&s))? * &RatFunc::s_pow(-(s.dim() as i64));
        ensure!(g.body.coeff(0) == expect, "{s}");
    }
    Ok(())
}

fn duality() -> Check {
    for s in [ci(4, &[4]), ci(5, &[5]), ci(6, &[2, 2])] {
        let g = ok(elliptic_genus::<K>(&s, 4))?;
        ensure!(g.certified, "{s} not certified");
        ensure!(g.body.map_coeffs(|c| c.invert_var()) == g.body, "{s}: s -> 1/s");
        let sign = K::from_integer(if s.dim() % 2 == 0 { 1 } else { -1 }.into());
        let flipped = g.body.map_coeffs(|c| c.invert_var().negate_var().scale(&sign));
        ensure!(flipped == g.body, "{s}: s -> -1/s");
        ensure!(has_integral_coefficients(&g.body), "{s}: integrality");
    }
    Ok(())
}

fn genfun() -> Check {
    for degrees in [vec![2u32], vec![3], vec![2, 3], vec![2, 2], vec![3, 3]] {
        let g = ok(elliptic_genfun::<K>(&degrees, 5, 4))?;
        for n in (degrees.len() as u32 + 1)..=6 {
            let s = ci(n, &degrees);
            ensure!(g.coeff(n - 1) == ok(elliptic_genus::<K>(&s, 4))?.body, "{s}");
        }
    }
    Ok(())
}

fn sector_shift() -> Check {
    for (n, m, v) in [(5u32, 5u32, 0.3), (6, 4, 0.5), (7, 3, 0.25)] {
        let p = ok(LGParams::new(C::new(v, 0.0), C::new(0.15, 1.1)))?;
        let mi = m as i64;
        for (a, b) in [(0i64, 1i64), (1, 2), (2, 0)] {
            let t = ok(elliptic_sector_term(n, m, a, b, &p))?;
            let ta = ok(elliptic_sector_term(n, m, a + mi, b, &p))?;
            let tb = ok(elliptic_sector_term(n, m, a, b + mi, &p))?;
            ensure!(close(t, ta, 1e-12) && close(t, tb, 1e-12), "({n}, {m}) sector ({a}, {b})");
        }
    }
    Ok(())
}

fn degeneration() -> Check {
    let tau = C::new(0.05, 1.3);
    for (n, m, v) in [(5u32, 5u32, 0.3), (4, 4, 0.21), (6, 3, 1.0 / 3.0)] {
        let p = ok(LGParams::new(C::new(v, 0.0), tau))?;
        let (a, b) = (ok(lg_elliptic_hyp(n, m, &p))?, ok(lg_elliptic_ci(n, &[m], &p))?);
        ensure!((a - b).norm() <= 1e-12 * a.norm().max(1.0), "elliptic ({n}, {m})");
    }
    for (n, m, v) in [(4u32, 4u32, 0.3), (6, 2, 0.25)] {
        let p = ok(LGParams::new(C::new(v, 0.0), tau))?;
        let (a, b) = (ok(lg_ns_hyp(n, m, &p))?, ok(lg_ns_ci(n, &[m], &p))?);
        ensure!((a - b).norm() <= 1e-12 * a.norm().max(1.0), "ns ({n}, {m})");
    }
    Ok(())
}

fn preconditions() -> Check {
    let p = ok(LGParams::new(C::new(0.3, 0.0), C::new(0.0, 1.4)))?;
    ensure!(lg_elliptic_hyp(5, 4, &p).is_err(), "(N - m) v not integral");
    ensure!(lg_ns_hyp(6, 4, &p).is_err(), "NS with (N - m) v not integral");
    ensure!(lg_sigma23_hyp(2, 5, 4, p.tau()).is_err(), "odd N - m");
    ensure!(lg_elliptic_ci(6, &[3, 3], &p).is_err(), "equal degrees");
    Ok(())
}

fn correspondence() -> Check {
    let cases = [
        (ci(5, &[5]), 0.3, 1.5, Correspondence::Elliptic, 1e-8),
        (ci(5, &[2, 3]), 0.23, 1.4, Correspondence::Elliptic, 1e-7),
        (ci(4, &[4]), 0.3, 1.4, Correspondence::Ns, 1e-6),
        (ci(5, &[2, 3]), 0.4, 1.3, Correspondence::Ns, 1e-6),
        (ci(6, &[4]), 0.0, 1.2, Correspondence::Sigma1, 1e-8),
        (ci(4, &[4]), 0.0, 1.3, Correspondence::Sigma2, 1e-6),
        (ci(4, &[4]), 0.0, 1.3, Correspondence::Sigma3, 1e-6),
    ];
    for (s, v, ti, kind, tol) in cases {
        let p = ok(LGParams::new(C::new(v, 0.0), C::new(0.0, ti)))?;
        let r = ok(check_correspondence(&s, &p, 8, kind))?;
        ensure!(r.agrees(tol), "{s} {}: rel_diff {:e}", kind.name(), r.rel_diff);
    }
    let w = ok(witten_sigma::<K>(1, &ci(6, &[4]), 8, C::new(0.0, 1.2)))?;
    let lg = ok(crate::lgside::lg_sigma1_hyp(6, 4, C::new(0.0, 1.2)))?;
    ensure!(close(w.value, lg, 1e-8), "sigma1 (6, [4])");
    Ok(())
}

fn json_round_trip() -> Check {
    for s in [ci(4, &[4]), ci(5, &[5]), ci(5, &[2, 3]), ci(3, &[3])] {
        let g = ok(elliptic_genus::<K>(&s, 3))?;
        ensure!(ok(genus_from_json::<K>(&genus_to_json(&g)))? == g, "{s}");
        let g = ok(crate::genera::ns_elliptic_genus::<K>(&s, 2))?;
        ensure!(ok(genus_from_json::<K>(&genus_to_json(&g)))? == g, "{s} NS");
    }
    Ok(())
}
