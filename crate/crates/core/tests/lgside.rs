use ellgen::genera::{elliptic_genus, ns_elliptic_genus};
use ellgen::lgside::*;
use ellgen::theta::{theta_num, ThetaKind};
use ellgen::{BigRat, CISpec, Correspondence, Error, C64};

fn ci(n: u32, d: &[u32]) -> CISpec {
    CISpec::new(n, d.to_vec()).unwrap()
}

fn params(v: f64, tau_im: f64) -> LGParams<f64> {
    LGParams::new(C64::new(v, 0.0), C64::new(0.0, tau_im)).unwrap()
}

fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0)
}

#[test]
fn quintic_elliptic_sum() {
    let p = params(0.3, 1.5);
    let lg = lg_elliptic_hyp(5, 5, &p).unwrap();
    assert!(close(lg, C64::new(-117.566537548, 0.0), 1e-9), "{lg}");
    let geo = elliptic_genus::<BigRat>(&ci(5, &[5]), 12)
        .unwrap()
        .body
        .eval(p.v(), p.tau())
        .unwrap();
    assert!(close(lg, geo, 1e-9), "{lg} vs {geo}");
}

#[test]
fn ci_elliptic_sum() {
    let p = params(0.23, 1.4);
    let lg = lg_elliptic_ci(5, &[2, 3], &p).unwrap();
    assert!(close(lg, C64::new(20.5233141698, 0.0), 1e-9), "{lg}");
}

#[test]
fn sigma1_values() {
    let tau = C64::new(0.0, 1.2);
    let s = lg_sigma1_hyp(6, 4, tau).unwrap();
    assert!(close(s, C64::new(100.0, 0.0), 1e-9), "{s}");
    let s = lg_sigma1_ci(7, &[2, 3], tau).unwrap();
    assert!(close(s, C64::new(54.0, 0.0), 1e-9), "{s}");
    // sigma1 is the elliptic sum at v = 1/2
    let p = LGParams::new(C64::new(0.5, 0.0), tau).unwrap();
    assert!(close(lg_sigma1_hyp(4, 4, tau).unwrap(), lg_elliptic_hyp(4, 4, &p).unwrap(), 1e-12));
}

#[test]
fn ns_sums() {
    let lg = lg_ns_hyp(4, 4, &params(0.3, 1.4)).unwrap();
    assert!(close(lg, C64::new(-16.48182695720, 0.0), 1e-9), "{lg}");
    let lg = lg_ns_ci(5, &[2, 3], &params(0.4, 1.3)).unwrap();
    assert!(close(lg, C64::new(-10.92273135496, 0.0), 1e-9), "{lg}");
    let p = params(0.4, 1.3);
    let geo = ns_elliptic_genus::<BigRat>(&ci(5, &[2, 3]), 12)
        .unwrap()
        .body
        .eval(p.v(), p.tau())
        .unwrap();
    assert!(close(lg, geo, 1e-9), "{lg} vs {geo}");
}

#[test]
fn sigma23_values() {
    let tau = C64::new(0.0, 1.3);
    let s2 = lg_sigma23_hyp(2, 4, 4, tau).unwrap();
    assert!(close(s2, C64::new(-20.3473126289, 0.0), 1e-9), "{s2}");
    let s3 = lg_sigma23_hyp(3, 4, 4, tau).unwrap();
    assert!(close(s3, C64::new(-9.93430686799, 0.0), 1e-9), "{s3}");
    let s3 = lg_sigma23_hyp(3, 6, 4, tau).unwrap();
    assert!(close(s3, C64::new(-100.0, 0.0), 1e-9), "{s3}");
    let s2 = lg_sigma23_hyp(2, 6, 4, tau).unwrap();
    assert!(close(s2, C64::new(100.0, 0.0), 1e-9), "{s2}");
    assert!(lg_sigma23_hyp(4, 4, 4, tau).is_err());
}

#[test]
fn sigma23_are_ns_sum_specializations() {
    let tau = C64::new(0.1, 1.25);
    for (n, m) in [(4, 4), (5, 3), (6, 2), (6, 4)] {
        let at = |v: f64| lg_ns_hyp(n, m, &LGParams::new(C64::new(v, 0.0), tau).unwrap()).unwrap();
        assert!(close(lg_sigma23_hyp(2, n, m, tau).unwrap(), at(0.0), 1e-12), "({n},{m})");
        assert!(close(lg_sigma23_hyp(3, n, m, tau).unwrap(), at(0.5), 1e-12), "({n},{m})");
    }
}

#[test]
fn theta3_form_matches_theta2_form() {
    // (i/m) Σ (-1)^{a+b} θ₃-form equals the θ₂-form with v = 1/2 substituted.
    let tau = C64::new(0.0, 1.3);
    let (n, m) = (4u32, 4u32);
    let mut theta2_form = C64::new(0.0, 0.0);
    for a in 0..m {
        for b in 0..m {
            let x = (C64::new(a as f64 - 0.5, 0.0) + tau * (b as f64 + 0.5)) / m as f64;
            let r = theta_num(ThetaKind::Theta2, x + 0.5, tau).unwrap() / theta_num(ThetaKind::Theta, x, tau).unwrap();
            let sign = if (a + b) % 2 == 0 { 1.0 } else { -1.0 };
            theta2_form += r.powu(n) * sign;
        }
    }
    theta2_form *= C64::new(0.0, -1.0 / m as f64);
    let s3 = lg_sigma23_hyp(3, n, m, tau).unwrap();
    assert!(close(s3, theta2_form, 1e-12), "{s3} vs {theta2_form}");
}

#[test]
fn sector_shift_invariance() {
    let p = LGParams::new(C64::new(0.0, 0.0), C64::new(0.15, 1.1)).unwrap();
    let (n, m) = (5u32, 5u32);
    for (a, b) in [(0i64, 1i64), (1, 2), (3, 4)] {
        let t = elliptic_sector_term(n, m, a, b, &p).unwrap();
        let ta = elliptic_sector_term(n, m, a + m as i64, b, &p).unwrap();
        let tb = elliptic_sector_term(n, m, a, b + m as i64, &p).unwrap();
        assert!(close(t, ta, 1e-12), "a-shift ({a},{b})");
        assert!(close(t, tb, 1e-12), "b-shift ({a},{b})");
    }
    let p = params(0.0, 1.2);
    for (a, b) in [(0i64, 0i64), (1, 3), (2, 1)] {
        let t = ns_sector_term(4, 4, a, b, &p).unwrap();
        let ta = ns_sector_term(4, 4, a + 4, b, &p).unwrap();
        let tb = ns_sector_term(4, 4, a, b + 4, &p).unwrap();
        assert!(close(t, ta, 1e-12) && close(t, tb, 1e-12), "ns ({a},{b})");
    }
}

#[test]
fn ci_with_one_degree_is_hypersurface() {
    let tau = C64::new(0.05, 1.3);
    for (n, m, v) in [(5u32, 5u32, 0.3), (4, 4, 0.21), (6, 3, 1.0 / 3.0), (3, 3, 0.4)] {
        let p = LGParams::new(C64::new(v, 0.0), tau).unwrap();
        let a = lg_elliptic_hyp(n, m, &p).unwrap();
        let b = lg_elliptic_ci(n, &[m], &p).unwrap();
        assert!(close(a, b, 1e-12), "({n},{m})");
    }
    for (n, m, v) in [(4u32, 4u32, 0.3), (5, 3, 0.5), (6, 2, 0.25)] {
        let p = LGParams::new(C64::new(v, 0.0), tau).unwrap();
        let a = lg_ns_hyp(n, m, &p).unwrap();
        let b = lg_ns_ci(n, &[m], &p).unwrap();
        assert!(close(a, b, 1e-12), "ns ({n},{m})");
    }
}

#[test]
fn preconditions_are_enforced() {
    let p = params(0.3, 1.4);
    assert!(matches!(lg_elliptic_hyp(5, 4, &p), Err(Error::Precondition(_))));
    assert!(matches!(lg_sigma1_hyp(5, 4, p.tau()), Err(Error::Precondition(_))));
    assert!(matches!(lg_ns_hyp(5, 4, &params(0.0, 1.4)), Err(Error::Precondition(_))));
    assert!(matches!(lg_ns_hyp(6, 4, &p), Err(Error::Precondition(_))));
    assert!(matches!(lg_elliptic_ci(6, &[2, 3], &p), Err(Error::Precondition(_))));
    assert!(matches!(
        lg_elliptic_ci(6, &[3, 3], &params(0.2, 1.4)),
        Err(Error::PoleCollision { .. })
    ));
    // v = 0 puts a pole of every degree at the origin
    assert!(matches!(
        lg_elliptic_ci(5, &[2, 3], &params(0.0, 1.4)),
        Err(Error::PoleCollision { .. })
    ));
    assert!(LGParams::new(C64::new(0.1, 0.0), C64::new(0.0, -1.0)).is_err());
}

#[test]
fn correspondence_reports() {
    let p = params(0.3, 1.5);
    let r = check_correspondence(&ci(5, &[5]), &p, 10, Correspondence::Elliptic).unwrap();
    assert!(r.agrees(1e-9), "{r:?}");
    assert!(r.preconditions.iter().all(|(_, ok)| *ok));

    let r = check_correspondence(&ci(5, &[2, 3]), &params(0.4, 1.3), 10, Correspondence::Ns).unwrap();
    assert!(r.agrees(1e-9), "{r:?}");
    assert!(r.preconditions.iter().any(|(name, _)| name.contains("pairwise disjoint")));

    for kind in [Correspondence::Sigma1, Correspondence::Sigma2, Correspondence::Sigma3] {
        let r = check_correspondence(&ci(4, &[4]), &params(0.0, 1.3), 10, kind).unwrap();
        assert!(r.agrees(1e-9), "{kind:?} {r:?}");
    }
    let r = check_correspondence(&ci(7, &[2, 3]), &params(0.0, 1.2), 10, Correspondence::Sigma1).unwrap();
    assert!(r.agrees(1e-9), "{r:?}");
}

#[test]
fn truncation_budget() {
    let p = LGParams::new(C64::new(0.3, 0.0), C64::new(0.0, 0.05)).unwrap();
    assert!(matches!(
        check_correspondence(&ci(5, &[5]), &p, 4, Correspondence::Elliptic),
        Err(Error::Truncation { .. })
    ));
}
