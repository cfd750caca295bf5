use ellgen::coeffring::Prefactor;
use ellgen::genera::*;
use ellgen::theta::{theta_num, ThetaKind};
use ellgen::{BigRat, CISpec, Error, QSeries, RatFunc, C64};
use num_bigint::BigInt;
use num_traits::{One, Zero};

type K = BigRat;

fn ci(n: u32, d: &[u32]) -> CISpec {
    CISpec::new(n, d.to_vec()).unwrap()
}

fn int(n: i64) -> K {
    K::from_integer(n.into())
}

/// Coefficient of `t^{N-1}` in `∏ m_j t/(1 + (m_j - 1) t) / (1 - t)^2`,
/// by plain power-series arithmetic over i128.
fn euler_genfun(n: u32, degrees: &[u32]) -> i128 {
    let len = n as usize;
    let mut acc = vec![0i128; len];
    acc[0] = 1;
    let mul = |a: &[i128], b: &[i128]| {
        let mut out = vec![0i128; len];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                if i + j < len {
                    out[i + j] += x * y;
                }
            }
        }
        out
    };
    // 1/(1 - t)^2
    let inv_sq: Vec<i128> = (0..len).map(|k| k as i128 + 1).collect();
    acc = mul(&acc, &inv_sq);
    for &m in degrees {
        let m = m as i128;
        // m t Σ (-(m-1) t)^k
        let mut f = vec![0i128; len];
        let mut p = m;
        for slot in f.iter_mut().skip(1) {
            *slot = p;
            p *= -(m - 1);
        }
        acc = mul(&acc, &f);
    }
    acc[len - 1]
}

#[test]
fn euler_numbers() {
    assert_eq!(euler_ci(&ci(5, &[5])), BigInt::from(-200));
    assert_eq!(euler_ci(&ci(4, &[4])), BigInt::from(24));
    assert_eq!(euler_ci(&ci(4, &[2, 2])), BigInt::from(0));
    for m in 1..=7 {
        assert_eq!(euler_ci(&ci(2, &[m])), BigInt::from(m));
    }
    assert_eq!(euler_oracle(&ci(3, &[3])).unwrap(), BigInt::from(0));
    assert_eq!(euler_oracle(&ci(5, &[5])).unwrap(), BigInt::from(-200));
    for n in 2..=9 {
        assert_eq!(euler_oracle(&ci(n, &[1])).unwrap(), BigInt::from(n - 1));
    }
    assert!(matches!(euler_oracle(&ci(5, &[2, 3])), Err(Error::Rank(_))));
}

#[test]
fn euler_matches_generating_function() {
    for n in 2..=9 {
        for m1 in 1..=5 {
            assert_eq!(
                euler_ci(&ci(n, &[m1])),
                BigInt::from(euler_genfun(n, &[m1])),
                "({n}, [{m1}])"
            );
            assert_eq!(euler_ci(&ci(n, &[m1])), euler_oracle(&ci(n, &[m1])).unwrap());
            for m2 in m1..=5 {
                if n >= 3 {
                    assert_eq!(
                        euler_ci(&ci(n, &[m1, m2])),
                        BigInt::from(euler_genfun(n, &[m1, m2])),
                        "({n}, [{m1}, {m2}])"
                    );
                }
            }
        }
    }
}

fn y_poly(cs: &[i64]) -> RatFunc {
    let terms: Vec<(i64, K)> = cs
        .iter()
        .enumerate()
        .map(|(k, &c)| (2 * k as i64, int(c)))
        .collect();
    RatFunc::from_laurent_terms(&terms)
}

#[test]
fn chi_y_examples() {
    for m in 1..=6i64 {
        // (3m - m^2)(1 + y)/2
        let c = (3 * m - m * m) / 2;
        assert_eq!(chi_y_ci::<K>(&ci(3, &[m as u32])).unwrap(), y_poly(&[c, c]), "m = {m}");
    }
    assert_eq!(chi_y_ci::<K>(&ci(4, &[4])).unwrap(), y_poly(&[2, 20, 2]));
    for n in 2..=8u32 {
        let ones = vec![1; n as usize - 1];
        assert_eq!(chi_y_ci::<K>(&ci(n, &[1])).unwrap(), y_poly(&ones));
    }
}

#[test]
fn chi_y_generating_function() {
    for degrees in [vec![1u32], vec![3], vec![4], vec![2, 3], vec![2, 2]] {
        let t_order = 6;
        let g = chi_y_genfun::<K>(&degrees, t_order).unwrap();
        for n in (degrees.len() as u32 + 1)..=(t_order + 1) {
            let spec = ci(n, &degrees);
            assert_eq!(
                g.coeff(n - 1).constant_term(),
                chi_y_ci::<K>(&spec).unwrap(),
                "{spec}"
            );
        }
    }
    let g = chi_y_genfun::<K>(&[4], 4).unwrap();
    assert_eq!(g.coeff(3).constant_term(), y_poly(&[2, 20, 2]));
}

#[test]
fn chi_y_at_one_is_euler() {
    for n in 2..=9 {
        for m1 in 1..=5 {
            let mut list = vec![vec![m1]];
            if n >= 3 {
                list.extend((m1..=5).map(|m2| vec![m1, m2]));
            }
            for ds in list {
                let spec = ci(n, &ds);
                let chi = chi_y_ci::<K>(&spec).unwrap();
                let at_one = chi.eval_exact(&K::one()).unwrap();
                assert_eq!(at_one, K::from_integer(euler_ci(&spec)), "{spec}");
            }
        }
    }
}

#[test]
fn points_and_elliptic_curves() {
    for m in 1..=5 {
        let g = elliptic_genus::<K>(&ci(2, &[m]), 8).unwrap();
        assert_eq!(g.body, QSeries::constant(RatFunc::from_int(m as i64), 16));
    }
    let g = elliptic_genus::<K>(&ci(3, &[3]), 8).unwrap();
    assert!(g.body.is_zero());
    let g = elliptic_genus::<K>(&ci(4, &[2, 2]), 4).unwrap();
    assert!(g.body.is_zero());
}

#[test]
fn k3_q0_coefficient() {
    let g = elliptic_genus::<K>(&ci(4, &[4]), 3).unwrap();
    let expect = RatFunc::from_laurent_terms(&[(-2, int(2)), (0, int(20)), (2, int(2))]);
    assert_eq!(g.body.coeff(0), expect);
    assert!(g.certified);
}

#[test]
fn k3_matches_theta_quotients() {
    // 2 φ_{0,1} = 8 Σ (θ_i(v)/θ_i(0))^2 over the three even theta functions.
    let g = elliptic_genus::<K>(&ci(4, &[4]), 8).unwrap();
    let tau = C64::new(0.05, 1.3);
    for v in [C64::new(0.17, 0.0), C64::new(0.31, 0.1)] {
        let mut expect = C64::new(0.0, 0.0);
        for kind in [ThetaKind::Theta1, ThetaKind::Theta2, ThetaKind::Theta3] {
            let r = theta_num(kind, v, tau).unwrap() / theta_num(kind, C64::new(0.0, 0.0), tau).unwrap();
            expect += r * r * 8.0;
        }
        let got = g.body.eval(v, tau).unwrap();
        assert!((got - expect).norm() < 1e-9 * expect.norm(), "{got} vs {expect}");
    }
}

#[test]
fn q0_slice_is_chi_y() {
    for n in 2..=7 {
        for ds in [vec![1u32], vec![2], vec![3], vec![5], vec![2, 2], vec![1, 3]] {
            if ds.len() as u32 + 1 > n {
                continue;
            }
            let spec = ci(n, &ds);
            let g = elliptic_genus::<K>(&spec, 1).unwrap();
            let chi = chi_y_ci::<K>(&spec).unwrap();
            assert_eq!(g.body.coeff(0), &chi * &RatFunc::s_pow(-(spec.dim() as i64)), "{spec}");
        }
    }
}

#[test]
fn duality_and_integrality() {
    for spec in [ci(4, &[4]), ci(5, &[5]), ci(6, &[2, 2])] {
        let g = elliptic_genus::<K>(&spec, 4).unwrap();
        // s -> 1/s fixes the body; with s -> -1/s the sign is (-1)^d.
        let flipped = g.body.map_coeffs(|c| c.invert_var());
        assert_eq!(flipped, g.body, "{spec}");
        let sign = if spec.dim() % 2 == 0 { 1 } else { -1 };
        let flipped = g
            .body
            .map_coeffs(|c| c.invert_var().negate_var().scale(&int(sign)));
        assert_eq!(flipped, g.body, "{spec}");
        assert!(has_integral_coefficients(&g.body), "{spec}");
    }
}

#[test]
fn generating_function_agrees() {
    for degrees in [vec![2u32], vec![3], vec![2, 3], vec![2, 2], vec![3, 3]] {
        let t_order = 5;
        let g = elliptic_genfun::<K>(&degrees, t_order, 4).unwrap();
        for n in (degrees.len() as u32 + 1)..=6 {
            let spec = ci(n, &degrees);
            let direct = elliptic_genus::<K>(&spec, 4).unwrap();
            assert_eq!(g.coeff(n - 1), direct.body, "{spec}");
        }
    }
    let g = elliptic_genfun::<K>(&[5], 4, 2).unwrap();
    assert_eq!(g.coeff(4), elliptic_genus::<K>(&ci(5, &[5]), 2).unwrap().body);
}

#[test]
fn ns_genus_small_cases() {
    let g = ns_elliptic_genus::<K>(&ci(2, &[2]), 4).unwrap();
    assert_eq!(g.body.prefactor(), Prefactor::TRIVIAL);
    assert_eq!(g.body, QSeries::constant(RatFunc::from_int(2), 8));
    assert!(g.warnings.is_empty());

    let g = ns_elliptic_genus::<K>(&ci(3, &[3]), 3).unwrap();
    assert!(g.body.is_zero());

    let g = ns_elliptic_genus::<K>(&ci(4, &[3]), 2).unwrap();
    assert_eq!(g.warnings.len(), 1);
    let g = ns_elliptic_genus::<K>(&ci(4, &[4]), 2).unwrap();
    assert_eq!(g.body.prefactor(), Prefactor::new(-2, -2, 0));
}

#[test]
fn ns_genus_is_even_in_s() {
    let g = ns_elliptic_genus::<K>(&ci(5, &[2, 3]), 3).unwrap();
    for (_, c) in g.body.terms() {
        assert!(c.laurent_terms().unwrap().iter().all(|(e, _)| e % 2 == 0));
    }
}

#[test]
fn sigma_values() {
    let tau = C64::new(0.0, 1.2);
    let w = witten_sigma::<K>(1, &ci(4, &[4]), 4, tau).unwrap();
    let (j, re, im) = &w.body[0];
    assert_eq!((*j, re.clone(), im.clone()), (0, int(16), K::zero()));
    let w = witten_sigma::<K>(1, &ci(3, &[3]), 4, tau).unwrap();
    assert!(w.body.is_empty());
    assert_eq!(w.value, C64::new(0.0, 0.0));
    assert!(witten_sigma::<K>(4, &ci(3, &[3]), 4, tau).is_err());
}

#[test]
fn spec_validation() {
    assert!(matches!(CISpec::new(2, vec![2, 2]), Err(Error::Rank(_))));
    assert!(CISpec::new(3, Vec::<u32>::new()).is_err());
    assert!(CISpec::new(3, vec![0]).is_err());
    let s = CISpec::new(6, vec![3, 2]).unwrap();
    assert_eq!(s.degrees(), &[2, 3]);
    assert_eq!(s.dim(), 3);
    assert_eq!(s.to_string(), "Y^6_{2,3}");
    assert_eq!(ci(5, &[5]).to_string(), "Y^5_5");
}

#[test]
fn euler_result_value() {
    let r = euler_result::<K>(&ci(5, &[5]));
    assert_eq!(r.euler_value(), Some(BigInt::from(-200)));
    assert!(BigInt::zero() < BigInt::from(1));
}
