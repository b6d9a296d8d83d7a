mod common;

use common::quartic;
use cremona_core::exact::{int, rat};
use cremona_core::lemmas::*;
use cremona_core::monoid::{monoid_basis, restriction_rank, restriction_rank_modular, Vertex};
use cremona_core::surfaces::build_lambda_m;

/// Real root of 2x^3 - 6x^2 + 3x - 2 by Newton iteration in f64.
fn xi_newton() -> f64 {
    let mut x = 3.0f64;
    for _ in 0..60 {
        x -= (2.0 * x * x * x - 6.0 * x * x + 3.0 * x - 2.0) / (6.0 * x * x - 12.0 * x + 3.0);
    }
    x
}

fn xi() -> Real {
    xi_constant(DEFAULT_PRECISION).unwrap()
}

#[test]
fn constants_match_float_oracle() {
    let c = constants(60).unwrap();
    let x = xi_newton();
    assert!((c.xi.to_f64() - x).abs() < 1e-13);
    assert_eq!(c.xi.to_decimal(9), "2.567468375");
    // positive root of A a^2 + B a - xi
    let qa = 1.0 - 4.0 * x + 2.0 * x * x;
    let qb = 0.5 + 3.5 * x - 1.5 * x * x;
    let a2 = (-qb + (qb * qb + 4.0 * qa * x).sqrt()) / (2.0 * qa);
    assert!((c.a2.to_f64() - a2).abs() < 1e-12);
    assert_eq!(c.a2.to_decimal(10), "0.8628701083");
    assert!(cubic_residual(&c.xi).abs().to_f64() < 1e-45);
    // more digits only refine
    let coarse = constants(30).unwrap();
    assert_eq!(coarse.xi.to_decimal(25), c.xi.to_decimal(25));
}

#[test]
fn beta_matches_float_ceiling() {
    let x = xi();
    let xf = xi_newton();
    for a in 1..=6u64 {
        for h in 1..=200u64 {
            let (beta, eps) = beta_of(a * h, a, &x).unwrap();
            assert_eq!(beta, (h as f64 * xf).ceil() as u64, "h = {h}");
            let e = eps.to_f64();
            assert!(e > 0.0 && e < 1.0);
            assert!((e - (beta as f64 - h as f64 * xf)).abs() < 1e-9);
        }
    }
}

#[test]
fn quadratic_grid_holds() {
    let x = xi();
    for a in 1..=6u64 {
        for b in 1..=6u64 {
            for h in 1..=100u64 {
                let d = a * h;
                let (beta, _) = beta_of(d, a, &x).unwrap();
                let r = check_quadratic_inequality(a, b, beta, d);
                assert!(r.verdict, "a = {a}, b = {b}, h = {h}");
                let (af, bf, tf, df) = (a as f64, b as f64, beta as f64, d as f64);
                let lhs = (af * bf + 0.5) * df * df + (-4.0 * af * af * bf + 3.5 * af - 1.0) * tf * df + af * af * (2.0 * af * bf - 1.5) * tf * tf;
                assert!((r.margin.to_f64() - lhs).abs() <= 1e-9 * lhs.abs().max(1.0));
            }
        }
    }
}

#[test]
fn quadratic_positivity_changes_sign_at_root() {
    let c = constants(DEFAULT_PRECISION).unwrap();
    assert!(quadratic_positivity(1, &c.xi).signum() > 0);
    // a2 < 1, so every positive integer lies past the positive root
    assert!(c.a2.to_f64() < 1.0 && c.a1.signum() < 0);
}

#[test]
fn cubic_remainder_grid_holds() {
    let x = xi();
    let xf = xi_newton();
    for h in 1..=100u64 {
        for k in 1..=99i64 {
            let eps = rat(k, 100);
            let r = check_cubic_remainder(h, &eps, 2, &x).unwrap();
            assert!(r.verdict, "h = {h}, eps = {k}/100");
            let (hf, ef) = (h as f64, k as f64 / 100.0);
            let want = 8.0 * ef / 6.0 * (3.0 * hf * hf * (2.0 * xf * xf - 4.0 * xf + 1.0) + 6.0 * hf * ef * (xf - 1.0) + 2.0 * ef * ef);
            assert!((r.margin.to_f64() - want).abs() <= 1e-9 * want);
        }
    }
    assert!(check_cubic_remainder(3, &int(1), 2, &x).is_err());
}

#[test]
fn dimension_threshold_is_reached() {
    let x = xi();
    let fitted = [EllM::default(), EllM { ell: int(3), m: int(-6) }, EllM { ell: int(1), m: int(-14) }];
    for em in &fitted {
        for a in 2..=6 {
            for b in 1..=6 {
                let t = dimension_threshold(a, b, 100, em, &x).unwrap();
                assert_eq!(t.checked_up_to, 100);
                assert!(t.h_star.is_some(), "a = {a}, b = {b}");
            }
        }
    }
    // a large h0 estimate eats the cone-free bound at small h
    let bad = EllM { ell: int(0), m: int(1_000_000) };
    let t = dimension_threshold(2, 1, 100, &bad, &x).unwrap();
    assert!(t.negative_count > 0);
    assert!(t.h_star.is_none_or(|h| h > 1));
}

#[test]
fn modular_rank_agrees_with_rational_rank() {
    let lam = build_lambda_m(&quartic(), 2, None, 3).unwrap();
    for d in 3..=4 {
        let sys = monoid_basis(d, &[Vertex::P0]).unwrap();
        let exact = restriction_rank(&sys, &lam.surface).unwrap();
        assert_eq!(restriction_rank_modular(&sys, &lam.surface).unwrap(), Some(exact));
    }
}

#[test]
fn h0_fit_is_exact_past_small_degrees() {
    let q = quartic();
    let lam = build_lambda_m(&q, 1, None, 3).unwrap();
    let fit = estimate_ell_m(&lam.surface, (2, 1, 1), 3..=10).unwrap();
    assert_eq!(fit.max_residual, "0");
    assert_eq!((fit.fit.ell.clone(), fit.fit.m.clone()), (int(3), int(-6)));

    // at beta = 2 the low degrees sit below the regime where h0 is a
    // polynomial; from d = 5 on the fit is exact
    let lam = build_lambda_m(&q, 2, None, 3).unwrap();
    let wide = estimate_ell_m(&lam.surface, (2, 1, 2), 3..=12).unwrap();
    assert_ne!(wide.max_residual, "0");
    let fit = estimate_ell_m(&lam.surface, (2, 1, 2), 5..=12).unwrap();
    assert_eq!(fit.max_residual, "0");
    assert_eq!((fit.fit.ell, fit.fit.m), (int(1), int(-14)));
    for (d, h0, _) in &fit.samples {
        let lead = h0_leading(2, 1, 2, *d as u64);
        assert_eq!(int(*h0 as i64), lead + int(*d as i64) - int(14));
    }
    assert!(estimate_ell_m(&lam.surface, (2, 1, 2), 3..=5).is_err());
}

#[test]
fn witness_arithmetic() {
    let w = non_equivalence_witness(2, 4, 7).unwrap();
    assert_eq!(w.surface_degree, 16);
    assert_eq!(w.surface_value, "3/4");
    assert_eq!(w.scroll_value, "6/7");
    assert!(w.surface_terminal && w.scroll_terminal);
    assert_eq!(w.branch, NonEquivalenceBranch::TerminalPairs);
    assert!(!w.cremona_equivalent);
    for deg_b in 1..=6 {
        let w = non_equivalence_witness(3, 5, deg_b).unwrap();
        assert_eq!(w.branch, NonEquivalenceBranch::DegreeComparison);
        assert!(w.scroll_degree <= 12 && w.scroll_degree < w.surface_degree);
        assert!(!w.cremona_equivalent);
    }
    for (a, dd) in [(2u64, 4u64), (2, 9), (5, 4), (7, 11)] {
        let w = non_equivalence_witness(a, dd, 8).unwrap();
        assert!(2 * a * dd >= 16 && w.surface_terminal && !w.cremona_equivalent);
    }
}
