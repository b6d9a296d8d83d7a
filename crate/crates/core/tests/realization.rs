mod common;

use common::{exact_section_count, quadric, quartic, sextic};
use cremona_core::exact::{int, Rational};
use cremona_core::surfaces::{build_lambda_m, Fiber};

#[test]
fn realization_degree_matches_exact_oracle() {
    for (beta, want) in [(1u32, 6u32), (2, 8)] {
        let lam = build_lambda_m(&quartic(), beta, None, 40 + beta as u64).unwrap();
        assert_eq!(lam.expected_degree(), want);
        assert_eq!(lam.degree, want);
        assert_eq!(lam.surface.image_degree(7).unwrap(), want);
        assert!(lam.surface.is_birational(8).unwrap());
        assert_eq!(exact_section_count(&lam.surface, beta as u64) as u32, want);
    }
}

#[test]
fn coordinate_points_and_base_locus() {
    let lam = build_lambda_m(&quartic(), 2, None, 9).unwrap();
    for i in 0..5 {
        let mut e = vec![int(0); 5];
        e[i] = int(1);
        let on = lam.surface.fiber(&e, i as u64).unwrap() != Fiber::Finite(0);
        assert_eq!(on, i == 4, "coordinate point {i}");
    }
    assert_eq!(lam.surface.base_point_count(3).unwrap(), 4);
    lam.verify_base_locus(5).unwrap();
}

#[test]
fn image_degree_is_stable_across_draws() {
    let lam = build_lambda_m(&sextic(), 1, None, 2).unwrap();
    let degrees: Vec<u32> = (0..5).map(|k| lam.surface.image_degree(100 + k).unwrap()).collect();
    assert!(degrees.iter().all(|&d| d == 3 * (2 + 1)));
}

#[test]
fn quartic_and_quadric_degrees_agree_with_oracle() {
    assert_eq!(exact_section_count(&quartic(), 1), 4);
    assert_eq!(quartic().image_degree(1).unwrap(), 4);
    assert_eq!(exact_section_count(&quadric(), 1), 2);
    // a general point of the image has one preimage, a point off it none
    let y: Vec<Rational> = quartic().eval(&[int(2), int(3), int(5), int(-1)]);
    assert_eq!(quartic().fiber(&y, 4).unwrap(), Fiber::Finite(1));
    assert!(!quartic().contains_point(&[int(1), int(1), int(1), int(2)], 4).unwrap());
}
