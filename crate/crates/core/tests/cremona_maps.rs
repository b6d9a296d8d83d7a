mod common;

use common::quadric;
use cremona_core::cremona::{cremona_from_monoid, monoid_section, projectively_equal, verify_cremona};
use cremona_core::exact::{MultiPoly, Rational};
use cremona_core::monoid::{Monoid, Vertex};
use cremona_core::orbit::random_monoid_map;
use cremona_core::random::{random_nonzero_rational, rng_for};

#[test]
fn quadric_monoid_composes_to_identity() {
    let m = Monoid::new(MultiPoly::parse("x0*x4 - x1*x2", 5).unwrap(), &[Vertex::P0, Vertex::P4]).unwrap();
    let c = cremona_from_monoid(&m, 2).unwrap();
    assert_eq!(c.degrees(), (2, 2));
    for composite in [c.inverse.compose(&c.forward).unwrap(), c.forward.compose(&c.inverse).unwrap()] {
        assert!(composite.is_projective_identity());
    }
    let v = verify_cremona(&c, 100, 11);
    assert!(v.passed);
    assert_eq!(v.checked, 100);
}

#[test]
fn sections_lie_on_their_monoids() {
    for (d, seed) in [(2, 1), (3, 2), (4, 3)] {
        let map = random_monoid_map(d, seed).unwrap();
        let m = map.source_monoid.clone().unwrap();
        for v in [Vertex::P0, Vertex::P4] {
            let s = monoid_section(&m, v).unwrap();
            assert!(m.form().compose(s.components()).unwrap().is_zero());
        }
        let (f, g) = map.degrees();
        assert!(f <= d && g <= d);
        assert!(verify_cremona(&map, 100, seed).passed);
    }
}

#[test]
fn chained_maps_evaluate_consistently() {
    let first = random_monoid_map(2, 21).unwrap();
    let second = random_monoid_map(3, 22).unwrap();
    let chain = second.compose(&first).unwrap();
    let mut rng = rng_for(5, "chain-points");
    let mut checked = 0;
    while checked < 20 {
        let p: Vec<Rational> = (0..4).map(|_| random_nonzero_rational(&mut rng, 50)).collect();
        let Ok(q) = first.forward.eval(&p) else { continue };
        let Ok(r) = second.forward.eval(&q) else { continue };
        let Ok(direct) = chain.forward.eval(&p) else { continue };
        if r.iter().all(|x| x == &Rational::from_integer(0.into())) || direct.iter().all(|x| x == &Rational::from_integer(0.into())) {
            continue;
        }
        assert!(projectively_equal(&r, &direct));
        checked += 1;
    }
    assert!(verify_cremona(&chain, 50, 9).passed);
}

#[test]
fn pushing_a_quadric_through_a_map() {
    let map = random_monoid_map(2, 4).unwrap();
    let image = map.apply_to_surface(&quadric(), 3).unwrap();
    assert!(image.is_birational(1).unwrap());
    let back = map.inverted().apply_to_surface(&image, 5).unwrap();
    assert_eq!(back.image_degree(2).unwrap(), 2);
}
