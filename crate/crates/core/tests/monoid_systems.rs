mod common;

use common::{cone_instance, cone_sampled, quadric, quartic};
use cremona_core::exact::rat;
use cremona_core::monoid::{
    contains_cone, dim_formula_md, dim_formula_mdpq, monoid_basis, not_cone_complement, restrict_to_surface,
    search_double_vertex_monoid, Vertex,
};
use cremona_core::surfaces::{build_lambda_m, ParamSurface};

#[test]
fn enumerated_dimensions_match_formulas() {
    for d in 2..=10u32 {
        let single = monoid_basis(d, &[Vertex::P0]).unwrap();
        let double = monoid_basis(d, &[Vertex::P0, Vertex::P4]).unwrap();
        assert_eq!(single.projective_dim() as u64, dim_formula_md(d).unwrap());
        assert_eq!(double.projective_dim() as u64, dim_formula_mdpq(d).unwrap());
        // d^3/3 + 3d^2/2 + 13d/6 and 2d^2 + 2d
        let q = rat(d as i64, 1);
        let cubic = &q * &q * &q * rat(1, 3) + &q * &q * rat(3, 2) + &q * rat(13, 6);
        assert_eq!(rat(single.projective_dim(), 1), cubic);
        assert_eq!(double.projective_dim(), 2 * (d * d + d) as i64);
    }
}

#[test]
fn restricted_members_vanish_on_the_surface() {
    let z = build_lambda_m(&quartic(), 1, None, 3).unwrap().surface;
    let mut nonempty = 0;
    for d in 2..=5 {
        let sys = monoid_basis(d, &[Vertex::P0]).unwrap();
        let Ok(through) = restrict_to_surface(&sys, &z) else { continue };
        nonempty += 1;
        for f in &through.basis {
            assert!(f.substitute(z.forms()).unwrap().is_zero());
        }
        // dimension drops by exactly the rank of the restriction
        let h0 = through.h0_restricted.unwrap();
        assert_eq!(through.basis.len() + h0, sys.basis.len());
    }
    assert!(nonempty > 0);
}

#[test]
fn cone_test_agrees_with_sampling() {
    let (mut with, mut without) = (0, 0);
    for k in 0..50 {
        let (f, v, z, contains) = cone_instance(k);
        let claimed = contains_cone(&f, v, &z).unwrap();
        assert_eq!(claimed, cone_sampled(&f, v, &z, k), "instance {k}");
        assert_eq!(claimed, contains, "instance {k}");
        if claimed {
            with += 1;
        } else {
            without += 1;
        }
    }
    assert!(with > 10 && without > 10);
}

#[test]
fn cone_free_part_excludes_the_cone() {
    let z = ParamSurface::parse(&["0", "0", "s*u", "s*v", "t*u"]).unwrap();
    let sys = restrict_to_surface(&monoid_basis(2, &[Vertex::P0]).unwrap(), &z).unwrap();
    let free = not_cone_complement(&sys, Vertex::P0).unwrap();
    assert!(free.cone_free);
    for f in &free.basis {
        assert!(!contains_cone(f, Vertex::P0, &z).unwrap());
    }
}

#[test]
fn found_monoid_has_both_vertexes() {
    // the Segre quadric placed in P^4 with x0 = x4 = a random (1,1) form
    let q = quadric();
    let mut forms = vec![cremona_core::exact::BiForm::parse("s*u + 2*t*v - s*v").unwrap()];
    forms.extend(q.forms().iter().take(3).cloned());
    forms.push(cremona_core::exact::BiForm::parse("t*v + 3*s*u").unwrap());
    let z = ParamSurface::new(forms).unwrap();
    let found = (2..=4).find_map(|d| search_double_vertex_monoid(&z, d, 5, 20).unwrap().monoid).expect("monoid");
    let f = found.form();
    let d = found.degree();
    assert_eq!(f.mult_at_coord_point(0).unwrap(), d - 1);
    assert_eq!(f.mult_at_coord_point(4).unwrap(), d - 1);
    assert!(!contains_cone(f, Vertex::P0, &z).unwrap());
    assert!(!contains_cone(f, Vertex::P4, &z).unwrap());
    assert!(f.substitute(z.forms()).unwrap().is_zero());
    assert_eq!(&found.reassemble(), f);
}
