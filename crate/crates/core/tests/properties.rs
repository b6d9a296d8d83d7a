use cremona_core::exact::{monomials_of_degree, rat, BiForm, ExactMatrix, MultiPoly, Poly, Rational};
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = Rational> {
    prop_oneof![
        2 => Just(rat(0, 1)),
        3 => (-9i64..=9, 1i64..=5).prop_map(|(n, d)| rat(n, d)),
    ]
}

/// Nonzero homogeneous polynomial of degree `d` in `n` variables.
fn multipoly(n: usize, d: u32) -> impl Strategy<Value = MultiPoly> {
    let monos = monomials_of_degree(n, d);
    let len = monos.len();
    (prop::collection::vec(coeff(), len), 0..len, 1i64..=7).prop_map(move |(cs, k, lead)| {
        let terms = monos.iter().cloned().zip(cs).enumerate().map(|(i, (m, c))| if i == k { (m, rat(lead, 1)) } else { (m, c) });
        MultiPoly::from_poly_with_degree(Poly::from_terms(n, terms), d).unwrap()
    })
}

fn biform(a: u32, b: u32) -> impl Strategy<Value = BiForm> {
    let len = ((a + 1) * (b + 1)) as usize;
    (prop::collection::vec(coeff(), len), 0..len).prop_map(move |(cs, k)| {
        let terms = cs.into_iter().enumerate().map(|(idx, c)| {
            let (i, j) = (idx as u32 / (b + 1), idx as u32 % (b + 1));
            ((i, j), if idx == k { rat(1, 1) } else { c })
        });
        BiForm::from_terms(a, b, terms).unwrap()
    })
}

fn point() -> impl Strategy<Value = [Rational; 4]> {
    prop::array::uniform4((-12i64..=12, 1i64..=6).prop_map(|(n, d)| rat(n, d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn arithmetic_stays_homogeneous(f in multipoly(4, 2), g in multipoly(4, 3), h in multipoly(4, 2)) {
        let fg = f.mul(&g).unwrap();
        prop_assert!(fg.poly().is_homogeneous());
        prop_assert_eq!(fg.degree(), 5);
        let s = f.add(&h).unwrap();
        prop_assert!(s.is_zero() || s.poly().is_homogeneous());
        prop_assert!(f.pow(3).poly().is_homogeneous());
    }

    #[test]
    fn substitution_is_multiplicative(f in multipoly(4, 2), g in multipoly(4, 1), forms in prop::collection::vec(biform(1, 2), 4)) {
        let lhs = f.mul(&g).unwrap().substitute(&forms).unwrap();
        let rhs = f.substitute(&forms).unwrap().mul(&g.substitute(&forms).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn multiplicity_is_additive(f in multipoly(5, 3), g in multipoly(5, 2), i in 0usize..5) {
        let fg = f.mul(&g).unwrap();
        prop_assert_eq!(
            fg.mult_at_coord_point(i).unwrap(),
            f.mult_at_coord_point(i).unwrap() + g.mult_at_coord_point(i).unwrap()
        );
    }

    #[test]
    fn kernel_annihilates(
        left in prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 5),
        right in prop::collection::vec(prop::collection::vec(-4i64..=4, 6), 3),
    ) {
        // a 5x6 product through rank <= 3 exercises nontrivial kernels
        let l = ExactMatrix::from_rows(left.iter().map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect());
        let r = ExactMatrix::from_rows(right.iter().map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect());
        let m = l.mul(&r);
        let kernel = m.kernel();
        for v in &kernel {
            prop_assert!(m.mul_vec(v).iter().all(|x| x == &rat(0, 1)));
        }
        prop_assert_eq!(m.rank() + kernel.len(), m.ncols());
        prop_assert!(m.rank() <= 3);
    }

    #[test]
    fn substitution_commutes_with_evaluation(f in multipoly(4, 3), forms in prop::collection::vec(biform(2, 1), 4), p in point()) {
        let pulled = f.substitute(&forms).unwrap();
        let image: Vec<Rational> = forms.iter().map(|g| g.eval_at(&p)).collect();
        prop_assert_eq!(pulled.eval_at(&p), f.eval(&image).unwrap());
    }

    #[test]
    fn printing_roundtrips(f in multipoly(5, 3), g in biform(2, 3)) {
        prop_assert_eq!(MultiPoly::parse(&f.to_string(), 5).unwrap(), f);
        prop_assert_eq!(BiForm::parse_with_bidegree(&g.to_string(), 2, 3).unwrap(), g);
    }
}
