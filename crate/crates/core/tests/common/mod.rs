//! Surfaces and independent oracles shared by the integration tests.
#![allow(dead_code)]

use cremona_core::exact::{int, resultant, BiForm, ExactMatrix, MultiPoly, Rational, UniPoly};
use cremona_core::monoid::Vertex;
use cremona_core::random::{random_nonzero_rational, rng_for, SeededRng};
use cremona_core::surfaces::{AffineChart, ParamSurface};
use rand::Rng;

/// The bidegree (2,1) quartic ruled by conics.
pub fn quartic() -> ParamSurface {
    ParamSurface::parse(&["s^2*u", "s^2*v", "s*t*u + t^2*v", "t^2*u"]).unwrap()
}

/// A bidegree (3,1) sextic ruled by twisted cubics.
pub fn sextic() -> ParamSurface {
    ParamSurface::parse(&["s^3*u", "s^3*v", "s*t^2*u + t^3*v", "t^3*u"]).unwrap()
}

pub fn quadric() -> ParamSurface {
    ParamSurface::parse(&["s*u", "s*v", "t*u", "t*v"]).unwrap()
}

fn combination(forms: &[BiForm], rng: &mut SeededRng) -> BiForm {
    let c: Vec<Rational> = forms.iter().map(|_| random_nonzero_rational(rng, 20)).collect();
    BiForm::combination(&c, forms).unwrap()
}

fn pair(chart: &AffineChart, f: &BiForm, g: &BiForm) -> Option<UniPoly> {
    let (pf, pg) = (chart.pull(f), chart.pull(g));
    if !chart.is_regular_for(f, &pf) || !chart.is_regular_for(g, &pg) {
        return None;
    }
    Some(resultant(&pf, &pg))
}

/// Points where two general hyperplane sections meet off the base locus,
/// by exact resultants over the rationals. Equals the image degree for a
/// birational parametrization.
pub fn exact_section_count(z: &ParamSurface, seed: u64) -> usize {
    let (a, b) = z.bidegree();
    let full = (2 * a * b) as usize;
    for attempt in 0..8 {
        let mut rng = rng_for(seed, &format!("oracle-{attempt}"));
        let chart = AffineChart::random(&mut rng, 20);
        let Some(r) = pair(&chart, &combination(z.forms(), &mut rng), &combination(z.forms(), &mut rng)) else { continue };
        if r.degree() != Some(full) {
            continue;
        }
        let mut support: Option<UniPoly> = None;
        let mut ok = true;
        for _ in 0..3 {
            match pair(&chart, &combination(z.forms(), &mut rng), &combination(z.forms(), &mut rng)) {
                Some(s) if !s.is_zero() => {
                    support = Some(match support {
                        None => s,
                        Some(t) => t.gcd(&s),
                    })
                }
                _ => ok = false,
            }
        }
        if !ok {
            continue;
        }
        let support = support.unwrap().squarefree_part();
        return r.strip_roots_of(&support).0.degree().unwrap_or(0);
    }
    panic!("no regular chart");
}

pub fn vertex_point(v: Vertex) -> Vec<Rational> {
    (0..5).map(|i| if i == v.coord() { int(1) } else { int(0) }).collect()
}

/// Whether `f` vanishes at 30 random points of the cone over `z` from `v`.
pub fn cone_sampled(f: &MultiPoly, v: Vertex, z: &ParamSurface, seed: u64) -> bool {
    let mut rng = rng_for(seed, "cone-sample");
    let e = vertex_point(v);
    (0..30).all(|_| {
        let p: [Rational; 4] = std::array::from_fn(|_| random_nonzero_rational(&mut rng, 30));
        let (l, m) = (random_nonzero_rational(&mut rng, 30), random_nonzero_rational(&mut rng, 30));
        let y = z.eval(&p);
        let q: Vec<Rational> = e.iter().zip(&y).map(|(a, b)| &l * a + &m * b).collect();
        f.eval(&q).unwrap() == int(0)
    })
}

/// A random instance for the cone test: a surface in P^4 whose projection
/// from `v` is a quadric `g = 0`, and a form that is either `g * h` (it
/// contains the cone) or has a vertex-variable term added (it does not).
pub fn cone_instance(index: u64) -> (MultiPoly, Vertex, ParamSurface, bool) {
    let mut rng = rng_for(index, "cone-instance");
    let v = if index.is_multiple_of(2) { Vertex::P0 } else { Vertex::P4 };
    let others: Vec<usize> = (0..5).filter(|&i| i != v.coord()).collect();
    let a = loop {
        let m = ExactMatrix::from_rows((0..4).map(|_| (0..4).map(|_| int(rng.gen_range(-3..=3))).collect()).collect());
        if m.inverse().is_some() {
            break m;
        }
    };
    let inv = a.inverse().unwrap();
    let segre = quadric();
    let moved: Vec<BiForm> = (0..4).map(|i| BiForm::combination(a.row(i), segre.forms()).unwrap()).collect();
    let mut forms = vec![BiForm::zero(1, 1); 5];
    for (k, &i) in others.iter().enumerate() {
        forms[i] = moved[k].clone();
    }
    forms[v.coord()] = BiForm::random(1, 1, &mut rng, 9);
    let z = ParamSurface::new(forms).unwrap();
    // g(x) = x_a x_d - x_b x_c in the Segre coordinates, pulled back along
    // the inverse change
    let lin: Vec<MultiPoly> = (0..4)
        .map(|k| {
            let terms = others.iter().enumerate().map(|(j, &i)| {
                let mut e = vec![0; 5];
                e[i] = 1;
                (e, inv.get(k, j).clone())
            });
            MultiPoly::from_terms(5, terms).unwrap()
        })
        .collect();
    let g = lin[0].mul(&lin[3]).unwrap().sub(&lin[1].mul(&lin[2]).unwrap()).unwrap();
    let hdeg = rng.gen_range(0..=2u32);
    let h = random_form(5, hdeg, &mut rng);
    let mut f = g.mul(&h).unwrap();
    let contains = rng.gen_bool(0.5);
    if !contains {
        let extra = MultiPoly::var(5, v.coord()).mul(&random_form(5, f.degree() - 1, &mut rng)).unwrap();
        f = f.add(&extra).unwrap();
    }
    (f, v, z, contains)
}

pub fn random_form(n: usize, d: u32, rng: &mut SeededRng) -> MultiPoly {
    let terms = cremona_core::exact::monomials_of_degree(n, d).into_iter().map(|m| (m, int(rng.gen_range(-5..=5))));
    let p = cremona_core::exact::Poly::from_terms(n, terms);
    if p.is_zero() {
        return MultiPoly::var(n, 0).pow(d);
    }
    MultiPoly::from_poly_with_degree(p, d).unwrap()
}
