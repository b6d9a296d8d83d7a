//! Linear systems of monoids with vertex at the coordinate points `p0` and
//! `p4` of P^4, their restriction to a parametrized surface, and the test
//! for containing the cone over the surface.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{int, modp, monomials_of_degree, BiForm, BiFormPowers, ExactMatrix, Monomial, MultiPoly, Rational, RowSpace};
use crate::random::{derive_seed, random_nonzero_rational, rng_for, DEFAULT_HEIGHT};
use crate::surfaces::ParamSurface;

/// Number of random elements tried before a search gives up.
pub const DEFAULT_DRAWS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Vertex {
    #[serde(rename = "p0")]
    P0,
    #[serde(rename = "p4")]
    P4,
}

impl Vertex {
    pub fn coord(self) -> usize {
        match self {
            Vertex::P0 => 0,
            Vertex::P4 => 4,
        }
    }

    pub fn parse(s: &str) -> Result<Vertex> {
        match s.trim() {
            "p0" => Ok(Vertex::P0),
            "p4" => Ok(Vertex::P4),
            other => Err(Error::InvalidArgument(format!("unknown vertex `{other}`"))),
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.coord())
    }
}

/// A linear system of degree-`d` forms on P^4 given by a basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidSystem {
    pub d: u32,
    pub vertexes: Vec<Vertex>,
    pub basis: Vec<MultiPoly>,
    pub constraint: Option<ParamSurface>,
    pub cone_free: bool,
    /// Rank of the restriction map, when the system was cut by a surface.
    pub h0_restricted: Option<usize>,
}

impl MonoidSystem {
    pub fn projective_dim(&self) -> i64 {
        self.basis.len() as i64 - 1
    }

    pub fn combination(&self, coeffs: &[Rational]) -> MultiPoly {
        let mut acc = MultiPoly::zero(5, self.d);
        for (c, f) in coeffs.iter().zip(&self.basis) {
            acc = acc.add(&f.scale(c)).expect("same degree");
        }
        acc
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, height: u32) -> MultiPoly {
        let coeffs: Vec<Rational> = self.basis.iter().map(|_| random_nonzero_rational(rng, height)).collect();
        self.combination(&coeffs)
    }
}

fn check_degree(d: u32) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("degree {d} < 2")));
    }
    Ok(())
}

/// Monomial basis of the degree-`d` forms with multiplicity at least `d-1`
/// at every listed vertex. An empty vertex list gives all degree-`d` forms.
pub fn monoid_basis(d: u32, vertexes: &[Vertex]) -> Result<MonoidSystem> {
    check_degree(d)?;
    let mut vs: Vec<Vertex> = vertexes.to_vec();
    vs.sort();
    vs.dedup();
    let basis = monomials_of_degree(5, d)
        .into_iter()
        .filter(|m| vs.iter().all(|v| m.exp(v.coord()) <= 1))
        .map(|m| MultiPoly::monomial(m.exponents(), Rational::one()))
        .collect();
    Ok(MonoidSystem { d, vertexes: vs, basis, constraint: None, cone_free: false, h0_restricted: None })
}

fn integral(q: Rational) -> u64 {
    assert!(q.is_integer(), "closed form is not integral");
    q.to_integer().try_into().expect("non-negative")
}

/// `d^3/3 + 3d^2/2 + 13d/6`, the projective dimension of one-vertex monoids.
pub fn dim_formula_md(d: u32) -> Result<u64> {
    check_degree(d)?;
    let d = int(d as i64);
    let v = &d * &d * &d / int(3) + int(3) * &d * &d / int(2) + int(13) * &d / int(6);
    Ok(integral(v))
}

/// `2d^2 + 2d`, the projective dimension of two-vertex monoids.
pub fn dim_formula_mdpq(d: u32) -> Result<u64> {
    check_degree(d)?;
    Ok(2 * (d as u64) * (d as u64) + 2 * d as u64)
}

/// Dense form modulo the prime, used for rank certificates.
#[derive(Clone)]
struct FpForm {
    a: usize,
    b: usize,
    c: Vec<u64>,
}

impl FpForm {
    fn one() -> Self {
        FpForm { a: 0, b: 0, c: vec![1] }
    }

    fn from_biform(f: &BiForm) -> Option<Self> {
        let (a, b) = f.bidegree();
        let (a, b) = (a as usize, b as usize);
        let mut c = vec![0; (a + 1) * (b + 1)];
        for (&(i, j), q) in f.terms() {
            c[i as usize * (b + 1) + j as usize] = modp::reduce(q)?;
        }
        Some(FpForm { a, b, c })
    }

    fn mul(&self, o: &FpForm) -> FpForm {
        let (a, b) = (self.a + o.a, self.b + o.b);
        let mut c = vec![0; (a + 1) * (b + 1)];
        for i1 in 0..=self.a {
            for j1 in 0..=self.b {
                let x = self.c[i1 * (self.b + 1) + j1];
                if x == 0 {
                    continue;
                }
                for i2 in 0..=o.a {
                    let row = (i1 + i2) * (b + 1) + j1;
                    for j2 in 0..=o.b {
                        let y = o.c[i2 * (o.b + 1) + j2];
                        if y != 0 {
                            c[row + j2] = modp::add(c[row + j2], modp::mul(x, y));
                        }
                    }
                }
            }
        }
        FpForm { a, b, c }
    }
}

struct FpPowers {
    forms: Vec<FpForm>,
    cache: HashMap<Monomial, FpForm>,
}

impl FpPowers {
    fn monomial(&mut self, m: &Monomial) -> FpForm {
        if let Some(f) = self.cache.get(m) {
            return f.clone();
        }
        let f = match m.exponents().iter().position(|&e| e > 0) {
            None => FpForm::one(),
            Some(v) => {
                let lower = m.with_exp(v, m.exp(v) - 1);
                self.monomial(&lower).mul(&self.forms[v])
            }
        };
        self.cache.insert(m.clone(), f.clone());
        f
    }
}

/// Rank of the restriction map modulo the prime: a lower bound for the
/// rational rank, equal to it unless the prime divides every maximal minor.
/// `None` when a coefficient has a denominator divisible by the prime.
pub fn restriction_rank_modular(sys: &MonoidSystem, z: &ParamSurface) -> Result<Option<usize>> {
    check_surface(z)?;
    Ok(restriction_pivots_mod_p(&sys.basis, z.forms()).map(|p| p.len()))
}

/// Monomials `(i, j)` of the restricted bidegree whose coefficients are
/// independent conditions modulo the prime. They are independent over the
/// rationals as well.
fn restriction_pivots_mod_p(basis: &[MultiPoly], forms: &[BiForm]) -> Option<Vec<(u32, u32)>> {
    let fp = forms.iter().map(FpForm::from_biform).collect::<Option<Vec<_>>>()?;
    let mut pw = FpPowers { forms: fp, cache: HashMap::new() };
    let mut rows = Vec::with_capacity(basis.len());
    let mut width = 0;
    for f in basis {
        let mut acc: Option<Vec<u64>> = None;
        for (m, c) in f.terms() {
            let img = pw.monomial(m);
            let c = modp::reduce(c)?;
            let acc = acc.get_or_insert_with(|| vec![0; img.c.len()]);
            for (x, y) in acc.iter_mut().zip(&img.c) {
                *x = modp::add(*x, modp::mul(c, *y));
            }
        }
        let row = acc.unwrap_or_default();
        width = width.max(row.len());
        rows.push(row);
    }
    for r in rows.iter_mut() {
        r.resize(width, 0);
    }
    let d = basis.first().map_or(0, |f| f.degree() as usize);
    let b = forms.first().map_or(0, |f| f.bidegree().1 as usize) * d;
    Some(modp::pivot_columns(rows, width).into_iter().map(|k| ((k / (b + 1)) as u32, (k % (b + 1)) as u32)).collect())
}

/// Restriction matrix: one column per polynomial, one row per monomial of
/// the restricted bidegree that occurs.
fn restriction_matrix(images: &[BiForm]) -> ExactMatrix {
    let mut keys: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    for img in images {
        for (k, _) in img.terms() {
            let n = keys.len();
            keys.entry(*k).or_insert(n);
        }
    }
    let mut m = ExactMatrix::zeros(keys.len(), images.len());
    for (col, img) in images.iter().enumerate() {
        for (k, c) in img.terms() {
            m.set(keys[k], col, c.clone());
        }
    }
    m
}

/// Kernel of the restriction from the independent rows found modulo the
/// prime; falls back to the full matrix if a vector fails the full check.
fn kernel_via_pivots(images: &[BiForm], pivots: &[(u32, u32)]) -> Vec<Vec<Rational>> {
    let mut sub = ExactMatrix::zeros(pivots.len(), images.len());
    for (r, &(i, j)) in pivots.iter().enumerate() {
        for (c, img) in images.iter().enumerate() {
            sub.set(r, c, img.coeff(i, j));
        }
    }
    let kernel = sub.kernel();
    let full = restriction_matrix(images);
    if kernel.iter().all(|v| full.mul_vec(v).iter().all(|x| x.is_zero())) {
        kernel
    } else {
        full.kernel()
    }
}

fn check_surface(z: &ParamSurface) -> Result<()> {
    if z.ambient_dim() != 4 {
        return Err(Error::InvalidArgument(format!("surface must lie in P^4, got P^{}", z.ambient_dim())));
    }
    Ok(())
}

fn images(polys: &[MultiPoly], z: &ParamSurface) -> Vec<BiForm> {
    let mut pw = BiFormPowers::new(z.forms());
    polys.iter().map(|f| pw.poly(f.poly(), f.degree())).collect()
}

/// Rank of the restriction map from the span of `sys` to forms on the
/// surface.
pub fn restriction_rank(sys: &MonoidSystem, z: &ParamSurface) -> Result<usize> {
    check_surface(z)?;
    let n = sys.basis.len();
    match restriction_pivots_mod_p(&sys.basis, z.forms()) {
        Some(p) if p.len() == n => Ok(n),
        Some(p) => Ok(n - kernel_via_pivots(&images(&sys.basis, z), &p).len()),
        None => Ok(restriction_matrix(&images(&sys.basis, z)).rank()),
    }
}

/// Members of `sys` that vanish on `z`. Fails with `EmptySystem` when none do.
pub fn restrict_to_surface(sys: &MonoidSystem, z: &ParamSurface) -> Result<MonoidSystem> {
    check_surface(z)?;
    let n = sys.basis.len();
    let pivots = restriction_pivots_mod_p(&sys.basis, z.forms());
    if pivots.as_ref().map(|p| p.len()) == Some(n) {
        return Err(Error::EmptySystem(format!("no degree-{} member vanishes on the surface (certified)", sys.d)));
    }
    let imgs = images(&sys.basis, z);
    let kernel = match pivots {
        Some(p) => kernel_via_pivots(&imgs, &p),
        None => restriction_matrix(&imgs).kernel(),
    };
    if kernel.is_empty() {
        return Err(Error::EmptySystem(format!("no degree-{} member vanishes on the surface", sys.d)));
    }
    let h0 = n - kernel.len();
    let basis = kernel.iter().map(|k| sys.combination(k)).collect();
    Ok(MonoidSystem {
        d: sys.d,
        vertexes: sys.vertexes.clone(),
        basis,
        constraint: Some(z.clone()),
        cone_free: false,
        h0_restricted: Some(h0),
    })
}

/// True when `f` contains the cone over `z` with the given vertex: every
/// piece of `f` graded by the vertex variable vanishes on `z`.
pub fn contains_cone(f: &MultiPoly, vertex: Vertex, z: &ParamSurface) -> Result<bool> {
    if f.num_vars() != z.forms().len() {
        return Err(Error::VarCountMismatch(f.num_vars(), z.forms().len()));
    }
    let mut pw = BiFormPowers::new(z.forms());
    Ok(f.graded_pieces(vertex.coord()).iter().all(|p| pw.poly(p.poly(), p.degree()).is_zero()))
}

/// Coefficient vectors (over `sys.basis`) spanning the members that contain
/// the cone over `z` with the given vertex.
pub fn cone_subspace(sys: &MonoidSystem, vertex: Vertex, z: &ParamSurface) -> Result<Vec<Vec<Rational>>> {
    check_surface(z)?;
    let v = vertex.coord();
    let pieces: Vec<Vec<MultiPoly>> = sys.basis.iter().map(|f| f.graded_pieces(v)).collect();
    let top = pieces.iter().map(|p| p.len()).max().unwrap_or(0);
    let mut blocks = Vec::new();
    for e in 0..top {
        let layer: Vec<MultiPoly> = pieces
            .iter()
            .map(|p| p.get(e).cloned().unwrap_or_else(|| MultiPoly::zero(5, sys.d - e as u32)))
            .collect();
        blocks.push(restriction_matrix(&images(&layer, z)));
    }
    let rows: Vec<Vec<Rational>> =
        blocks.iter().flat_map(|m| (0..m.nrows()).map(move |i| m.row(i).to_vec())).collect();
    if rows.is_empty() {
        return Ok((0..sys.basis.len())
            .map(|k| (0..sys.basis.len()).map(|j| if j == k { Rational::one() } else { Rational::zero() }).collect())
            .collect());
    }
    Ok(ExactMatrix::from_rows(rows).kernel())
}

/// Complement of the cone-containing members inside a system through `z`,
/// chosen by pivot completion along the basis order.
pub fn not_cone_complement(sys: &MonoidSystem, vertex: Vertex) -> Result<MonoidSystem> {
    let z = sys
        .constraint
        .as_ref()
        .ok_or_else(|| Error::Precondition("system is not constrained by a surface".into()))?;
    let cone = cone_subspace(sys, vertex, z)?;
    let n = sys.basis.len();
    let mut span = RowSpace::new(n);
    for c in &cone {
        span.insert(c);
    }
    let mut chosen = Vec::new();
    for k in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[k] = Rational::one();
        if span.insert(&e) {
            chosen.push(sys.basis[k].clone());
        }
    }
    if chosen.is_empty() {
        return Err(Error::EmptySystem(format!("every member contains the cone with vertex {vertex}")));
    }
    Ok(MonoidSystem {
        d: sys.d,
        vertexes: sys.vertexes.clone(),
        basis: chosen,
        constraint: sys.constraint.clone(),
        cone_free: true,
        h0_restricted: sys.h0_restricted,
    })
}

/// Graded pieces of a monoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonoidPieces {
    /// `F = x_v * lower + top` with `lower`, `top` free of `x_v`.
    Single { vertex: Vertex, lower: MultiPoly, top: MultiPoly },
    /// `G = x0*x4*g + x0*g0 + x4*g4 + top` in `x1, x2, x3`.
    Double { g: MultiPoly, g0: MultiPoly, g4: MultiPoly, top: MultiPoly },
}

/// A form of degree `d` with multiplicity exactly `d-1` at each vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monoid {
    form: MultiPoly,
    vertexes: Vec<Vertex>,
    pieces: MonoidPieces,
}

fn piece(p: &[MultiPoly], k: usize, degree: u32) -> MultiPoly {
    p.get(k).cloned().unwrap_or_else(|| MultiPoly::zero(5, degree))
}

impl Monoid {
    pub fn new(form: MultiPoly, vertexes: &[Vertex]) -> Result<Monoid> {
        if form.num_vars() != 5 {
            return Err(Error::VarCountMismatch(form.num_vars(), 5));
        }
        let d = form.degree();
        check_degree(d)?;
        let mut vs = vertexes.to_vec();
        vs.sort();
        vs.dedup();
        if vs.is_empty() {
            return Err(Error::NotAMonoid("no vertex".into()));
        }
        for v in &vs {
            let m = form.mult_at_coord_point(v.coord())?;
            if m != d - 1 {
                return Err(Error::NotAMonoid(format!("multiplicity {m} at {v}, need {}", d - 1)));
            }
        }
        let pieces = if vs.len() == 1 {
            let p = form.graded_pieces(vs[0].coord());
            MonoidPieces::Single { vertex: vs[0], top: piece(&p, 0, d), lower: piece(&p, 1, d - 1) }
        } else {
            let p0 = form.graded_pieces(0);
            let (a0, a1) = (piece(&p0, 0, d), piece(&p0, 1, d - 1));
            let q0 = a0.graded_pieces(4);
            let q1 = a1.graded_pieces(4);
            MonoidPieces::Double {
                g: piece(&q1, 1, d - 2),
                g0: piece(&q1, 0, d - 1),
                g4: piece(&q0, 1, d - 1),
                top: piece(&q0, 0, d),
            }
        };
        Ok(Monoid { form, vertexes: vs, pieces })
    }

    pub fn form(&self) -> &MultiPoly {
        &self.form
    }

    pub fn degree(&self) -> u32 {
        self.form.degree()
    }

    pub fn vertexes(&self) -> &[Vertex] {
        &self.vertexes
    }

    pub fn pieces(&self) -> &MonoidPieces {
        &self.pieces
    }

    /// Rebuilds the form from its pieces.
    pub fn reassemble(&self) -> MultiPoly {
        let x = |i| MultiPoly::var(5, i);
        match &self.pieces {
            MonoidPieces::Single { vertex, lower, top } => {
                x(vertex.coord()).mul(lower).unwrap().add(top).unwrap()
            }
            MonoidPieces::Double { g, g0, g4, top } => {
                let x04 = x(0).mul(&x(4)).unwrap();
                x04.mul(g)
                    .unwrap()
                    .add(&x(0).mul(g0).unwrap())
                    .unwrap()
                    .add(&x(4).mul(g4).unwrap())
                    .unwrap()
                    .add(top)
                    .unwrap()
            }
        }
    }

    /// Pieces `(lower, top)` with respect to one vertex.
    pub fn split_at(&self, vertex: Vertex) -> Result<(MultiPoly, MultiPoly)> {
        if !self.vertexes.contains(&vertex) {
            return Err(Error::InvalidArgument(format!("{vertex} is not a vertex")));
        }
        let d = self.degree();
        let p = self.form.graded_pieces(vertex.coord());
        Ok((piece(&p, 1, d - 1), piece(&p, 0, d)))
    }
}

/// Outcome of a search for a double-vertex monoid through a surface.
#[derive(Clone, Debug)]
pub struct MonoidSearch {
    pub d: u32,
    /// Projective dimension of the two-vertex system through the surface,
    /// `None` when it is empty.
    pub system_dim: Option<i64>,
    /// Projective dimensions of the cone-containing subsystems at `p0`, `p4`.
    pub cone_dims: Option<(i64, i64)>,
    pub draws: usize,
    pub monoid: Option<Monoid>,
}

/// Looks for a member of the two-vertex system through `z` containing
/// neither cone, drawing at most `draws` random members.
pub fn search_double_vertex_monoid(z: &ParamSurface, d: u32, seed: u64, draws: usize) -> Result<MonoidSearch> {
    let sys = monoid_basis(d, &[Vertex::P0, Vertex::P4])?;
    let mut out = MonoidSearch { d, system_dim: None, cone_dims: None, draws: 0, monoid: None };
    let through = match restrict_to_surface(&sys, z) {
        Ok(s) => s,
        Err(Error::EmptySystem(_)) => return Ok(out),
        Err(e) => return Err(e),
    };
    out.system_dim = Some(through.projective_dim());
    let c0 = cone_subspace(&through, Vertex::P0, z)?.len() as i64 - 1;
    let c4 = cone_subspace(&through, Vertex::P4, z)?.len() as i64 - 1;
    out.cone_dims = Some((c0, c4));
    let full = through.projective_dim();
    if c0 == full || c4 == full {
        return Ok(out);
    }
    let mut rng = rng_for(derive_seed(seed, "monoid-draw", d as u64), "monoid");
    for k in 0..draws {
        out.draws = k + 1;
        let f = through.random_element(&mut rng, DEFAULT_HEIGHT);
        if f.is_zero() || contains_cone(&f, Vertex::P0, z)? || contains_cone(&f, Vertex::P4, z)? {
            continue;
        }
        if let Ok(m) = Monoid::new(f, &[Vertex::P0, Vertex::P4]) {
            out.monoid = Some(m);
            return Ok(out);
        }
    }
    Ok(out)
}

pub fn find_double_vertex_monoid(z: &ParamSurface, d: u32, seed: u64) -> Result<Option<Monoid>> {
    Ok(search_double_vertex_monoid(z, d, seed, DEFAULT_DRAWS)?.monoid)
}
