//! Rational maps between projective spaces and the Cremona transformations
//! of P^3 induced by double-vertex monoids.

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{BiForm, MultiPoly, Rational};
use crate::monoid::{Monoid, MonoidPieces, Vertex};
use crate::random::{derive_seed, random_nonzero_rational, rng_for};
use crate::surfaces::ParamSurface;

/// Common factors are only searched for up to this component degree.
pub const GCD_DEGREE_LIMIT: u32 = 8;

/// Height of random points used by identity checks.
pub const IDENTITY_HEIGHT: u32 = 100;

/// `P^source_dim --> P^target_dim` given by homogeneous components of a
/// common degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMap {
    source_dim: usize,
    target_dim: usize,
    components: Vec<MultiPoly>,
    /// False when common-factor removal was skipped because of the degree.
    reduced: bool,
}

/// Cross-multiplication test; the zero vector equals nothing.
pub fn projectively_equal(p: &[Rational], q: &[Rational]) -> bool {
    if p.len() != q.len() || p.iter().all(|x| x.is_zero()) || q.iter().all(|x| x.is_zero()) {
        return false;
    }
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if &p[i] * &q[j] != &p[j] * &q[i] {
                return false;
            }
        }
    }
    true
}

impl RationalMap {
    /// Validates and removes the common factor of the components.
    pub fn new(source_dim: usize, components: Vec<MultiPoly>) -> Result<Self> {
        if components.len() < 2 {
            return Err(Error::InvalidArgument("a map needs at least two components".into()));
        }
        let mut degree = None;
        for c in &components {
            if c.num_vars() != source_dim + 1 {
                return Err(Error::VarCountMismatch(c.num_vars(), source_dim + 1));
            }
            if c.is_zero() {
                continue;
            }
            match degree {
                None => degree = Some(c.degree()),
                Some(d) if d != c.degree() => return Err(Error::DegreeMismatch(c.degree(), d)),
                _ => {}
            }
        }
        let Some(degree) = degree else {
            return Err(Error::MapCollapses("all components vanish".into()));
        };
        let components = components
            .into_iter()
            .map(|c| if c.is_zero() { MultiPoly::zero(source_dim + 1, degree) } else { c })
            .collect::<Vec<_>>();
        let target_dim = components.len() - 1;
        let mut map = RationalMap { source_dim, target_dim, components, reduced: false };
        map.remove_common_factor();
        Ok(map)
    }

    pub fn identity(n: usize) -> Self {
        RationalMap {
            source_dim: n,
            target_dim: n,
            components: (0..=n).map(|i| MultiPoly::var(n + 1, i)).collect(),
            reduced: true,
        }
    }

    fn remove_common_factor(&mut self) {
        let nonzero: Vec<&MultiPoly> = self.components.iter().filter(|c| !c.is_zero()).collect();
        if MultiPoly::coprime_mod_p(&nonzero) {
            self.reduced = true;
            return;
        }
        if self.degree() > GCD_DEGREE_LIMIT {
            self.reduced = false;
            return;
        }
        let mut g: Option<MultiPoly> = None;
        for c in self.components.iter().filter(|c| !c.is_zero()) {
            g = Some(match g {
                None => c.clone(),
                Some(h) => h.gcd(c),
            });
            if g.as_ref().unwrap().degree() == 0 {
                break;
            }
        }
        let g = g.expect("a nonzero component");
        if g.degree() > 0 {
            let deg = self.degree() - g.degree();
            self.components = self
                .components
                .iter()
                .map(|c| if c.is_zero() { MultiPoly::zero(self.source_dim + 1, deg) } else { c.div_exact(&g).expect("gcd divides") })
                .collect();
        }
        self.reduced = true;
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn components(&self) -> &[MultiPoly] {
        &self.components
    }

    pub fn degree(&self) -> u32 {
        self.components.iter().find(|c| !c.is_zero()).map_or(0, |c| c.degree())
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn eval(&self, p: &[Rational]) -> Result<Vec<Rational>> {
        self.components.iter().map(|c| c.eval(p)).collect()
    }

    /// `self o inner`.
    pub fn compose(&self, inner: &RationalMap) -> Result<RationalMap> {
        if inner.target_dim != self.source_dim {
            return Err(Error::InvalidArgument(format!(
                "cannot compose: inner lands in P^{}, outer starts in P^{}",
                inner.target_dim, self.source_dim
            )));
        }
        let comps = self
            .components
            .iter()
            .map(|c| c.compose(&inner.components))
            .collect::<Result<Vec<_>>>()?;
        RationalMap::new(inner.source_dim, comps)
    }

    /// Components are a common multiple of the coordinates.
    pub fn is_projective_identity(&self) -> bool {
        if self.source_dim != self.target_dim {
            return false;
        }
        let n = self.source_dim + 1;
        for i in 0..n {
            for j in i + 1..n {
                let l = self.components[i].mul(&MultiPoly::var(n, j)).unwrap();
                let r = self.components[j].mul(&MultiPoly::var(n, i)).unwrap();
                if l != r {
                    return false;
                }
            }
        }
        self.components.iter().any(|c| !c.is_zero())
    }

    /// Image of a parametrized surface, with the common factor removed.
    pub fn apply_to_surface(&self, s: &ParamSurface, seed: u64) -> Result<ParamSurface> {
        if s.forms().len() != self.source_dim + 1 {
            return Err(Error::VarCountMismatch(s.forms().len(), self.source_dim + 1));
        }
        let forms = self
            .components
            .iter()
            .map(|c| c.substitute(s.forms()))
            .collect::<Result<Vec<BiForm>>>()?;
        if forms.iter().all(|f| f.is_zero()) {
            return Err(Error::MapCollapses("the surface lies in the base locus".into()));
        }
        let image = ParamSurface::new(forms).map_err(|e| match e {
            Error::DegenerateSurface(m) => Error::MapCollapses(format!("the surface is contracted: {m}")),
            e => e,
        })?;
        if !image.is_birational(derive_seed(seed, "apply-birational", 0))? {
            return Err(Error::MapCollapses("not birational onto the image".into()));
        }
        Ok(image)
    }
}

/// A birational self-map of P^3 with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CremonaMap {
    pub forward: RationalMap,
    pub inverse: RationalMap,
    pub source_monoid: Option<Monoid>,
}

/// Result of a randomized identity check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Verification {
    pub passed: bool,
    pub checked: usize,
    /// Trials where no point off the indeterminacy locus was found.
    pub indeterminate: usize,
}

const POINT_ATTEMPTS: u64 = 10;

impl CremonaMap {
    pub fn identity() -> Self {
        CremonaMap { forward: RationalMap::identity(3), inverse: RationalMap::identity(3), source_monoid: None }
    }

    pub fn degrees(&self) -> (u32, u32) {
        (self.forward.degree(), self.inverse.degree())
    }

    pub fn inverted(&self) -> CremonaMap {
        CremonaMap { forward: self.inverse.clone(), inverse: self.forward.clone(), source_monoid: self.source_monoid.clone() }
    }

    /// `self o inner`.
    pub fn compose(&self, inner: &CremonaMap) -> Result<CremonaMap> {
        Ok(CremonaMap {
            forward: self.forward.compose(&inner.forward)?,
            inverse: inner.inverse.compose(&self.inverse)?,
            source_monoid: None,
        })
    }

    pub fn apply_to_surface(&self, s: &ParamSurface, seed: u64) -> Result<ParamSurface> {
        self.forward.apply_to_surface(s, seed)
    }
}

/// Checks `inverse(forward(P)) = P` at `trials` random points of height 100.
pub fn verify_cremona(map: &CremonaMap, trials: usize, seed: u64) -> Verification {
    let outcomes: Vec<Option<bool>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            for attempt in 0..POINT_ATTEMPTS {
                let mut rng = rng_for(derive_seed(seed, "identity-trial", i as u64), &attempt.to_string());
                let p: Vec<Rational> = (0..=map.forward.source_dim()).map(|_| random_nonzero_rational(&mut rng, IDENTITY_HEIGHT)).collect();
                let Ok(q) = map.forward.eval(&p) else { return Some(false) };
                if q.iter().all(|x| x.is_zero()) {
                    continue;
                }
                let Ok(r) = map.inverse.eval(&q) else { return Some(false) };
                if r.iter().all(|x| x.is_zero()) {
                    continue;
                }
                return Some(projectively_equal(&p, &r));
            }
            None
        })
        .collect();
    let checked = outcomes.iter().filter(|o| o.is_some()).count();
    let passed = checked > 0 && outcomes.iter().all(|o| *o != Some(false));
    Verification { passed, checked, indeterminate: trials - checked }
}

fn drop_var_all(polys: Vec<MultiPoly>, var: usize) -> Vec<MultiPoly> {
    polys.into_iter().map(|p| p.drop_var(var).expect("variable absent")).collect()
}

fn x5(i: usize) -> MultiPoly {
    MultiPoly::var(5, i)
}

/// Inverse of the projection from `vertex` restricted to the monoid: a map
/// from the P^3 of the remaining coordinates back onto the hypersurface.
pub fn monoid_section(f: &Monoid, vertex: Vertex) -> Result<RationalMap> {
    let (lower, top) = f.split_at(vertex)?;
    if lower.is_zero() {
        return Err(Error::NotAMonoid("the piece below the vertex vanishes".into()));
    }
    let v = vertex.coord();
    let comps: Vec<MultiPoly> = (0..5)
        .map(|i| if i == v { top.neg() } else { x5(i).mul(&lower).unwrap() })
        .collect();
    RationalMap::new(3, drop_var_all(comps, v))
}

/// Cremona transformation `(projection from p4) o (section at p0)` from the
/// P^3 with coordinates `x1..x4` to the P^3 with coordinates `x0..x3`, with
/// its inverse built from the section at `p4`.
pub fn cremona_from_monoid(f: &Monoid, seed: u64) -> Result<CremonaMap> {
    let MonoidPieces::Double { g, g0, g4, top } = f.pieces() else {
        return Err(Error::NotAMonoid("need vertexes p0 and p4".into()));
    };
    let num0 = x5(4).mul(g)?.add(g0)?;
    let num4 = x5(0).mul(g)?.add(g4)?;
    if num0.is_zero() || num4.is_zero() {
        return Err(Error::NotAMonoid("a vertex piece vanishes".into()));
    }
    let den0 = x5(4).mul(g4)?.add(top)?;
    let den4 = x5(0).mul(g0)?.add(top)?;
    let mut fwd = vec![den0.neg()];
    fwd.extend((1..4).map(|i| x5(i).mul(&num0).unwrap()));
    let mut inv: Vec<MultiPoly> = (1..4).map(|i| x5(i).mul(&num4).unwrap()).collect();
    inv.push(den4.neg());
    let map = CremonaMap {
        forward: RationalMap::new(3, drop_var_all(fwd, 0))?,
        inverse: RationalMap::new(3, drop_var_all(inv, 4))?,
        source_monoid: Some(f.clone()),
    };
    if !verify_cremona(&map, 10, derive_seed(seed, "cremona-build", 0)).passed {
        return Err(Error::VerificationFailed("inverse does not undo the forward map".into()));
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadric_monoid() -> Monoid {
        Monoid::new(MultiPoly::parse("x0*x4 - x1*x2", 5).unwrap(), &[Vertex::P0, Vertex::P4]).unwrap()
    }

    fn p4(s: &str) -> MultiPoly {
        MultiPoly::parse(s, 4).unwrap()
    }

    #[test]
    fn quadric_section() {
        let m = Monoid::new(MultiPoly::parse("x0*x4 - x1*x2", 5).unwrap(), &[Vertex::P0]).unwrap();
        let s = monoid_section(&m, Vertex::P0).unwrap();
        let want = ["x0*x1", "x0*x3", "x1*x3", "x2*x3", "x3^2"];
        for (c, w) in s.components().iter().zip(want) {
            assert_eq!(c, &p4(w));
        }
        assert!(m.form().compose(s.components()).unwrap().is_zero());
    }

    #[test]
    fn quadric_cremona() {
        let c = cremona_from_monoid(&quadric_monoid(), 1).unwrap();
        let fwd = ["x0*x1", "x0*x3", "x1*x3", "x2*x3"];
        for (a, w) in c.forward.components().iter().zip(fwd) {
            assert_eq!(a, &p4(w));
        }
        let inv = ["x0*x1", "x0*x2", "x0*x3", "x1*x2"];
        for (a, w) in c.inverse.components().iter().zip(inv) {
            assert_eq!(a, &p4(w));
        }
        let id = c.inverse.compose(&c.forward).unwrap();
        assert!(id.is_projective_identity());
        assert_eq!(id.degree(), 1);
        assert!(verify_cremona(&c, 100, 3).passed);
    }

    #[test]
    fn wrong_inverse_rejected() {
        let c = cremona_from_monoid(&quadric_monoid(), 1).unwrap();
        let bad = CremonaMap { forward: c.forward.clone(), inverse: c.forward.clone(), source_monoid: None };
        assert!(!verify_cremona(&bad, 10, 3).passed);
        assert!(verify_cremona(&CremonaMap::identity(), 10, 3).passed);
    }
}
