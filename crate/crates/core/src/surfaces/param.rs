use num_traits::Zero;
use rand::Rng;

use super::modular::{reduce_point, ModSurface};
use crate::error::{Error, Result};
use crate::exact::{BiForm, ExactMatrix, Rational};
use crate::random::{derive_seed, random_nonzero_rational, rng_for, SeededRng, DEFAULT_HEIGHT};

/// Rational surface in P^n parametrized by `n+1` forms of a common bidegree
/// `(a, b)` on P^1 x P^1, free of common factors. The lines `{u:v fixed}`
/// have degree `a`; `a` is the ruling degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamSurface {
    forms: Vec<BiForm>,
}

/// Preimage of a point under the parametrization, away from base points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fiber {
    Finite(usize),
    Curve,
}

fn random_point(rng: &mut SeededRng) -> [Rational; 4] {
    std::array::from_fn(|_| random_nonzero_rational(rng, DEFAULT_HEIGHT))
}

impl ParamSurface {
    /// Validates the forms and divides out their common factor.
    pub fn new(forms: Vec<BiForm>) -> Result<Self> {
        if forms.len() < 3 {
            return Err(Error::InvalidArgument(format!("need at least 3 forms, got {}", forms.len())));
        }
        let bd = forms[0].bidegree();
        for f in &forms {
            if f.bidegree() != bd {
                let (x, y) = f.bidegree();
                return Err(Error::BidegreeMismatch(x, y, bd.0, bd.1));
            }
        }
        let nonzero: Vec<&BiForm> = forms.iter().filter(|f| !f.is_zero()).collect();
        if nonzero.is_empty() {
            return Err(Error::DegenerateSurface("all forms vanish".into()));
        }
        if nonzero.iter().all(|f| f.is_proportional(nonzero[0])) {
            return Err(Error::DegenerateSurface("forms are proportional; the image is a point".into()));
        }
        let g = BiForm::gcd_all(&forms);
        let forms: Vec<BiForm> = if g.bidegree() == (0, 0) {
            forms
        } else {
            let (a, b) = (bd.0 - g.bidegree().0, bd.1 - g.bidegree().1);
            forms
                .iter()
                .map(|f| if f.is_zero() { BiForm::zero(a, b) } else { f.div_exact(&g).expect("gcd divides") })
                .collect()
        };
        let (a, b) = forms[0].bidegree();
        if a == 0 || b == 0 {
            return Err(Error::DegenerateSurface(format!("bidegree ({a},{b}) maps onto a curve")));
        }
        let s = ParamSurface { forms };
        let mut rng = rng_for(0, "definedness");
        if !(0..4).any(|_| s.eval(&random_point(&mut rng)).iter().any(|x| !x.is_zero())) {
            return Err(Error::DegenerateSurface("undefined at random points".into()));
        }
        Ok(s)
    }

    /// Parses forms in the text grammar; zero forms take the common bidegree.
    pub fn parse(forms: &[&str]) -> Result<Self> {
        let parsed = forms.iter().map(|f| BiForm::parse(f)).collect::<Result<Vec<_>>>()?;
        let (a, b) = parsed
            .iter()
            .find(|f| !f.is_zero())
            .map(|f| f.bidegree())
            .ok_or_else(|| Error::DegenerateSurface("all forms vanish".into()))?;
        Self::new(parsed.into_iter().map(|f| if f.is_zero() { BiForm::zero(a, b) } else { f }).collect())
    }

    pub fn forms(&self) -> &[BiForm] {
        &self.forms
    }

    pub fn bidegree(&self) -> (u32, u32) {
        self.forms[0].bidegree()
    }

    pub fn ruling_degree(&self) -> u32 {
        self.bidegree().0
    }

    pub fn ambient_dim(&self) -> usize {
        self.forms.len() - 1
    }

    pub fn eval(&self, p: &[Rational; 4]) -> Vec<Rational> {
        self.forms.iter().map(|f| f.eval_at(p)).collect()
    }

    fn modular(&self) -> Result<ModSurface> {
        ModSurface::new(&self.forms)
    }

    /// Number of distinct base points.
    pub fn base_point_count(&self, seed: u64) -> Result<usize> {
        self.modular()?.base_point_count(seed)
    }

    /// Preimage of `y` off the base locus.
    pub fn fiber(&self, y: &[Rational], seed: u64) -> Result<Fiber> {
        if y.len() != self.forms.len() {
            return Err(Error::VarCountMismatch(y.len(), self.forms.len()));
        }
        if y.iter().all(|x| x.is_zero()) {
            return Err(Error::InvalidArgument("the zero vector is not a point".into()));
        }
        self.modular()?.fiber(&reduce_point(y), seed)
    }

    pub fn contains_point(&self, y: &[Rational], seed: u64) -> Result<bool> {
        Ok(self.fiber(y, seed)? != Fiber::Finite(0))
    }

    /// Degree of the parametrization onto its image.
    pub fn mapping_degree(&self, seed: u64) -> Result<usize> {
        self.modular()?.mapping_degree(seed)
    }

    pub fn is_birational(&self, seed: u64) -> Result<bool> {
        Ok(self.mapping_degree(seed)? == 1)
    }

    /// Degree of the image surface.
    pub fn image_degree(&self, seed: u64) -> Result<u32> {
        let m = self.modular()?;
        let count = m.moving_intersection_count(derive_seed(seed, "image-degree", 0))?;
        let k = m.mapping_degree(derive_seed(seed, "image-degree", 1))?;
        if count % k != 0 {
            return Err(Error::VerificationFailed(format!("intersection count {count} not divisible by mapping degree {k}")));
        }
        Ok((count / k) as u32)
    }

    pub fn delete_form(&self, i: usize) -> Result<ParamSurface> {
        if i >= self.forms.len() {
            return Err(Error::InvalidArgument(format!("coordinate {i} out of range")));
        }
        let mut forms = self.forms.clone();
        forms.remove(i);
        ParamSurface::new(forms)
    }

    /// Degree of the image under projection from the `i`-th coordinate point.
    pub fn projection_degree(&self, i: usize, seed: u64) -> Result<u32> {
        if i >= self.forms.len() {
            return Err(Error::InvalidArgument(format!("coordinate {i} out of range")));
        }
        let proj = self.delete_form(i).map_err(|e| match e {
            Error::DegenerateSurface(_) => Error::ProjectionCollapses,
            e => e,
        })?;
        proj.image_degree(seed).map_err(|e| match e {
            Error::NotGenericallyFinite => Error::ProjectionCollapses,
            e => e,
        })
    }

    /// Image under an invertible linear change of coordinates.
    pub fn apply_linear(&self, m: &ExactMatrix) -> Result<ParamSurface> {
        let n = self.forms.len();
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::InvalidArgument(format!("need a {n}x{n} matrix")));
        }
        if m.determinant().is_zero() {
            return Err(Error::InvalidArgument("singular coordinate change".into()));
        }
        let forms = (0..n)
            .map(|i| BiForm::combination(m.row(i), &self.forms))
            .collect::<Result<Vec<_>>>()?;
        let (a, b) = self.bidegree();
        let forms = forms.into_iter().map(|f| if f.is_zero() { BiForm::zero(a, b) } else { f }).collect();
        ParamSurface::new(forms)
    }

    /// Random point of the surface together with its parameter.
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R, height: u32) -> ([Rational; 4], Vec<Rational>) {
        loop {
            let z: [Rational; 4] = std::array::from_fn(|_| random_nonzero_rational(rng, height));
            let y = self.eval(&z);
            if y.iter().any(|x| !x.is_zero()) {
                return (z, y);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn quartic() -> ParamSurface {
        ParamSurface::parse(&["s^2*u", "s^2*v", "s*t*u + t^2*v", "t^2*u"]).unwrap()
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(ParamSurface::parse(&["s*u", "2*s*u", "-s*u"]).is_err());
        assert!(matches!(
            ParamSurface::parse(&["s*u", "s^2*v", "t*u"]),
            Err(Error::BidegreeMismatch(..))
        ));
    }

    #[test]
    fn common_factor_removed() {
        let s = ParamSurface::parse(&["s^2*u", "s*t*u", "s*t*v", "s^2*v"]).unwrap();
        assert_eq!(s.bidegree(), (1, 1));
    }

    #[test]
    fn quadric_and_quartic_degrees() {
        let q = ParamSurface::parse(&["s*u", "s*v", "t*u", "t*v"]).unwrap();
        assert_eq!(q.image_degree(1).unwrap(), 2);
        assert!(q.is_birational(1).unwrap());
        let z = quartic();
        assert_eq!(z.image_degree(1).unwrap(), 4);
        assert_eq!(z.image_degree(99).unwrap(), 4);
        assert!(z.is_birational(2).unwrap());
    }

    #[test]
    fn double_cover_detected() {
        // (s^2, t^2) on the first factor: a 2:1 map onto a quadric
        let s = ParamSurface::parse(&["s^2*u", "s^2*v", "t^2*u", "t^2*v"]).unwrap();
        assert_eq!(s.mapping_degree(3).unwrap(), 2);
        assert_eq!(s.image_degree(3).unwrap(), 2);
    }

    #[test]
    fn membership() {
        let q = ParamSurface::parse(&["s*u", "s*v", "t*u", "t*v"]).unwrap();
        // on the quadric x0*x3 = x1*x2
        assert!(q.contains_point(&[int(1), int(2), int(3), int(6)], 4).unwrap());
        assert!(!q.contains_point(&[int(1), int(2), int(3), int(7)], 4).unwrap());
    }

    #[test]
    fn base_points_match_rational_resultants() {
        use super::super::chart::{pair_resultant, AffineChart};
        use crate::exact::UniPoly;
        // three forms vanish on two fibers and the fourth cuts each fiber
        // once: two base points, counted again over the rationals
        let mut rng = rng_for(8, "oracle");
        for trial in 0..3 {
            let (l1, l2) = (BiForm::random(0, 1, &mut rng, 5), BiForm::random(0, 1, &mut rng, 5));
            let p = l1.mul(&l2);
            let mut forms: Vec<BiForm> = (0..3).map(|_| BiForm::random(1, 0, &mut rng, 5).mul(&p)).collect();
            forms.push(BiForm::random(1, 2, &mut rng, 5));
            let s = ParamSurface::new(forms).unwrap();
            let chart = AffineChart::random(&mut rng, 20);
            let combo = |rng: &mut SeededRng| {
                let c: Vec<Rational> = s.forms().iter().map(|_| random_nonzero_rational(rng, 20)).collect();
                BiForm::combination(&c, s.forms()).unwrap()
            };
            let mut g: Option<UniPoly> = None;
            for _ in 0..3 {
                let r = pair_resultant(&chart, &combo(&mut rng), &combo(&mut rng)).unwrap();
                g = Some(match g {
                    None => r,
                    Some(h) => h.gcd(&r),
                });
            }
            let exact = g.unwrap().distinct_root_count();
            assert_eq!(s.base_point_count(trial).unwrap(), exact);
            assert_eq!(exact, 2);
        }
    }
}
