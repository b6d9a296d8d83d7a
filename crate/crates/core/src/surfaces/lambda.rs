use num_traits::Zero;

use super::param::{Fiber, ParamSurface};
use crate::error::{Error, Result};
use crate::exact::{BiForm, ExactMatrix, Rational, UniPoly};
use crate::random::{derive_seed, random_nonzero_rational, rng_for, DEFAULT_HEIGHT};

const DRAW_ATTEMPTS: u64 = 8;

/// Binary form in `(s, t)`; entry `i` multiplies `s^i t^(deg-i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm(pub Vec<Rational>);

impl BinaryForm {
    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    fn affine(&self) -> UniPoly {
        UniPoly::from_coeffs(self.0.clone())
    }

    /// Multiplicity of the root `(s:t) = (1:0)`.
    fn root_at_infinity(&self) -> usize {
        self.0.iter().rev().take_while(|c| c.is_zero()).count()
    }

    /// Nonzero with distinct roots.
    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.root_at_infinity() <= 1 && self.affine().is_squarefree()
    }

    /// Whether `self` has a root common to every nonzero form in `others`.
    pub fn shares_root_with_all(&self, others: &[BinaryForm]) -> bool {
        let live: Vec<&BinaryForm> = others.iter().filter(|f| !f.is_zero()).collect();
        if self.is_zero() {
            return true;
        }
        if live.is_empty() {
            return self.degree() > 0;
        }
        if self.root_at_infinity() > 0 && live.iter().all(|f| f.root_at_infinity() > 0) {
            return true;
        }
        let mut g = self.affine();
        for f in &live {
            g = g.gcd(&f.affine());
            if g.degree() == Some(0) {
                return false;
            }
        }
        g.degree().unwrap_or(0) > 0
    }
}

/// The surface in P^4 whose projection from the last coordinate point
/// recovers a given surface in P^3: forms `[Q0*P, .., Q3*P, Gamma*M]`
/// where `P` is a product of `beta` lines of the second ruling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaRealization {
    pub base: ParamSurface,
    pub beta: u32,
    pub gamma: BiForm,
    pub m_form: BiForm,
    pub fibers: Vec<BiForm>,
    pub surface: ParamSurface,
    /// Degree of the image, measured.
    pub degree: u32,
}

fn fiber_zero(f: &BiForm) -> (Rational, Rational) {
    // f = c*u + e*v vanishes at (u:v) = (e : -c)
    (f.coeff(0, 0), -f.coeff(0, 1))
}

impl LambdaRealization {
    /// Degree `a (2b + beta)` of the realization when no base point of the
    /// input lies on `Gamma*M`; each one that does lowers it.
    pub fn expected_degree(&self) -> u32 {
        let (a, b) = self.base.bidegree();
        a * (2 * b + self.beta)
    }

    pub fn fiber_product(&self) -> BiForm {
        self.fibers.iter().fold(BiForm::one(), |acc, f| acc.mul(f))
    }

    /// Builds the realization from explicit data and verifies it.
    pub fn assemble(
        base: ParamSurface,
        gamma: BiForm,
        m_form: BiForm,
        fibers: Vec<BiForm>,
        seed: u64,
    ) -> Result<Self> {
        if base.ambient_dim() != 3 {
            return Err(Error::Precondition("base surface must lie in P^3".into()));
        }
        let beta = fibers.len() as u32;
        if beta == 0 {
            return Err(Error::Precondition("need at least one fiber".into()));
        }
        let (a, b) = base.bidegree();
        if gamma.bidegree() != (1, 1) {
            let (x, y) = gamma.bidegree();
            return Err(Error::BidegreeMismatch(x, y, 1, 1));
        }
        if m_form.bidegree() != (a - 1, b + beta - 1) {
            let (x, y) = m_form.bidegree();
            return Err(Error::BidegreeMismatch(x, y, a - 1, b + beta - 1));
        }
        for f in &fibers {
            if f.bidegree() != (0, 1) || f.is_zero() {
                return Err(Error::InvalidArgument("fibers must be nonzero (0,1) forms".into()));
            }
        }
        let p = fibers.iter().fold(BiForm::one(), |acc, f| acc.mul(f));
        let mut forms: Vec<BiForm> = base.forms().iter().map(|q| q.mul(&p)).collect();
        forms.push(gamma.mul(&m_form));
        let bd = forms[0].bidegree();
        let surface = ParamSurface::new(forms)?;
        if surface.bidegree() != bd {
            return Err(Error::VerificationFailed("the five forms share a factor".into()));
        }
        let mut lam = LambdaRealization { base, beta, gamma, m_form, fibers, surface, degree: 0 };
        lam.degree = lam.verify(seed)?;
        Ok(lam)
    }

    /// The same construction over random fibers. Base points of the input
    /// on `Gamma*M` stay base points of both, so the two agree in base
    /// points and degree exactly when the chosen fibers are general.
    fn reference(&self, seed: u64) -> Result<ParamSurface> {
        let mut rng = rng_for(seed, "lambda-reference");
        let p = (0..self.beta).fold(BiForm::one(), |acc, _| acc.mul(&BiForm::random(0, 1, &mut rng, DEFAULT_HEIGHT)));
        let mut forms: Vec<BiForm> = self.base.forms().iter().map(|q| q.mul(&p)).collect();
        forms.push(self.gamma.mul(&self.m_form));
        ParamSurface::new(forms)
    }

    /// Checks the base locus, the degree, birationality and the position of
    /// the coordinate points. Returns the degree.
    pub fn verify(&self, seed: u64) -> Result<u32> {
        self.verify_base_locus(seed)?;
        let deg = self.surface.image_degree(derive_seed(seed, "lambda-degree", 0))?;
        let want = self.reference(seed)?.image_degree(derive_seed(seed, "lambda-degree", 1))?;
        if deg != want || deg > self.expected_degree() {
            return Err(Error::VerificationFailed(format!("degree {deg}, expected {want}")));
        }
        if !self.surface.is_birational(derive_seed(seed, "lambda-birational", 0))? {
            return Err(Error::VerificationFailed("parametrization is not birational".into()));
        }
        // Projection from the last point maps p_i to the i-th coordinate
        // point of the input, so p_i may lie on the image only when that
        // point lies on the input surface.
        for i in 0..5 {
            let mut e = vec![Rational::zero(); 5];
            e[i] = Rational::from_integer(1.into());
            let fib = self.surface.fiber(&e, derive_seed(seed, "lambda-points", i as u64))?;
            let inside = fib != Fiber::Finite(0);
            if i < 4 && inside && self.base.contains_point(&e[..4], derive_seed(seed, "lambda-points", 5 + i as u64))? {
                continue;
            }
            if inside != (i == 4) {
                return Err(Error::VerificationFailed(format!(
                    "coordinate point {i} {} the surface",
                    if inside { "lies on" } else { "misses" }
                )));
            }
        }
        Ok(deg)
    }

    /// On each fiber `Gamma*M` must cut `a` distinct points, none of them a
    /// common zero of the base forms, the fibers must be distinct, and no
    /// further base points may appear.
    pub fn verify_base_locus(&self, seed: u64) -> Result<()> {
        let (a, _) = self.base.bidegree();
        for (i, f) in self.fibers.iter().enumerate() {
            for g in &self.fibers[i + 1..] {
                if f.is_proportional(g) {
                    return Err(Error::VerificationFailed("repeated fiber".into()));
                }
            }
        }
        let gm = self.gamma.mul(&self.m_form);
        for f in &self.fibers {
            let (u0, v0) = fiber_zero(f);
            let r = BinaryForm(gm.restrict_to_fiber(&u0, &v0));
            if !r.is_squarefree() || r.degree() != a as usize {
                return Err(Error::VerificationFailed("Gamma*M is not reduced on a fiber".into()));
            }
            let qs: Vec<BinaryForm> =
                self.base.forms().iter().map(|q| BinaryForm(q.restrict_to_fiber(&u0, &v0))).collect();
            if r.shares_root_with_all(&qs) {
                return Err(Error::VerificationFailed("Gamma*M meets a base point of the surface".into()));
            }
        }
        let count = self.surface.base_point_count(derive_seed(seed, "lambda-base", 0))?;
        let want = self.reference(seed)?.base_point_count(derive_seed(seed, "lambda-base", 1))?;
        if count != want || want < (a * self.beta) as usize {
            return Err(Error::VerificationFailed(format!("{count} base points, expected {want}")));
        }
        Ok(())
    }
}

/// Random realization of `s` in P^4 with `beta` fibers and a given or
/// random `(1,1)` form `gamma`. Requires ruling degree at least 2.
pub fn build_lambda_m(s: &ParamSurface, beta: u32, gamma: Option<&BiForm>, seed: u64) -> Result<LambdaRealization> {
    build_lambda_m_through(s, beta, gamma, &[], seed)
}

/// Random form of the given bidegree vanishing at the given parameters.
fn random_form_through<R: rand::Rng + ?Sized>(a: u32, b: u32, zeros: &[[Rational; 4]], rng: &mut R) -> Option<BiForm> {
    if zeros.is_empty() {
        return Some(BiForm::random(a, b, rng, DEFAULT_HEIGHT));
    }
    let monomials: Vec<(u32, u32)> = (0..=a).flat_map(|i| (0..=b).map(move |j| (i, j))).collect();
    let one = Rational::from_integer(1.into());
    let rows = zeros
        .iter()
        .map(|p| monomials.iter().map(|&(i, j)| BiForm::monomial(a, b, i, j, one.clone()).eval_at(p)).collect())
        .collect();
    let kernel = ExactMatrix::from_rows(rows).kernel();
    if kernel.is_empty() {
        return None;
    }
    let coeffs: Vec<Rational> = (0..kernel.len()).map(|_| random_nonzero_rational(rng, DEFAULT_HEIGHT)).collect();
    let terms = monomials.iter().enumerate().map(|(k, &m)| {
        let c = kernel.iter().zip(&coeffs).fold(Rational::zero(), |acc, (v, c)| acc + &v[k] * c);
        (m, c)
    });
    BiForm::from_terms(a, b, terms).ok()
}

/// As [`build_lambda_m`], with `M` constrained to vanish at `m_zeros`.
pub fn build_lambda_m_through(
    s: &ParamSurface,
    beta: u32,
    gamma: Option<&BiForm>,
    m_zeros: &[[Rational; 4]],
    seed: u64,
) -> Result<LambdaRealization> {
    let (a, b) = s.bidegree();
    if a < 2 {
        return Err(Error::Precondition(format!("ruling degree {a} < 2")));
    }
    if beta == 0 {
        return Err(Error::Precondition("beta must be positive".into()));
    }
    let mut last = None;
    for attempt in 0..DRAW_ATTEMPTS {
        let mut rng = rng_for(derive_seed(seed, "lambda-draw", attempt), "lambda");
        let g = match gamma {
            Some(g) => g.clone(),
            None => BiForm::random(1, 1, &mut rng, DEFAULT_HEIGHT),
        };
        let m = random_form_through(a - 1, b + beta - 1, m_zeros, &mut rng)
            .ok_or_else(|| Error::Precondition("no form of the bidegree vanishes at the given points".into()))?;
        let fibers: Vec<BiForm> = (0..beta).map(|_| BiForm::random(0, 1, &mut rng, DEFAULT_HEIGHT)).collect();
        match LambdaRealization::assemble(s.clone(), g, m, fibers, derive_seed(seed, "lambda-verify", attempt)) {
            Ok(l) => return Ok(l),
            Err(e @ (Error::VerificationFailed(_) | Error::RetriesExhausted(_))) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(Error::RetriesExhausted(format!(
        "no valid realization in {DRAW_ATTEMPTS} draws: {}",
        last.map(|e| e.to_string()).unwrap_or_default()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn quartic() -> ParamSurface {
        ParamSurface::parse(&["s^2*u", "s^2*v", "s*t*u + t^2*v", "t^2*u"]).unwrap()
    }

    #[test]
    fn binary_form_roots() {
        let f = BinaryForm(vec![int(-1), int(0), int(1)]); // s^2 - t^2
        assert!(f.is_squarefree());
        let g = BinaryForm(vec![int(1), int(1), int(0)]); // t^2 + s t = t (t + s)
        assert!(g.is_squarefree());
        assert!(f.shares_root_with_all(std::slice::from_ref(&g)));
        let h = BinaryForm(vec![int(0), int(0), int(1)]); // s^2
        assert!(!h.is_squarefree());
        assert!(!h.shares_root_with_all(&[BinaryForm(vec![int(1), int(0), int(0)])]));
    }

    #[test]
    fn realization_of_quartic() {
        let l = build_lambda_m(&quartic(), 1, None, 11).unwrap();
        assert_eq!(l.expected_degree(), 6);
        assert_eq!(l.surface.bidegree(), (2, 2));
        assert_eq!(l.surface.projection_degree(0, 1).unwrap(), 6);
        assert_eq!(l.surface.projection_degree(4, 1).unwrap(), 4);
    }

    #[test]
    fn rejects_ruling_degree_one() {
        let q = ParamSurface::parse(&["s*u", "s*v", "t*u", "t*v"]).unwrap();
        assert!(matches!(build_lambda_m(&q, 1, None, 1), Err(Error::Precondition(_))));
    }
}
