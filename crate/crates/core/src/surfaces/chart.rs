use num_traits::{One, Zero};
use rand::Rng;

use crate::exact::{BiForm, Poly, Rational};
use crate::random::random_nonzero_rational;

/// Random affine chart of P^1 x P^1 with coordinates `(sigma, mu)`:
/// `s = w + alpha`, `t = gamma*w + 1` with `w = sigma + shear*mu`, and
/// `u = mu + beta`, `v = delta*mu + 1`. The shear separates points with
/// equal first coordinate, and makes every pulled-back form of bidegree
/// `(a,b)` have a constant leading coefficient in `mu`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineChart {
    alpha: Rational,
    gamma: Rational,
    beta: Rational,
    delta: Rational,
    shear: Rational,
}

impl AffineChart {
    pub fn random<R: Rng + ?Sized>(rng: &mut R, height: u32) -> Self {
        loop {
            let c = AffineChart {
                alpha: random_nonzero_rational(rng, height),
                gamma: random_nonzero_rational(rng, height),
                beta: random_nonzero_rational(rng, height),
                delta: random_nonzero_rational(rng, height),
                shear: random_nonzero_rational(rng, height),
            };
            if !(Rational::one() - &c.alpha * &c.gamma).is_zero()
                && !(Rational::one() - &c.beta * &c.delta).is_zero()
            {
                return c;
            }
        }
    }

    /// Point of P^1 x P^1 as `(s, t, u, v)`.
    pub fn point(&self, sigma: &Rational, mu: &Rational) -> [Rational; 4] {
        let w = sigma + &self.shear * mu;
        [&w + &self.alpha, &self.gamma * &w + Rational::one(), mu + &self.beta, &self.delta * mu + Rational::one()]
    }

    fn linear_forms(&self) -> [Poly; 4] {
        let sigma = Poly::var(2, 0);
        let mu = Poly::var(2, 1);
        let one = Poly::one(2);
        let w = &sigma + &mu.scale(&self.shear);
        [
            &w + &one.scale(&self.alpha),
            &w.scale(&self.gamma) + &one,
            &mu + &one.scale(&self.beta),
            &mu.scale(&self.delta) + &one,
        ]
    }

    /// Pullback of a form to the chart.
    pub fn pull(&self, f: &BiForm) -> Poly {
        let (a, b) = f.bidegree();
        let lin = self.linear_forms();
        let powers = |p: &Poly, n: u32| {
            let mut v = vec![Poly::one(2)];
            for k in 0..n as usize {
                let next = &v[k] * p;
                v.push(next);
            }
            v
        };
        let (ps, pt, pu, pv) = (powers(&lin[0], a), powers(&lin[1], a), powers(&lin[2], b), powers(&lin[3], b));
        let mut acc = Poly::zero(2);
        for (&(i, j), c) in f.terms() {
            let st = &ps[i as usize] * &pt[(a - i) as usize];
            let uv = &pu[j as usize] * &pv[(b - j) as usize];
            acc = &acc + &(&st * &uv).scale(c);
        }
        acc
    }

    /// True when the pullback keeps full degree in `mu`, which is what the
    /// resultant needs.
    pub fn is_regular_for(&self, f: &BiForm, pulled: &Poly) -> bool {
        let (a, b) = f.bidegree();
        pulled.degree_in(1) == a + b && !pulled.is_zero()
    }
}

/// Degree-two intersection data of two pulled-back forms.
#[cfg(test)]
pub(crate) fn pair_resultant(chart: &AffineChart, f: &BiForm, g: &BiForm) -> Option<crate::exact::UniPoly> {
    let (pf, pg) = (chart.pull(f), chart.pull(g));
    if !chart.is_regular_for(f, &pf) || !chart.is_regular_for(g, &pg) {
        return None;
    }
    Some(crate::exact::resultant(&pf, &pg))
}
