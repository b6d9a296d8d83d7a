use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::linalg::ExactMatrix;
use super::poly::Poly;
use super::rational::Rational;

/// Dense univariate polynomial; `coeffs[i]` multiplies `x^i`. No trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UniPoly { coeffs: vec![Rational::one()] }
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    /// `x - r`
    pub fn linear_root(r: &Rational) -> Self {
        UniPoly::from_coeffs(vec![-r, Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = Rational::zero();
        UniPoly::from_coeffs(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, o: &UniPoly) -> UniPoly {
        self.add(&o.scale(&-Rational::one()))
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(out)
    }

    pub fn monic(&self) -> UniPoly {
        match self.lc() {
            None => UniPoly::zero(),
            Some(c) => self.scale(&c.recip()),
        }
    }

    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = d.lc().unwrap().recip();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (UniPoly::from_coeffs(q), UniPoly::from_coeffs(r))
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            // keep coefficient size down
            b = r.monic();
        }
        a.monic()
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn squarefree_part(&self) -> UniPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    /// Number of distinct complex roots.
    pub fn distinct_root_count(&self) -> usize {
        self.squarefree_part().degree().unwrap_or(0)
    }

    /// Divides out every root shared with `support`, with full multiplicity.
    /// Returns the remaining polynomial and the removed degree.
    pub fn strip_roots_of(&self, support: &UniPoly) -> (UniPoly, usize) {
        let mut r = self.clone();
        let mut removed = 0;
        loop {
            let g = r.gcd(support);
            match g.degree() {
                Some(k) if k > 0 => {
                    r = r.div_rem(&g).0;
                    removed += k;
                }
                _ => return (r, removed),
            }
        }
    }

    /// Newton interpolation through `(xs[i], ys[i])`.
    pub fn interpolate(xs: &[Rational], ys: &[Rational]) -> UniPoly {
        assert_eq!(xs.len(), ys.len());
        let n = xs.len();
        let mut dd: Vec<Rational> = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
            }
        }
        let mut acc = UniPoly::zero();
        for i in (0..n).rev() {
            acc = acc.mul(&UniPoly::linear_root(&xs[i])).add(&UniPoly::from_coeffs(vec![dd[i].clone()]));
        }
        acc
    }
}

/// Specializes a bivariate polynomial at `x0 = value`, giving a polynomial in `x1`.
fn specialize(p: &Poly, value: &Rational) -> Vec<Rational> {
    let d = p.degree_in(1) as usize;
    let mut out = vec![Rational::zero(); d + 1];
    let mut pw = vec![Rational::one()];
    for i in 0..p.degree_in(0) as usize {
        let next = &pw[i] * value;
        pw.push(next);
    }
    for (m, c) in p.terms() {
        out[m.exp(1) as usize] += c * &pw[m.exp(0) as usize];
    }
    out
}

fn sylvester_det(f: &[Rational], g: &[Rational]) -> Rational {
    // f, g given with their formal lengths (n+1, m+1)
    let n = f.len() - 1;
    let m = g.len() - 1;
    let size = n + m;
    if size == 0 {
        return Rational::one();
    }
    let mut mat = ExactMatrix::zeros(size, size);
    for r in 0..m {
        for (k, c) in f.iter().rev().enumerate() {
            mat.set(r, r + k, c.clone());
        }
    }
    for r in 0..n {
        for (k, c) in g.iter().rev().enumerate() {
            mat.set(m + r, r + k, c.clone());
        }
    }
    mat.determinant()
}

/// Resultant of two polynomials in variables `(x0, x1)`, eliminating `x1`.
/// Both inputs must have a constant leading coefficient in `x1`, so that
/// specialization commutes with the resultant.
pub fn resultant(f: &Poly, g: &Poly) -> UniPoly {
    assert_eq!(f.nvars(), 2);
    assert_eq!(g.nvars(), 2);
    let n = f.degree_in(1) as usize;
    let m = g.degree_in(1) as usize;
    let bound = n * g.degree_in(0) as usize + m * f.degree_in(0) as usize;
    let xs: Vec<Rational> = (0..=bound).map(|k| Rational::from_integer(BigInt::from(k))).collect();
    let ys: Vec<Rational> = xs
        .iter()
        .map(|x| {
            let mut fs = specialize(f, x);
            let mut gs = specialize(g, x);
            fs.resize(n + 1, Rational::zero());
            gs.resize(m + 1, Rational::zero());
            sylvester_det(&fs, &gs)
        })
        .collect();
    UniPoly::interpolate(&xs, &ys)
}
