use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};

use super::biform::{BiForm, BiFormPowers};
use super::grammar::{format_terms, parse_terms};
use super::modp;
use super::monomial::Monomial;
use super::poly::Poly;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Homogeneous polynomial in `x0..x{n-1}`. The zero polynomial keeps a
/// nominal degree so that graded operations stay well defined.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct MultiPoly {
    poly: Poly,
    degree: u32,
}

impl MultiPoly {
    pub fn zero(num_vars: usize, degree: u32) -> Self {
        MultiPoly { poly: Poly::zero(num_vars), degree }
    }

    pub fn var(num_vars: usize, i: usize) -> Self {
        MultiPoly { poly: Poly::var(num_vars, i), degree: 1 }
    }

    pub fn constant(num_vars: usize, c: Rational) -> Self {
        MultiPoly { poly: Poly::constant(num_vars, c), degree: 0 }
    }

    pub fn monomial(exps: &[u32], c: Rational) -> Self {
        let m = Monomial::new(exps);
        let degree = m.degree();
        MultiPoly { poly: Poly::monomial(m, c), degree }
    }

    /// Fails on a non-homogeneous input. A zero input gets degree 0.
    pub fn from_poly(poly: Poly) -> Result<Self> {
        if !poly.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        let degree = poly.total_degree().unwrap_or(0);
        Ok(MultiPoly { poly, degree })
    }

    pub fn from_poly_with_degree(poly: Poly, degree: u32) -> Result<Self> {
        if poly.terms().any(|(m, _)| m.degree() != degree) {
            return Err(Error::NotHomogeneous);
        }
        Ok(MultiPoly { poly, degree })
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, Rational)>>(num_vars: usize, it: I) -> Result<Self> {
        let mut terms = Vec::new();
        for (e, c) in it {
            if e.len() != num_vars {
                return Err(Error::VarCountMismatch(e.len(), num_vars));
            }
            terms.push((Monomial::new(&e), c));
        }
        Self::from_poly(Poly::from_terms(num_vars, terms))
    }

    pub fn num_vars(&self) -> usize {
        self.poly.nvars()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn into_poly(self) -> Poly {
        self.poly
    }

    pub fn len(&self) -> usize {
        self.poly.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poly.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.poly.terms()
    }

    fn check_vars(&self, o: &MultiPoly) -> Result<()> {
        if self.num_vars() != o.num_vars() {
            return Err(Error::VarCountMismatch(self.num_vars(), o.num_vars()));
        }
        Ok(())
    }

    pub fn add(&self, o: &MultiPoly) -> Result<MultiPoly> {
        self.check_vars(o)?;
        if o.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(o.clone());
        }
        if self.degree != o.degree {
            return Err(Error::DegreeMismatch(self.degree, o.degree));
        }
        Ok(MultiPoly { poly: &self.poly + &o.poly, degree: self.degree })
    }

    pub fn sub(&self, o: &MultiPoly) -> Result<MultiPoly> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly { poly: -&self.poly, degree: self.degree }
    }

    pub fn mul(&self, o: &MultiPoly) -> Result<MultiPoly> {
        self.check_vars(o)?;
        Ok(MultiPoly { poly: &self.poly * &o.poly, degree: self.degree + o.degree })
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        MultiPoly { poly: self.poly.scale(c), degree: self.degree }
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        MultiPoly { poly: self.poly.pow(k), degree: self.degree * k }
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.num_vars() {
            return Err(Error::VarCountMismatch(point.len(), self.num_vars()));
        }
        Ok(self.poly.eval(point))
    }

    /// Multiplicity at the coordinate point `e_i`: degree minus the largest
    /// power of `x_i` occurring.
    pub fn mult_at_coord_point(&self, i: usize) -> Result<u32> {
        if i >= self.num_vars() {
            return Err(Error::InvalidArgument(format!("coordinate {i} out of range")));
        }
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(self.degree - self.poly.degree_in(i))
    }

    /// Decomposition `f = sum_k x_var^k * piece[k]`; each piece is free of
    /// `x_var` and has degree `deg f - k`.
    pub fn graded_pieces(&self, var: usize) -> Vec<MultiPoly> {
        self.poly
            .coeffs_in(var)
            .into_iter()
            .enumerate()
            .map(|(k, p)| MultiPoly { poly: p, degree: self.degree - k as u32 })
            .collect()
    }

    /// `f(g_0, ..., g_n)` for homogeneous `g_i` of a common degree.
    pub fn compose(&self, subs: &[MultiPoly]) -> Result<MultiPoly> {
        if subs.len() != self.num_vars() {
            return Err(Error::VarCountMismatch(subs.len(), self.num_vars()));
        }
        let nv = subs[0].num_vars();
        let e = subs[0].degree();
        for g in subs {
            if g.num_vars() != nv {
                return Err(Error::VarCountMismatch(g.num_vars(), nv));
            }
            if g.degree() != e && !g.is_zero() {
                return Err(Error::DegreeMismatch(g.degree(), e));
            }
        }
        let mut powers: Vec<Vec<Poly>> = subs.iter().map(|g| vec![Poly::one(nv), g.poly.clone()]).collect();
        let mut out = Poly::zero(nv);
        let mut memo: HashMap<Monomial, Poly> = HashMap::new();
        for (m, c) in self.poly.terms() {
            let img = memo.entry(m.clone()).or_insert_with(|| {
                let mut acc = Poly::one(nv);
                for (i, &k) in m.exponents().iter().enumerate() {
                    if k == 0 {
                        continue;
                    }
                    while powers[i].len() <= k as usize {
                        let next = &powers[i][powers[i].len() - 1] * &subs[i].poly;
                        powers[i].push(next);
                    }
                    acc = &acc * &powers[i][k as usize];
                }
                acc
            });
            out = &out + &img.scale(c);
        }
        Ok(MultiPoly { poly: out, degree: self.degree * e })
    }

    /// Pullback along forms on P^1 x P^1 sharing a bidegree `(a, b)`;
    /// the result has bidegree `(deg*a, deg*b)`.
    pub fn substitute(&self, forms: &[BiForm]) -> Result<BiForm> {
        if forms.len() != self.num_vars() {
            return Err(Error::VarCountMismatch(forms.len(), self.num_vars()));
        }
        let (a, b) = forms[0].bidegree();
        for f in forms {
            if f.bidegree() != (a, b) {
                let (x, y) = f.bidegree();
                return Err(Error::BidegreeMismatch(x, y, a, b));
            }
        }
        Ok(BiFormPowers::new(forms).poly(&self.poly, self.degree))
    }

    /// Drops variable `i`, which must not occur.
    pub fn drop_var(&self, i: usize) -> Result<MultiPoly> {
        if self.poly.involves(i) {
            return Err(Error::InvalidArgument(format!("x{i} occurs")));
        }
        Ok(MultiPoly { poly: self.poly.drop_var(i), degree: self.degree })
    }

    /// Inserts a new variable at position `i` that does not occur.
    pub fn insert_var(&self, i: usize) -> MultiPoly {
        MultiPoly { poly: self.poly.insert_var(i, 0), degree: self.degree }
    }

    /// Monic gcd (homogeneous).
    pub fn gcd(&self, o: &MultiPoly) -> MultiPoly {
        let g = self.poly.gcd(&o.poly);
        let degree = g.total_degree().unwrap_or(0);
        MultiPoly { poly: g, degree }
    }

    /// Certifies modulo the prime that the forms share no factor of positive
    /// degree, by restricting them to fixed lines. `false` only means no
    /// certificate was found.
    pub fn coprime_mod_p(forms: &[&MultiPoly]) -> bool {
        let Some(n) = forms.first().map(|f| f.num_vars()) else {
            return false;
        };
        (0..2u64).any(|line| {
            // x_j = p_j + t q_j with fixed pseudo-random residues
            let lin: Vec<Vec<u64>> = (0..n as u64)
                .map(|j| {
                    let p = modp::reduce_int(&num_bigint::BigInt::from(1_000_003 * (j + 1) + 7919 * line + 11));
                    let q = modp::reduce_int(&num_bigint::BigInt::from(999_983 * (j + 3) + 104_729 * line + 5));
                    vec![p, q]
                })
                .collect();
            let mut cache: HashMap<(usize, u32), Vec<u64>> = HashMap::new();
            let mut power = |j: usize, e: u32| -> Vec<u64> {
                cache
                    .entry((j, e))
                    .or_insert_with(|| (0..e).fold(vec![1], |acc, _| modp::poly_mul(&acc, &lin[j])))
                    .clone()
            };
            let mut restricted = Vec::with_capacity(forms.len());
            for f in forms {
                let mut out = vec![0u64; f.degree as usize + 1];
                for (m, c) in f.terms() {
                    let Some(c) = modp::reduce(c) else { return false };
                    let mut prod = vec![c];
                    for (j, &e) in m.exponents().iter().enumerate() {
                        if e > 0 {
                            prod = modp::poly_mul(&prod, &power(j, e));
                        }
                    }
                    for (k, x) in prod.into_iter().enumerate() {
                        out[k] = modp::add(out[k], x);
                    }
                }
                restricted.push((out, f.degree as usize));
            }
            modp::binary_forms_coprime(&restricted)
        })
    }

    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        if d.degree > self.degree {
            return None;
        }
        let q = self.poly.div_exact(&d.poly)?;
        Some(MultiPoly { poly: q, degree: self.degree - d.degree })
    }

    pub fn is_proportional(&self, o: &MultiPoly) -> bool {
        if self.len() != o.len() {
            return false;
        }
        let Some((m, c)) = self.terms().next() else {
            return o.is_zero();
        };
        let r = o.poly.coeff(m) / c;
        !r.is_zero() && self.terms().all(|(m, x)| o.poly.coeff(m) == x * &r)
    }

    /// Parses the text form over `x0..x{num_vars-1}`.
    pub fn parse(text: &str, num_vars: usize) -> Result<MultiPoly> {
        let terms = parse_terms(text, num_vars, |n| {
            n.strip_prefix('x').and_then(|k| k.parse::<usize>().ok()).filter(|&k| k < num_vars)
        })?;
        Self::from_terms(num_vars, terms)
    }

    /// Like [`MultiPoly::parse`], but `"0"` yields a zero of the given degree
    /// and any other degree is rejected.
    pub fn parse_with_degree(text: &str, num_vars: usize, degree: u32) -> Result<MultiPoly> {
        let p = Self::parse(text, num_vars)?;
        if p.is_zero() {
            return Ok(Self::zero(num_vars, degree));
        }
        if p.degree != degree {
            return Err(Error::DegreeMismatch(p.degree, degree));
        }
        Ok(p)
    }

    pub fn one(num_vars: usize) -> MultiPoly {
        Self::constant(num_vars, Rational::one())
    }

    pub fn is_constant_nonzero(&self) -> bool {
        self.degree == 0 && !self.is_zero() && !self.poly.coeff(&Monomial::one(self.num_vars())).is_zero()
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.num_vars()).map(|i| format!("x{i}")).collect();
        f.write_str(&format_terms(self.terms().rev().map(|(m, c)| (m.exponents(), c)), &names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    #[test]
    fn text_roundtrip() {
        let f = MultiPoly::parse("-7/2*x0*x1^2 + x3^3 - x2*x0*x1", 5).unwrap();
        assert_eq!(f.degree(), 3);
        assert_eq!(MultiPoly::parse(&f.to_string(), 5).unwrap(), f);
        assert!(MultiPoly::parse("x0 + x1^2", 5).is_err());
        assert!(MultiPoly::parse("x5", 5).is_err());
    }

    #[test]
    fn add_degree_rules() {
        let a = MultiPoly::parse("x0^2", 3).unwrap();
        let b = MultiPoly::parse("x1", 3).unwrap();
        assert!(matches!(a.add(&b), Err(Error::DegreeMismatch(2, 1))));
        assert_eq!(a.add(&MultiPoly::zero(3, 7)).unwrap(), a);
    }

    #[test]
    fn multiplicity_at_points() {
        let f = MultiPoly::parse("x0*x1*x2 + x1^3", 3).unwrap();
        assert_eq!(f.mult_at_coord_point(0).unwrap(), 2);
        assert_eq!(f.mult_at_coord_point(1).unwrap(), 0);
        assert_eq!(f.mult_at_coord_point(2).unwrap(), 2);
    }

    #[test]
    fn compose_matches_pointwise() {
        let f = MultiPoly::parse("x0*x1 - 2*x1^2", 2).unwrap();
        let g0 = MultiPoly::parse("x0 + x1", 2).unwrap();
        let g1 = MultiPoly::parse("3*x1", 2).unwrap();
        let h = f.compose(&[g0.clone(), g1.clone()]).unwrap();
        let p = [rat(2, 3), int(-5)];
        let inner = [g0.eval(&p).unwrap(), g1.eval(&p).unwrap()];
        assert_eq!(h.eval(&p).unwrap(), f.eval(&inner).unwrap());
    }

    #[test]
    fn pieces_reassemble() {
        let f = MultiPoly::parse("x0^2*x1 + x0*x2^2 + x1^3", 3).unwrap();
        let pieces = f.graded_pieces(0);
        assert_eq!(pieces.len(), 3);
        let mut acc = MultiPoly::zero(3, 3);
        for (k, p) in pieces.iter().enumerate() {
            acc = acc.add(&p.mul(&MultiPoly::var(3, 0).pow(k as u32)).unwrap()).unwrap();
        }
        assert_eq!(acc, f);
    }
}
