use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::monomial::Monomial;
use super::rational::Rational;

/// Sparse polynomial over the rationals in a fixed number of variables.
/// Not necessarily homogeneous; this is the workhorse behind the graded types.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(Monomial::one(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(Monomial::var(nvars, i, 1), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { nvars, terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(nvars: usize, it: I) -> Self {
        let mut p = Poly::zero(nvars);
        for (m, c) in it {
            assert_eq!(m.nvars(), nvars, "monomial has wrong variable count");
            p.add_term(m, c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|m| m.degree());
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).min().unwrap_or(0)
    }

    pub fn involves(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, x)| (k.mul(m), x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars);
        let maxdeg: Vec<u32> = (0..self.nvars).map(|v| self.degree_in(v)).collect();
        let powers: Vec<Vec<Rational>> = point
            .iter()
            .zip(&maxdeg)
            .map(|(x, &d)| {
                let mut pw = Vec::with_capacity(d as usize + 1);
                pw.push(Rational::one());
                for i in 0..d as usize {
                    let next = &pw[i] * x;
                    pw.push(next);
                }
                pw
            })
            .collect();
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= &powers[v][e as usize];
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes a value for one variable, keeping the variable count.
    pub fn eval_var(&self, v: usize, value: &Rational) -> Poly {
        let d = self.degree_in(v);
        let mut pw = vec![Rational::one()];
        for i in 0..d as usize {
            let next = &pw[i] * value;
            pw.push(next);
        }
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.with_exp(v, 0), c * &pw[m.exp(v) as usize]);
        }
        out
    }

    /// Coefficients with respect to variable `v`; entry `k` multiplies `x_v^k`.
    pub fn coeffs_in(&self, v: usize) -> Vec<Poly> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![Poly::zero(self.nvars); d + 1];
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            out[e].terms.insert(m.with_exp(v, 0), c.clone());
        }
        out
    }

    pub fn lc_in(&self, v: usize) -> Poly {
        let d = self.degree_in(v);
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if m.exp(v) == d {
                out.terms.insert(m.with_exp(v, 0), c.clone());
            }
        }
        out
    }

    /// Scales so that the leading coefficient is 1.
    pub fn monic(&self) -> Poly {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }

    /// Quotient if `d` divides `self` exactly.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert_eq!(self.nvars, d.nvars);
        let (lm, lc) = d.leading_term()?;
        let (lm, lc_inv) = (lm.clone(), lc.recip());
        let mut r = self.clone();
        let mut q = Poly::zero(self.nvars);
        while let Some((m, c)) = r.leading_term() {
            let t = m.div(&lm)?;
            let tc = c * &lc_inv;
            r = &r - &d.mul_monomial(&t, &tc);
            q.add_term(t, tc);
        }
        Some(q)
    }

    /// Pseudo-remainder with respect to variable `v`.
    fn prem(&self, d: &Poly, v: usize) -> Poly {
        let dd = d.degree_in(v);
        let lc = d.lc_in(v);
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(v) >= dd {
            let k = r.degree_in(v) - dd;
            let lr = r.lc_in(v);
            let shift = Monomial::var(self.nvars, v, k);
            r = &(&lc * &r) - &(&lr * &d.mul_monomial(&shift, &Rational::one()));
        }
        r
    }

    fn content_in(&self, v: usize) -> Poly {
        let mut g = Poly::zero(self.nvars);
        for c in self.coeffs_in(v) {
            if c.is_zero() {
                continue;
            }
            g = g.gcd(&c);
            if g.is_constant() && !g.is_zero() {
                return Poly::one(self.nvars);
            }
        }
        g
    }

    fn primitive_in(&self, v: usize) -> Poly {
        let c = self.content_in(v);
        self.div_exact(&c).expect("content divides")
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.is_constant() || other.is_constant() {
            return Poly::one(self.nvars);
        }
        let v = (0..self.nvars).rev().find(|&v| self.involves(v) || other.involves(v)).unwrap();
        if !self.involves(v) {
            return other.content_in(v).gcd(self);
        }
        if !other.involves(v) {
            return self.content_in(v).gcd(other);
        }
        let (cf, cg) = (self.content_in(v), other.content_in(v));
        let c = cf.gcd(&cg);
        let (mut a, mut b) = (self.div_exact(&cf).unwrap(), other.div_exact(&cg).unwrap());
        if a.degree_in(v) < b.degree_in(v) {
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            let r = a.prem(&b, v);
            if r.is_zero() {
                break;
            }
            if !r.involves(v) {
                return c.monic();
            }
            a = b;
            b = r.primitive_in(v);
        }
        (&c * &b.primitive_in(v)).monic()
    }

    /// Removes variable `i`, which must not occur.
    pub fn drop_var(&self, i: usize) -> Poly {
        assert!(!self.involves(i));
        Poly {
            nvars: self.nvars - 1,
            terms: self.terms.iter().map(|(m, c)| (m.drop_var(i), c.clone())).collect(),
        }
    }

    /// Inserts a fresh variable at position `i` with exponent `e` in every term.
    pub fn insert_var(&self, i: usize, e: u32) -> Poly {
        Poly {
            nvars: self.nvars + 1,
            terms: self.terms.iter().map(|(m, c)| (m.insert_var(i, e), c.clone())).collect(),
        }
    }

    /// Homogenizes to degree `d` by inserting variable `i`.
    pub fn homogenize(&self, i: usize, d: u32) -> Poly {
        let mut out = Poly::zero(self.nvars + 1);
        for (m, c) in &self.terms {
            out.add_term(m.insert_var(i, d - m.degree()), c.clone());
        }
        out
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let (big, small) = if self.len() >= rhs.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::int;

    fn x(i: usize) -> Poly {
        Poly::var(3, i)
    }

    fn c(n: i64) -> Poly {
        Poly::constant(3, int(n))
    }

    #[test]
    fn gcd_of_products() {
        let f = &(&x(0) + &c(1)) * &(&x(1) - &x(2));
        let g = &(&x(1) - &x(2)) * &(&(&x(0) * &x(0)) + &x(2));
        let h = f.gcd(&g);
        assert_eq!(h, (&x(1) - &x(2)).monic());
        let k = &(&x(0) * &x(1)) + &c(3);
        assert!(k.gcd(&(&x(2) + &c(1))).is_constant());
    }

    #[test]
    fn gcd_with_powers() {
        let a = &x(0) + &(&x(1) * &x(2));
        let f = &a.pow(3) * &(&x(0) - &c(2));
        let g = &a.pow(2) * &(&x(1) + &c(5));
        assert_eq!(f.gcd(&g), a.pow(2).monic());
    }

    #[test]
    fn exact_division() {
        let a = &x(0) + &x(1);
        let b = &x(2) - &c(4);
        let p = &a * &b;
        assert_eq!(p.div_exact(&b).unwrap(), a);
        assert!(p.div_exact(&(&x(0) + &c(1))).is_none());
    }

    #[test]
    fn eval_and_partial_eval() {
        let p = &(&x(0) * &x(1)) + &x(2).pow(2);
        let pt = [int(2), int(3), int(-1)];
        assert_eq!(p.eval(&pt), int(7));
        let q = p.eval_var(1, &int(3));
        assert_eq!(q.eval(&pt), int(7));
        assert!(!q.involves(1));
    }
}
