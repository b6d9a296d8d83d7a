use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;

use super::grammar::{format_terms, parse_terms};
use super::modp;
use super::monomial::Monomial;
use super::poly::Poly;
use super::rational::Rational;
use crate::error::{Error, Result};
use crate::random::random_nonzero_rational;

/// Bihomogeneous form on P^1 x P^1 in `(s,t ; u,v)`. The key `(i, j)` stands
/// for `s^i t^(a-i) u^j v^(b-j)`. Zero forms keep a nominal bidegree.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct BiForm {
    a: u32,
    b: u32,
    terms: BTreeMap<(u32, u32), Rational>,
}

const NAMES: [&str; 4] = ["s", "t", "u", "v"];

impl BiForm {
    pub fn zero(a: u32, b: u32) -> Self {
        BiForm { a, b, terms: BTreeMap::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, 0, 0, 0, c)
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// `c * s^i t^(a-i) u^j v^(b-j)`
    pub fn monomial(a: u32, b: u32, i: u32, j: u32, c: Rational) -> Self {
        assert!(i <= a && j <= b, "monomial exponent out of range");
        let mut f = Self::zero(a, b);
        if !c.is_zero() {
            f.terms.insert((i, j), c);
        }
        f
    }

    pub fn s() -> Self {
        Self::monomial(1, 0, 1, 0, Rational::one())
    }
    pub fn t() -> Self {
        Self::monomial(1, 0, 0, 0, Rational::one())
    }
    pub fn u() -> Self {
        Self::monomial(0, 1, 0, 1, Rational::one())
    }
    pub fn v() -> Self {
        Self::monomial(0, 1, 0, 0, Rational::one())
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), Rational)>>(a: u32, b: u32, it: I) -> Result<Self> {
        let mut f = Self::zero(a, b);
        for ((i, j), c) in it {
            if i > a || j > b {
                return Err(Error::BidegreeMismatch(i, j, a, b));
            }
            f.add_term(i, j, c);
        }
        Ok(f)
    }

    fn add_term(&mut self, i: u32, j: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((i, j)).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn random<R: Rng + ?Sized>(a: u32, b: u32, rng: &mut R, height: u32) -> Self {
        let mut f = Self::zero(a, b);
        for i in 0..=a {
            for j in 0..=b {
                f.terms.insert((i, j), random_nonzero_rational(rng, height));
            }
        }
        f
    }

    pub fn bidegree(&self) -> (u32, u32) {
        (self.a, self.b)
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

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    fn check_same(&self, o: &BiForm) -> Result<()> {
        if (self.a, self.b) != (o.a, o.b) {
            return Err(Error::BidegreeMismatch(self.a, self.b, o.a, o.b));
        }
        Ok(())
    }

    /// Sum; bidegrees must agree unless one side is zero.
    pub fn add(&self, o: &BiForm) -> Result<BiForm> {
        if o.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(o.clone());
        }
        self.check_same(o)?;
        let mut out = self.clone();
        for (&(i, j), c) in &o.terms {
            out.add_term(i, j, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, o: &BiForm) -> Result<BiForm> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> BiForm {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> BiForm {
        if c.is_zero() {
            return Self::zero(self.a, self.b);
        }
        BiForm { a: self.a, b: self.b, terms: self.terms.iter().map(|(k, x)| (*k, x * c)).collect() }
    }

    pub fn mul(&self, o: &BiForm) -> BiForm {
        let mut acc: HashMap<(u32, u32), Rational> = HashMap::with_capacity(self.len() * 2);
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &o.terms {
                *acc.entry((i1 + i2, j1 + j2)).or_insert_with(Rational::zero) += c1 * c2;
            }
        }
        BiForm {
            a: self.a + o.a,
            b: self.b + o.b,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> BiForm {
        let mut acc = BiForm::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Linear combination `sum c_k f_k`; all forms share a bidegree.
    pub fn combination(coeffs: &[Rational], forms: &[BiForm]) -> Result<BiForm> {
        let (a, b) = forms.first().map(|f| f.bidegree()).ok_or(Error::InvalidArgument("no forms".into()))?;
        let mut acc = BiForm::zero(a, b);
        for (c, f) in coeffs.iter().zip(forms) {
            acc = acc.add(&f.scale(c))?;
        }
        Ok(acc)
    }

    pub fn eval(&self, s: &Rational, t: &Rational, u: &Rational, v: &Rational) -> Rational {
        let pw = |x: &Rational, n: u32| {
            let mut p = vec![Rational::one()];
            for k in 0..n as usize {
                let next = &p[k] * x;
                p.push(next);
            }
            p
        };
        let (ps, pt, pu, pv) = (pw(s, self.a), pw(t, self.a), pw(u, self.b), pw(v, self.b));
        let mut acc = Rational::zero();
        for (&(i, j), c) in &self.terms {
            acc += c * &ps[i as usize] * &pt[(self.a - i) as usize] * &pu[j as usize] * &pv[(self.b - j) as usize];
        }
        acc
    }

    pub fn eval_at(&self, p: &[Rational; 4]) -> Rational {
        self.eval(&p[0], &p[1], &p[2], &p[3])
    }

    /// Binary form in `(s,t)` obtained on the fiber `(u:v) = (u0:v0)`;
    /// entry `i` is the coefficient of `s^i t^(a-i)`.
    pub fn restrict_to_fiber(&self, u0: &Rational, v0: &Rational) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.a as usize + 1];
        for (&(i, j), c) in &self.terms {
            out[i as usize] += c * num_traits::pow(u0.clone(), j as usize) * num_traits::pow(v0.clone(), (self.b - j) as usize);
        }
        out
    }

    /// Affine polynomial in `(s, u)` at `t = v = 1`.
    pub fn dehomogenize(&self) -> Poly {
        Poly::from_terms(2, self.terms.iter().map(|(&(i, j), c)| (Monomial::new(&[i, j]), c.clone())))
    }

    /// Inverse of [`BiForm::dehomogenize`] for a target bidegree.
    pub fn from_affine(p: &Poly, a: u32, b: u32) -> Result<BiForm> {
        Self::from_terms(a, b, p.terms().map(|(m, c)| ((m.exp(0), m.exp(1)), c.clone())))
    }

    /// Total exponents of `t` and `v` dividing every term.
    fn tv_content(&self) -> (u32, u32) {
        let kt = self.terms.keys().map(|&(i, _)| self.a - i).min().unwrap_or(0);
        let kv = self.terms.keys().map(|&(_, j)| self.b - j).min().unwrap_or(0);
        (kt, kv)
    }

    /// Greatest common divisor of a family of forms, normalized so that its
    /// leading coefficient is 1. Zero forms are ignored.
    pub fn gcd_all(forms: &[BiForm]) -> BiForm {
        let nonzero: Vec<&BiForm> = forms.iter().filter(|f| !f.is_zero()).collect();
        if nonzero.is_empty() || BiForm::coprime_mod_p(&nonzero) {
            return BiForm::one();
        }
        let kt = nonzero.iter().map(|f| f.tv_content().0).min().unwrap();
        let kv = nonzero.iter().map(|f| f.tv_content().1).min().unwrap();
        let mut g = Poly::zero(2);
        for f in &nonzero {
            g = g.gcd(&f.dehomogenize());
            if g.is_constant() {
                break;
            }
        }
        let (ga, gb) = (g.degree_in(0), g.degree_in(1));
        let aff = BiForm::from_affine(&g, ga, gb).expect("degrees fit");
        aff.mul(&BiForm::t().pow(kt)).mul(&BiForm::v().pow(kv))
    }

    /// Certifies modulo the prime that the forms share no factor of positive
    /// bidegree, by restricting to a fixed `(u:v)` and a fixed `(s:t)`.
    /// `false` only means no certificate was found.
    pub fn coprime_mod_p(forms: &[&BiForm]) -> bool {
        const POINTS: [(u64, u64); 2] = [(1_234_567, 7_654_321), (98_765, 4_321)];
        let Some(reduced) = forms
            .iter()
            .map(|f| f.terms.iter().map(|(&k, c)| Some((k, modp::reduce(c)?))).collect::<Option<Vec<_>>>().map(|t| (f.a, f.b, t)))
            .collect::<Option<Vec<_>>>()
        else {
            return false;
        };
        let restrict = |first: bool, (x0, y0): (u64, u64)| -> Vec<(Vec<u64>, usize)> {
            reduced
                .iter()
                .map(|(a, b, terms)| {
                    let (keep, fixed) = if first { (*a, *b) } else { (*b, *a) };
                    let mut out = vec![0u64; keep as usize + 1];
                    for &((i, j), c) in terms {
                        let (k, e) = if first { (i, j) } else { (j, i) };
                        let w = modp::mul(c, modp::mul(modp::pow(x0, e as u64), modp::pow(y0, (fixed - e) as u64)));
                        out[k as usize] = modp::add(out[k as usize], w);
                    }
                    (out, keep as usize)
                })
                .collect()
        };
        let st = POINTS.iter().any(|&pt| modp::binary_forms_coprime(&restrict(true, pt)));
        st && POINTS.iter().any(|&pt| modp::binary_forms_coprime(&restrict(false, pt)))
    }

    pub fn div_exact(&self, d: &BiForm) -> Option<BiForm> {
        if d.a > self.a || d.b > self.b {
            return None;
        }
        let q = self.dehomogenize().div_exact(&d.dehomogenize())?;
        BiForm::from_affine(&q, self.a - d.a, self.b - d.b).ok()
    }

    /// Same form up to a nonzero scalar.
    pub fn is_proportional(&self, o: &BiForm) -> bool {
        if self.bidegree() != o.bidegree() || self.len() != o.len() {
            return false;
        }
        let Some((k, c)) = self.terms.iter().next() else {
            return o.is_zero();
        };
        let Some(d) = o.terms.get(k) else {
            return false;
        };
        let r = d / c;
        self.terms.iter().all(|(k, x)| o.terms.get(k).is_some_and(|y| *y == x * &r))
    }

    pub fn parse(text: &str) -> Result<BiForm> {
        let terms = parse_terms(text, 4, |n| NAMES.iter().position(|&x| x == n))?;
        let mut bideg: Option<(u32, u32)> = None;
        let mut out = Vec::new();
        for (e, c) in terms {
            if c.is_zero() {
                continue;
            }
            let bd = (e[0] + e[1], e[2] + e[3]);
            match bideg {
                None => bideg = Some(bd),
                Some(x) if x != bd => return Err(Error::NotHomogeneous),
                _ => {}
            }
            out.push(((e[0], e[2]), c));
        }
        let (a, b) = bideg.unwrap_or((0, 0));
        Self::from_terms(a, b, out)
    }

    /// Parses and checks the bidegree; `"0"` yields the zero form of that bidegree.
    pub fn parse_with_bidegree(text: &str, a: u32, b: u32) -> Result<BiForm> {
        let f = Self::parse(text)?;
        if f.is_zero() {
            return Ok(Self::zero(a, b));
        }
        if f.bidegree() != (a, b) {
            let (x, y) = f.bidegree();
            return Err(Error::BidegreeMismatch(x, y, a, b));
        }
        Ok(f)
    }
}

impl fmt::Display for BiForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = NAMES.iter().map(|s| s.to_string()).collect();
        let exps: Vec<([u32; 4], &Rational)> = self
            .terms
            .iter()
            .rev()
            .map(|(&(i, j), c)| ([i, self.a - i, j, self.b - j], c))
            .collect();
        f.write_str(&format_terms(exps.iter().map(|(e, c)| (&e[..], *c)), &names))
    }
}

/// Memoized substitution of forms into polynomials: the image of a monomial
/// is built from the image of a monomial one degree lower.
pub struct BiFormPowers<'a> {
    forms: &'a [BiForm],
    cache: HashMap<Monomial, BiForm>,
}

impl<'a> BiFormPowers<'a> {
    /// Panics unless all forms share a bidegree.
    pub fn new(forms: &'a [BiForm]) -> Self {
        assert!(!forms.is_empty());
        let bd = forms[0].bidegree();
        assert!(forms.iter().all(|f| f.bidegree() == bd), "forms must share a bidegree");
        BiFormPowers { forms, cache: HashMap::new() }
    }

    pub fn monomial(&mut self, m: &Monomial) -> BiForm {
        if let Some(f) = self.cache.get(m) {
            return f.clone();
        }
        let f = match m.exponents().iter().position(|&e| e > 0) {
            None => BiForm::one(),
            Some(v) => {
                let lower = m.with_exp(v, m.exp(v) - 1);
                self.monomial(&lower).mul(&self.forms[v])
            }
        };
        self.cache.insert(m.clone(), f.clone());
        f
    }

    /// Image of a homogeneous polynomial of degree `d`.
    pub fn poly(&mut self, p: &Poly, d: u32) -> BiForm {
        let (a, b) = self.forms[0].bidegree();
        let mut acc = BiForm::zero(d * a, d * b);
        for (m, c) in p.terms() {
            let img = self.monomial(m);
            for (&(i, j), x) in &img.terms {
                acc.add_term(i, j, x * c);
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::int;

    #[test]
    fn parse_print_roundtrip() {
        let f = BiForm::parse("s^2*u - 3/4*s*t*v + t^2*v").unwrap();
        assert_eq!(f.bidegree(), (2, 1));
        let g = BiForm::parse(&f.to_string()).unwrap();
        assert_eq!(f, g);
        assert!(BiForm::parse("s*u + t").is_err());
    }

    #[test]
    fn gcd_finds_t_and_v_factors() {
        let p = BiForm::parse("s*u + t*v").unwrap();
        let f = p.mul(&BiForm::t()).mul(&BiForm::v());
        let g = p.mul(&BiForm::t()).mul(&BiForm::u());
        let h = BiForm::gcd_all(&[f.clone(), g]);
        assert!(h.is_proportional(&p.mul(&BiForm::t())));
        assert_eq!(f.div_exact(&h).unwrap().bidegree(), (0, 1));
        assert!(f.div_exact(&BiForm::s()).is_none());
    }

    #[test]
    fn fiber_restriction() {
        let f = BiForm::parse("s*u + 2*t*v").unwrap();
        let r = f.restrict_to_fiber(&int(1), &int(3));
        assert_eq!(r, vec![int(6), int(1)]);
    }
}
