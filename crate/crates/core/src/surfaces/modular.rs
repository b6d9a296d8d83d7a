//! Intersection counts of a parametrized surface computed modulo the prime
//! of [`crate::exact::modp`]. The counts are those of a reduction with random
//! charts and random hyperplanes, so they agree with the rational counts
//! outside a set of choices of negligible probability. Exact resultants over
//! the rationals were the bottleneck once coefficients grew over a few
//! rectification stages.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};

use super::param::Fiber;
use crate::error::{Error, Result};
use crate::exact::modp::{self, PRIME};
use crate::exact::{BiForm, Rational};
use crate::random::{derive_seed, SeededRng};

const CHART_ATTEMPTS: u64 = 8;

fn nonzero(rng: &mut SeededRng) -> u64 {
    rng.gen_range(1..PRIME)
}

/// Dense residues of a form of bidegree `(a, b)`; entry `i*(b+1)+j` is the
/// coefficient of `s^i t^(a-i) u^j v^(b-j)`.
type Residues = Vec<u64>;

/// Reduction of a surface modulo the prime.
pub(crate) struct ModSurface {
    a: usize,
    b: usize,
    forms: Vec<Residues>,
}

fn reduce_form(f: &BiForm, a: usize, b: usize) -> Result<Residues> {
    let mut out = vec![0; (a + 1) * (b + 1)];
    for (&(i, j), c) in f.terms() {
        out[i as usize * (b + 1) + j as usize] =
            modp::reduce(c).ok_or_else(|| Error::RetriesExhausted("denominator divisible by the modulus".into()))?;
    }
    Ok(out)
}

/// Projective point with integer entries, reduced; never the zero residue.
pub(crate) fn reduce_point(y: &[Rational]) -> Vec<u64> {
    let lcm = y.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
    let ints: Vec<BigInt> = y.iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    ints.iter().map(|x| modp::reduce_int(&(x / &g))).collect()
}

/// Random chart `s = w + alpha`, `t = gamma*w + 1`, `w = sigma + shear*mu`,
/// `u = mu + beta`, `v = delta*mu + 1`. Every pulled-back form has a
/// constant leading coefficient in `mu`.
struct ModChart {
    alpha: u64,
    gamma: u64,
    beta: u64,
    delta: u64,
    shear: u64,
}

impl ModChart {
    fn random(rng: &mut SeededRng) -> Self {
        loop {
            let c = ModChart {
                alpha: nonzero(rng),
                gamma: nonzero(rng),
                beta: nonzero(rng),
                delta: nonzero(rng),
                shear: nonzero(rng),
            };
            if modp::mul(c.alpha, c.gamma) != 1 && modp::mul(c.beta, c.delta) != 1 {
                return c;
            }
        }
    }
}

fn powers(p: &[u64], n: usize) -> Vec<Vec<u64>> {
    let mut v = vec![vec![1]];
    for k in 0..n {
        let next = modp::poly_mul(&v[k], p);
        v.push(next);
    }
    v
}

impl ModSurface {
    pub(crate) fn new(forms: &[BiForm]) -> Result<Self> {
        let (a, b) = forms[0].bidegree();
        let (a, b) = (a as usize, b as usize);
        let forms = forms.iter().map(|f| reduce_form(f, a, b)).collect::<Result<Vec<_>>>()?;
        Ok(ModSurface { a, b, forms })
    }

    fn full(&self) -> usize {
        2 * self.a * self.b
    }

    fn combination(forms: &[Residues], rng: &mut SeededRng) -> Residues {
        let mut out = vec![0; forms[0].len()];
        for f in forms {
            let c = nonzero(rng);
            for (o, &x) in out.iter_mut().zip(f) {
                *o = modp::add(*o, modp::mul(c, x));
            }
        }
        out
    }

    /// Restriction to the chart line `sigma = x`, as a polynomial in `mu`.
    fn pull_at(&self, chart: &ModChart, f: &Residues, x: u64) -> Vec<u64> {
        let w0 = x;
        let s = [modp::add(w0, chart.alpha), chart.shear];
        let t = [modp::add(modp::mul(chart.gamma, w0), 1), modp::mul(chart.gamma, chart.shear)];
        let u = [chart.beta, 1];
        let v = [1, chart.delta];
        let (ps, pt, pu, pv) = (powers(&s, self.a), powers(&t, self.a), powers(&u, self.b), powers(&v, self.b));
        let mut acc = vec![0; self.a + self.b + 1];
        for i in 0..=self.a {
            let st = modp::poly_mul(&ps[i], &pt[self.a - i]);
            for j in 0..=self.b {
                let c = f[i * (self.b + 1) + j];
                if c == 0 {
                    continue;
                }
                let term = modp::poly_mul(&st, &modp::poly_mul(&pu[j], &pv[self.b - j]));
                for (k, &y) in term.iter().enumerate() {
                    acc[k] = modp::add(acc[k], modp::mul(c, y));
                }
            }
        }
        acc
    }

    /// Resultant in `mu` of two pulled-back forms, as a polynomial in
    /// `sigma`. `None` when a form drops degree in `mu` on this chart.
    fn pair_resultant(&self, chart: &ModChart, f: &Residues, g: &Residues) -> Option<Vec<u64>> {
        let n = self.a + self.b;
        let nodes = n * n + 1;
        let mut xs = Vec::with_capacity(nodes);
        let mut ys = Vec::with_capacity(nodes);
        for k in 0..nodes as u64 {
            let (pf, pg) = (self.pull_at(chart, f, k), self.pull_at(chart, g, k));
            if k == 0 && (pf[n] == 0 || pg[n] == 0) {
                return None;
            }
            xs.push(k);
            ys.push(modp::poly_resultant(&pf, &pg));
        }
        Some(modp::poly_interpolate(&xs, &ys))
    }

    /// Squarefree polynomial whose roots are the first chart coordinates of
    /// the base points.
    fn base_support(&self, chart: &ModChart, rng: &mut SeededRng) -> Option<Vec<u64>> {
        let mut g: Option<Vec<u64>> = None;
        for _ in 0..3 {
            let (h1, h2) = (Self::combination(&self.forms, rng), Self::combination(&self.forms, rng));
            let r = self.pair_resultant(chart, &h1, &h2)?;
            if r.is_empty() {
                return None;
            }
            g = Some(match g {
                None => r,
                Some(h) => modp::poly_gcd(h, r),
            });
        }
        Some(modp::poly_squarefree_part(&g.unwrap()))
    }

    pub(crate) fn base_point_count(&self, seed: u64) -> Result<usize> {
        for attempt in 0..CHART_ATTEMPTS {
            let mut rng = SeededRng::seed_from_u64(derive_seed(seed, "base-points", attempt));
            let chart = ModChart::random(&mut rng);
            let (h1, h2) = (Self::combination(&self.forms, &mut rng), Self::combination(&self.forms, &mut rng));
            let Some(r) = self.pair_resultant(&chart, &h1, &h2) else { continue };
            if r.is_empty() {
                return Err(Error::NotGenericallyFinite);
            }
            if modp::poly_degree(&r) != Some(self.full()) {
                continue;
            }
            if let Some(s) = self.base_support(&chart, &mut rng) {
                return Ok(modp::poly_degree(&s).unwrap_or(0));
            }
        }
        Err(Error::RetriesExhausted("no regular chart for base points".into()))
    }

    /// Intersection points of two general hyperplane sections off the base
    /// locus.
    pub(crate) fn moving_intersection_count(&self, seed: u64) -> Result<usize> {
        let mut zero_hits = 0;
        for attempt in 0..CHART_ATTEMPTS {
            let mut rng = SeededRng::seed_from_u64(derive_seed(seed, "intersection", attempt));
            let chart = ModChart::random(&mut rng);
            let (h1, h2) = (Self::combination(&self.forms, &mut rng), Self::combination(&self.forms, &mut rng));
            let Some(r) = self.pair_resultant(&chart, &h1, &h2) else { continue };
            if r.is_empty() {
                zero_hits += 1;
                if zero_hits >= 2 {
                    return Err(Error::NotGenericallyFinite);
                }
                continue;
            }
            if modp::poly_degree(&r) != Some(self.full()) {
                continue;
            }
            let Some(support) = self.base_support(&chart, &mut rng) else { continue };
            return Ok(modp::poly_degree(&modp::poly_strip_roots(&r, &support)).unwrap_or(0));
        }
        Err(Error::RetriesExhausted("no regular chart for the intersection count".into()))
    }

    /// Restrictions of the forms to the line `u/v = x` (in `s/t`) or
    /// `s/t = x` (in `u/v`), paired with their formal degree.
    fn restrict(&self, forms: &[Residues], x: u64, first: bool) -> Vec<(Vec<u64>, usize)> {
        forms
            .iter()
            .map(|f| {
                let poly = if first {
                    (0..=self.a)
                        .map(|i| modp::poly_eval(&f[i * (self.b + 1)..(i + 1) * (self.b + 1)], x))
                        .collect()
                } else {
                    (0..=self.b)
                        .map(|j| {
                            let col: Vec<u64> = (0..=self.a).map(|i| f[i * (self.b + 1) + j]).collect();
                            modp::poly_eval(&col, x)
                        })
                        .collect()
                };
                (poly, if first { self.a } else { self.b })
            })
            .collect()
    }

    /// Preimage of `y` off the base locus.
    pub(crate) fn fiber(&self, y: &[u64], seed: u64) -> Result<Fiber> {
        let n = self.forms.len();
        let mut minors = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let m: Residues = self.forms[i]
                    .iter()
                    .zip(&self.forms[j])
                    .map(|(&fi, &fj)| modp::sub(modp::mul(fi, y[j]), modp::mul(fj, y[i])))
                    .collect();
                if m.iter().any(|&c| c != 0) {
                    minors.push(m);
                }
            }
        }
        if minors.is_empty() {
            return Ok(Fiber::Curve);
        }
        // A common factor of the minors survives restriction to every line
        // of one of the two rulings; without one, a random line of each
        // ruling misses the finitely many common zeros.
        let mut rng = SeededRng::seed_from_u64(derive_seed(seed, "fiber-curve", 0));
        let (x1, x2) = (nonzero(&mut rng), nonzero(&mut rng));
        if !modp::binary_forms_coprime(&self.restrict(&minors, x1, true))
            || !modp::binary_forms_coprime(&self.restrict(&minors, x2, false))
        {
            return Ok(Fiber::Curve);
        }
        for attempt in 0..CHART_ATTEMPTS {
            let mut rng = SeededRng::seed_from_u64(derive_seed(seed, "fiber", attempt));
            let chart = ModChart::random(&mut rng);
            let mut common: Option<Vec<u64>> = None;
            let mut ok = true;
            for _ in 0..3 {
                let (e1, e2) = (Self::combination(&minors, &mut rng), Self::combination(&minors, &mut rng));
                match self.pair_resultant(&chart, &e1, &e2) {
                    Some(r) if modp::poly_degree(&r) == Some(self.full()) => {
                        common = Some(match common {
                            None => r,
                            Some(c) => modp::poly_gcd(c, r),
                        });
                    }
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            let Some(support) = self.base_support(&chart, &mut rng) else { continue };
            let rest = modp::poly_strip_roots(&common.unwrap(), &support);
            return Ok(Fiber::Finite(modp::poly_degree(&modp::poly_squarefree_part(&rest)).unwrap_or(0)));
        }
        Err(Error::RetriesExhausted("no regular chart for the fiber".into()))
    }

    fn eval(&self, p: [u64; 4]) -> Vec<u64> {
        let [s, t, u, v] = p;
        self.forms
            .iter()
            .map(|f| {
                let mut acc = 0;
                for i in 0..=self.a {
                    let st = modp::mul(modp::pow(s, i as u64), modp::pow(t, (self.a - i) as u64));
                    for j in 0..=self.b {
                        let c = f[i * (self.b + 1) + j];
                        if c != 0 {
                            let uv = modp::mul(modp::pow(u, j as u64), modp::pow(v, (self.b - j) as u64));
                            acc = modp::add(acc, modp::mul(c, modp::mul(st, uv)));
                        }
                    }
                }
                acc
            })
            .collect()
    }

    pub(crate) fn mapping_degree(&self, seed: u64) -> Result<usize> {
        let mut rng = SeededRng::seed_from_u64(derive_seed(seed, "mapping-degree", 0));
        for attempt in 0..CHART_ATTEMPTS {
            let y = self.eval(std::array::from_fn(|_| nonzero(&mut rng)));
            if y.iter().all(|&x| x == 0) {
                continue;
            }
            return match self.fiber(&y, derive_seed(seed, "mapping-degree-fiber", attempt))? {
                Fiber::Finite(0) => Err(Error::RetriesExhausted("image point without preimage".into())),
                Fiber::Finite(k) => Ok(k),
                Fiber::Curve => Err(Error::NotGenericallyFinite),
            };
        }
        Err(Error::RetriesExhausted("random points hit the base locus".into()))
    }
}
