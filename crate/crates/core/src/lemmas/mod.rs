//! Checks of the dimension-count inequalities behind monoid existence, the
//! cubic fixing the fiber count, its constants, and the non-equivalence
//! arithmetic for general projections.

mod real;

pub use real::Real;

use std::ops::RangeInclusive;

use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{int, rat, Rational};
use crate::monoid::{dim_formula_md, dim_formula_mdpq, monoid_basis, restriction_rank, restriction_rank_modular, Vertex};
use crate::surfaces::ParamSurface;

pub const DEFAULT_PRECISION: u32 = 50;
/// Extra digits carried internally beyond the requested precision.
const GUARD: u32 = 12;

/// A reported quantity: exact when no irrational constant enters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Exact(Rational),
    Approx(Real),
}

impl Value {
    pub fn signum(&self) -> i32 {
        match self {
            Value::Exact(q) => {
                if q.is_zero() {
                    0
                } else if q.is_positive() {
                    1
                } else {
                    -1
                }
            }
            Value::Approx(r) => r.signum(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            Value::Approx(r) => r.to_f64(),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(1))?;
        match self {
            Value::Exact(q) => m.serialize_entry("exact", &q.to_string())?,
            Value::Approx(r) => m.serialize_entry("approx", &r.to_string())?,
        }
        m.end()
    }
}

/// One inequality `lhs > rhs`, with `margin = lhs - rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub lhs: Value,
    pub rhs: Value,
    pub margin: Value,
    pub verdict: bool,
}

impl BoundReport {
    fn exact(name: &str, lhs: Rational, rhs: Rational) -> Self {
        let margin = &lhs - &rhs;
        let verdict = margin.is_positive();
        BoundReport { name: name.into(), lhs: Value::Exact(lhs), rhs: Value::Exact(rhs), margin: Value::Exact(margin), verdict }
    }

    fn approx(name: &str, lhs: Real, rhs: Real) -> Self {
        let margin = lhs.sub(&rhs);
        let verdict = margin.signum() > 0;
        BoundReport { name: name.into(), lhs: Value::Approx(lhs), rhs: Value::Approx(rhs), margin: Value::Approx(margin), verdict }
    }
}

/// The real root of `2x^3 - 6x^2 + 3x - 2`, in closed form
/// `1 + cbrt((sqrt 7 + 3)/4) + (2(sqrt 7 + 3))^(-1/3)`, to `precision` digits.
pub fn xi_constant(precision: u32) -> Result<Real> {
    if precision < 30 {
        return Err(Error::InvalidArgument(format!("precision {precision} < 30 digits")));
    }
    let p = precision + GUARD;
    let r7 = Real::from_int(7, p).sqrt();
    let s = r7.add(&Real::from_int(3, p));
    let first = s.mul_rational(&rat(1, 4)).cbrt();
    let second = s.mul_rational(&int(2)).cbrt().recip();
    Ok(Real::from_int(1, p).add(&first).add(&second).with_digits(precision))
}

/// `2x^3 - 6x^2 + 3x - 2` evaluated at `x`.
pub fn cubic_residual(x: &Real) -> Real {
    let p = x.digits();
    let x2 = x.mul(x);
    x2.mul(x).mul_rational(&int(2)).sub(&x2.mul_rational(&int(6))).add(&x.mul_rational(&int(3))).sub(&Real::from_int(2, p))
}

fn cubic_at(x: &Rational) -> Rational {
    int(2) * x * x * x - int(6) * x * x + int(3) * x - int(2)
}

/// Evidence that the cubic has exactly one real root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootUniqueness {
    /// Discriminant; negative means one real and two complex roots.
    pub discriminant: String,
    /// Sign changes of the cubic on the grid `[-10, 10]` with step 1/100.
    pub sign_changes: usize,
    /// Grid interval holding the change.
    pub bracket: (String, String),
}

pub fn cubic_root_uniqueness() -> RootUniqueness {
    let (a, b, c, d) = (int(2), int(-6), int(3), int(-2));
    let disc = int(18) * &a * &b * &c * &d - int(4) * &b * &b * &b * &d + &b * &b * &c * &c
        - int(4) * &a * &c * &c * &c
        - int(27) * &a * &a * &d * &d;
    let grid: Vec<Rational> = (-1000..=1000).map(|k| rat(k, 100)).collect();
    let mut changes = 0;
    let mut bracket = (String::new(), String::new());
    for w in grid.windows(2) {
        let (f0, f1) = (cubic_at(&w[0]), cubic_at(&w[1]));
        if f0.is_positive() != f1.is_positive() {
            changes += 1;
            bracket = (w[0].to_string(), w[1].to_string());
        }
    }
    RootUniqueness { discriminant: disc.to_string(), sign_changes: changes, bracket }
}

/// Coefficients of `A a^2 + B a - xi`, the leading part of the quadratic
/// inequality after substituting `beta = xi d / a` with `b = 1`.
fn quadratic_coefficients(xi: &Real) -> (Real, Real) {
    let p = xi.digits();
    let xi2 = xi.mul(xi);
    let a = Real::from_int(1, p).sub(&xi.mul_rational(&int(4))).add(&xi2.mul_rational(&int(2)));
    let b = Real::from_rational(&rat(1, 2), p).add(&xi.mul_rational(&rat(7, 2))).sub(&xi2.mul_rational(&rat(3, 2)));
    (a, b)
}

/// Roots `a1 < 0 < a2` of `A a^2 + B a - xi`.
pub fn quadratic_roots(xi: &Real) -> (Real, Real) {
    let (a, b) = quadratic_coefficients(xi);
    let disc = b.mul(&b).add(&xi.mul(&a).mul_rational(&int(4))).sqrt();
    let two_a = a.mul_rational(&int(2));
    let a1 = b.neg().sub(&disc).div(&two_a);
    let a2 = b.neg().add(&disc).div(&two_a);
    (a1, a2)
}

/// `A a^2 + B a - xi` at an integer `a`.
pub fn quadratic_positivity(a: u64, xi: &Real) -> Real {
    let (qa, qb) = quadratic_coefficients(xi);
    let a = int(a as i64);
    qa.mul_rational(&(&a * &a)).add(&qb.mul_rational(&a)).sub(xi)
}

/// The constants at a requested precision, computed with guard digits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constants {
    pub xi: Real,
    pub a1: Real,
    pub a2: Real,
    pub residual: Real,
}

pub fn constants(precision: u32) -> Result<Constants> {
    let inner = xi_constant(precision + GUARD)?;
    let (a1, a2) = quadratic_roots(&inner);
    let residual = cubic_residual(&inner);
    Ok(Constants {
        xi: inner.with_digits(precision),
        a1: a1.with_digits(precision),
        a2: a2.with_digits(precision),
        residual: residual.with_digits(precision + GUARD),
    })
}

/// `beta = ceil(h xi)` with `h = d / a`, and the offset `beta - h xi`.
pub fn beta_of(d: u64, a: u64, xi: &Real) -> Result<(u64, Real)> {
    if a == 0 || d == 0 || !d.is_multiple_of(a) {
        return Err(Error::InvalidArgument(format!("need a positive multiple d of a, got d = {d}, a = {a}")));
    }
    let h = d / a;
    let hx = xi.mul_rational(&int(h as i64));
    let beta = hx.ceil();
    let eps = Real::from_rational(&Rational::from_integer(beta.clone()), xi.digits()).sub(&hx);
    Ok((beta.to_u64().expect("beta fits u64"), eps))
}

/// `(ab + 1/2) d^2 + (-4a^2 b + 7a/2 - 1) beta d + a^2 (2ab - 3/2) beta^2 > 0`.
pub fn check_quadratic_inequality(a: u64, b: u64, beta: u64, d: u64) -> BoundReport {
    let (a, b, beta, d) = (int(a as i64), int(b as i64), int(beta as i64), int(d as i64));
    let lhs = (&a * &b + rat(1, 2)) * &d * &d + (int(-4) * &a * &a * &b + rat(7, 2) * &a - int(1)) * &beta * &d
        + &a * &a * (int(2) * &a * &b - rat(3, 2)) * &beta * &beta;
    BoundReport::exact("quadratic terms", lhs, Rational::zero())
}

/// `(a^3 eps / 6) [3h^2 (2xi^2 - 4xi + 1) + 6h eps (xi - 1) + 2 eps^2] > 0`.
pub fn check_cubic_remainder(h: u64, eps: &Rational, a: u64, xi: &Real) -> Result<BoundReport> {
    if h == 0 || !eps.is_positive() || eps >= &int(1) {
        return Err(Error::InvalidArgument("need h >= 1 and 0 < eps < 1".into()));
    }
    let p = xi.digits();
    let h = int(h as i64);
    let xi2 = xi.mul(xi);
    let quad = xi2.mul_rational(&int(2)).sub(&xi.mul_rational(&int(4))).add(&Real::from_int(1, p));
    let bracket = quad
        .mul_rational(&(int(3) * &h * &h))
        .add(&xi.sub(&Real::from_int(1, p)).mul_rational(&(int(6) * &h * eps)))
        .add_rational(&(int(2) * eps * eps));
    let a = int(a as i64);
    let lhs = bracket.mul_rational(&(&a * &a * &a * eps / int(6)));
    Ok(BoundReport::approx("cubic remainder", lhs, Real::zero(p)))
}

/// Constants of the restricted `h0` estimate `lead(d) + ell d + m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EllM {
    #[serde(serialize_with = "ser_rational")]
    pub ell: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub m: Rational,
}

fn ser_rational<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

impl Default for EllM {
    fn default() -> Self {
        EllM { ell: Rational::zero(), m: Rational::zero() }
    }
}

/// Leading part `a(2b+beta)/2 d^2 - (a-2)/2 beta d` of the restricted `h0`.
pub fn h0_leading(a: u64, b: u64, beta: u64, d: u64) -> Rational {
    let (a, b, beta, d) = (int(a as i64), int(b as i64), int(beta as i64), int(d as i64));
    let delta = &a * (int(2) * &b + &beta);
    delta * &d * &d / int(2) - (&a - int(2)) * &beta * &d / int(2)
}

/// Lower bound for the cone-free part of the degree-`d` monoids through
/// the realization, from the cone count and the `h0` term.
fn cone_free_lower_bound(a: u64, b: u64, beta: u64, d: u64, h0: &Rational) -> Rational {
    let delta = int((a * (2 * b + beta)) as i64);
    let d = int(d as i64);
    &delta * &d * &d - (&delta * &delta - int(3) * &delta) * &d + &delta * &delta * &delta / int(3)
        - rat(3, 2) * &delta * &delta
        + rat(13, 6) * &delta
        - h0
}

/// `cone-free lower bound + dim M_d(p0,p4) > dim M_d(p0)`. Uses the supplied
/// exact `h0` when given, otherwise the estimate with `ell_m`.
pub fn check_dimension_inequality(a: u64, b: u64, beta: u64, d: u64, h0: Option<u64>, ell_m: &EllM) -> Result<BoundReport> {
    if a < 2 || b < 1 || beta < 1 || d < 2 {
        return Err(Error::Precondition("need a >= 2, b >= 1, beta >= 1, d >= 2".into()));
    }
    let (h0v, name) = match h0 {
        Some(h) => (int(h as i64), "dimension count (exact h0)"),
        None => (h0_leading(a, b, beta, d) + &ell_m.ell * int(d as i64) + &ell_m.m, "dimension count (estimated h0)"),
    };
    let lb = cone_free_lower_bound(a, b, beta, d, &h0v);
    let dd = d as u32;
    let lhs = lb + int(dim_formula_mdpq(dd)? as i64);
    let rhs = int(dim_formula_md(dd)? as i64);
    Ok(BoundReport::exact(name, lhs, rhs))
}

/// Dimension inequality along `d = a h`, `beta = beta_of(d, a)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Threshold {
    pub a: u64,
    pub b: u64,
    /// Smallest `h` from which every checked `h` is positive.
    pub h_star: Option<u64>,
    pub checked_up_to: u64,
    pub negative_count: usize,
}

pub fn dimension_threshold(a: u64, b: u64, h_max: u64, ell_m: &EllM, xi: &Real) -> Result<Threshold> {
    let verdicts = (1..=h_max)
        .into_par_iter()
        .map(|h| {
            let d = a * h;
            let (beta, _) = beta_of(d, a, xi)?;
            Ok(check_dimension_inequality(a, b, beta, d, None, ell_m)?.verdict)
        })
        .collect::<Result<Vec<bool>>>()?;
    let negative_count = verdicts.iter().filter(|v| !**v).count();
    let h_star = match verdicts.iter().rposition(|v| !v) {
        None => Some(1),
        Some(i) if (i as u64) + 1 < h_max => Some(i as u64 + 2),
        Some(_) => None,
    };
    Ok(Threshold { a, b, h_star, checked_up_to: h_max, negative_count })
}

/// Fit of `h0(d) - lead(d) ~ ell d + m` over a range of degrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EllMFit {
    pub fit: EllM,
    /// `(d, exact h0, residual after the fit)`.
    pub samples: Vec<(u32, u64, String)>,
    pub max_residual: String,
}

/// `h0` of the restriction of the one-vertex system at `p0` to `z`, fitted
/// against the leading terms for a realization of shape `(a, b, beta)`.
/// Ranks are taken modulo the prime (exact with overwhelming probability
/// for a random-looking surface; the rational rank is only used when the
/// reduction fails), since the rational elimination is slow at these sizes.
pub fn estimate_ell_m(z: &ParamSurface, shape: (u64, u64, u64), degrees: RangeInclusive<u32>) -> Result<EllMFit> {
    let ds: Vec<u32> = degrees.collect();
    if ds.len() < 4 || ds[0] < 1 {
        return Err(Error::InvalidArgument("need at least four consecutive positive degrees".into()));
    }
    let (a, b, beta) = shape;
    let h0s = ds
        .iter()
        .map(|&d| {
            let sys = monoid_basis(d, &[Vertex::P0])?;
            match restriction_rank_modular(&sys, z)? {
                Some(r) => Ok(r as u64),
                None => Ok(restriction_rank(&sys, z)? as u64),
            }
        })
        .collect::<Result<Vec<u64>>>()?;
    let ys: Vec<Rational> = ds.iter().zip(&h0s).map(|(&d, &h)| int(h as i64) - h0_leading(a, b, beta, d as u64)).collect();
    let xs: Vec<Rational> = ds.iter().map(|&d| int(d as i64)).collect();
    let n = int(ds.len() as i64);
    let sx = xs.iter().fold(Rational::zero(), |s, x| s + x);
    let sy = ys.iter().fold(Rational::zero(), |s, y| s + y);
    let sxx = xs.iter().fold(Rational::zero(), |s, x| s + x * x);
    let sxy = xs.iter().zip(&ys).fold(Rational::zero(), |s, (x, y)| s + x * y);
    let det = &n * &sxx - &sx * &sx;
    let ell = (&n * &sxy - &sx * &sy) / &det;
    let m = (&sy - &ell * &sx) / &n;
    let residuals: Vec<Rational> = xs.iter().zip(&ys).map(|(x, y)| y - &ell * x - &m).collect();
    let max = residuals.iter().map(|r| r.abs()).max().unwrap_or_else(Rational::zero);
    let samples = ds.iter().zip(&h0s).zip(&residuals).map(|((&d, &h), r)| (d, h, r.to_string())).collect();
    Ok(EllMFit { fit: EllM { ell, m }, samples, max_residual: max.to_string() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NonEquivalenceBranch {
    /// Both pairs are terminal, so the surfaces are not Cremona equivalent.
    TerminalPairs,
    /// The scroll has degree at most 12, below the projection's degree.
    DegreeComparison,
}

/// Arithmetic separating a general projection of a ruled surface from
/// general projections of scrolls.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonEquivalence {
    pub a: u64,
    pub deg_d: u64,
    pub deg_b: u64,
    /// `2 a deg_D`, at least 16.
    pub surface_degree: u64,
    /// Highest multiplicity on a general projection (triple points).
    pub max_multiplicity: u64,
    /// `4 * 3 / (2 a deg_D)`; below 1 means the pair is terminal.
    pub surface_value: String,
    pub surface_terminal: bool,
    /// `2 deg_B`.
    pub scroll_degree: u64,
    /// `12 / (2 deg_B)`.
    pub scroll_value: String,
    pub scroll_terminal: bool,
    pub branch: NonEquivalenceBranch,
    pub cremona_equivalent: bool,
}

pub fn non_equivalence_witness(a: u64, deg_d: u64, deg_b: u64) -> Result<NonEquivalence> {
    if a < 2 || deg_d < 4 || deg_b < 1 {
        return Err(Error::Precondition("need a >= 2, deg_D >= 4, deg_B >= 1".into()));
    }
    let surface_degree = 2 * a * deg_d;
    let max_multiplicity = 3;
    let sv = rat(4 * max_multiplicity as i64, surface_degree as i64);
    let scroll_degree = 2 * deg_b;
    let cv = rat(4 * max_multiplicity as i64, scroll_degree as i64);
    let surface_terminal = sv < int(1);
    let scroll_terminal = cv < int(1);
    let branch = if deg_b >= 7 { NonEquivalenceBranch::TerminalPairs } else { NonEquivalenceBranch::DegreeComparison };
    let separated = match branch {
        NonEquivalenceBranch::TerminalPairs => surface_terminal && scroll_terminal,
        NonEquivalenceBranch::DegreeComparison => surface_terminal && scroll_degree <= 12 && scroll_degree < surface_degree,
    };
    Ok(NonEquivalence {
        a,
        deg_d,
        deg_b,
        surface_degree,
        max_multiplicity,
        surface_value: sv.to_string(),
        surface_terminal,
        scroll_degree,
        scroll_value: cv.to_string(),
        scroll_terminal,
        branch,
        cremona_equivalent: !separated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn xi() -> Real {
        xi_constant(DEFAULT_PRECISION).unwrap()
    }

    #[test]
    fn xi_digits_and_residual() {
        let c = constants(50).unwrap();
        assert_eq!(c.xi.to_decimal(9), "2.567468375");
        assert_eq!(c.a2.to_decimal(10), "0.8628701083");
        assert!(c.a1.signum() < 0);
        let bound = Real::from_rational(&Rational::new(1.into(), BigInt::from(10).pow(45)), c.residual.digits());
        assert!(c.residual.abs() < bound);
        assert!(xi_constant(20).is_err());
    }

    #[test]
    fn unique_real_root() {
        let u = cubic_root_uniqueness();
        assert_eq!(u.discriminant, "-756");
        assert_eq!(u.sign_changes, 1);
        assert_eq!(u.bracket, ("64/25".to_string(), "257/100".to_string()));
    }

    #[test]
    fn beta_examples() {
        let x = xi();
        let (b1, e1) = beta_of(2, 2, &x).unwrap();
        assert_eq!(b1, 3);
        assert_eq!(e1.to_decimal(4), "0.4325");
        let (b10, e10) = beta_of(30, 3, &x).unwrap();
        assert_eq!(b10, 26);
        assert_eq!(e10.to_decimal(4), "0.3253");
        assert!(beta_of(0, 2, &x).is_err());
        assert!(beta_of(3, 2, &x).is_err());
    }

    #[test]
    fn quadratic_examples() {
        let x = xi();
        let (b, _) = beta_of(100, 1, &x).unwrap();
        assert!(check_quadratic_inequality(1, 1, b, 100).verdict);
        let (b, _) = beta_of(50, 2, &x).unwrap();
        assert!(check_quadratic_inequality(2, 1, b, 50).verdict);
    }

    #[test]
    fn cubic_remainder_examples() {
        let x = xi();
        assert!(check_cubic_remainder(1, &rat(1, 2), 2, &x).unwrap().verdict);
        assert!(check_cubic_remainder(100, &rat(1, 100), 3, &x).unwrap().verdict);
        assert!(check_cubic_remainder(1, &int(0), 2, &x).is_err());
    }

    #[test]
    fn dimension_examples() {
        let x = xi();
        let d = 2 * 2 * 100;
        let (beta, _) = beta_of(d, 2, &x).unwrap();
        assert!(check_dimension_inequality(2, 1, beta, d, None, &EllM::default()).unwrap().verdict);
        assert!(check_dimension_inequality(1, 1, 1, 4, None, &EllM::default()).is_err());
    }

    #[test]
    fn witness_branches() {
        let w = non_equivalence_witness(2, 4, 7).unwrap();
        assert_eq!((w.surface_degree, w.surface_value.as_str(), w.scroll_value.as_str()), (16, "3/4", "6/7"));
        assert_eq!(w.branch, NonEquivalenceBranch::TerminalPairs);
        assert!(!w.cremona_equivalent);
        let w = non_equivalence_witness(2, 4, 6).unwrap();
        assert_eq!(w.branch, NonEquivalenceBranch::DegreeComparison);
        assert!(w.scroll_degree <= 12 && !w.cremona_equivalent);
        assert!(non_equivalence_witness(2, 3, 7).is_err());
        assert!(non_equivalence_witness(1, 4, 7).is_err());
    }
}
