//! Fixed-point decimal reals over big integers: `mant / 10^digits`.
//!
//! Every operation rounds to nearest at the working precision, so an
//! expression of a few dozen operations is accurate to within a few units
//! of the last digit. Callers add guard digits for anything tighter.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Real {
    mant: BigInt,
    digits: u32,
}

fn ten_pow(n: u32) -> BigInt {
    BigInt::from(10u32).pow(n)
}

/// `num / den` rounded to nearest, ties away from zero.
fn div_round(num: &BigInt, den: &BigInt) -> BigInt {
    let (q, r) = num.div_mod_floor(den);
    // den > 0 always here
    if (r * 2u32) >= *den {
        q + 1u32
    } else {
        q
    }
}

impl Real {
    pub fn zero(digits: u32) -> Self {
        Real { mant: BigInt::zero(), digits }
    }

    pub fn from_int(n: i64, digits: u32) -> Self {
        Real { mant: BigInt::from(n) * ten_pow(digits), digits }
    }

    pub fn from_rational(q: &Rational, digits: u32) -> Self {
        Real { mant: div_round(&(q.numer() * ten_pow(digits)), q.denom()), digits }
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    fn check(&self, o: &Real) {
        assert_eq!(self.digits, o.digits, "mixed precisions");
    }

    pub fn add(&self, o: &Real) -> Real {
        self.check(o);
        Real { mant: &self.mant + &o.mant, digits: self.digits }
    }

    pub fn sub(&self, o: &Real) -> Real {
        self.check(o);
        Real { mant: &self.mant - &o.mant, digits: self.digits }
    }

    pub fn neg(&self) -> Real {
        Real { mant: -&self.mant, digits: self.digits }
    }

    pub fn mul(&self, o: &Real) -> Real {
        self.check(o);
        Real { mant: div_round(&(&self.mant * &o.mant), &ten_pow(self.digits)), digits: self.digits }
    }

    pub fn mul_rational(&self, q: &Rational) -> Real {
        Real { mant: div_round(&(&self.mant * q.numer()), q.denom()), digits: self.digits }
    }

    pub fn add_rational(&self, q: &Rational) -> Real {
        self.add(&Real::from_rational(q, self.digits))
    }

    /// Panics on division by zero.
    pub fn div(&self, o: &Real) -> Real {
        self.check(o);
        assert!(!o.mant.is_zero(), "division by zero");
        let num = &self.mant * ten_pow(self.digits);
        let q = if o.mant.is_negative() { div_round(&-num, &-&o.mant) } else { div_round(&num, &o.mant) };
        Real { mant: q, digits: self.digits }
    }

    /// Square root, truncated. Panics on negative input.
    pub fn sqrt(&self) -> Real {
        assert!(!self.mant.is_negative(), "square root of a negative number");
        Real { mant: (&self.mant * ten_pow(self.digits)).sqrt(), digits: self.digits }
    }

    /// Real cube root, truncated toward zero.
    pub fn cbrt(&self) -> Real {
        let scaled = self.mant.abs() * ten_pow(2 * self.digits);
        let r = scaled.cbrt();
        Real { mant: if self.mant.is_negative() { -r } else { r }, digits: self.digits }
    }

    pub fn powi(&self, n: u32) -> Real {
        (0..n).fold(Real::from_int(1, self.digits), |acc, _| acc.mul(self))
    }

    pub fn recip(&self) -> Real {
        Real::from_int(1, self.digits).div(self)
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Real {
        Real { mant: self.mant.abs(), digits: self.digits }
    }

    /// Smallest integer not below the value.
    pub fn ceil(&self) -> BigInt {
        let (q, r) = self.mant.div_mod_floor(&ten_pow(self.digits));
        if r.is_zero() {
            q
        } else {
            q + BigInt::one()
        }
    }

    /// Same value carried at a different precision.
    pub fn with_digits(&self, digits: u32) -> Real {
        let mant = match digits.cmp(&self.digits) {
            Ordering::Equal => self.mant.clone(),
            Ordering::Greater => &self.mant * ten_pow(digits - self.digits),
            Ordering::Less => div_round(&self.mant, &ten_pow(self.digits - digits)),
        };
        Real { mant, digits }
    }

    /// Exact rational value of the stored approximation.
    pub fn to_rational(&self) -> Rational {
        Rational::new(self.mant.clone(), ten_pow(self.digits))
    }

    pub fn to_f64(&self) -> f64 {
        let s = self.to_decimal(self.digits.min(17));
        s.parse().unwrap_or(f64::NAN)
    }

    /// Decimal expansion rounded to `places` digits after the point.
    pub fn to_decimal(&self, places: u32) -> String {
        let r = self.with_digits(places.min(self.digits));
        let p = r.digits as usize;
        let neg = r.mant.is_negative();
        let mut s = r.mant.abs().to_string();
        if s.len() <= p {
            s = "0".repeat(p + 1 - s.len()) + &s;
        }
        let (int, frac) = s.split_at(s.len() - p);
        let body = if p == 0 { int.to_string() } else { format!("{int}.{frac}") };
        if neg {
            format!("-{body}")
        } else {
            body
        }
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Real {
    fn cmp(&self, o: &Self) -> Ordering {
        self.check(o);
        self.mant.cmp(&o.mant)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(self.digits))
    }
}
