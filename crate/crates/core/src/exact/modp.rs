//! Arithmetic modulo the Mersenne prime 2^61 - 1. Rank modulo a prime never
//! exceeds the rank over the rationals, so full column rank modulo the prime
//! certifies a trivial kernel.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::rational::Rational;

pub const PRIME: u64 = (1 << 61) - 1;

#[inline]
pub fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= PRIME {
        s - PRIME
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + PRIME - b
    }
}

#[inline]
pub fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

pub fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    acc
}

pub fn inv(a: u64) -> u64 {
    assert!(a != 0, "inverse of zero mod p");
    pow(a, PRIME - 2)
}

pub fn reduce_int(x: &BigInt) -> u64 {
    let p = BigInt::from(PRIME);
    x.mod_floor(&p).to_u64().unwrap()
}

/// `None` when the denominator vanishes modulo the prime.
pub fn reduce(q: &Rational) -> Option<u64> {
    let d = reduce_int(q.denom());
    if d == 0 {
        return None;
    }
    Some(mul(reduce_int(q.numer()), inv(d)))
}

/// Drops trailing zero coefficients (coefficients are low degree first).
pub fn poly_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn poly_mul(a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            c[i + j] = add(c[i + j], mul(x, y));
        }
    }
    c
}

fn poly_rem(mut a: Vec<u64>, b: &[u64]) -> Vec<u64> {
    let lb = inv(*b.last().expect("nonzero divisor"));
    while a.len() >= b.len() {
        let f = mul(*a.last().unwrap(), lb);
        let shift = a.len() - b.len();
        for (k, &y) in b.iter().enumerate() {
            a[shift + k] = sub(a[shift + k], mul(f, y));
        }
        a = poly_trim(a);
    }
    a
}

/// Quotient and remainder.
pub fn poly_div_rem(a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let mut r = poly_trim(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lb = inv(*b.last().expect("nonzero divisor"));
    let mut q = vec![0; r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let f = mul(*r.last().unwrap(), lb);
        let shift = r.len() - b.len();
        q[shift] = f;
        for (k, &y) in b.iter().enumerate() {
            r[shift + k] = sub(r[shift + k], mul(f, y));
        }
        r = poly_trim(r);
    }
    (q, r)
}

pub fn poly_eval(a: &[u64], x: u64) -> u64 {
    a.iter().rev().fold(0, |acc, &c| add(mul(acc, x), c))
}

pub fn poly_derivative(a: &[u64]) -> Vec<u64> {
    poly_trim(a.iter().enumerate().skip(1).map(|(i, &c)| mul(c, i as u64 % PRIME)).collect())
}

/// Degree, `None` for zero.
pub fn poly_degree(a: &[u64]) -> Option<usize> {
    let n = poly_trim(a.to_vec()).len();
    n.checked_sub(1)
}

/// Product of the distinct irreducible factors.
pub fn poly_squarefree_part(a: &[u64]) -> Vec<u64> {
    let a = poly_trim(a.to_vec());
    if a.len() <= 1 {
        return a;
    }
    let g = poly_gcd(a.clone(), poly_derivative(&a));
    poly_div_rem(&a, &g).0
}

/// Divides out every root shared with `support`, with multiplicity.
pub fn poly_strip_roots(a: &[u64], support: &[u64]) -> Vec<u64> {
    let mut r = poly_trim(a.to_vec());
    if r.is_empty() {
        return r;
    }
    loop {
        let g = poly_gcd(r.clone(), support.to_vec());
        if g.len() <= 1 {
            return r;
        }
        r = poly_div_rem(&r, &g).0;
    }
}

/// Resultant of two univariate polynomials of the given formal degrees.
/// Zero when both leading coefficients vanish.
pub fn poly_resultant(f: &[u64], g: &[u64]) -> u64 {
    let (mut f, mut g) = (poly_trim(f.to_vec()), poly_trim(g.to_vec()));
    if f.is_empty() || g.is_empty() {
        return 0;
    }
    let mut acc = 1;
    loop {
        let (df, dg) = (f.len() - 1, g.len() - 1);
        if dg == 0 {
            return mul(acc, pow(g[0], df as u64));
        }
        if df == 0 {
            return mul(acc, pow(f[0], dg as u64));
        }
        let r = poly_div_rem(&f, &g).1;
        if r.is_empty() {
            return 0;
        }
        // res(f, g) = (-1)^(df dg) lc(g)^(df - dr) res(g, r)
        let dr = r.len() - 1;
        if df * dg % 2 == 1 {
            acc = sub(0, acc);
        }
        acc = mul(acc, pow(*g.last().unwrap(), (df - dr) as u64));
        f = g;
        g = r;
    }
}

/// Newton interpolation through distinct nodes.
pub fn poly_interpolate(xs: &[u64], ys: &[u64]) -> Vec<u64> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for k in 1..n {
        for i in (k..n).rev() {
            dd[i] = mul(sub(dd[i], dd[i - 1]), inv(sub(xs[i], xs[i - k])));
        }
    }
    let mut acc: Vec<u64> = Vec::new();
    for i in (0..n).rev() {
        // acc = acc * (x - xs[i]) + dd[i]
        let mut next = poly_mul(&acc, &[sub(0, xs[i]), 1]);
        if next.is_empty() {
            next.push(0);
        }
        next[0] = add(next[0], dd[i]);
        acc = next;
    }
    poly_trim(acc)
}

/// Greatest common divisor of univariate polynomials; empty for zero.
pub fn poly_gcd(a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    let (mut a, mut b) = (poly_trim(a), poly_trim(b));
    while !b.is_empty() {
        let r = poly_rem(a, &b);
        a = b;
        b = r;
    }
    a
}

/// True when binary forms, given dehomogenized with their full degrees,
/// share no factor of positive degree: the gcd is constant and some form
/// keeps its full degree (no common root at infinity). Zero input is never
/// certified.
pub fn binary_forms_coprime(polys: &[(Vec<u64>, usize)]) -> bool {
    if polys.iter().any(|(p, _)| p.iter().all(|&c| c == 0)) {
        return false;
    }
    if !polys.iter().any(|(p, deg)| poly_trim(p.clone()).len() == deg + 1) {
        return false;
    }
    let g = polys.iter().fold(Vec::new(), |g, (p, _)| poly_gcd(g, p.clone()));
    g.len() == 1
}

/// Rank of a matrix given by rows of residues. Consumes the rows.
pub fn rank(rows: Vec<Vec<u64>>, ncols: usize) -> usize {
    pivot_columns(rows, ncols).len()
}

/// Pivot columns of the row echelon form; their count is the rank.
pub fn pivot_columns(mut rows: Vec<Vec<u64>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let pinv = inv(rows[r][c]);
        let (top, bottom) = rows.split_at_mut(r + 1);
        let prow = &top[r];
        for row in bottom.iter_mut() {
            if row[c] == 0 {
                continue;
            }
            let f = mul(row[c], pinv);
            for k in c..ncols {
                if prow[k] != 0 {
                    row[k] = sub(row[k], mul(f, prow[k]));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}
