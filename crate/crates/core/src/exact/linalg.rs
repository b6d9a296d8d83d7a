use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::modp;
use super::rational::Rational;

/// Dense matrix over the rationals. Rank, kernel and determinant go through
/// fraction-free (Bareiss) elimination on integer rows; a modular rank
/// certificate short-circuits the full-column-rank case.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    swaps: usize,
}

const PAR_ROWS: usize = 48;

fn bareiss(mut rows: Vec<Vec<BigInt>>, ncols: usize) -> Echelon {
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut swaps = 0;
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            rows.swap(r, p);
            swaps += 1;
        }
        let (top, bottom) = rows.split_at_mut(r + 1);
        let prow = &top[r];
        let update = |row: &mut Vec<BigInt>| {
            let f = row[c].clone();
            for k in c + 1..ncols {
                let v = &prow[c] * &row[k] - &f * &prow[k];
                row[k] = if prev.is_one() { v } else { v.div_floor(&prev) };
            }
            row[c] = BigInt::zero();
        };
        if bottom.len() >= PAR_ROWS {
            bottom.par_iter_mut().for_each(update);
        } else {
            bottom.iter_mut().for_each(update);
        }
        prev = prow[c].clone();
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    Echelon { rows, pivots, swaps }
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let nr = rows.len();
        let nc = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == nc), "ragged matrix");
        ExactMatrix { rows: nr, cols: nc, data: rows.into_iter().flatten().collect() }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn mul(&self, o: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, o.rows);
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let v = out.get(i, j) + a * o.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Rows scaled to integers, with the product of scale factors.
    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, Rational) {
        let mut scale = Rational::one();
        let rows = (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
                scale *= Rational::from_integer(l.clone());
                row.iter().map(|q| q.numer() * (&l / q.denom())).collect()
            })
            .collect();
        (rows, scale)
    }

    /// Rank modulo 2^61 - 1, or `None` if some denominator vanishes there.
    pub fn rank_mod_p(&self) -> Option<usize> {
        let rows = (0..self.rows)
            .map(|i| self.row(i).iter().map(modp::reduce).collect::<Option<Vec<u64>>>())
            .collect::<Option<Vec<_>>>()?;
        Some(modp::rank(rows, self.cols))
    }

    /// True when the modular certificate proves the kernel is trivial.
    pub fn certified_injective(&self) -> bool {
        self.rank_mod_p() == Some(self.cols)
    }

    pub fn rank(&self) -> usize {
        if let Some(r) = self.rank_mod_p() {
            if r == self.rows.min(self.cols) {
                return r;
            }
        }
        bareiss(self.integer_rows().0, self.cols).pivots.len()
    }

    /// Basis of the right kernel `{x : A x = 0}`, each vector with integer
    /// entries.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        if self.certified_injective() {
            return Vec::new();
        }
        let ech = bareiss(self.integer_rows().0, self.cols);
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut x = vec![Rational::zero(); self.cols];
            x[free] = Rational::one();
            for (i, &p) in ech.pivots.iter().enumerate().rev() {
                let row = &ech.rows[i];
                let mut s = Rational::zero();
                for k in p + 1..self.cols {
                    if !row[k].is_zero() && !x[k].is_zero() {
                        s += Rational::from_integer(row[k].clone()) * &x[k];
                    }
                }
                x[p] = -s / Rational::from_integer(row[p].clone());
            }
            basis.push(clear_denominators(x));
        }
        basis
    }

    /// Panics on a non-square matrix.
    pub fn determinant(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        if self.rows == 0 {
            return Rational::one();
        }
        let (rows, scale) = self.integer_rows();
        let ech = bareiss(rows, self.cols);
        if ech.pivots.len() < self.rows {
            return Rational::zero();
        }
        let last = Rational::from_integer(ech.rows[self.rows - 1][self.cols - 1].clone());
        let signed = if ech.swaps % 2 == 1 { -last } else { last };
        signed / scale
    }

    /// Inverse by Gauss-Jordan elimination, `None` when singular.
    pub fn inverse(&self) -> Option<ExactMatrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut a: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                r
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r][c].is_zero())?;
            a.swap(c, p);
            let inv = a[c][c].recip();
            for x in a[c].iter_mut() {
                *x *= &inv;
            }
            let pivot = a[c].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r != c && !row[c].is_zero() {
                    let f = row[c].clone();
                    for (x, y) in row.iter_mut().zip(&pivot) {
                        *x -= &f * y;
                    }
                }
            }
        }
        Some(ExactMatrix::from_rows(a.into_iter().map(|r| r[n..].to_vec()).collect()))
    }
}

/// Scales a vector to coprime integer entries with a positive first nonzero entry.
pub fn clear_denominators(v: Vec<Rational>) -> Vec<Rational> {
    let l = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| q.numer() * (&l / q.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v;
    }
    let sign = ints.iter().find(|x| !x.is_zero()).map_or(1, |x| if x.is_negative() { -1 } else { 1 });
    let g = g * BigInt::from(sign);
    ints.into_iter().map(|x| Rational::from_integer(x / &g)).collect()
}

/// Incrementally built row space kept in reduced echelon form.
#[derive(Clone, Debug)]
pub struct RowSpace {
    ncols: usize,
    rows: Vec<(usize, Vec<Rational>)>,
}

impl RowSpace {
    pub fn new(ncols: usize) -> Self {
        RowSpace { ncols, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut [Rational]) {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &f * r;
                }
            }
        }
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|x| x.is_zero())
    }

    /// Adds `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.ncols);
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].recip();
        for x in w.iter_mut() {
            *x *= &inv;
        }
        for (_, row) in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, r) in row.iter_mut().zip(&w) {
                if !r.is_zero() {
                    *x -= &f * r;
                }
            }
        }
        self.rows.push((p, w));
        true
    }
}
