//! Fixtures shared by the benchmarks.

use cremona_core::exact::{rat, ExactMatrix, MultiPoly};
use cremona_core::surfaces::ParamSurface;

/// The bidegree (2,1) quartic ruled by conics.
pub fn quartic() -> ParamSurface {
    ParamSurface::parse(&["s^2*u", "s^2*v", "s*t*u + t^2*v", "t^2*u"]).expect("fixture parses")
}

/// Dense form of degree `d` in `n` variables with small varied coefficients.
pub fn dense_form(n: usize, d: u32) -> MultiPoly {
    let monos = cremona_core::exact::monomials_of_degree(n, d);
    let terms = monos.into_iter().enumerate().map(|(i, m)| (m, rat((i as i64 * 7) % 11 - 5, 1 + (i as i64 % 3))));
    MultiPoly::from_poly_with_degree(cremona_core::exact::Poly::from_terms(n, terms), d).expect("homogeneous")
}

/// An `n x (n + k)` integer matrix of rank `n - 1`.
pub fn deficient_matrix(n: usize, k: usize) -> ExactMatrix {
    let mut rows: Vec<Vec<_>> = (0..n - 1)
        .map(|i| (0..n + k).map(|j| rat(((i * 31 + j * 17) % 13) as i64 - 6, 1)).collect())
        .collect();
    let last = rows[0].iter().zip(&rows[1]).map(|(a, b)| a + b).collect();
    rows.push(last);
    ExactMatrix::from_rows(rows)
}
