//! Exact arithmetic: rationals, sparse polynomials, forms on P^1 x P^1,
//! linear algebra and univariate resultants.

mod biform;
mod grammar;
mod linalg;
pub mod modp;
mod monomial;
mod multipoly;
mod poly;
mod rational;
mod univariate;

pub use biform::{BiForm, BiFormPowers};
pub use linalg::{ExactMatrix, RowSpace};
pub use monomial::{monomials_of_degree, Monomial};
pub use multipoly::MultiPoly;
pub use poly::Poly;
pub use rational::{int, is_zero, parse_rational, rat, Rational};
pub use univariate::{resultant, UniPoly};
