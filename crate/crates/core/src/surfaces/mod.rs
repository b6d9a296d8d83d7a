//! Rational ruled surfaces given by forms on P^1 x P^1, their numerical
//! invariants, and the auxiliary surfaces used by the rectification loop.

mod chart;
mod lambda;
mod modular;
mod param;

pub use chart::AffineChart;
pub use lambda::{build_lambda_m, build_lambda_m_through, BinaryForm, LambdaRealization};
pub use param::{Fiber, ParamSurface};
