//! Exact computations with monoid hypersurfaces, the Cremona transformations
//! of P^3 they induce, and a rectification procedure that lowers the ruling
//! degree of rational ruled surfaces.

pub mod cremona;
pub mod descriptor;
pub mod error;
pub mod exact;
pub mod lemmas;
pub mod monoid;
pub mod orbit;
pub mod random;
pub mod rectify;
pub mod surfaces;

pub use error::{Error, Result};
pub use exact::{BiForm, ExactMatrix, Monomial, MultiPoly, Poly, Rational, UniPoly};
