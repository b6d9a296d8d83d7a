use thiserror::Error;

use crate::rectify::SearchReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("variable count mismatch: {0} vs {1}")]
    VarCountMismatch(usize, usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(u32, u32),
    #[error("bidegree mismatch: ({0},{1}) vs ({2},{3})")]
    BidegreeMismatch(u32, u32, u32, u32),
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("degenerate surface: {0}")]
    DegenerateSurface(String),
    #[error("parametrization is not generically finite")]
    NotGenericallyFinite,
    #[error("projection collapses the surface")]
    ProjectionCollapses,
    #[error("random retries exhausted: {0}")]
    RetriesExhausted(String),
    #[error("linear system is empty: {0}")]
    EmptySystem(String),
    #[error("not a monoid: {0}")]
    NotAMonoid(String),
    #[error("map collapses: {0}")]
    MapCollapses(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("search exhausted: {}", .0.summary())]
    SearchExhausted(Box<SearchReport>),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
