use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate map: the resultant of the defining forms vanishes")]
    DegenerateMap,

    #[error("polynomial has repeated roots; deflate it by gcd(P, P') (squarefree part: {squarefree_part})")]
    RepeatedRoot { squarefree_part: String },

    #[error("resource limit exceeded: {what} (bound {bound})")]
    ResourceLimit { what: String, bound: String },

    #[error("point {0} is indeterminate for the morphism: every form vanishes there")]
    Indeterminate(String),

    #[error("unsupported scope: {0}")]
    UnsupportedScope(String),

    #[error("root finder could not certify radii below {tol:e} (best {achieved:e})")]
    NotCertified { tol: f64, achieved: f64 },
}
