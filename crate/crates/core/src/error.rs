use thiserror::Error;

/// Errors produced by the toolkit.
///
/// Variants documented as *bug signals* indicate that a computed object
/// contradicts a theorem the code relies on; they should never surface on
/// valid input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("size cap exceeded: {requested} elements requested, cap is {cap}")]
    SizeCapExceeded { requested: u128, cap: usize },

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("no bounded lattice reduct found: {0}")]
    NoLatticeReduct(String),

    #[error("operation is not residuated: {0}")]
    NotResiduated(String),

    #[error("not an FL_ew-algebra: {0}")]
    NotFLew(String),

    #[error("bounds are not contained in every subuniverse, the T-route does not apply")]
    BoundsNotInSubuniverses,

    #[error("semi-primality routes disagree (bug signal): {0}")]
    RouteDisagreement(String),

    #[error("base algebra is not semi-primal: {0}")]
    NotSemiPrimal(String),

    #[error("algebra is not in the variety generated by the base: {0}")]
    NotInVariety(String),

    #[error("evaluation image is a proper subset of the product of factors (bug signal): {0}")]
    NotSurjective(String),

    #[error("bijection check failed (bug signal): {0}")]
    BijectionFailure(String),

    #[error("duality round trip failed (bug signal): {0}")]
    RoundTripFailure(String),

    #[error("table completion is not unique: {count} candidates")]
    ConstructionAmbiguous { count: usize, candidates: Vec<Vec<usize>> },

    #[error("table completion has no solution: {0}")]
    ConstructionInfeasible(String),

    #[error("unknown catalog entry: {0}")]
    UnknownCatalogKey(String),

    #[error("empty sample")]
    EmptySample,

    #[error("wall-clock budget exhausted after {completed} samples")]
    BudgetExhausted { completed: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
