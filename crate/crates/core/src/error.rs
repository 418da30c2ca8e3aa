use num_bigint::BigUint;
use thiserror::Error;

/// Errors raised by the library. Variants carry enough context to name the
/// offending point, label, or resource limit.
#[derive(Error, Debug)]
pub enum Error {
    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("point {0} lies outside [0,1]")]
    OutOfDomain(f64),

    #[error("metric spaces do not match: {0}")]
    SpaceMismatch(String),

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("image of `{0}` is empty")]
    EmptyImage(String),

    #[error("function is not surjective: `{0}` has no preimage")]
    NotSurjective(String),

    #[error("vertical slices are empty over [{lo}, {hi}]")]
    SliceGap { lo: String, hi: String },

    #[error("orbit lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("truncation depths differ: {0} vs {1}")]
    DepthMismatch(usize, usize),

    #[error("projection index set is empty")]
    EmptyIndexSet,

    #[error("projection index {0} out of range for n = {1}")]
    IndexOutOfRange(usize, usize),

    #[error("empty point set")]
    EmptySet,

    #[error("enumeration cap {cap} exceeded: instance has {count} orbits")]
    CapExceeded { cap: u64, count: BigUint },

    #[error("exact mode refused: {size} points exceed the vertex cap {cap}")]
    VertexCapExceeded { size: usize, cap: usize },

    #[error("exact computation infeasible ({reason}); certified bound {bound}")]
    ExactInfeasible { reason: String, bound: BigUint },

    #[error("epsilon schedule must be strictly decreasing and positive")]
    ScheduleNotDecreasing,

    #[error("grid size {0} is too small (need at least {1})")]
    GridTooSmall(usize, usize),

    #[error("homeomorphism spec is not bijective/monotone: {0}")]
    BadHomeomorphism(String),

    #[error(
        "composition graph contains the rectangle [{x_lo},{x_hi}]x[{z_lo},{z_hi}] \
         (horizontal piece at height {y} feeding a vertical piece); \
         not representable as segments and points"
    )]
    NotRepresentable {
        x_lo: String,
        x_hi: String,
        y: String,
        z_lo: String,
        z_hi: String,
    },

    #[error("malformed system spec: {0}")]
    BadSpec(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
