use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// Witness-carrying variants hold the offending point rendered in the
/// textual scalar encoding so they can be embedded in reports verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("scalar domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("series precision underflow: {0}")]
    PrecisionUnderflow(String),
    #[error("series valuation {valuation} is below the floor -{floor}")]
    BelowValuationFloor { valuation: i64, floor: i64 },
    #[error("invalid scalar: {0}")]
    InvalidScalar(String),
    #[error("parse error: {0}")]
    Parse(String),

    #[error("group model mismatch: {0}")]
    ModelMismatch(String),
    #[error("invalid group point: {0}")]
    InvalidPoint(String),
    #[error("quadrature: {0}")]
    Quadrature(String),

    #[error("set is not symmetric: inverse of {0} is missing")]
    NotSymmetric(String),
    #[error("set does not contain the identity")]
    MissingIdentity,
    #[error("no cover found: {0} is not covered by the candidate pool")]
    CoverNotFound(String),
    #[error("cover size did not stabilise: {small} at base scale, {large} at enlarged scale")]
    CoverUnstable { small: usize, large: usize },
    #[error("window arithmetic cross-check failed at {0}")]
    CrossCheckFailed(String),
    #[error("lattice mismatch: {0}")]
    LatticeMismatch(String),
    #[error("empty point set")]
    EmptySet,
    #[error("points not covered by the coset representatives: {0:?}")]
    UncoveredPoints(Vec<String>),
    #[error("degenerate subgroup specification: {0}")]
    DegenerateSubgroup(String),
    #[error("union is not relatively dense at this scale (witness probe {0})")]
    UnionNotDense(String),
    #[error("scale insufficient: no difference set is relatively dense at this scale")]
    ScaleInsufficient,

    #[error("probe grid too large: {0} probes")]
    TooManyProbes(usize),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("patch is not complete on the requested window")]
    IncompletePatch,
    #[error("window must be bounded: {0}")]
    UnboundedWindow(String),
    #[error("base inclusion fails at {0}")]
    BaseInclusionFails(String),

    #[error("duplicate point {0}")]
    DuplicatePoint(String),
    #[error("points lie in different coordinate fields")]
    MixedFields,
    #[error("closure is not affine-flat at degree {0}; outside the linear verifier's scope")]
    NonlinearClosure(usize),

    #[error("{0} is not prime")]
    NotPrime(u32),

    #[error("group is unimodular; no density with the required properties exists")]
    Unimodular,
    #[error("no admissible parameter: {0}")]
    NoAdmissibleParameter(String),
    #[error("quadrature tolerance not met: {0}")]
    ToleranceNotMet(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
