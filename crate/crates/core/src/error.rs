use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which sequence a back-and-forth run got stuck on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    P,
    Q,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::P => write!(f, "P"),
            Side::Q => write!(f, "Q"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("carrier is empty")]
    EmptyCarrier,
    #[error("point {point} has length {found}, expected {expected}")]
    DimensionMismatch {
        point: String,
        expected: usize,
        found: usize,
    },
    #[error("point {0} occurs more than once")]
    DuplicatePoint(String),
    #[error("not median-closed: majority of ({}, {}, {}) is {majority}, which is not a member", .triple[0], .triple[1], .triple[2])]
    NotMedianClosed {
        triple: [String; 3],
        majority: String,
    },
    #[error("point {0} is not in the carrier")]
    PointNotInCarrier(String),
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("set is not convex: {0}")]
    NotConvex(String),
    #[error("sets are not disjoint")]
    NotDisjoint,
    #[error("sets do not cover the carrier")]
    NotCovering,
    #[error("empty side: {0}")]
    EmptySide(String),
    #[error("not a halfspace: {0}")]
    NotAHalfspace(String),
    #[error("family is not linked: members {first} and {second} are disjoint")]
    NotLinked { first: usize, second: usize },
    #[error("ground size {n} outside 1..={bound}")]
    GroundSizeTooLarge { n: usize, bound: usize },
    #[error("median axiom '{axiom}' fails at ({}, {}, {})", .triple[0], .triple[1], .triple[2])]
    AxiomViolation {
        axiom: &'static str,
        triple: [usize; 3],
    },
    #[error("table is not a median algebra: {0}")]
    EmbeddingNotFaithful(String),
    #[error("map is not surjective: target point {missing} has no preimage")]
    NotSurjective { missing: usize },
    #[error("map does not preserve the median of ({}, {}, {})", .triple[0], .triple[1], .triple[2])]
    NotMedianPreserving { triple: [usize; 3] },
    #[error("map has length {found}, source has {expected} points")]
    MapLengthMismatch { expected: usize, found: usize },
    #[error("map sends position {position} to {value}, target has {target_len} points")]
    MapValueOutOfRange {
        position: usize,
        value: usize,
        target_len: usize,
    },
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("{what}: size {size} exceeds bound {bound}")]
    BoundExceeded {
        what: &'static str,
        size: usize,
        bound: usize,
    },
    #[error("resource limit at stage {stage}: {size} points exceeds cap {cap}")]
    ResourceLimit {
        stage: usize,
        size: usize,
        cap: usize,
    },
    #[error("back-and-forth stuck on side {side} after depth {depth} (stage {stage})")]
    Stuck {
        side: Side,
        stage: usize,
        depth: usize,
    },
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported schema version {found} (expected {expected})")]
    SchemaVersion { found: u32, expected: u32 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
