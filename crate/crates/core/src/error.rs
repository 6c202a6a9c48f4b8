use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero in GF(4)")]
    DivisionByZero,

    #[error("a line needs two distinct points, got {0} twice")]
    SamePoint(usize),

    #[error("frame points {0:?} are projectively dependent")]
    RankDeficient(Vec<usize>),

    #[error("frame {0:?}: the fifth point is not in general position with the first four")]
    NotAFrame([usize; 5]),

    #[error("point index {0} out of range")]
    PointOutOfRange(usize),

    #[error("invalid polarity: {0}")]
    InvalidPolarity(&'static str),

    #[error("line {line} meets the surface in {size} points")]
    InconsistentLine { line: usize, size: u32 },

    #[error("point {0} is not on the Hermitian surface")]
    NotOnSurface(usize),

    #[error("expected {expected} {what}, found {found}")]
    CountMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("structure violation: {0}")]
    Structure(String),

    #[error("no ovoid of subquadrangle {sub} contains points {p} and {q}: they lie on a generator")]
    PairOnGenerator { sub: usize, p: usize, q: usize },

    #[error("point set {0:?} is not one of the enumerated ovoids")]
    UnknownOvoid(Vec<usize>),

    #[error("case violation for vertices {u} and {v}: {detail}")]
    CaseViolation { u: usize, v: usize, detail: String },

    #[error("certification failed at entry ({row}, {col}): {detail}")]
    Certification {
        row: usize,
        col: usize,
        detail: String,
    },

    #[error("spectrum inconsistency: {0}")]
    Spectrum(String),

    #[error("clique check failed: {0}")]
    Clique(String),

    #[error("collineation does not preserve the geometry: {0}")]
    Consistency(String),

    #[error("no unitary matrix found after {0} trials")]
    Timeout(u64),

    #[error("unsupported export format `{0}`")]
    UnsupportedFormat(String),

    #[error("graph6 decode error: {0}")]
    Graph6(String),

    #[error("cache version {found} does not match expected version {expected}")]
    CacheVersion { expected: u64, found: u64 },

    #[error("cache checksum mismatch: stored {stored}, computed {computed}")]
    CacheChecksum { stored: String, computed: String },

    #[error("cache invariant violated: {0}")]
    CacheInvariant(String),

    #[error("malformed cache: {0}")]
    CacheFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
