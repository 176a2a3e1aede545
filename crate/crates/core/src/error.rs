//! Error type shared by every module in the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    // ---- graph construction ----
    #[error("duplicate vertex name `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("graph is not connected: vertex `{0}` is unreachable from the base")]
    Disconnected(String),

    // ---- words ----
    #[error("malformed step literal `{0}`")]
    InvalidStep(String),
    #[error("step {position} does not start where the previous step ended")]
    EndpointMismatch { position: usize },
    #[error("a based loop must start and end at the base vertex")]
    NotBasedLoop,
    #[error("operation requires a loop, got an open path")]
    NotALoop,
    #[error("a path word needs at least one step; use an identity path instead")]
    EmptyPath,
    #[error("cannot compose: left factor ends at `{left_end}`, right factor starts at `{right_start}`")]
    Composition { left_end: String, right_start: String },
    #[error("word references edge index {index}, but only {available} edges are available")]
    EdgeIndexOutOfRange { index: usize, available: usize },

    // ---- structure groups / connections ----
    #[error("expected a {expected} element, got {found}")]
    GroupMismatch {
        expected: &'static str,
        found: &'static str,
    },
    #[error("matrix is not special unitary: {0}")]
    NotSpecialUnitary(String),
    #[error("cannot project a (nearly) singular matrix onto the group")]
    SingularProjection,
    #[error("connection must assign an element to every edge: expected {expected}, got {found}")]
    AssignmentSize { expected: usize, found: usize },

    // ---- harmonics ----
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("sampling grid must have odd size along axis {axis}, got {size}")]
    GridEven { axis: usize, size: usize },
    #[error("grid too small along axis {axis}: {size} points cannot resolve frequency {needed}")]
    GridTooSmall {
        axis: usize,
        size: usize,
        needed: i64,
    },

    // ---- integer lattices ----
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("integer overflow: result does not fit in 64 bits")]
    IntegerOverflow,
    #[error("the function's level is not contained in the requested finer level")]
    NotASublevel,

    // ---- positivity ----
    #[error("density violates the Hermitian symmetry at frequency {0:?}")]
    NotHermitian(Vec<i64>),
    #[error("density is not nonnegative: sampled minimum {0:.3e}")]
    SignedDensity(f64),

    // ---- serialization ----
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Schema(String),
}
