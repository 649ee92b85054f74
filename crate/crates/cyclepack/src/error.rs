use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {0} out of range (n = {1})")]
    VertexOutOfRange(usize, usize),
    #[error("self-loop ({0}, {0}) rejected")]
    SelfLoop(usize),
    #[error("duplicate arc ({0}, {1})")]
    DuplicateArc(usize, usize),
    #[error("invalid walk: ({0}, {1}) is not an arc")]
    InvalidWalk(usize, usize),
    #[error("empty walk")]
    EmptyWalk,
    #[error("path revisits vertex {0}")]
    NotAPath(usize),
    #[error("walk has all-distinct vertices, no cycle to extract")]
    NoCycle,
    #[error("paths are not pairwise vertex-disjoint (vertex {0})")]
    NotDisjoint(usize),
    #[error("measured congestion {measured} exceeds declared bound {declared}")]
    CongestionExceeded { measured: usize, declared: usize },
    #[error("no dual linkage: only {found} of {wanted} return paths exist")]
    NoDual { found: usize, wanted: usize },
    #[error("linkages are not dual: {0}")]
    NotDual(String),
    #[error("not a path of the auxiliary graph: {0}")]
    NotAnAuxPath(String),
    #[error("index range crosses a cycle boundary of the auxiliary graph")]
    CrossesCycleBoundary,
    #[error("{what} of size {size} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
    #[error("no independent transversal found")]
    TransversalNotFound,
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("bound not met: minimum degree {lhs} < required {rhs}")]
    BoundNotMet { lhs: f64, rhs: f64 },
    #[error("pipeline stage {stage} failed: {reason}")]
    PipelineStage { stage: &'static str, reason: String },
    #[error("intersection restriction {0} has average degree below 2 (forest)")]
    IsForest(usize),
    #[error("no full linkage: {0}")]
    NoLinkage(String),
    #[error("bad instance spec: {0}")]
    BadSpec(String),
    #[error("unknown certificate kind: {0}")]
    UnknownKind(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
