use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: self-loop on vertex `{vertex}`")]
    SelfLoop { line: usize, vertex: String },

    #[error("self-loop on vertex {0}")]
    SelfLoopEdge(usize),

    #[error("duplicate vertex name `{0}`")]
    DuplicateVertex(String),

    #[error("vertex index {index} out of range for a digraph with {count} vertices")]
    VertexOutOfRange { index: usize, count: usize },

    #[error("invalid digraph map: {0}")]
    InvalidMap(String),

    #[error("not a digraph map: edge ({from}, {to}) is sent to ({image_from}, {image_to}), which is neither an edge nor a single vertex")]
    NotADigraphMap {
        from: usize,
        to: usize,
        image_from: usize,
        image_to: usize,
    },

    #[error("maps do not share source and target digraphs")]
    MismatchedMaps,

    #[error("a homotopy chain needs at least one map")]
    EmptyChain,

    #[error("unbounded filtration: no directed path from `{from}` to `{to}`")]
    UnboundedFiltration { from: String, to: String },

    #[error("level cap {cap} is below the {required} needed to exhaust degree {degree}")]
    LevelCapTooSmall { cap: i64, required: i64, degree: i64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("boundary generator {column} does not lie in the kernel lattice")]
    InvalidSubquotient { column: usize },

    #[error("vector does not lie in the kernel lattice")]
    NotInKernel,

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
