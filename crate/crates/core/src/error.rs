use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: edge weight must be positive, got {weight}")]
    InvalidWeight { line: usize, weight: f64 },

    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("vertex {vertex} out of range for graph with {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },

    /// The graph has no edge weight, so modularity divides by zero.
    #[error("modularity is undefined for a graph with zero total edge weight")]
    UndefinedModularity,

    #[error("dendrogram has no levels")]
    EmptyDendrogram,

    #[error("assignment covers {actual} vertices, graph has {expected}")]
    AssignmentLength { expected: usize, actual: usize },

    #[error("failed to start worker pool: {0}")]
    WorkerPool(String),
}

pub type Result<T> = std::result::Result<T, Error>;
