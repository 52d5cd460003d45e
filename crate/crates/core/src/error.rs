use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate partition: {0}")]
    DegeneratePartition(&'static str),
    #[error("invalid separator: edge ({0}, {1}) joins A and B")]
    InvalidSeparator(usize, usize),
    #[error("node {0} is essential to the separator")]
    EssentialNode(usize),
    #[error("graph is disconnected ({0} components)")]
    Disconnected(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("every action is masked")]
    AllMasked,
    #[error("checkpoint version mismatch: {0}")]
    VersionMismatch(String),
    #[error("corrupt checkpoint: {0}")]
    CorruptFile(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
