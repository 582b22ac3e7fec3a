use thiserror::Error;

/// Errors raised while reading graph descriptions or element literals.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message} (at `{token}`)")]
    Syntax {
        line: usize,
        token: String,
        message: String,
    },
    #[error("line {line}: unknown vertex {name}")]
    UnknownVertex { line: usize, name: String },
    #[error("line {line}: duplicate vertex {name}")]
    DuplicateVertex { line: usize, name: String },
    #[error("line {line}: duplicate edge {name}")]
    DuplicateEdge { line: usize, name: String },
    #[error("line {line}: second omega edge from {source_vertex} to {range}")]
    DuplicateOmega {
        line: usize,
        source_vertex: String,
        range: String,
    },
    #[error("unknown symbol {0}")]
    UnknownSymbol(String),
    #[error("edge {edge} has multiplicity {multiplicity}, copy index {index} is out of range")]
    CopyOutOfRange {
        edge: String,
        multiplicity: u32,
        index: u32,
    },
    #[error("invalid coefficient `{0}`")]
    Coefficient(String),
}

/// Errors from the algebra and the analyzers built on top of it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpaError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("elements belong to different graphs")]
    GraphMismatch,
    #[error("vertex set is not hereditary and saturated: {0}")]
    NotHereditarySaturated(String),
    #[error("invalid admissible pair: {0}")]
    InvalidPair(String),
    /// A hypothesis or shape precondition does not hold.
    #[error("{0}")]
    Precondition(String),
    #[error("unsupported hypothesis: {0}")]
    Unsupported(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error("monomial {0} is not expressible in the realization")]
    NotExpressible(String),
    #[error("invalid field: {0}")]
    Field(String),
}

impl LpaError {
    /// True for refusals caused by a graph not meeting a precondition.
    pub fn is_refusal(&self) -> bool {
        matches!(self, LpaError::Precondition(_) | LpaError::Unsupported(_))
    }
}

pub type Result<T, E = LpaError> = std::result::Result<T, E>;
