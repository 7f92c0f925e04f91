use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in the library.
///
/// Variants are split into two families: input errors (malformed data,
/// mismatched shapes) and domain errors (well-formed data that fails a
/// mathematical precondition). See [`Error::is_domain`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix must have at least one row")]
    Empty,

    #[error("row {row} has {found} entries, expected {expected}")]
    NotSquare {
        row: usize,
        found: usize,
        expected: usize,
    },

    #[error("dimension mismatch: expected order {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("node index {index} out of range for {node_count} nodes")]
    IndexOutOfRange { index: usize, node_count: usize },

    #[error("unknown node label {0:?}")]
    UnknownLabel(String),

    #[error("duplicate edge {from} -> {to}")]
    DuplicateEdge { from: usize, to: usize },

    #[error("edge {from} -> {to} has non-positive weight {weight}")]
    NonPositiveWeight {
        from: usize,
        to: usize,
        weight: String,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("matrix mixes rational (p/q) and decimal entries")]
    MixedDomain,

    #[error("invalid JSON: {0}")]
    Json(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("matrix is not premagic: node {node} has row sum {row_sum} and column sum {col_sum}")]
    NotPremagic {
        node: usize,
        row_sum: String,
        col_sum: String,
    },

    #[error("negative entry {value} at ({row}, {col})")]
    NegativeEntry {
        row: usize,
        col: usize,
        value: String,
    },

    #[error("node {node} has no outgoing flow")]
    DanglingNode { node: usize },

    #[error("row {row} does not sum to one (sum = {sum})")]
    NotStochastic { row: usize, sum: String },

    #[error("throughputs are not conserved under the transition matrix: worst node {node}, deviation {deviation}")]
    NotConserving { node: usize, deviation: String },

    #[error("network is not strongly connected: {component_count} components {components:?}")]
    Reducible {
        component_count: usize,
        components: Vec<Vec<usize>>,
    },

    #[error("transition matrix support does not match network edges at ({row}, {col})")]
    SupportMismatch { row: usize, col: usize },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("matrix is singular")]
    Singular,

    #[error("no convergence after {iterations} iterations (last residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },
}

impl Error {
    /// True for errors where the input was well-formed but fails a
    /// mathematical property (not premagic, reducible, not conserving, ...).
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::NotPremagic { .. }
                | Error::NegativeEntry { .. }
                | Error::DanglingNode { .. }
                | Error::NotStochastic { .. }
                | Error::NotConserving { .. }
                | Error::Reducible { .. }
                | Error::SupportMismatch { .. }
                | Error::Degenerate(_)
                | Error::Singular
                | Error::Convergence { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
