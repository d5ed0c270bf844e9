use thiserror::Error;

/// Parse diagnostics; `Display` renders as `line:col: message`.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DslError {
    #[error("{line}:{col}: lexical error: {msg}")]
    Lexical { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unknown identifier '{name}'")]
    UnknownIdentifier { line: usize, col: usize, name: String },
    #[error("{line}:{col}: component index {index} outside 0..3")]
    IndexOutOfRange { line: usize, col: usize, index: u64 },
    #[error("{line}:{col}: duplicate component g[{mu},{nu}]")]
    DuplicateComponent { line: usize, col: usize, mu: usize, nu: usize },
    #[error("{line}:{col}: '{name}' is already defined")]
    DuplicateName { line: usize, col: usize, name: String },
}

impl DslError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            DslError::Lexical { line, col, .. }
            | DslError::Syntax { line, col, .. }
            | DslError::UnknownIdentifier { line, col, .. }
            | DslError::IndexOutOfRange { line, col, .. }
            | DslError::DuplicateComponent { line, col, .. }
            | DslError::DuplicateName { line, col, .. } => (*line, *col),
        }
    }
}

/// Failure while evaluating a metric at a point.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("domain error at ({}, {}, {}, {}): {msg}", point[0], point[1], point[2], point[3])]
pub struct EvalError {
    pub point: [f64; 4],
    pub msg: String,
}
