use std::fmt;
use std::path::PathBuf;

/// Location inside a parsed source file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceSpan {
    pub file: Option<PathBuf>,
    pub line: usize,
    pub column: usize,
}

impl SourceSpan {
    pub fn new(line: usize, column: usize) -> Self {
        SourceSpan {
            file: None,
            line,
            column,
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.file {
            Some(path) => write!(f, "{}:{}:{}", path.display(), self.line, self.column),
            None => write!(f, "{}:{}", self.line, self.column),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("UnassignedVariable: {0} has no value in the state")]
    UnassignedVariable(String),
    #[error("DivisionByZero: expression divides by zero")]
    DivisionByZero,

    #[error("SyntaxError at {span}: {message}")]
    Syntax { span: SourceSpan, message: String },
    #[error("DuplicateSymbol: {0}")]
    DuplicateSymbol(String),
    #[error("UnsupportedRequirement: {0}")]
    UnsupportedRequirement(String),
    #[error("UnknownSymbol: {0}")]
    UnknownSymbol(String),
    #[error("ArityMismatch: {symbol} expects {expected} arguments, got {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("UnassignedGoalFluent: goal mentions {0} but it is not assigned")]
    UnassignedGoalFluent(String),
    #[error("DuplicateAssignment: {0} is assigned more than once")]
    DuplicateAssignment(String),
    #[error("SchemaError: {0}")]
    Schema(String),

    #[error("NodeOutOfRange: node {node} but graph has {count} nodes")]
    NodeOutOfRange { node: usize, count: usize },
    #[error("InvalidGraph: {0}")]
    InvalidGraph(String),

    #[error("DomainMismatch: expected domain `{expected}`, found `{found}`")]
    DomainMismatch { expected: String, found: String },
    #[error("ProblemNotSet: set_problem must be called before to_graph")]
    ProblemNotSet,
    #[error("NodeBudgetExceeded: {needed} exceeds the budget of {budget}")]
    NodeBudgetExceeded { needed: usize, budget: usize },

    #[error("ModelNotCollected: collect must run before embedding")]
    ModelNotCollected,
    #[error("NoWeights: model has no weights")]
    NoWeights,
    #[error("DimensionMismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("MissingLabels: dataset entry {0} has no labels")]
    MissingLabels(usize),
    #[error("SchemaVersionMismatch: {0}")]
    SchemaVersionMismatch(String),
    #[error("CorruptRegistry: {0}")]
    CorruptRegistry(String),

    #[error("IoError: {0}")]
    Io(#[from] std::io::Error),
    #[error("JsonError: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
