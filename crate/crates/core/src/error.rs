//! Crate-wide error type.
//!
//! Errors fall into two classes that callers (notably the CLI) treat
//! differently: *domain* errors — bad input, violated preconditions,
//! undefined results — and *resource* errors, raised when an operation
//! would exceed a configured enumeration bound. [`Error::is_resource_limit`]
//! distinguishes them.

use std::fmt;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// A parse failure with byte-offset position information.
///
/// `line` is populated by the line-oriented file parsers (theory files,
/// model-set files, recoding definition files); for single-expression input
/// such as a formula string it is `None` and `offset` is relative to the
/// start of the expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based line number within a multi-line input, if applicable.
    pub line: Option<usize>,
    /// 0-based byte offset within the line (or the whole input).
    pub offset: usize,
    /// Human-readable description of what went wrong.
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(offset: usize, message: impl Into<String>) -> Self {
        ParseError { line: None, offset, message: message.into() }
    }

    pub(crate) fn at_line(mut self, line: usize) -> Self {
        self.line = Some(line);
        self
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => {
                write!(f, "line {line}, offset {}: {}", self.offset, self.message)
            }
            None => write!(f, "offset {}: {}", self.offset, self.message),
        }
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    // -- construction of spaces, assignments and model sets ----------------
    #[error("duplicate coordinate name `{0}`")]
    DuplicateCoordinate(String),
    #[error("coordinate `{0}` has an empty domain")]
    EmptyDomain(String),
    #[error("duplicate value symbol `{value}` in the domain of `{coord}`")]
    DuplicateValue { coord: String, value: String },
    #[error("`{0}` is not a valid identifier")]
    InvalidIdentifier(String),
    #[error("`{0}` is not a valid value symbol")]
    InvalidValueSymbol(String),
    #[error("unknown coordinate `{0}`")]
    UnknownCoordinate(String),
    #[error("value `{value}` is not in the domain of coordinate `{coord}`")]
    ValueOutsideDomain { coord: String, value: String },
    #[error("assignment already binds coordinate `{0}`")]
    DuplicateBinding(String),

    // -- operation preconditions -------------------------------------------
    #[error("coordinate `{0}` lies outside the scope of this operation")]
    OutsideScope(String),
    #[error("operands have different scopes")]
    ScopeMismatch,
    #[error("operands belong to different product spaces")]
    SpaceMismatch,
    #[error("scopes overlap on coordinate `{0}`")]
    ScopesOverlap(String),
    #[error("operation requires a nonempty scope")]
    EmptyScope,
    #[error("operation requires a nonempty family")]
    EmptyFamily,

    // -- completion ---------------------------------------------------------
    #[error("no member of the model set completes the given assignment")]
    NoCompletion,
    #[error("the model set is empty")]
    EmptyModelSet,

    // -- partitions ---------------------------------------------------------
    #[error("partition blocks must be nonempty")]
    EmptyBlock,
    #[error("partition blocks overlap on coordinate `{0}`")]
    OverlappingBlocks(String),
    #[error("blocks do not cover coordinate `{0}` of the requested scope")]
    BlocksDoNotCover(String),

    // -- logic ----------------------------------------------------------------
    #[error("formula mentions undeclared variable `{0}`")]
    UndeclaredVariable(String),
    #[error("coordinate `{0}` is not Boolean (domain must be exactly 0/1)")]
    NonBooleanCoordinate(String),

    // -- revision -------------------------------------------------------------
    #[error("revision is undefined: {0}")]
    RevisionUndefined(&'static str),

    // -- recoding ---------------------------------------------------------------
    #[error("recoding must define {expected} coordinates, got {got}")]
    RecodingArity { expected: usize, got: usize },
    #[error("recoding is not injective: `{first}` and `{second}` receive the same code")]
    RecodingCollision { first: String, second: String },
    #[error("recoding is not bijective: code space and product have different sizes")]
    RecodingSizeMismatch,
    #[error("permutation table has the wrong length or repeats an index")]
    InvalidPermutation,

    // -- input text -------------------------------------------------------------
    #[error("parse error at {0}")]
    Parse(ParseError),

    // -- resource bounds -----------------------------------------------------
    #[error("{what} ({requested}) exceeds the configured bound ({limit})")]
    ResourceLimit { what: &'static str, limit: u64, requested: u64 },
}

impl Error {
    /// Whether this error reports a violated resource bound rather than a
    /// domain-level problem with the inputs.
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::ResourceLimit { .. })
    }
}

impl From<ParseError> for Error {
    fn from(e: ParseError) -> Self {
        Error::Parse(e)
    }
}
