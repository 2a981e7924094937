use thiserror::Error;

/// Errors raised by the arithmetic layers, analyzers and pipelines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field spec mismatch: {0}")]
    SpecMismatch(String),
    #[error("invalid field spec: {0}")]
    InvalidSpec(String),
    #[error("no p-th root exists")]
    NoRoot,
    #[error("unsupported input: {0}")]
    UnsupportedInput(String),
    #[error("residue field too small: {0}")]
    ResidueTooSmall(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("internal error: inexact division while solving Witt polynomials ({0})")]
    InternalInexactDivision(String),
    #[error("rewrite rule violated: {0}")]
    RuleViolation(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("hypothesis not verified: {0}")]
    HypothesisNotVerified(String),
    #[error("unsupported case: {0}")]
    UnsupportedCase(String),
    #[error("degenerate extension: {0}")]
    DegenerateExtension(String),
    #[error("parse error at offset {offset}: expected one of {expected:?}")]
    Parse {
        offset: usize,
        expected: Vec<String>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Prefixes the message with `ctx`, keeping the variant.
    pub fn context(self, ctx: &str) -> Self {
        use Error::*;
        match self {
            SpecMismatch(s) => SpecMismatch(format!("{ctx}: {s}")),
            InvalidSpec(s) => InvalidSpec(format!("{ctx}: {s}")),
            UnsupportedInput(s) => UnsupportedInput(format!("{ctx}: {s}")),
            ResidueTooSmall(s) => ResidueTooSmall(format!("{ctx}: {s}")),
            PrecisionExhausted(s) => PrecisionExhausted(format!("{ctx}: {s}")),
            ShapeMismatch(s) => ShapeMismatch(format!("{ctx}: {s}")),
            InternalInexactDivision(s) => InternalInexactDivision(format!("{ctx}: {s}")),
            RuleViolation(s) => RuleViolation(format!("{ctx}: {s}")),
            HypothesisViolation(s) => HypothesisViolation(format!("{ctx}: {s}")),
            HypothesisNotVerified(s) => HypothesisNotVerified(format!("{ctx}: {s}")),
            UnsupportedCase(s) => UnsupportedCase(format!("{ctx}: {s}")),
            DegenerateExtension(s) => DegenerateExtension(format!("{ctx}: {s}")),
            other @ (DivisionByZero | NoRoot | Parse { .. }) => other,
        }
    }
}
