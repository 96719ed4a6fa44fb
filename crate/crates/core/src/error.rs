use crate::pattern::RectPattern;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("letter {letter} is outside an alphabet of {size} letters")]
    AlphabetMismatch { letter: usize, size: usize },

    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("unknown substitution `{0}`")]
    UnknownSubstitution(String),

    #[error("invalid substitution `{name}`: {reason}")]
    InvalidSubstitution { name: String, reason: String },

    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error("the substitution pattern is not compatible with the pattern")]
    Incompatible,

    #[error("`{outer}` is not compatible with `{inner}` (witness {witness:?})")]
    IncompatibleComposition {
        outer: String,
        inner: String,
        witness: RectPattern,
    },

    #[error("stage {stage} (`{name}`) is not compatible with the pattern it is applied to")]
    StageIncompatible { stage: usize, name: String },

    #[error("coordinate {coord} is outside the profile range {start}..{end}")]
    OutOfRange { coord: i64, start: i64, end: i64 },

    #[error("window {width}x{height} does not fit: {reason}")]
    WindowTooLarge {
        width: usize,
        height: usize,
        reason: String,
    },

    #[error("enumeration budget of {budget} exceeded ({partial} items produced)")]
    BudgetExceeded { budget: usize, partial: usize },

    #[error("`{0}` is already a lifted substitution")]
    AlreadyLifted(String),

    #[error("no candidate substitution parses the stage-{stage} samples")]
    Unparseable { stage: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
