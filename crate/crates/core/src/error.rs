use alloc::string::String;
use core::fmt;

/// Everything that can go wrong in the core crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    EmptyAlphabet,
    InvalidSymbol(char),
    DuplicateSymbol(char),
    UnknownLetter(char),
    LetterOutOfRange(u8),
    EmptyWord,
    EmptyNeedle,
    OffsetOutOfRange { offset: usize, len: usize },
    AlphabetMismatch { expected: String, found: String },
    ImageCount { expected: usize, found: usize },
    NotEndomorphism,
    NotProlongable(char),
    FiniteFixedPoint(char),
    ErasingMorphism,
    BoundTooSmall { needed: usize, have: usize },
    BudgetExceeded { requested: usize, limit: usize },
    UnverifiedMarker(String),
    DepthExceeded(usize),
    NodeBudgetExceeded(usize),
    AmbiguousImages { first: char, second: char },
    ClassTooLong { len: usize, bound: usize },
    Config(String),
}

impl Error {
    /// Resource errors are the ones a caller may retry with a larger budget.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. } | Error::DepthExceeded(_) | Error::NodeBudgetExceeded(_))
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyAlphabet => write!(f, "alphabet has no symbols"),
            Error::InvalidSymbol(c) => write!(f, "symbol {c:?} is not a printable ASCII letter"),
            Error::DuplicateSymbol(c) => write!(f, "symbol {c:?} declared twice"),
            Error::UnknownLetter(c) => write!(f, "letter {c:?} is not in the alphabet"),
            Error::LetterOutOfRange(i) => write!(f, "letter index {i} is outside the alphabet"),
            Error::EmptyWord => write!(f, "operation needs a non-empty word"),
            Error::EmptyNeedle => write!(f, "search pattern is empty"),
            Error::OffsetOutOfRange { offset, len } => {
                write!(f, "offset {offset} out of range for word of length {len}")
            }
            Error::AlphabetMismatch { expected, found } => {
                write!(f, "alphabet mismatch: expected {{{expected}}}, found {{{found}}}")
            }
            Error::ImageCount { expected, found } => {
                write!(f, "morphism needs {expected} images, got {found}")
            }
            Error::NotEndomorphism => write!(f, "morphism is not an endomorphism"),
            Error::NotProlongable(c) => write!(f, "morphism is not prolongable on {c:?}"),
            Error::FiniteFixedPoint(c) => write!(f, "fixed point from {c:?} is finite"),
            Error::ErasingMorphism => write!(f, "morphism is erasing"),
            Error::BoundTooSmall { needed, have } => {
                write!(f, "factor set bound {have} is too small, need at least {needed}")
            }
            Error::BudgetExceeded { requested, limit } => {
                write!(f, "factor bound {requested} exceeds the budget of {limit}")
            }
            Error::UnverifiedMarker(m) => write!(f, "marker {m:?} could not be verified"),
            Error::DepthExceeded(d) => write!(f, "de-substitution exceeded depth {d}"),
            Error::NodeBudgetExceeded(n) => write!(f, "de-substitution exceeded {n} derivation nodes"),
            Error::AmbiguousImages { first, second } => {
                write!(f, "letters {first:?} and {second:?} have the same image")
            }
            Error::ClassTooLong { len, bound } => {
                write!(f, "class of length {len} exceeds universe bound {bound}")
            }
            Error::Config(msg) => write!(f, "invalid configuration: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T, E = Error> = core::result::Result<T, E>;
