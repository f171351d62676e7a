use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("line {line}: output of state `{state}` is not a permutation of 0..{degree}")]
    NonPermutation {
        line: usize,
        state: String,
        degree: usize,
    },

    #[error("line {line}: unresolved state name `{name}`")]
    UnresolvedState { line: usize, name: String },

    #[error("unknown state `{0}`")]
    UnknownState(String),

    #[error("duplicate state name `{0}`")]
    DuplicateState(String),

    #[error("alphabet size {0} is below the minimum of 2")]
    AlphabetTooSmall(usize),

    #[error("state `e` is reserved for the identity but acts non-trivially")]
    ReservedIdentity,

    #[error("machine has no states")]
    Empty,

    #[error("malformed machine: {0}")]
    Malformed(String),

    #[error("malformed group word `{0}`")]
    InvalidWord(String),

    #[error("letter {letter} is outside the alphabet of size {degree}")]
    LetterOutOfRange { letter: usize, degree: usize },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("level {level} gives {words} words, above the cap of {cap}")]
    LevelCap { level: usize, words: u128, cap: u128 },

    #[error("nucleus is not post-critically finite")]
    NotPcf,

    #[error("invalid nucleus: {0}")]
    InvalidNucleus(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
