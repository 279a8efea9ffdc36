use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("alphabet size must be at least 3, got {0}")]
    AlphabetTooSmall(usize),

    #[error("alphabet mismatch: words over n = {left} and n = {right}")]
    AlphabetMismatch { left: usize, right: usize },

    #[error("generator index {index} out of range for n = {n}")]
    GeneratorOutOfRange { n: usize, index: usize },

    #[error("letter {letter} out of range for n = {n}")]
    LetterOutOfRange { n: usize, letter: usize },

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("level-{level} action of G_{n} has degree {degree}, above the budget of {budget}")]
    BudgetExceeded {
        n: usize,
        level: usize,
        degree: usize,
        budget: usize,
    },

    #[error("permutation is not an element of the group")]
    NotInGroup,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_alphabet(n: usize) -> Result<()> {
    if n < 3 {
        Err(Error::AlphabetTooSmall(n))
    } else {
        Ok(())
    }
}
