use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("party '{letter}' is outside the {n} parties of this inequality")]
    PartyOutOfRange { letter: char, n: usize },

    #[error("coefficients must be strictly positive, got {0}")]
    NonPositiveCoefficient(String),

    #[error("inequality side is empty")]
    EmptySide,

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("party-count mismatch: expected n = {expected}, found n = {found}")]
    PartyCountMismatch { expected: usize, found: usize },

    #[error("invalid subsystem: {0}")]
    InvalidSubsystem(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("weights too large for exact integer rescaling")]
    WeightOverflow,

    #[error("unknown loop index {0}")]
    UnknownLoop(usize),

    #[error("no loop cut separates {0}: external loops are linked without internal loops")]
    Uncuttable(String),

    #[error("invalid cut set: {0}")]
    InvalidCutSet(String),

    #[error("cut loop {loop_name} for {subsystem} lies in no minimal bridge")]
    NonMinimalCut { subsystem: String, loop_name: String },

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("map is not total: {0}")]
    PartialMap(String),

    #[error("search budget must be positive")]
    InvalidBudget,

    #[error("gray loops remain for LHS term {term}: {loops:?}")]
    GrayLoopsRemain { term: usize, loops: Vec<String> },

    #[error("map undefined on nonempty cell {0}")]
    UndefinedCell(String),

    #[error("inconsistent RHS assignment for term {term}: {reason}")]
    Inconsistent { term: usize, reason: Inconsistency },
}

/// Why a zero pattern fails to specify a cut for an RHS term.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Inconsistency {
    #[error("zero cells contain the uncuttable loop {0}")]
    UncuttableLoop(String),
    #[error("removing the zero cells leaves the subsystem linked to its complement")]
    NotACut,
    #[error("cell {0} straddles the cut interior and exterior")]
    StraddlingCell(String),
    #[error("linked block {0} spans cells of opposite sign")]
    StraddlingBlock(String),
    #[error("external loops of the +1 cells are not exactly the subsystem")]
    ExternalMismatch,
}
