use thiserror::Error;

use crate::sign::Label;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("sign entries must be +1 or -1, got {0}")]
    InvalidSign(i64),
    #[error("sign sequence has {values} values but {positions} positions")]
    LengthMismatch { values: usize, positions: usize },
    #[error("position labels must be strictly increasing positive integers")]
    PositionsNotIncreasing,
    #[error("sign sequence {0} is not in the positive class")]
    NotPositive(String),
    #[error("n = {n} exceeds the enumeration bound {max}")]
    BoundExceeded { n: usize, max: usize },
    #[error("label {0} is not a position of the sign sequence")]
    LabelNotPresent(Label),
    #[error("pair ({left},{right}) must satisfy 0 < left < right")]
    InvalidPair { left: Label, right: Label },
    #[error("label {0} occurs more than once")]
    DuplicateLabel(Label),
    #[error("supports overlap at label {0}")]
    OverlappingSupport(Label),
    #[error("depth is only defined for non-crossing pair partitions")]
    CrossingInput,
    #[error("pair index {index} out of range for a partition with {len} pairs")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("no value supplied for indeterminate g_{{{0},{1}}}")]
    MissingIndeterminate(Label, Label),
    #[error("grade mismatch: {left} vs {right}")]
    GradeMismatch { left: usize, right: usize },
    #[error("q = {0} is outside [-1, 1]")]
    InvalidQ(String),
    #[error("invalid dimension: {0}")]
    Dimension(String),
    #[error("invalid Gram data: {0}")]
    Gram(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
