use thiserror::Error;

use crate::compare::TheoremViolation;
use crate::regular::RegularityReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which argument of a two-family operation an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Left => f.write_str("left"),
            Side::Right => f.write_str("right"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("duplicate atom label `{0}`")]
    DuplicateLabel(String),
    #[error("atom labels must be nonempty (position {0})")]
    EmptyLabel(usize),
    #[error("ground set has {size} atoms, capacity is 64")]
    CapacityExceeded { size: usize },
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("atom index {index} out of range for a ground set of {size} atoms")]
    AtomOutOfRange { index: usize, size: usize },
    #[error("mask {mask:#x} has bits outside a ground set of {size} atoms")]
    MaskOutOfRange { mask: u64, size: usize },
    #[error("operands belong to different ground sets")]
    GroundMismatch,

    #[error("choice function is undefined on the empty subset")]
    EmptySubset,
    #[error("alpha is undefined on the full ground set")]
    FullSet,
    #[error("choice table has no entry for {subset}")]
    MissingTableEntry { subset: String },
    #[error("choice table picks `{pick}` for {subset}, which is not a member")]
    MembershipViolation { subset: String, pick: String },
    #[error("choice table lists {subset} more than once")]
    DuplicateTableEntry { subset: String },
    #[error("ground set of {size} atoms exceeds the limit of {limit} for this operation")]
    GroundTooLarge { size: usize, limit: usize },

    #[error("operation requires a nonempty family")]
    EmptyFamily,
    #[error("family is not a chain: {left} and {right} are incomparable")]
    NotAChain { left: String, right: String },
    #[error("{side} family is not regular")]
    NotRegular {
        side: Side,
        report: Box<RegularityReport>,
    },
    #[error("comparability dichotomy failed: {0}")]
    TheoremViolation(Box<TheoremViolation>),

    #[error("no member of the family contains atom `{atom}`")]
    AtomNotCovered { atom: String },
    #[error("stage witness mismatch for atom `{atom}`: alpha({r1}) = `{got}`")]
    WitnessMismatch { atom: String, r1: String, got: String },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// True for errors caused by a defective choice function rather than by
    /// the construction itself.
    pub fn is_choice_error(&self) -> bool {
        matches!(
            self,
            Error::EmptySubset
                | Error::MissingTableEntry { .. }
                | Error::MembershipViolation { .. }
                | Error::DuplicateTableEntry { .. }
        )
    }
}
