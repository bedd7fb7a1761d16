use alloc::string::String;

/// Errors raised by the geometric and certification routines.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("point is not a member of the set")]
    NotMember,
    #[error("y0 does not belong to W(0)")]
    NotInW0,
    #[error("no Slater point was supplied")]
    SlaterMissing,
    #[error("no Slater point exists")]
    SlaterNotFound,
    #[error("order cone is not pointed")]
    NotPointed,
    #[error("order cone has empty interior")]
    NotFullDimensional,
    #[error("order cone is the whole space")]
    WholeSpace,
    #[error("functional has a zero Y component")]
    DegenerateFunctional,
    #[error("program has no points")]
    EmptyProgram,
    #[error("feasible set is empty")]
    EmptyFeasible,
    #[error("boundary restriction would need more than one nesting level")]
    NestedRestriction,
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
