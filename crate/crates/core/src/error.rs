use thiserror::Error;

/// Library-wide error type. Variants that indicate internal inconsistency
/// (broken invariants that construction is supposed to rule out) are marked
/// as such in their messages; callers normally treat those as bugs.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown root system family `{0}`")]
    UnknownSystem(String),

    #[error("rank {rank} is not admissible for family {family}")]
    RankTooSmall { family: char, rank: usize },

    #[error("unsupported ring descriptor `{0}`: {1}")]
    UnsupportedRing(String, String),

    #[error("element {0} is not a unit")]
    NonUnitInverse(String),

    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),

    #[error("root {0:?} does not belong to the system")]
    NoSuchRoot(Vec<i64>),

    #[error("roots are proportional; the root string is undefined")]
    ProportionalRoots,

    #[error("non-integral entry while building a generator template: {0}")]
    NonIntegralEntry(String),

    #[error("structure constant signs are inconsistent: {0}")]
    SignInconsistency(String),

    #[error("torus parameter {0} is not a unit")]
    NonUnitTorusParameter(String),

    #[error("group enumeration exceeded the cap of {cap} elements")]
    GroupTooLarge { cap: usize },

    #[error("cannot parse generator word at `{0}`: {1}")]
    WordParse(String, String),

    #[error("element is not in the big cell (pivot for {0} is not a unit)")]
    NotInBigCell(String),

    #[error("decomposition failed: {0}")]
    DecompositionFailed(String),

    #[error("products of the given elements do not form a normal proper subgroup: {0}")]
    NotASubgroup(String),

    #[error("no admissible pairing pair of roots: {0}")]
    NoA2Subsystem(String),

    #[error("required units are missing: {0}")]
    MissingRequiredUnits(String),

    #[error("commutator width exceeded the cap of {0}")]
    WidthCapExceeded(usize),

    #[error("search space too large: {0}")]
    SearchSpaceTooLarge(String),

    #[error("a group identity failed to hold: {0}")]
    IdentityViolated(String),

    #[error("sandwich inclusion violated: {0}")]
    InclusionViolated(String),

    #[error("definable set differs from the root subgroup: {0}")]
    MismatchWithRootSubgroup(String),

    #[error("search exhausted the configured caps: {0}")]
    NotFound(String),

    #[error("isomorphism check failed: {0}")]
    IsomorphismFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
