use thiserror::Error;

/// Structural condition of a feasible family that a candidate violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeasibilityBullet {
    /// `I_i ⊆ S_i ⊆ E`
    Sandwich,
    /// `I_i` independent in `M_i`
    LowerIndependent,
    /// `S_i` spanning in `M_i`
    UpperSpanning,
    /// `I_i ∩ I_j = ∅`
    LowerDisjoint,
    /// `∪ S_i = E`
    UpperCovers,
}

impl std::fmt::Display for FeasibilityBullet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            FeasibilityBullet::Sandwich => "sandwich I_i ⊆ S_i ⊆ E",
            FeasibilityBullet::LowerIndependent => "independence of I_i",
            FeasibilityBullet::UpperSpanning => "spanning S_i",
            FeasibilityBullet::LowerDisjoint => "disjointness of the I_i",
            FeasibilityBullet::UpperCovers => "union of the S_i equals E",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("feasible family violates {bullet} (member {index})")]
    Validation {
        bullet: FeasibilityBullet,
        index: usize,
    },
    #[error("enumeration budget exceeded: {0}")]
    Budget(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}

pub(crate) fn internal<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Internal(msg.into()))
}

/// Returns an internal-consistency error unless `cond` holds.
pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Internal(msg()))
    }
}
