use thiserror::Error;

use crate::model::Type;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("population size must be at least 2, got {0}")]
    PopulationTooSmall(usize),

    #[error("state {i} outside {lo}..={hi} for population size {n}")]
    StateOutOfRange {
        i: usize,
        n: usize,
        lo: usize,
        hi: usize,
    },

    #[error("tabulated landscape has {got} entries per type, expected {expected} (N - 1)")]
    TabulatedLength { got: usize, expected: usize },

    #[error("tabulated fitness entry {index} is not finite")]
    NonFiniteTabulated { index: usize },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("incentive for type {ty} is not positive at state {i}")]
    NonPositiveIncentive { ty: Type, i: usize },

    #[error("best-reply incentive is only available as a large-beta limit")]
    BestReplyLimitOnly,

    #[error("mutation rate {0} outside [0, 1/2]")]
    MutationRate(f64),

    #[error("unsupported value of q for a closed form: {0}")]
    UnsupportedQ(f64),

    #[error("fixation probabilities must lie strictly between 0 and 1, got {name} = {value}")]
    DegenerateProbability { name: &'static str, value: f64 },

    #[error("beta schedule must be non-empty, non-negative and strictly increasing")]
    BetaSchedule,

    #[error("invalid simulation config: {0}")]
    SimulationConfig(&'static str),

    #[error("all {0} trajectories were censored at max_steps")]
    AllCensored(u64),

    #[error("numerical failure: {0}")]
    Numerical(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
