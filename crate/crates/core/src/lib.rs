//! Incentive processes on two-type finite populations.
//!
//! The incentive process is a birth-death chain on the number `i` of type A
//! individuals in a population of `N`: a parent is chosen with probability
//! proportional to its type's incentive `phi_T(i)`, and its offspring
//! replaces a uniformly random individual. The q-replicator family
//! (`phi_T = x_T^q f_T`) contains the projection (`q = 0`) and Moran
//! (`q = 1`) processes; the q-Fermi family contains logit and Fermi updating.
//!
//! * [`model`]: games, landscapes, incentive specifications
//! * [`incentives`]: incentive values and log ratios
//! * [`chain`]: transition probabilities, stationary distributions, two-state reduction
//! * [`fixation`]: exact fixation probabilities, ratios and closed forms
//! * [`equilibria`]: ISS candidate locations
//! * [`simulate`]: Monte Carlo fixation estimates

pub mod chain;
pub mod equilibria;
pub mod error;
pub mod fixation;
pub mod incentives;
pub mod model;
pub mod numerics;
pub mod simulate;

pub use chain::{
    compress, stationary, transition, StationaryDistribution, TransitionTriple, TwoStateChain,
};
pub use equilibria::{
    analytic_candidates, ess_finite_q1, iss_candidates, iss_moran_qfermi, iss_moran_qrep,
    iss_quadratic, CandidateKind, FiniteEss, IssCandidate,
};
pub use error::{Error, Result};
pub use fixation::{
    best_reply_fixation, closed_form_neutral, closed_form_q2_fermi, closed_form_q2_moran,
    fixation_exact, fixation_ratio, log_fixation_ratio, BestReplyReport, FixationResult,
};
pub use incentives::{best_reply_indicator, evaluate, log_incentive_ratio, IncentivePair};
pub use model::{
    validate_spec, Family, FitnessLandscape, GameMatrix, IncentiveSpec, PopulationState, Type,
    Validation,
};
pub use simulate::{estimate_fixation, FixationEstimate, SimulationConfig};
