//! The incentive process as a birth-death Markov chain.
//!
//! Birth picks a type with probability proportional to its incentive and
//! death removes a uniformly random individual. With mutation rate `mu` the
//! newborn flips type with probability `mu`; at the absorbing boundaries this
//! leaves `T(0 -> 1) = T(N -> N-1) = mu`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::incentives::log_incentive_ratio;
use crate::model::{check_size, IncentiveSpec};
use crate::numerics::{logistic, StreamingLogSumExp};

/// Largest mutation rate accepted by the chain.
pub const MAX_MUTATION: f64 = 0.5;

/// Probabilities of moving up, down or staying at one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionTriple {
    pub up: f64,
    pub down: f64,
    pub stay: f64,
}

impl TransitionTriple {
    fn from_up_down(up: f64, down: f64) -> Self {
        Self {
            up,
            down,
            stay: (1.0 - up - down).max(0.0),
        }
    }
}

fn check_mutation(mu: f64) -> Result<()> {
    if (0.0..=MAX_MUTATION).contains(&mu) {
        Ok(())
    } else {
        Err(Error::MutationRate(mu))
    }
}

/// One-step transition probabilities at state `i`.
pub fn transition(spec: &IncentiveSpec, i: usize, n: usize, mu: f64) -> Result<TransitionTriple> {
    check_size(n)?;
    check_mutation(mu)?;
    if i > n {
        return Err(Error::StateOutOfRange { i, n, lo: 0, hi: n });
    }
    if i == 0 {
        return Ok(TransitionTriple::from_up_down(mu, 0.0));
    }
    if i == n {
        return Ok(TransitionTriple::from_up_down(0.0, mu));
    }
    // p_A = phi_A / (phi_A + phi_B) = logistic(-ln(phi_B / phi_A))
    let log_ratio = log_incentive_ratio(spec, i, n)?;
    let p_a = logistic(-log_ratio);
    let p_b = logistic(log_ratio);
    let nf = n as f64;
    let (birth_a, birth_b) = if mu == 0.0 {
        (p_a, p_b)
    } else {
        ((1.0 - mu) * p_a + mu * p_b, (1.0 - mu) * p_b + mu * p_a)
    };
    let up = birth_a * ((n - i) as f64 / nf);
    let down = birth_b * (i as f64 / nf);
    Ok(TransitionTriple::from_up_down(up, down))
}

/// Transition triples for every state `0..=n`.
pub fn transition_table(spec: &IncentiveSpec, n: usize, mu: f64) -> Result<Vec<TransitionTriple>> {
    (0..=n).map(|i| transition(spec, i, n, mu)).collect()
}

/// Stationary distribution of the mutating chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationaryDistribution {
    pub pi: Vec<f64>,
    pub log_pi: Vec<f64>,
    pub mu: f64,
}

impl StationaryDistribution {
    /// `ln(pi_N / pi_0)`, exact in log space even when one end underflows.
    pub fn log_boundary_ratio(&self) -> f64 {
        self.log_pi[self.log_pi.len() - 1] - self.log_pi[0]
    }
}

/// Stationary distribution for `mu > 0` via the detailed-balance recursion
/// `pi_{i+1} = pi_i up_i / down_{i+1}`, accumulated in log space.
pub fn stationary(spec: &IncentiveSpec, n: usize, mu: f64) -> Result<StationaryDistribution> {
    check_size(n)?;
    check_mutation(mu)?;
    if mu <= 0.0 {
        return Err(Error::MutationRate(mu));
    }
    let table = transition_table(spec, n, mu)?;
    let mut log_unnorm = Vec::with_capacity(n + 1);
    log_unnorm.push(0.0);
    for i in 0..n {
        let up = table[i].up;
        let down = table[i + 1].down;
        if !(up > 0.0 && down > 0.0) {
            return Err(Error::Numerical("zero rate in an irreducible chain"));
        }
        log_unnorm.push(log_unnorm[i] + up.ln() - down.ln());
    }
    let mut acc = StreamingLogSumExp::new();
    for &v in &log_unnorm {
        acc.push(v);
    }
    let log_z = acc.value();
    let log_pi: Vec<f64> = log_unnorm.iter().map(|v| v - log_z).collect();
    let pi = log_pi.iter().map(|v| v.exp()).collect();
    Ok(StationaryDistribution { pi, log_pi, mu })
}

/// Chain reduced to the two monomorphic states all-A and all-B.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoStateChain {
    /// All-A to all-B: a B mutant appears and fixates.
    pub t_ab: f64,
    /// All-B to all-A: an A mutant appears and fixates.
    pub t_ba: f64,
    pub pi_all_a: f64,
    pub pi_all_b: f64,
}

/// Two-state reduction from single-mutant fixation probabilities.
///
/// The stationary pair is `(rho_A, rho_B) / (rho_A + rho_B)`, which is also
/// the `mu -> 0` limit when `mu = 0`.
pub fn compress(rho_a: f64, rho_b: f64, mu: f64) -> Result<TwoStateChain> {
    for (name, value) in [("rho_A", rho_a), ("rho_B", rho_b)] {
        if !(value > 0.0 && value < 1.0) {
            return Err(Error::DegenerateProbability { name, value });
        }
    }
    if !(mu.is_finite() && mu >= 0.0) {
        return Err(Error::MutationRate(mu));
    }
    let total = rho_a + rho_b;
    Ok(TwoStateChain {
        t_ab: mu * rho_b,
        t_ba: mu * rho_a,
        pi_all_a: rho_a / total,
        pi_all_b: rho_b / total,
    })
}
