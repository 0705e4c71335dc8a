//! Monte Carlo estimation of fixation probabilities.
//!
//! Trajectory `t` draws its uniforms from a ChaCha8 generator seeded with
//! `seed` on stream `t`, so results do not depend on how trajectories are
//! spread over worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::{transition, transition_table, TransitionTriple};
use crate::error::{Error, Result};
use crate::model::{check_size, IncentiveSpec};

/// Fraction of censored trajectories above which an estimate is flagged.
pub const CENSORING_LIMIT: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub spec: IncentiveSpec,
    pub n: usize,
    pub start: usize,
    pub mu: f64,
    pub trials: u64,
    pub seed: u64,
    pub max_steps: u64,
}

impl SimulationConfig {
    /// Config with `mu = 0` and `max_steps = 100 N^2`.
    pub fn new(spec: IncentiveSpec, n: usize, start: usize, trials: u64, seed: u64) -> Self {
        Self {
            spec,
            n,
            start,
            mu: 0.0,
            trials,
            seed,
            max_steps: default_max_steps(n),
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_size(self.n)?;
        if self.trials == 0 {
            return Err(Error::SimulationConfig("trials must be at least 1"));
        }
        if self.start > self.n {
            return Err(Error::StateOutOfRange {
                i: self.start,
                n: self.n,
                lo: 0,
                hi: self.n,
            });
        }
        if self.max_steps < self.n as u64 {
            return Err(Error::SimulationConfig("max_steps must be at least N"));
        }
        if self.mu != 0.0 {
            return Err(Error::SimulationConfig(
                "fixation estimates need an absorbing chain (mu = 0)",
            ));
        }
        Ok(())
    }
}

pub fn default_max_steps(n: usize) -> u64 {
    100 * (n as u64) * (n as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixationEstimate {
    /// Fraction of uncensored trajectories absorbed at all-A.
    pub p_hat: f64,
    pub stderr: f64,
    pub trials_used: u64,
    pub fixated: u64,
    pub censored: u64,
    /// More than [`CENSORING_LIMIT`] of the trials were censored.
    pub flagged: bool,
}

/// Next state given a uniform draw in `[0, 1)`, partitioned as up, down, stay.
pub fn step_with(triple: &TransitionTriple, i: usize, u: f64) -> usize {
    if u < triple.up {
        i + 1
    } else if u < triple.up + triple.down {
        i - 1
    } else {
        i
    }
}

/// One step of the chain from `i` using the uniform draw `u`.
pub fn step(spec: &IncentiveSpec, i: usize, n: usize, mu: f64, u: f64) -> Result<usize> {
    let triple = transition(spec, i, n, mu)?;
    Ok(step_with(&triple, i, u))
}

/// Generator for trajectory `index` of a run seeded with `seed`.
pub fn trajectory_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    FixedA,
    FixedB,
    Censored,
}

fn run_trajectory(
    table: &[TransitionTriple],
    start: usize,
    max_steps: u64,
    rng: &mut ChaCha8Rng,
) -> Outcome {
    let n = table.len() - 1;
    let mut i = start;
    let mut steps = 0u64;
    loop {
        if i == n {
            return Outcome::FixedA;
        }
        if i == 0 {
            return Outcome::FixedB;
        }
        if steps >= max_steps {
            return Outcome::Censored;
        }
        let u: f64 = rng.random();
        i = step_with(&table[i], i, u);
        steps += 1;
    }
}

/// Estimate `rho_start` from independent trajectories, in parallel on the current rayon pool.
pub fn estimate_fixation(config: &SimulationConfig) -> Result<FixationEstimate> {
    config.validate()?;
    let table = transition_table(&config.spec, config.n, 0.0)?;
    let (fixated, lost, censored) = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trajectory_rng(config.seed, t);
            match run_trajectory(&table, config.start, config.max_steps, &mut rng) {
                Outcome::FixedA => (1u64, 0u64, 0u64),
                Outcome::FixedB => (0, 1, 0),
                Outcome::Censored => (0, 0, 1),
            }
        })
        .reduce(|| (0, 0, 0), |x, y| (x.0 + y.0, x.1 + y.1, x.2 + y.2));
    let trials_used = fixated + lost;
    if trials_used == 0 {
        return Err(Error::AllCensored(config.trials));
    }
    let p_hat = fixated as f64 / trials_used as f64;
    let stderr = (p_hat * (1.0 - p_hat) / trials_used as f64).sqrt();
    Ok(FixationEstimate {
        p_hat,
        stderr,
        trials_used,
        fixated,
        censored,
        flagged: censored as f64 > CENSORING_LIMIT * config.trials as f64,
    })
}
