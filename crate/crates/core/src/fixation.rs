//! Exact fixation probabilities of the incentive process.
//!
//! With `t_0 = 1` and
//!
//! ```text
//! t_j = prod_{k=1..j} (k phi_B(k)) / ((N - k) phi_A(k))
//! ```
//!
//! the probability that `i` A individuals take over is
//! `rho_i = (t_0 + ... + t_{i-1}) / (t_0 + ... + t_{N-1})`, and the ratio of
//! single-mutant fixation probabilities is `rho_B / rho_A = t_{N-1}`.
//! Everything is carried in log space: `C(N-1, j)` alone overflows a double
//! near N = 1030 and large-beta Fermi factors much sooner.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::incentives::log_ratio_parts;
use crate::model::{check_size, CanonicalFamily, Family, FitnessLandscape, IncentiveSpec};
use crate::numerics::{ln_binomial, log_sum_exp, CompensatedSum, StreamingLogSumExp};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixationResult {
    pub n: usize,
    /// `rho_1 ..= rho_{N-1}`; `rho[0]` is the single-mutant probability `rho_A`.
    pub rho: Vec<f64>,
    /// `ln t_0 ..= ln t_{N-1}`, with `ln t_0 = 0`.
    pub log_t: Vec<f64>,
    /// `ln(t_0 + ... + t_{N-1})`.
    pub log_s_total: f64,
    /// `rho_B / rho_A = t_{N-1}`; may overflow or underflow, see `log_ratio_b_over_a`.
    pub ratio_b_over_a: f64,
    pub log_ratio_b_over_a: f64,
    /// `rho_B = t_{N-1} / s_{0,N-1}`, not `1 - rho_{N-1}`.
    pub rho_b: f64,
}

impl FixationResult {
    pub fn rho_a(&self) -> f64 {
        self.rho[0]
    }

    /// `ln rho_A`.
    pub fn log_rho_a(&self) -> f64 {
        -self.log_s_total
    }

    /// `ln rho_B`.
    pub fn log_rho_b(&self) -> f64 {
        self.log_ratio_b_over_a - self.log_s_total
    }
}

fn check_spec(spec: &IncentiveSpec, n: usize) -> Result<()> {
    check_size(n)?;
    if spec.family.canonical() == CanonicalFamily::BestReply {
        return Err(Error::BestReplyLimitOnly);
    }
    Ok(())
}

/// `ln t_j` for `j = 0..N-1` with compensated accumulation.
///
/// Each step adds the count part `q ln((N-k)/k)`, the selection part and the
/// binomial part `ln k - ln(N-k)` as separate terms, so that both count-type
/// parts cancel exactly over the full range `k = 1..N-1`.
fn log_t_values(spec: &IncentiveSpec, n: usize) -> Result<Vec<f64>> {
    let mut log_t = Vec::with_capacity(n);
    log_t.push(0.0);
    let mut acc = CompensatedSum::new();
    for k in 1..n {
        let parts = log_ratio_parts(spec, k, n)?;
        acc.add(parts.count);
        acc.add(parts.selection);
        acc.add((k as f64).ln() - ((n - k) as f64).ln());
        let v = acc.value();
        if v.is_nan() {
            return Err(Error::Numerical("NaN in log t_j"));
        }
        log_t.push(v);
    }
    Ok(log_t)
}

/// All fixation probabilities `rho_1 ..= rho_{N-1}` and the fixation ratio.
pub fn fixation_exact(spec: &IncentiveSpec, n: usize) -> Result<FixationResult> {
    check_spec(spec, n)?;
    let log_t = log_t_values(spec, n)?;
    // log_prefix[i] = ln s_{0,i}
    let mut acc = StreamingLogSumExp::new();
    let log_prefix: Vec<f64> = log_t
        .iter()
        .map(|&v| {
            acc.push(v);
            acc.value()
        })
        .collect();
    let log_s_total = log_prefix[n - 1];
    if !log_s_total.is_finite() {
        return Err(Error::Numerical("non-finite normalizer"));
    }
    let rho = log_prefix[..n - 1]
        .iter()
        .map(|&ls| (ls - log_s_total).exp())
        .collect();
    let log_ratio = log_t[n - 1];
    Ok(FixationResult {
        n,
        rho,
        log_s_total,
        ratio_b_over_a: log_ratio.exp(),
        log_ratio_b_over_a: log_ratio,
        rho_b: (log_ratio - log_s_total).exp(),
        log_t,
    })
}

/// `ln(rho_B / rho_A)` as one product of incentive ratios.
///
/// The binomial factor `prod k / (N - k)` over `k = 1..N-1` is exactly one
/// and is left out.
pub fn log_fixation_ratio(spec: &IncentiveSpec, n: usize) -> Result<f64> {
    check_spec(spec, n)?;
    let mut acc = CompensatedSum::new();
    for k in 1..n {
        let parts = log_ratio_parts(spec, k, n)?;
        acc.add(parts.count);
        acc.add(parts.selection);
    }
    let v = acc.value();
    if v.is_nan() {
        return Err(Error::Numerical("NaN in fixation ratio"));
    }
    Ok(v)
}

/// `rho_B / rho_A`.
pub fn fixation_ratio(spec: &IncentiveSpec, n: usize) -> Result<f64> {
    log_fixation_ratio(spec, n).map(f64::exp)
}

/// Neutral-landscape q-replicator values of `q` with a closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NeutralClosedForm {
    Q0,
    Q1,
    Q2,
    Q3,
}

impl TryFrom<f64> for NeutralClosedForm {
    type Error = Error;

    fn try_from(q: f64) -> Result<Self> {
        [Self::Q0, Self::Q1, Self::Q2, Self::Q3]
            .into_iter()
            .zip([0.0, 1.0, 2.0, 3.0])
            .find(|&(_, v)| v == q)
            .map(|(form, _)| form)
            .ok_or(Error::UnsupportedQ(q))
    }
}

/// Closed-form `rho_A` for the q-replicator on the neutral landscape.
///
/// * `q = 0`: `1 / sum_{j=0..N-1} C(N-1, j)^-1`
/// * `q = 1`: `1 / N`
/// * `q = 2`: `2^(1-N)`
/// * `q = 3`: `C(2N-2, N-1)^-1`
pub fn closed_form_neutral(q: f64, n: usize) -> Result<f64> {
    check_size(n)?;
    let form = NeutralClosedForm::try_from(q)?;
    let m = (n - 1) as u64;
    Ok(match form {
        NeutralClosedForm::Q0 => {
            let terms: Vec<f64> = (0..=m).map(|j| -ln_binomial(m, j)).collect();
            (-log_sum_exp(&terms)).exp()
        }
        NeutralClosedForm::Q1 => 1.0 / n as f64,
        NeutralClosedForm::Q2 => ((1.0 - n as f64) * std::f64::consts::LN_2).exp(),
        NeutralClosedForm::Q3 => (-ln_binomial(2 * m, m)).exp(),
    })
}

/// `rho_A = (1 + 1/r)^(1-N)` for the 2-replicator on the Moran landscape.
pub fn closed_form_q2_moran(r: f64, n: usize) -> Result<f64> {
    check_size(n)?;
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::InvalidParameter {
            name: "r",
            value: r,
            reason: "relative fitness must be finite and positive",
        });
    }
    Ok(q2_from_log_r(r.ln(), n))
}

/// The 2-Fermi on the Moran landscape: [`closed_form_q2_moran`] at `r = exp(beta (r - 1))`.
pub fn closed_form_q2_fermi(beta: f64, r: f64, n: usize) -> Result<f64> {
    check_size(n)?;
    if !(beta.is_finite() && beta >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "beta",
            value: beta,
            reason: "beta must be finite and non-negative",
        });
    }
    if !r.is_finite() {
        return Err(Error::InvalidParameter {
            name: "r",
            value: r,
            reason: "relative fitness must be finite",
        });
    }
    Ok(q2_from_log_r(beta * (r - 1.0), n))
}

fn q2_from_log_r(log_r: f64, n: usize) -> f64 {
    // ln(1 + 1/r) = ln(1 + exp(-log_r))
    let ln_base = crate::numerics::log_add_exp(0.0, -log_r);
    ((1.0 - n as f64) * ln_base).exp()
}

/// Default tolerance for declaring the Fermi values converged to the best-reply limit.
pub const BEST_REPLY_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestReplyReport {
    /// Best-reply fixation probability (analytic for Moran landscapes,
    /// otherwise the Fermi value at the last beta).
    pub value: f64,
    pub analytic: bool,
    /// `(beta, rho_A)` of the Fermi process along the schedule.
    pub fermi: Vec<(f64, f64)>,
    pub converged: bool,
    /// Whether one type is strictly better at every interior state.
    pub strict_best_reply: bool,
}

/// Best-reply fixation probability as the large-beta limit of the Fermi process.
pub fn best_reply_fixation(
    landscape: &FitnessLandscape,
    n: usize,
    beta_schedule: &[f64],
) -> Result<BestReplyReport> {
    check_size(n)?;
    let valid = !beta_schedule.is_empty()
        && beta_schedule.iter().all(|b| b.is_finite() && *b >= 0.0)
        && beta_schedule.windows(2).all(|w| w[0] < w[1]);
    if !valid {
        return Err(Error::BetaSchedule);
    }
    let mut fermi = Vec::with_capacity(beta_schedule.len());
    for &beta in beta_schedule {
        let spec = IncentiveSpec::new(Family::Fermi { beta }, landscape.clone());
        fermi.push((beta, fixation_exact(&spec, n)?.rho_a()));
    }
    let mut strict = true;
    for i in 1..n {
        let (f_a, f_b) = landscape.fitness(i, n)?;
        if f_a == f_b {
            strict = false;
        }
    }
    let last = fermi[fermi.len() - 1].1;
    let (value, analytic) = match landscape.moran_r() {
        Some(r) if r > 1.0 => (1.0, true),
        Some(r) if r < 1.0 => (0.0, true),
        Some(_) => (1.0 / n as f64, true),
        None => (last, false),
    };
    let converged = if analytic {
        (last - value).abs() <= BEST_REPLY_TOLERANCE
    } else if fermi.len() >= 2 {
        (last - fermi[fermi.len() - 2].1).abs() <= BEST_REPLY_TOLERANCE
    } else {
        false
    };
    Ok(BestReplyReport {
        value,
        analytic,
        fermi,
        converged,
        strict_best_reply: strict,
    })
}
