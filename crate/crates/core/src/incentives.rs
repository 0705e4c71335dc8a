//! Incentive evaluation for the q-replicator and q-Fermi families.
//!
//! With `x_A = i` and `x_B = N - i`:
//!
//! * q-replicator: `phi_T = x_T^q f_T`
//! * q-Fermi: `phi_T = x_T^q exp(beta f_T) / sum_j x_j^q exp(beta f_j)`
//!
//! Projection, replicator, logit and Fermi are the usual special cases and
//! go through the same code path as their canonical form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{check_interior, CanonicalFamily, FitnessLandscape, IncentiveSpec, Type};
use crate::numerics::log_add_exp;

/// Incentives of both types at one state, with their logarithms.
///
/// The log form is authoritative: for very large `beta` the direct value of
/// the losing type may underflow while its logarithm stays exact.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IncentivePair {
    pub phi_a: f64,
    pub phi_b: f64,
    pub log_phi_a: f64,
    pub log_phi_b: f64,
}

/// Two additive pieces of `ln(phi_B / phi_A)` at a state.
///
/// `count` is `q (ln(N - i) - ln i)`, `selection` is the landscape part:
/// `ln(f_B / f_A)` for the q-replicator and `beta (f_B - f_A)` for the
/// q-Fermi. Keeping them apart lets long sums cancel the count part exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRatioParts {
    pub count: f64,
    pub selection: f64,
}

impl LogRatioParts {
    pub fn total(&self) -> f64 {
        self.count + self.selection
    }
}

fn ln_counts(i: usize, n: usize) -> (f64, f64) {
    ((i as f64).ln(), ((n - i) as f64).ln())
}

fn q_term(q: f64, ln_x: f64) -> f64 {
    // Keeps 0 * ln x exact (and avoids 0 * inf).
    if q == 0.0 {
        0.0
    } else {
        q * ln_x
    }
}

/// `(phi_A, phi_B)` and their logs at interior state `i`.
pub fn evaluate(spec: &IncentiveSpec, i: usize, n: usize) -> Result<IncentivePair> {
    check_interior(i, n)?;
    let (f_a, f_b) = spec.landscape.fitness(i, n)?;
    let (ln_xa, ln_xb) = ln_counts(i, n);
    match spec.family.canonical() {
        CanonicalFamily::BestReply => Err(Error::BestReplyLimitOnly),
        CanonicalFamily::QReplicator { q } => {
            if f_a.is_nan() || f_a <= 0.0 {
                return Err(Error::NonPositiveIncentive { ty: Type::A, i });
            }
            if f_b.is_nan() || f_b <= 0.0 {
                return Err(Error::NonPositiveIncentive { ty: Type::B, i });
            }
            let phi_a = (i as f64).powf(q) * f_a;
            let phi_b = ((n - i) as f64).powf(q) * f_b;
            Ok(IncentivePair {
                phi_a,
                phi_b,
                log_phi_a: q_term(q, ln_xa) + f_a.ln(),
                log_phi_b: q_term(q, ln_xb) + f_b.ln(),
            })
        }
        CanonicalFamily::QFermi { q, beta } => {
            let u_a = q_term(q, ln_xa) + beta * f_a;
            let u_b = q_term(q, ln_xb) + beta * f_b;
            let norm = log_add_exp(u_a, u_b);
            let log_phi_a = u_a - norm;
            let log_phi_b = u_b - norm;
            if !log_phi_a.is_finite() {
                return Err(Error::NonPositiveIncentive { ty: Type::A, i });
            }
            if !log_phi_b.is_finite() {
                return Err(Error::NonPositiveIncentive { ty: Type::B, i });
            }
            Ok(IncentivePair {
                phi_a: log_phi_a.exp(),
                phi_b: log_phi_b.exp(),
                log_phi_a,
                log_phi_b,
            })
        }
    }
}

/// Split form of `ln(phi_B(i) / phi_A(i))`; see [`LogRatioParts`].
pub fn log_ratio_parts(spec: &IncentiveSpec, i: usize, n: usize) -> Result<LogRatioParts> {
    check_interior(i, n)?;
    let (f_a, f_b) = spec.landscape.fitness(i, n)?;
    let (ln_xa, ln_xb) = ln_counts(i, n);
    let count_log = ln_xb - ln_xa;
    match spec.family.canonical() {
        CanonicalFamily::BestReply => Err(Error::BestReplyLimitOnly),
        CanonicalFamily::QReplicator { q } => {
            if f_a.is_nan() || f_a <= 0.0 {
                return Err(Error::NonPositiveIncentive { ty: Type::A, i });
            }
            if f_b.is_nan() || f_b <= 0.0 {
                return Err(Error::NonPositiveIncentive { ty: Type::B, i });
            }
            Ok(LogRatioParts {
                count: q_term(q, count_log),
                selection: (f_b / f_a).ln(),
            })
        }
        CanonicalFamily::QFermi { q, beta } => {
            let selection = beta * (f_b - f_a);
            if !selection.is_finite() {
                return Err(Error::Numerical("non-finite q-Fermi exponent"));
            }
            Ok(LogRatioParts {
                count: q_term(q, count_log),
                selection,
            })
        }
    }
}

/// `ln(phi_B(i) / phi_A(i))` with the q-Fermi normalization cancelled symbolically.
pub fn log_incentive_ratio(spec: &IncentiveSpec, i: usize, n: usize) -> Result<f64> {
    log_ratio_parts(spec, i, n).map(|p| p.total())
}

/// Best-reply indicator `(BR_A, BR_B)`; exact ties split as `(1/2, 1/2)`.
pub fn best_reply_indicator(
    landscape: &FitnessLandscape,
    i: usize,
    n: usize,
) -> Result<(f64, f64)> {
    let (f_a, f_b) = landscape.fitness(i, n)?;
    Ok(if f_a > f_b {
        (1.0, 0.0)
    } else if f_a < f_b {
        (0.0, 1.0)
    } else {
        (0.5, 0.5)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Family, GameMatrix};

    fn moran(r: f64) -> FitnessLandscape {
        FitnessLandscape::moran(r).unwrap()
    }

    #[test]
    fn replicator_neutral() {
        let spec = IncentiveSpec::new(Family::Replicator, FitnessLandscape::Neutral);
        let p = evaluate(&spec, 3, 10).unwrap();
        assert_eq!((p.phi_a, p.phi_b), (3.0, 7.0));
    }

    #[test]
    fn projection_is_fitness() {
        let spec = IncentiveSpec::new(Family::Projection, moran(2.0));
        let p = evaluate(&spec, 3, 10).unwrap();
        assert_eq!((p.phi_a, p.phi_b), (2.0, 1.0));
    }

    #[test]
    fn logit_beta_zero_is_uniform() {
        let game = FitnessLandscape::GameLinear(GameMatrix::new(20.0, 1.0, 7.0, 10.0).unwrap());
        for landscape in [FitnessLandscape::Neutral, moran(3.5), game] {
            let spec = IncentiveSpec::new(Family::Logit { beta: 0.0 }, landscape);
            for i in 1..10 {
                let p = evaluate(&spec, i, 10).unwrap();
                assert_eq!((p.phi_a, p.phi_b), (0.5, 0.5));
            }
        }
    }

    #[test]
    fn log_ratio_moran_closed_forms() {
        let n = 12;
        for &(q, r) in &[(0.0, 2.0), (1.0, 0.5), (2.0, 3.0), (-0.5, 1.7)] {
            let spec = IncentiveSpec::q_replicator(q, moran(r));
            for k in 1..n {
                let expected = q * (((n - k) as f64) / k as f64).ln() - r.ln();
                let got = log_incentive_ratio(&spec, k, n).unwrap();
                assert!((got - expected).abs() < 1e-12, "q={q} r={r} k={k}");
                let p = evaluate(&spec, k, n).unwrap();
                assert!((got - (p.phi_b / p.phi_a).ln()).abs() < 1e-12);
            }
            for &beta in &[0.0, 0.3, 4.0] {
                let spec = IncentiveSpec::q_fermi(q, beta, moran(r));
                for k in 1..n {
                    let expected = q * (((n - k) as f64) / k as f64).ln() - beta * (r - 1.0);
                    let got = log_incentive_ratio(&spec, k, n).unwrap();
                    assert!((got - expected).abs() < 1e-12);
                    let p = evaluate(&spec, k, n).unwrap();
                    assert!((got - (p.phi_b / p.phi_a).ln()).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn neutral_replicator_log_ratio() {
        let spec = IncentiveSpec::new(Family::Replicator, FitnessLandscape::Neutral);
        for k in 1..20 {
            let expected = ((20 - k) as f64 / k as f64).ln();
            assert!((log_incentive_ratio(&spec, k, 20).unwrap() - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn best_reply_examples() {
        for i in 1..10 {
            assert_eq!(
                best_reply_indicator(&moran(2.0), i, 10).unwrap(),
                (1.0, 0.0)
            );
            assert_eq!(
                best_reply_indicator(&FitnessLandscape::Neutral, i, 10).unwrap(),
                (0.5, 0.5)
            );
        }
        let game = FitnessLandscape::GameLinear(GameMatrix::new(20.0, 1.0, 7.0, 10.0).unwrap());
        assert_eq!(best_reply_indicator(&game, 4, 10).unwrap(), (0.0, 1.0));
    }

    #[test]
    fn best_reply_rejected_by_evaluate() {
        let spec = IncentiveSpec::new(Family::BestReply, moran(2.0));
        assert_eq!(evaluate(&spec, 3, 10), Err(Error::BestReplyLimitOnly));
        assert_eq!(
            log_incentive_ratio(&spec, 3, 10),
            Err(Error::BestReplyLimitOnly)
        );
    }

    #[test]
    fn nonpositive_replicator_rejected() {
        let game = FitnessLandscape::GameLinear(GameMatrix::new(-1.0, -1.0, 1.0, 1.0).unwrap());
        let spec = IncentiveSpec::new(Family::Replicator, game);
        assert_eq!(
            evaluate(&spec, 2, 5),
            Err(Error::NonPositiveIncentive { ty: Type::A, i: 2 })
        );
    }

    #[test]
    fn large_beta_fermi_stays_finite_in_log_space() {
        let spec = IncentiveSpec::q_fermi(1.0, 1.0e4, moran(2.0));
        let p = evaluate(&spec, 5, 10).unwrap();
        assert!(p.log_phi_b.is_finite());
        assert!((p.log_phi_b - (-1.0e4)).abs() < 1e-9);
        assert_eq!(p.phi_a, 1.0);
        assert!((log_incentive_ratio(&spec, 5, 10).unwrap() + 1.0e4).abs() < 1e-9);
    }

    #[test]
    fn fermi_scaling_changes_ratio() {
        let n = 10;
        let base = moran(2.0);
        let scaled = base.scaled(2.0, n).unwrap();
        let a = log_incentive_ratio(&IncentiveSpec::new(Family::Fermi { beta: 1.0 }, base), 4, n);
        let b = log_incentive_ratio(
            &IncentiveSpec::new(Family::Fermi { beta: 1.0 }, scaled),
            4,
            n,
        );
        let (a, b) = (a.unwrap(), b.unwrap());
        assert!((a - b).abs() > 0.5);
        // beta (c f_B - c f_A) - beta (f_B - f_A) = -beta (c - 1)(f_A - f_B)
        assert!(((b - a) - (-(2.0 - 1.0) * (2.0 - 1.0))).abs() < 1e-12);
    }
}
