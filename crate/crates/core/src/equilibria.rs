//! Incentive-stable-state (ISS) candidates.
//!
//! A candidate is an interior state where the up and down rates of the
//! chain balance, `(N - i) phi_A(i) = i phi_B(i)`. Only locations are
//! computed; no stability criterion is attached.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::incentives::log_incentive_ratio;
use crate::model::{check_size, CanonicalFamily, FitnessLandscape, GameMatrix, IncentiveSpec};
use crate::numerics::logistic;

/// Normalized residual below which a state counts as an exact root.
pub const EXACT_ROOT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CandidateKind {
    ExactInteger,
    /// `Delta` changes sign between `lo` and `hi = lo + 1`.
    SignChangeInterval {
        lo: usize,
        hi: usize,
    },
    AnalyticRoot,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IssCandidate {
    /// State coordinate `i`, possibly fractional.
    pub location: f64,
    pub kind: CandidateKind,
    /// `Delta / ((N - i) phi_A + i phi_B)` at the nearest integer state.
    pub residual: f64,
}

/// `ln((N - i) phi_A(i) / (i phi_B(i)))`; positive exactly when `Delta(i) > 0`.
pub fn log_balance(spec: &IncentiveSpec, i: usize, n: usize) -> Result<f64> {
    let log_ratio = log_incentive_ratio(spec, i, n)?;
    Ok(((n - i) as f64).ln() - (i as f64).ln() - log_ratio)
}

/// `Delta(i)` divided by `(N - i) phi_A(i) + i phi_B(i)`, in `(-1, 1)`.
pub fn normalized_delta(spec: &IncentiveSpec, i: usize, n: usize) -> Result<f64> {
    // (e^g - 1) / (e^g + 1) = 2 logistic(g) - 1 = tanh(g / 2)
    Ok((0.5 * log_balance(spec, i, n)?).tanh())
}

/// Scan `Delta` over `1..=N-1` for exact roots and sign changes.
pub fn iss_candidates(spec: &IncentiveSpec, n: usize) -> Result<Vec<IssCandidate>> {
    check_size(n)?;
    let mut g = Vec::with_capacity(n.saturating_sub(1));
    for i in 1..n {
        g.push(log_balance(spec, i, n)?);
    }
    let residual = |idx: usize| (0.5 * g[idx]).tanh();
    let is_exact = |idx: usize| residual(idx).abs() <= EXACT_ROOT_TOLERANCE;

    let mut out = Vec::new();
    for idx in 0..g.len() {
        let i = idx + 1;
        if is_exact(idx) {
            out.push(IssCandidate {
                location: i as f64,
                kind: CandidateKind::ExactInteger,
                residual: residual(idx),
            });
            continue;
        }
        if idx + 1 < g.len() && !is_exact(idx + 1) && (g[idx] > 0.0) != (g[idx + 1] > 0.0) {
            // Linear interpolation of the log balance inside the unit interval.
            let frac = g[idx] / (g[idx] - g[idx + 1]);
            let nearest = if frac < 0.5 { idx } else { idx + 1 };
            out.push(IssCandidate {
                location: i as f64 + frac,
                kind: CandidateKind::SignChangeInterval { lo: i, hi: i + 1 },
                residual: residual(nearest),
            });
        }
    }
    Ok(out)
}

/// Outcome of the q = 1 finite-population ESS formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FiniteEss {
    /// `i / N` strictly inside `(0, 1)`.
    Interior(f64),
    /// The formula gives a value outside `(0, 1)`.
    Outside(f64),
    /// `a - c + d - b = 0`.
    Degenerate,
}

impl FiniteEss {
    pub fn interior(&self) -> Option<f64> {
        match self {
            FiniteEss::Interior(x) => Some(*x),
            _ => None,
        }
    }
}

/// `i / N = (d - b + (a - d) / N) / (a - c + d - b)`, where `f_A(i) = f_B(i)`.
pub fn ess_finite_q1(game: &GameMatrix, n: usize) -> Result<FiniteEss> {
    check_size(n)?;
    let nf = n as f64;
    let denom = game.a - game.c + game.d - game.b;
    if denom == 0.0 {
        return Ok(FiniteEss::Degenerate);
    }
    let x = (game.d - game.b + (game.a - game.d) / nf) / denom;
    Ok(if x > 0.0 && x < 1.0 {
        FiniteEss::Interior(x)
    } else {
        FiniteEss::Outside(x)
    })
}

/// Coefficients `(A, B, C)` of `A x^2 + B x + C = 0` in `x = i / N`.
///
/// For `q = 0` the balance condition is `(N - i) f_A = i f_B`; for `q = 2`
/// it reduces to `i f_A = (N - i) f_B`. Multiplying through by `N - 1` and
/// dividing by `N^2` gives
///
/// ```text
/// q = 0: (a + c - b - d) x^2 + (d + 2b - a - (a + d)/N) x + (a/N - b)
/// q = 2: (a + c - b - d) x^2 + (b + 2d - c - (a + d)/N) x + (d/N - d)
/// ```
pub fn iss_quadratic_coefficients(game: &GameMatrix, n: usize, q: f64) -> Result<(f64, f64, f64)> {
    check_size(n)?;
    let nf = n as f64;
    let GameMatrix { a, b, c, d } = *game;
    let quad = a + c - b - d;
    if q == 0.0 {
        Ok((quad, d + 2.0 * b - a - (a + d) / nf, a / nf - b))
    } else if q == 2.0 {
        Ok((quad, b + 2.0 * d - c - (a + d) / nf, d / nf - d))
    } else {
        Err(Error::UnsupportedQ(q))
    }
}

/// Real roots in `(0, 1)` of the q = 0 or q = 2 candidate quadratic, ascending.
pub fn iss_quadratic(game: &GameMatrix, n: usize, q: f64) -> Result<Vec<f64>> {
    let (qa, qb, qc) = iss_quadratic_coefficients(game, n, q)?;
    let mut roots = Vec::with_capacity(2);
    if qa == 0.0 {
        if qb != 0.0 {
            roots.push(-qc / qb);
        }
    } else {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc < 0.0 {
            return Ok(Vec::new());
        }
        if disc == 0.0 {
            roots.push(-qb / (2.0 * qa));
        } else {
            // Avoids cancellation between -b and sqrt(disc).
            let s = disc.sqrt();
            let t = -0.5 * (qb + qb.signum() * s);
            if t != 0.0 {
                roots.push(t / qa);
                roots.push(qc / t);
            } else {
                roots.push(s / (2.0 * qa));
                roots.push(-s / (2.0 * qa));
            }
        }
    }
    roots.retain(|x| *x > 0.0 && *x < 1.0);
    roots.sort_by(|x, y| x.partial_cmp(y).expect("finite roots"));
    Ok(roots)
}

fn check_q_not_one(q: f64) -> Result<()> {
    if !q.is_finite() || q == 1.0 {
        return Err(Error::InvalidParameter {
            name: "q",
            value: q,
            reason: "q = 1 has no interior balance point off the neutral landscape",
        });
    }
    Ok(())
}

/// `i / N = 1 / (1 + r^(1/(q-1)))` for the q-replicator on the Moran landscape.
pub fn iss_moran_qrep(r: f64, q: f64) -> Result<f64> {
    check_q_not_one(q)?;
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::InvalidParameter {
            name: "r",
            value: r,
            reason: "relative fitness must be finite and positive",
        });
    }
    Ok(logistic(-r.ln() / (q - 1.0)))
}

/// q-Fermi variant of [`iss_moran_qrep`]: `r` replaced by `exp(beta (r - 1))`.
pub fn iss_moran_qfermi(r: f64, q: f64, beta: f64) -> Result<f64> {
    check_q_not_one(q)?;
    if !(r.is_finite() && beta.is_finite() && beta >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "beta",
            value: beta,
            reason: "beta must be finite and non-negative with finite r",
        });
    }
    Ok(logistic(-beta * (r - 1.0) / (q - 1.0)))
}

/// Analytic candidate locations where a formula exists, as state coordinates.
///
/// Covers the q-replicator at `q = 0, 1, 2` on game landscapes and the
/// q-replicator / q-Fermi with `q != 1` on Moran landscapes. Returns an
/// empty list when no formula applies.
pub fn analytic_candidates(spec: &IncentiveSpec, n: usize) -> Result<Vec<IssCandidate>> {
    check_size(n)?;
    let nf = n as f64;
    let fractions: Vec<f64> = match (spec.family.canonical(), &spec.landscape) {
        (CanonicalFamily::QReplicator { q }, landscape) if landscape.moran_r().is_some() => {
            let r = landscape.moran_r().unwrap_or(1.0);
            if q == 1.0 {
                if r == 1.0 {
                    vec![0.5]
                } else {
                    Vec::new()
                }
            } else {
                vec![iss_moran_qrep(r, q)?]
            }
        }
        (CanonicalFamily::QFermi { q, beta }, landscape) if landscape.moran_r().is_some() => {
            let r = landscape.moran_r().unwrap_or(1.0);
            if q == 1.0 {
                if beta * (r - 1.0) == 0.0 {
                    vec![0.5]
                } else {
                    Vec::new()
                }
            } else {
                vec![iss_moran_qfermi(r, q, beta)?]
            }
        }
        (CanonicalFamily::QReplicator { q }, FitnessLandscape::GameLinear(game)) => {
            if q == 1.0 {
                ess_finite_q1(game, n)?.interior().into_iter().collect()
            } else if q == 0.0 || q == 2.0 {
                iss_quadratic(game, n, q)?
            } else {
                Vec::new()
            }
        }
        _ => Vec::new(),
    };
    let mut out = Vec::with_capacity(fractions.len());
    for x in fractions {
        let location = x * nf;
        let nearest = (location.round() as usize).clamp(1, n - 1);
        out.push(IssCandidate {
            location,
            kind: CandidateKind::AnalyticRoot,
            residual: normalized_delta(spec, nearest, n)?,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Family;

    fn fig3_game() -> GameMatrix {
        GameMatrix::new(20.0, 1.0, 7.0, 10.0).unwrap()
    }

    #[test]
    fn hawk_dove_center_is_exact_for_all_q() {
        let landscape = FitnessLandscape::GameLinear(GameMatrix::hawk_dove());
        for n in [4usize, 10, 30] {
            for q in [0.0, 1.0, 2.0] {
                let spec = IncentiveSpec::q_replicator(q, landscape.clone());
                let cands = iss_candidates(&spec, n).unwrap();
                assert!(
                    cands
                        .iter()
                        .any(|c| c.kind == CandidateKind::ExactInteger
                            && c.location == (n / 2) as f64)
                );
            }
        }
    }

    #[test]
    fn moran_replicator_has_no_candidate() {
        let spec = IncentiveSpec::new(Family::Replicator, FitnessLandscape::moran(2.0).unwrap());
        assert!(iss_candidates(&spec, 10).unwrap().is_empty());
        assert!(analytic_candidates(&spec, 10).unwrap().is_empty());
    }

    #[test]
    fn figure_three_replicator_between_four_and_five() {
        let spec = IncentiveSpec::new(
            Family::Replicator,
            FitnessLandscape::GameLinear(fig3_game()),
        );
        let cands = iss_candidates(&spec, 10).unwrap();
        assert_eq!(cands.len(), 1);
        assert_eq!(
            cands[0].kind,
            CandidateKind::SignChangeInterval { lo: 4, hi: 5 }
        );
        let x = ess_finite_q1(&fig3_game(), 10).unwrap().interior().unwrap();
        assert!((x - 10.0 / 22.0).abs() < 1e-15);
    }

    #[test]
    fn finite_ess_examples() {
        for n in [2usize, 7, 100] {
            assert_eq!(
                ess_finite_q1(&GameMatrix::hawk_dove(), n).unwrap(),
                FiniteEss::Interior(0.5)
            );
        }
        let flat = GameMatrix::new(3.0, 3.0, 1.0, 1.0).unwrap();
        assert_eq!(ess_finite_q1(&flat, 10).unwrap(), FiniteEss::Degenerate);
        let dominated = GameMatrix::new(3.0, 3.0, 1.0, 2.0).unwrap();
        assert!(matches!(
            ess_finite_q1(&dominated, 10).unwrap(),
            FiniteEss::Outside(_)
        ));
    }

    #[test]
    fn hawk_dove_quadratics_have_center_root() {
        for n in [4usize, 10, 50] {
            for q in [0.0, 2.0] {
                let roots = iss_quadratic(&GameMatrix::hawk_dove(), n, q).unwrap();
                assert!(
                    roots.iter().any(|x| (x - 0.5).abs() < 1e-12),
                    "n={n} q={q} {roots:?}"
                );
            }
        }
    }

    #[test]
    fn neutral_game_projection_degenerates_to_linear() {
        let game = GameMatrix::new(3.0, 3.0, 3.0, 3.0).unwrap();
        let (qa, _, _) = iss_quadratic_coefficients(&game, 10, 0.0).unwrap();
        assert_eq!(qa, 0.0);
        let roots = iss_quadratic(&game, 10, 0.0).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - 0.5).abs() < 1e-15);
        let spec = IncentiveSpec::q_replicator(0.0, FitnessLandscape::GameLinear(game));
        let scan = iss_candidates(&spec, 10).unwrap();
        assert_eq!(scan.len(), 1);
        assert_eq!(scan[0].location, 5.0);
        assert_eq!(scan[0].kind, CandidateKind::ExactInteger);
    }

    #[test]
    fn figure_three_projection_zero_or_two() {
        let game = fig3_game();
        assert!(iss_quadratic(&game, 4, 0.0).unwrap().is_empty());
        assert_eq!(iss_quadratic(&game, 10, 0.0).unwrap().len(), 2);
        let spec = IncentiveSpec::q_replicator(0.0, FitnessLandscape::GameLinear(game));
        assert!(iss_candidates(&spec, 4).unwrap().is_empty());
        assert_eq!(iss_candidates(&spec, 10).unwrap().len(), 2);
    }

    #[test]
    fn unsupported_quadratic_q() {
        assert_eq!(
            iss_quadratic(&fig3_game(), 10, 1.0),
            Err(Error::UnsupportedQ(1.0))
        );
    }

    #[test]
    fn moran_point_examples() {
        assert!((iss_moran_qrep(2.0, 0.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((iss_moran_qrep(2.0, 2.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        for q in [-1.0, 0.0, 0.5, 2.0, 7.0] {
            assert_eq!(iss_moran_qrep(1.0, q).unwrap(), 0.5);
        }
        assert!(iss_moran_qrep(2.0, 1.0).is_err());
        assert!(iss_moran_qrep(-2.0, 0.0).is_err());
        // Fermi variant is the q-replicator point at r' = e^{beta (r - 1)}.
        let direct = iss_moran_qrep(1f64.exp(), 0.0).unwrap();
        assert!((iss_moran_qfermi(2.0, 0.0, 1.0).unwrap() - direct).abs() < 1e-15);
    }

    #[test]
    fn eq7_brackets_scan() {
        let spec = IncentiveSpec::q_replicator(0.0, FitnessLandscape::moran(2.0).unwrap());
        let cands = iss_candidates(&spec, 10).unwrap();
        assert_eq!(cands.len(), 1);
        let x = 10.0 * 2.0 / 3.0;
        match cands[0].kind {
            CandidateKind::SignChangeInterval { lo, hi } => {
                assert!(lo as f64 <= x && x <= hi as f64)
            }
            other => panic!("unexpected {other:?}"),
        }
        let analytic = analytic_candidates(&spec, 10).unwrap();
        assert!((analytic[0].location - x).abs() < 1e-12);
    }
}
