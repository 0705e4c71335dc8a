//! Populations, games, fitness landscapes and incentive specifications.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::incentives;

/// One of the two competing types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Type {
    A,
    B,
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::A => f.write_str("A"),
            Type::B => f.write_str("B"),
        }
    }
}

/// `i` individuals of type A in a population of `n`; type B count is `n - i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PopulationState {
    i: usize,
    n: usize,
}

impl PopulationState {
    pub fn new(i: usize, n: usize) -> Result<Self> {
        check_size(n)?;
        if i > n {
            return Err(Error::StateOutOfRange { i, n, lo: 0, hi: n });
        }
        Ok(Self { i, n })
    }

    pub fn count_a(&self) -> usize {
        self.i
    }

    pub fn count_b(&self) -> usize {
        self.n - self.i
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn is_interior(&self) -> bool {
        self.i > 0 && self.i < self.n
    }
}

pub(crate) fn check_size(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::PopulationTooSmall(n))
    } else {
        Ok(())
    }
}

pub(crate) fn check_interior(i: usize, n: usize) -> Result<()> {
    check_size(n)?;
    if i == 0 || i >= n {
        Err(Error::StateOutOfRange {
            i,
            n,
            lo: 1,
            hi: n - 1,
        })
    } else {
        Ok(())
    }
}

/// 2x2 payoff matrix `[[a, b], [c, d]]`; row A meets (A, B), row B meets (A, B).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameMatrix {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl GameMatrix {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        for (name, value) in [("a", a), ("b", b), ("c", c), ("d", d)] {
            if !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "payoff entries must be finite",
                });
            }
        }
        Ok(Self { a, b, c, d })
    }

    /// Hawk-Dove instance with `a = d = 1`, `b = c = 2`.
    pub fn hawk_dove() -> Self {
        Self {
            a: 1.0,
            b: 2.0,
            c: 2.0,
            d: 1.0,
        }
    }

    /// Linear fitness of both types at interior state `i` of a population of `n`.
    ///
    /// Each fitness is a convex combination of its row's payoffs weighted by
    /// the opponents an individual meets; `i - 1` other A's and `n - i` B's
    /// for an A individual.
    pub fn fitness(&self, i: usize, n: usize) -> (f64, f64) {
        let m = (n - 1) as f64;
        let f_a = if self.a == self.b {
            self.a
        } else {
            self.a * ((i - 1) as f64 / m) + self.b * ((n - i) as f64 / m)
        };
        let f_b = if self.c == self.d {
            self.c
        } else {
            self.c * (i as f64 / m) + self.d * ((n - i - 1) as f64 / m)
        };
        (f_a, f_b)
    }
}

/// Map from population state to per-type fitness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FitnessLandscape {
    GameLinear(GameMatrix),
    /// Constant fitness `r` for A and `1` for B.
    MoranR(f64),
    Neutral,
    /// Fitness values for interior states `1..=N-1`, index `i - 1`.
    Tabulated {
        f_a: Vec<f64>,
        f_b: Vec<f64>,
    },
}

impl FitnessLandscape {
    pub fn moran(r: f64) -> Result<Self> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::InvalidParameter {
                name: "r",
                value: r,
                reason: "relative fitness must be finite and positive",
            });
        }
        Ok(Self::MoranR(r))
    }

    pub fn tabulated(f_a: Vec<f64>, f_b: Vec<f64>) -> Result<Self> {
        if f_a.len() != f_b.len() {
            return Err(Error::TabulatedLength {
                got: f_b.len(),
                expected: f_a.len(),
            });
        }
        if let Some(index) = f_a.iter().chain(&f_b).position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteTabulated {
                index: index % f_a.len().max(1),
            });
        }
        Ok(Self::Tabulated { f_a, f_b })
    }

    /// `(f_A(i), f_B(i))` at an interior state.
    pub fn fitness(&self, i: usize, n: usize) -> Result<(f64, f64)> {
        check_interior(i, n)?;
        match self {
            Self::GameLinear(game) => Ok(game.fitness(i, n)),
            Self::MoranR(r) => Ok((*r, 1.0)),
            Self::Neutral => Ok((1.0, 1.0)),
            Self::Tabulated { f_a, f_b } => {
                if f_a.len() != n - 1 || f_b.len() != n - 1 {
                    return Err(Error::TabulatedLength {
                        got: f_a.len().min(f_b.len()),
                        expected: n - 1,
                    });
                }
                let (fa, fb) = (f_a[i - 1], f_b[i - 1]);
                if !fa.is_finite() || !fb.is_finite() {
                    return Err(Error::NonFiniteTabulated { index: i - 1 });
                }
                Ok((fa, fb))
            }
        }
    }

    /// Relative fitness `r` when the landscape is constant across states.
    pub fn moran_r(&self) -> Option<f64> {
        match self {
            Self::MoranR(r) => Some(*r),
            Self::Neutral => Some(1.0),
            _ => None,
        }
    }

    /// The same landscape with every fitness multiplied by `c`.
    ///
    /// Constant landscapes become tabulated, since `(c r, c)` is no longer a
    /// Moran landscape.
    pub fn scaled(&self, c: f64, n: usize) -> Result<Self> {
        check_size(n)?;
        let mut f_a = Vec::with_capacity(n - 1);
        let mut f_b = Vec::with_capacity(n - 1);
        for i in 1..n {
            let (a, b) = self.fitness(i, n)?;
            f_a.push(c * a);
            f_b.push(c * b);
        }
        Self::tabulated(f_a, f_b)
    }
}

/// Incentive family, one row of the incentive catalog.
///
/// The named families are aliases: projection is the q-replicator at `q = 0`,
/// replicator at `q = 1`, logit is the q-Fermi at `q = 0` and Fermi at `q = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Family {
    Projection,
    Replicator,
    QReplicator { q: f64 },
    Logit { beta: f64 },
    Fermi { beta: f64 },
    QFermi { q: f64, beta: f64 },
    BestReply,
}

/// Canonical form every family reduces to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CanonicalFamily {
    QReplicator { q: f64 },
    QFermi { q: f64, beta: f64 },
    BestReply,
}

impl Family {
    pub fn canonical(&self) -> CanonicalFamily {
        match *self {
            Family::Projection => CanonicalFamily::QReplicator { q: 0.0 },
            Family::Replicator => CanonicalFamily::QReplicator { q: 1.0 },
            Family::QReplicator { q } => CanonicalFamily::QReplicator { q },
            Family::Logit { beta } => CanonicalFamily::QFermi { q: 0.0, beta },
            Family::Fermi { beta } => CanonicalFamily::QFermi { q: 1.0, beta },
            Family::QFermi { q, beta } => CanonicalFamily::QFermi { q, beta },
            Family::BestReply => CanonicalFamily::BestReply,
        }
    }

    /// The exponent `q` on type counts, if the family has one.
    pub fn q(&self) -> Option<f64> {
        match self.canonical() {
            CanonicalFamily::QReplicator { q } | CanonicalFamily::QFermi { q, .. } => Some(q),
            CanonicalFamily::BestReply => None,
        }
    }

    pub fn beta(&self) -> Option<f64> {
        match self.canonical() {
            CanonicalFamily::QFermi { beta, .. } => Some(beta),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Projection => "projection",
            Family::Replicator => "replicator",
            Family::QReplicator { .. } => "qreplicator",
            Family::Logit { .. } => "logit",
            Family::Fermi { .. } => "fermi",
            Family::QFermi { .. } => "qfermi",
            Family::BestReply => "best-reply",
        }
    }
}

/// Incentive family together with the landscape it acts on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncentiveSpec {
    pub family: Family,
    pub landscape: FitnessLandscape,
}

impl IncentiveSpec {
    pub fn new(family: Family, landscape: FitnessLandscape) -> Self {
        Self { family, landscape }
    }

    pub fn q_replicator(q: f64, landscape: FitnessLandscape) -> Self {
        Self::new(Family::QReplicator { q }, landscape)
    }

    pub fn q_fermi(q: f64, beta: f64, landscape: FitnessLandscape) -> Self {
        Self::new(Family::QFermi { q, beta }, landscape)
    }

    /// Check parameters and interior positivity; never fails, returns the issues found.
    pub fn validate(&self, n: usize) -> Validation {
        validate_spec(self, n)
    }
}

/// Problem found by [`validate_spec`].
#[derive(Debug, Clone, PartialEq)]
pub enum SpecIssue {
    PopulationTooSmall(usize),
    NonFiniteQ(f64),
    InvalidBeta(f64),
    /// Landscape could not be evaluated at this state.
    Landscape {
        i: usize,
        error: Error,
    },
    NonPositiveIncentive {
        i: usize,
        ty: Type,
    },
    /// Best reply has no positive incentive; it is treated as a large-beta limit.
    LimitOnly,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Validation {
    pub issues: Vec<SpecIssue>,
}

impl Validation {
    pub fn is_ok(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn is_limit_only(&self) -> bool {
        self.issues.contains(&SpecIssue::LimitOnly)
    }
}

/// Parameter sanity and interior positivity of the incentive for `1..=n-1`.
pub fn validate_spec(spec: &IncentiveSpec, n: usize) -> Validation {
    let mut issues = Vec::new();
    if n < 2 {
        issues.push(SpecIssue::PopulationTooSmall(n));
    }
    match spec.family.canonical() {
        CanonicalFamily::BestReply => {
            issues.push(SpecIssue::LimitOnly);
            return Validation { issues };
        }
        CanonicalFamily::QReplicator { q } => {
            if !q.is_finite() {
                issues.push(SpecIssue::NonFiniteQ(q));
            }
        }
        CanonicalFamily::QFermi { q, beta } => {
            if !q.is_finite() {
                issues.push(SpecIssue::NonFiniteQ(q));
            }
            if !(beta.is_finite() && beta >= 0.0) {
                issues.push(SpecIssue::InvalidBeta(beta));
            }
        }
    }
    if !issues.is_empty() {
        return Validation { issues };
    }
    for i in 1..n {
        match incentives::evaluate(spec, i, n) {
            Ok(_) => {}
            Err(Error::NonPositiveIncentive { ty, i }) => {
                issues.push(SpecIssue::NonPositiveIncentive { i, ty })
            }
            Err(error) => issues.push(SpecIssue::Landscape { i, error }),
        }
    }
    Validation { issues }
}
