//! Command-line model flags and their resolution into library types.

use std::fmt;
use std::str::FromStr;

use clap::{Args, ValueEnum};
use incentive_chain::{Family, FitnessLandscape, GameMatrix, IncentiveSpec};

use crate::output::Value;

/// Bad flags or an invalid model; maps to exit code 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

macro_rules! usage {
    ($($arg:tt)*) => {
        $crate::params::UsageError(format!($($arg)*))
    };
}
pub(crate) use usage;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Projection,
    Replicator,
    Qreplicator,
    Logit,
    Fermi,
    Qfermi,
    BestReply,
}

impl FamilyName {
    fn takes_q(self) -> bool {
        matches!(self, FamilyName::Qreplicator | FamilyName::Qfermi)
    }

    fn takes_beta(self) -> bool {
        matches!(
            self,
            FamilyName::Logit | FamilyName::Fermi | FamilyName::Qfermi
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyName::Projection => "projection",
            FamilyName::Replicator => "replicator",
            FamilyName::Qreplicator => "qreplicator",
            FamilyName::Logit => "logit",
            FamilyName::Fermi => "fermi",
            FamilyName::Qfermi => "qfermi",
            FamilyName::BestReply => "best-reply",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LandscapeName {
    Neutral,
    Moran,
    Game,
}

impl LandscapeName {
    pub fn as_str(self) -> &'static str {
        match self {
            LandscapeName::Neutral => "neutral",
            LandscapeName::Moran => "moran",
            LandscapeName::Game => "game",
        }
    }
}

/// `a,b,c,d` payoff entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameArg(pub [f64; 4]);

impl FromStr for GameArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(format!(
                "expected four comma-separated payoffs a,b,c,d, got {s:?}"
            ));
        }
        let mut out = [0.0; 4];
        for (slot, part) in out.iter_mut().zip(&parts) {
            *slot = part
                .parse::<f64>()
                .map_err(|e| format!("bad payoff {part:?}: {e}"))?;
        }
        Ok(GameArg(out))
    }
}

/// Flags selecting the incentive, landscape and population size.
#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Incentive family
    #[arg(long, value_enum, default_value = "qreplicator")]
    pub family: FamilyName,

    /// Exponent on type counts (qreplicator, qfermi)
    #[arg(long, allow_negative_numbers = true)]
    pub q: Option<f64>,

    /// Inverse temperature (logit, fermi, qfermi)
    #[arg(long)]
    pub beta: Option<f64>,

    /// Fitness landscape; inferred from --game or --r when omitted
    #[arg(long, value_enum)]
    pub landscape: Option<LandscapeName>,

    /// Relative fitness of type A on the Moran landscape
    #[arg(long)]
    pub r: Option<f64>,

    /// Payoff matrix entries a,b,c,d
    #[arg(long, allow_hyphen_values = true)]
    pub game: Option<GameArg>,

    /// Population size
    #[arg(long = "N")]
    pub n: Option<usize>,
}

/// Fully resolved model parameters for one computation.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub family: FamilyName,
    pub q: Option<f64>,
    pub beta: Option<f64>,
    pub landscape: LandscapeName,
    pub r: Option<f64>,
    pub game: Option<[f64; 4]>,
    pub n: usize,
}

impl ModelArgs {
    /// Resolve the flags; `--N` is required.
    pub fn resolve(&self) -> Result<ModelParams, UsageError> {
        let n = self.n.ok_or_else(|| usage!("--N is required"))?;
        Ok(ModelParams {
            n,
            ..self.resolve_partial()
        })
    }

    /// Resolve the flags, leaving `n = 0` when `--N` is absent.
    pub fn resolve_partial(&self) -> ModelParams {
        let landscape = self.landscape.unwrap_or(if self.game.is_some() {
            LandscapeName::Game
        } else if self.r.is_some() {
            LandscapeName::Moran
        } else {
            LandscapeName::Neutral
        });
        ModelParams {
            family: self.family,
            q: self.q,
            beta: self.beta,
            landscape,
            r: self.r,
            game: self.game.map(|g| g.0),
            n: self.n.unwrap_or(0),
        }
    }
}

/// Column names shared by every table that describes a model.
pub const PARAM_COLUMNS: [&str; 10] = [
    "family",
    "q",
    "beta",
    "landscape",
    "r",
    "a",
    "b",
    "c",
    "d",
    "N",
];

impl ModelParams {
    pub fn family(&self) -> Result<Family, UsageError> {
        let name = self.family.as_str();
        if !self.family.takes_q() && self.q.is_some() {
            return Err(usage!("--q does not apply to family {name}"));
        }
        if !self.family.takes_beta() && self.beta.is_some() {
            return Err(usage!("--beta does not apply to family {name}"));
        }
        let q = || self.q.ok_or_else(|| usage!("family {name} requires --q"));
        let beta = || {
            self.beta
                .ok_or_else(|| usage!("family {name} requires --beta"))
        };
        Ok(match self.family {
            FamilyName::Projection => Family::Projection,
            FamilyName::Replicator => Family::Replicator,
            FamilyName::Qreplicator => Family::QReplicator { q: q()? },
            FamilyName::Logit => Family::Logit { beta: beta()? },
            FamilyName::Fermi => Family::Fermi { beta: beta()? },
            FamilyName::Qfermi => Family::QFermi {
                q: q()?,
                beta: beta()?,
            },
            FamilyName::BestReply => Family::BestReply,
        })
    }

    pub fn landscape(&self) -> Result<FitnessLandscape, UsageError> {
        match self.landscape {
            LandscapeName::Neutral => {
                if self.r.is_some() || self.game.is_some() {
                    return Err(usage!(
                        "--r and --game do not apply to the neutral landscape"
                    ));
                }
                Ok(FitnessLandscape::Neutral)
            }
            LandscapeName::Moran => {
                if self.game.is_some() {
                    return Err(usage!("--game does not apply to the moran landscape"));
                }
                let r = self
                    .r
                    .ok_or_else(|| usage!("the moran landscape requires --r"))?;
                FitnessLandscape::moran(r).map_err(|e| usage!("{e}"))
            }
            LandscapeName::Game => {
                if self.r.is_some() {
                    return Err(usage!("--r does not apply to the game landscape"));
                }
                let [a, b, c, d] = self
                    .game
                    .ok_or_else(|| usage!("the game landscape requires --game a,b,c,d"))?;
                let game = GameMatrix::new(a, b, c, d).map_err(|e| usage!("{e}"))?;
                Ok(FitnessLandscape::GameLinear(game))
            }
        }
    }

    pub fn game_matrix(&self) -> Result<GameMatrix, UsageError> {
        match self.landscape()? {
            FitnessLandscape::GameLinear(g) => Ok(g),
            _ => Err(usage!("a --game landscape is required here")),
        }
    }

    /// Incentive spec, without positivity checks.
    pub fn spec(&self) -> Result<IncentiveSpec, UsageError> {
        if self.n < 2 {
            return Err(usage!("--N must be at least 2, got {}", self.n));
        }
        Ok(IncentiveSpec::new(self.family()?, self.landscape()?))
    }

    /// Incentive spec that passed [`incentive_chain::validate_spec`].
    pub fn validated_spec(&self) -> Result<IncentiveSpec, UsageError> {
        let spec = self.spec()?;
        let validation = spec.validate(self.n);
        if validation.is_limit_only() {
            return Err(usage!(
                "best-reply is only available as a large-beta limit (see `fixation --family fermi`)"
            ));
        }
        if let Some(issue) = validation.issues.first() {
            return Err(usage!(
                "invalid incentive/landscape combination ({} issue(s)), first: {issue:?}",
                validation.issues.len()
            ));
        }
        Ok(spec)
    }

    pub fn param_values(&self) -> Vec<Value> {
        let game = self.game.filter(|_| self.landscape == LandscapeName::Game);
        let entry = |k: usize| Value::from(game.map(|g| g[k]));
        let r = match self.landscape {
            LandscapeName::Moran => self.r,
            LandscapeName::Neutral => Some(1.0),
            LandscapeName::Game => None,
        };
        let q = match self.family {
            FamilyName::Projection | FamilyName::Logit => Some(0.0),
            FamilyName::Replicator | FamilyName::Fermi => Some(1.0),
            FamilyName::BestReply => None,
            _ => self.q,
        };
        vec![
            self.family.as_str().into(),
            q.into(),
            self.beta.into(),
            self.landscape.as_str().into(),
            r.into(),
            entry(0),
            entry(1),
            entry(2),
            entry(3),
            self.n.into(),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(family: FamilyName) -> ModelParams {
        ModelParams {
            family,
            q: None,
            beta: None,
            landscape: LandscapeName::Neutral,
            r: None,
            game: None,
            n: 10,
        }
    }

    #[test]
    fn game_arg_parsing() {
        assert_eq!(
            "1,2,2,1".parse::<GameArg>().unwrap(),
            GameArg([1.0, 2.0, 2.0, 1.0])
        );
        assert_eq!(
            "-1, 2.5,0,3".parse::<GameArg>().unwrap(),
            GameArg([-1.0, 2.5, 0.0, 3.0])
        );
        assert!("1,2,3".parse::<GameArg>().is_err());
        assert!("1,x,3,4".parse::<GameArg>().is_err());
    }

    #[test]
    fn family_flag_requirements() {
        assert!(params(FamilyName::Qreplicator).family().is_err());
        let mut p = params(FamilyName::Projection);
        p.q = Some(1.0);
        assert!(p.family().is_err());
        let mut p = params(FamilyName::Qfermi);
        p.q = Some(0.5);
        assert!(p.family().is_err());
        p.beta = Some(2.0);
        assert_eq!(p.family().unwrap(), Family::QFermi { q: 0.5, beta: 2.0 });
    }

    #[test]
    fn landscape_flag_requirements() {
        let mut p = params(FamilyName::Replicator);
        p.landscape = LandscapeName::Moran;
        assert!(p.landscape().is_err());
        p.r = Some(2.0);
        assert_eq!(p.landscape().unwrap(), FitnessLandscape::MoranR(2.0));
        p.landscape = LandscapeName::Neutral;
        assert!(p.landscape().is_err());
    }

    #[test]
    fn validation_rejects_negative_replicator() {
        let mut p = params(FamilyName::Replicator);
        p.landscape = LandscapeName::Game;
        p.game = Some([-1.0, -1.0, 1.0, 1.0]);
        assert!(p.spec().is_ok());
        assert!(p.validated_spec().is_err());
        p.family = FamilyName::BestReply;
        assert!(p.validated_spec().unwrap_err().0.contains("limit"));
    }
}
