//! Cartesian parameter sweeps.

use std::str::FromStr;

use anyhow::Result;
use clap::ValueEnum;
use incentive_chain::equilibria::{iss_candidates, CandidateKind};
use incentive_chain::{fixation_exact, stationary};
use rayon::prelude::*;

use crate::output::{Table, Value};
use crate::params::{usage, LandscapeName, ModelParams, UsageError, PARAM_COLUMNS};

/// Largest Cartesian product a sweep may expand to.
pub const MAX_CELLS: u128 = 10_000_000;

pub const AXIS_NAMES: [&str; 10] = ["q", "beta", "r", "N", "mu", "a", "b", "c", "d", "start"];

/// `name=v1,v2,...` or `name=start:stop:step` (inclusive).
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

fn parse_number(name: &str, s: &str) -> Result<f64, String> {
    let v = s
        .trim()
        .parse::<f64>()
        .map_err(|e| format!("axis {name}: bad value {s:?}: {e}"))?;
    if !v.is_finite() {
        return Err(format!("axis {name}: value {s:?} is not finite"));
    }
    Ok(v)
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, spec) = s
            .split_once('=')
            .ok_or_else(|| format!("expected name=values, got {s:?}"))?;
        let name = name.trim();
        if !AXIS_NAMES.contains(&name) {
            return Err(format!(
                "unknown axis {name:?}; expected one of {}",
                AXIS_NAMES.join(", ")
            ));
        }
        let values = if spec.contains(':') {
            let parts: Vec<&str> = spec.split(':').collect();
            if parts.len() != 3 {
                return Err(format!("axis {name}: range must be start:stop:step"));
            }
            let start = parse_number(name, parts[0])?;
            let stop = parse_number(name, parts[1])?;
            let step = parse_number(name, parts[2])?;
            if step <= 0.0 || stop < start {
                return Err(format!("axis {name}: need step > 0 and stop >= start"));
            }
            let span = (stop - start) / step;
            if span >= MAX_CELLS as f64 {
                return Err(format!("axis {name}: more than {MAX_CELLS} values"));
            }
            // Small slack so that e.g. 0:1:0.1 includes 1.
            let count = (span + 1e-9).floor() as usize + 1;
            (0..count).map(|k| start + k as f64 * step).collect()
        } else {
            spec.split(',')
                .map(|v| parse_number(name, v))
                .collect::<Result<Vec<_>, _>>()?
        };
        if values.is_empty() {
            return Err(format!("axis {name}: no values"));
        }
        Ok(Axis {
            name: name.to_string(),
            values,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Measure {
    /// rho_start, rho_A, rho_B and the B/A ratio
    Fixation,
    /// Boundary stationary masses and their log ratio (needs mu)
    Stationary,
    /// Number and locations of scan-detected ISS candidates
    Iss,
}

impl Measure {
    fn columns(self) -> &'static [&'static str] {
        match self {
            Measure::Fixation => &["rho_start", "rho_a", "rho_b", "log_ratio"],
            Measure::Stationary => &["pi_0", "pi_N", "log_boundary_ratio"],
            Measure::Iss => &["candidates", "locations"],
        }
    }
}

/// One point of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub params: ModelParams,
    pub mu: Option<f64>,
    pub start: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub base: Cell,
    pub axes: Vec<Axis>,
    pub measure: Measure,
}

fn as_count(name: &str, v: f64) -> Result<usize, UsageError> {
    if v < 0.0 || v.fract() != 0.0 || v > u32::MAX as f64 {
        return Err(usage!("axis {name}: {v} is not a non-negative integer"));
    }
    Ok(v as usize)
}

impl Sweep {
    pub fn cell_count(&self) -> u128 {
        self.axes
            .iter()
            .try_fold(1u128, |acc, a| acc.checked_mul(a.values.len() as u128))
            .unwrap_or(u128::MAX)
    }

    /// Check the axes and the fixed parameters; individual cells may still
    /// fail validation at evaluation time.
    pub fn check(&self) -> Result<(), UsageError> {
        for (k, axis) in self.axes.iter().enumerate() {
            if self.axes[..k].iter().any(|a| a.name == axis.name) {
                return Err(usage!("axis {} given twice", axis.name));
            }
        }
        let cells = self.cell_count();
        if cells > MAX_CELLS {
            return Err(usage!(
                "sweep has {cells} cells, more than the cap of {MAX_CELLS}"
            ));
        }
        let has = |n: &str| self.axes.iter().any(|a| a.name == n);
        if self.base.params.n == 0 && !has("N") {
            return Err(usage!("--N or an N axis is required"));
        }
        if self.measure == Measure::Stationary && self.base.mu.is_none() && !has("mu") {
            return Err(usage!("the stationary measure needs --mu or a mu axis"));
        }
        Ok(())
    }

    /// Parameters of cell `index` in row-major axis order (last axis fastest).
    pub fn cell(&self, mut index: u128) -> Result<Cell, UsageError> {
        let mut cell = self.base.clone();
        let mut picks = vec![0usize; self.axes.len()];
        for (k, axis) in self.axes.iter().enumerate().rev() {
            let len = axis.values.len() as u128;
            picks[k] = (index % len) as usize;
            index /= len;
        }
        for (axis, &pick) in self.axes.iter().zip(&picks) {
            let v = axis.values[pick];
            let p = &mut cell.params;
            match axis.name.as_str() {
                "q" => p.q = Some(v),
                "beta" => p.beta = Some(v),
                "r" => {
                    p.r = Some(v);
                    p.landscape = LandscapeName::Moran;
                }
                "N" => p.n = as_count("N", v)?,
                "mu" => cell.mu = Some(v),
                "start" => cell.start = as_count("start", v)?,
                name => {
                    let slot = ["a", "b", "c", "d"]
                        .iter()
                        .position(|x| *x == name)
                        .expect("axis names are checked at parse time");
                    let game = p.game.get_or_insert([f64::NAN; 4]);
                    game[slot] = v;
                    p.landscape = LandscapeName::Game;
                }
            }
        }
        if let Some(game) = cell.params.game {
            if game.iter().any(|v| v.is_nan()) {
                return Err(usage!(
                    "payoff axes need --game for the entries they do not cover"
                ));
            }
        }
        Ok(cell)
    }

    pub fn columns(&self) -> Vec<String> {
        PARAM_COLUMNS
            .iter()
            .chain(&["mu", "start"])
            .chain(self.measure.columns())
            .map(|s| s.to_string())
            .collect()
    }

    /// Evaluate every cell in parallel; rows come back in axis order.
    pub fn run(&self) -> Result<Table> {
        self.check()?;
        let count = self.cell_count() as usize;
        let rows = (0..count)
            .into_par_iter()
            .map(|k| -> Result<Vec<Value>> {
                let cell = self.cell(k as u128)?;
                let mut row = cell.params.param_values();
                row.push(cell.mu.into());
                row.push(cell.start.into());
                row.extend(measure(self.measure, &cell)?);
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut table = Table::new(self.columns());
        for row in rows {
            table.push(row);
        }
        Ok(table)
    }
}

fn measure(m: Measure, cell: &Cell) -> Result<Vec<Value>> {
    let spec = cell.params.validated_spec()?;
    let n = cell.params.n;
    Ok(match m {
        Measure::Fixation => {
            if cell.start == 0 || cell.start >= n {
                return Err(
                    usage!("start {} is not an interior state for N = {n}", cell.start).into(),
                );
            }
            let res = fixation_exact(&spec, n)?;
            vec![
                res.rho[cell.start - 1].into(),
                res.rho_a().into(),
                res.rho_b.into(),
                res.log_ratio_b_over_a.into(),
            ]
        }
        Measure::Stationary => {
            let mu = cell
                .mu
                .ok_or_else(|| usage!("the stationary measure needs mu"))?;
            let dist = stationary(&spec, n, mu)?;
            vec![
                dist.pi[0].into(),
                dist.pi[n].into(),
                dist.log_boundary_ratio().into(),
            ]
        }
        Measure::Iss => {
            let cands = iss_candidates(&spec, n)?;
            let locations: Vec<String> = cands
                .iter()
                .map(|c| match c.kind {
                    CandidateKind::SignChangeInterval { lo, hi } => format!("{lo}-{hi}"),
                    _ => format!("{}", c.location),
                })
                .collect();
            vec![cands.len().into(), locations.join(";").into()]
        }
    })
}
