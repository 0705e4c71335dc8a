//! Data behind the four standard figures.
//!
//! Every table is computed serially in a fixed order so the CSV bytes do not
//! depend on thread count or platform scheduling.

use std::path::Path;

use anyhow::{Context, Result};
use incentive_chain::equilibria::{
    iss_candidates, iss_moran_qfermi, iss_moran_qrep, CandidateKind,
};
use incentive_chain::{fixation_exact, Family, FitnessLandscape, GameMatrix, IncentiveSpec};

use crate::output::{Format, Table, Value};

pub const FIG1_Q: [f64; 6] = [0.0, 0.5, 0.8, 0.9, 1.0, 2.0];
pub const FIG1_N_MAX: usize = 100;
pub const FIG1_HEATMAP_N_MAX: usize = 50;
pub const FIG2_BETA: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 10.0];
pub const FIG2_N: usize = 10;
pub const FIG3_GAME: [f64; 4] = [20.0, 1.0, 7.0, 10.0];
pub const FIG3_Q: [f64; 3] = [0.0, 1.0, 2.0];
pub const FIG3_N_MAX: usize = 60;
pub const FIG4_BETA: f64 = 1.0;

/// Heatmap q values: 0, 0.1, ..., 3.
pub fn fig1_heatmap_q() -> Vec<f64> {
    (0..=30).map(|k| k as f64 / 10.0).collect()
}

/// r = k/20 for k = 1..=40, which hits r = 1 exactly.
pub fn fig2_r() -> Vec<f64> {
    (1..=40).map(|k| k as f64 / 20.0).collect()
}

/// q = k/10 for k = 0..=30 with q = 1 left out (no interior point there).
pub fn fig4_q() -> Vec<f64> {
    (0..=30)
        .filter(|&k| k != 10)
        .map(|k| k as f64 / 10.0)
        .collect()
}

/// r = k/10 for k = 1..=30.
pub fn fig4_r() -> Vec<f64> {
    (1..=30).map(|k| k as f64 / 10.0).collect()
}

fn neutral_rho(q: f64, n: usize) -> Result<f64> {
    let spec = IncentiveSpec::q_replicator(q, FitnessLandscape::Neutral);
    Ok(fixation_exact(&spec, n)?.rho_a())
}

/// Neutral fixation probability against N for the six q curves.
pub fn fig1() -> Result<Table> {
    let mut t = Table::new(["q", "N", "rho_1"]);
    for q in FIG1_Q {
        for n in 2..=FIG1_N_MAX {
            t.push(vec![q.into(), n.into(), neutral_rho(q, n)?.into()]);
        }
    }
    Ok(t)
}

/// Neutral fixation probability over the (q, N) grid.
pub fn fig1_heatmap() -> Result<Table> {
    let mut t = Table::new(["q", "N", "rho_1"]);
    for q in fig1_heatmap_q() {
        for n in 2..=FIG1_HEATMAP_N_MAX {
            t.push(vec![q.into(), n.into(), neutral_rho(q, n)?.into()]);
        }
    }
    Ok(t)
}

/// Logit fixation probability against r on the Moran landscape.
pub fn fig2() -> Result<Table> {
    let mut t = Table::new(["beta", "r", "N", "rho_1"]);
    for beta in FIG2_BETA {
        for r in fig2_r() {
            let spec = IncentiveSpec::new(Family::Logit { beta }, FitnessLandscape::moran(r)?);
            let rho = fixation_exact(&spec, FIG2_N)?.rho_a();
            t.push(vec![beta.into(), r.into(), FIG2_N.into(), rho.into()]);
        }
    }
    Ok(t)
}

fn fig3_rows() -> Result<(Table, Table)> {
    let [a, b, c, d] = FIG3_GAME;
    let game = FitnessLandscape::GameLinear(GameMatrix::new(a, b, c, d)?);
    let mut cands = Table::new(["q", "N", "kind", "location", "x", "lo", "hi"]);
    let mut counts = Table::new(["q", "N", "candidates"]);
    for q in FIG3_Q {
        let spec = IncentiveSpec::q_replicator(q, game.clone());
        for n in 3..=FIG3_N_MAX {
            let found = iss_candidates(&spec, n)?;
            counts.push(vec![q.into(), n.into(), found.len().into()]);
            for cand in found {
                let (kind, lo, hi) = match cand.kind {
                    CandidateKind::ExactInteger => ("exact", Value::Null, Value::Null),
                    CandidateKind::SignChangeInterval { lo, hi } => {
                        ("interval", lo.into(), hi.into())
                    }
                    CandidateKind::AnalyticRoot => ("analytic", Value::Null, Value::Null),
                };
                cands.push(vec![
                    q.into(),
                    n.into(),
                    kind.into(),
                    cand.location.into(),
                    (cand.location / n as f64).into(),
                    lo,
                    hi,
                ]);
            }
        }
    }
    Ok((cands, counts))
}

/// Scan-detected ISS candidates for the figure game, one row each.
pub fn fig3() -> Result<Table> {
    Ok(fig3_rows()?.0)
}

/// Candidate count per (q, N).
pub fn fig3_counts() -> Result<Table> {
    Ok(fig3_rows()?.1)
}

/// Interior point i/N of the q-replicator on the Moran landscape.
pub fn fig4() -> Result<Table> {
    let mut t = Table::new(["q", "r", "x"]);
    for q in fig4_q() {
        for r in fig4_r() {
            t.push(vec![q.into(), r.into(), iss_moran_qrep(r, q)?.into()]);
        }
    }
    Ok(t)
}

/// Same surface for the q-Fermi incentive.
pub fn fig4_fermi() -> Result<Table> {
    let mut t = Table::new(["q", "r", "beta", "x"]);
    for q in fig4_q() {
        for r in fig4_r() {
            let x = iss_moran_qfermi(r, q, FIG4_BETA)?;
            t.push(vec![q.into(), r.into(), FIG4_BETA.into(), x.into()]);
        }
    }
    Ok(t)
}

/// File name and table for every figure, in a fixed order.
pub fn all() -> Result<Vec<(&'static str, Table)>> {
    let (f3, f3_counts) = fig3_rows()?;
    Ok(vec![
        ("fig1.csv", fig1()?),
        ("fig1_heatmap.csv", fig1_heatmap()?),
        ("fig2.csv", fig2()?),
        ("fig3.csv", f3),
        ("fig3_counts.csv", f3_counts),
        ("fig4.csv", fig4()?),
        ("fig4_fermi.csv", fig4_fermi()?),
    ])
}

/// Write every figure table into `dir`; returns the paths written.
pub fn write_all(dir: &Path, format: Format) -> Result<Vec<std::path::PathBuf>> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut written = Vec::new();
    for (name, table) in all()? {
        let path = match format {
            Format::Csv => dir.join(name),
            Format::Json => dir.join(name).with_extension("json"),
        };
        table.emit(format, Some(&path))?;
        written.push(path);
    }
    Ok(written)
}
