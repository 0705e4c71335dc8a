//! Single-model subcommands. Each returns a [`Table`] for the caller to emit.

use anyhow::Result;
use incentive_chain::equilibria::{analytic_candidates, iss_candidates, CandidateKind};
use incentive_chain::simulate::default_max_steps;
use incentive_chain::{
    best_reply_fixation, estimate_fixation, fixation_exact, stationary, SimulationConfig,
};

use crate::output::{Table, Value};
use crate::params::{usage, FamilyName, ModelParams, PARAM_COLUMNS};

/// Beta schedule used when `fixation` is asked for the best-reply limit.
pub const BEST_REPLY_BETAS: [f64; 5] = [1.0, 10.0, 100.0, 1000.0, 10000.0];

fn columns(extra: &[&str]) -> Vec<String> {
    PARAM_COLUMNS
        .iter()
        .chain(extra)
        .map(|s| s.to_string())
        .collect()
}

/// `rho_1 ..= rho_{N-1}` plus the B/A ratio.
pub fn fixation(params: &ModelParams) -> Result<Table> {
    if params.family == FamilyName::BestReply {
        return best_reply(params);
    }
    let spec = params.validated_spec()?;
    let res = fixation_exact(&spec, params.n)?;
    let rho_names: Vec<String> = (1..params.n).map(|i| format!("rho_{i}")).collect();
    let mut extra: Vec<&str> = rho_names.iter().map(String::as_str).collect();
    extra.extend(["rho_b", "ratio", "log_ratio"]);
    let mut table = Table::new(columns(&extra));
    let mut row = params.param_values();
    row.extend(res.rho.iter().map(|&v| Value::from(v)));
    row.push(res.rho_b.into());
    row.push(res.ratio_b_over_a.into());
    row.push(res.log_ratio_b_over_a.into());
    table.push(row);
    Ok(table)
}

fn best_reply(params: &ModelParams) -> Result<Table> {
    let landscape = params.landscape()?;
    if params.n < 2 {
        return Err(usage!("--N must be at least 2, got {}", params.n).into());
    }
    let report = best_reply_fixation(&landscape, params.n, &BEST_REPLY_BETAS)?;
    let mut table = Table::new(columns(&[
        "rho_1",
        "analytic",
        "converged",
        "strict_best_reply",
        "last_beta",
        "last_fermi_rho_1",
    ]));
    let (last_beta, last_rho) = report.fermi[report.fermi.len() - 1];
    let mut row = params.param_values();
    row.extend([
        report.value.into(),
        report.analytic.into(),
        report.converged.into(),
        report.strict_best_reply.into(),
        last_beta.into(),
        last_rho.into(),
    ]);
    table.push(row);
    Ok(table)
}

fn kind_fields(kind: CandidateKind) -> (&'static str, Value, Value) {
    match kind {
        CandidateKind::ExactInteger => ("exact", Value::Null, Value::Null),
        CandidateKind::SignChangeInterval { lo, hi } => ("interval", lo.into(), hi.into()),
        CandidateKind::AnalyticRoot => ("analytic", Value::Null, Value::Null),
    }
}

/// Scan-detected ISS candidates followed by analytic roots, when a formula exists.
pub fn iss(params: &ModelParams) -> Result<Table> {
    let spec = params.validated_spec()?;
    let n = params.n;
    let mut table = Table::new(columns(&[
        "source", "kind", "location", "x", "lo", "hi", "residual",
    ]));
    let scan = iss_candidates(&spec, n)?;
    let analytic = analytic_candidates(&spec, n)?;
    let sources = scan
        .iter()
        .map(|c| ("scan", c))
        .chain(analytic.iter().map(|c| ("analytic", c)));
    for (source, c) in sources {
        let (kind, lo, hi) = kind_fields(c.kind);
        let mut row = params.param_values();
        row.extend([
            source.into(),
            kind.into(),
            c.location.into(),
            (c.location / n as f64).into(),
            lo,
            hi,
            c.residual.into(),
        ]);
        table.push(row);
    }
    Ok(table)
}

/// One row per state `i = 0..=N` with `pi_i`.
pub fn stationary_table(params: &ModelParams, mu: f64) -> Result<Table> {
    let spec = params.validated_spec()?;
    let dist = stationary(&spec, params.n, mu)?;
    let mut table = Table::new(columns(&["mu", "i", "pi", "log_pi"]));
    for (i, (&p, &lp)) in dist.pi.iter().zip(&dist.log_pi).enumerate() {
        let mut row = params.param_values();
        row.extend([mu.into(), i.into(), p.into(), lp.into()]);
        table.push(row);
    }
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulateOptions {
    pub start: usize,
    pub trials: u64,
    pub seed: u64,
    pub max_steps: Option<u64>,
}

/// Monte Carlo estimate of `rho_start`, next to the exact value.
pub fn simulate(params: &ModelParams, opts: SimulateOptions) -> Result<Table> {
    let spec = params.validated_spec()?;
    let n = params.n;
    let mut config = SimulationConfig::new(spec.clone(), n, opts.start, opts.trials, opts.seed);
    config.max_steps = opts.max_steps.unwrap_or_else(|| default_max_steps(n));
    config.validate().map_err(|e| usage!("{e}"))?;
    let est = estimate_fixation(&config)?;
    let exact = match opts.start {
        0 => 0.0,
        s if s == n => 1.0,
        s => fixation_exact(&spec, n)?.rho[s - 1],
    };
    let mut table = Table::new(columns(&[
        "start",
        "trials",
        "seed",
        "max_steps",
        "p_hat",
        "stderr",
        "trials_used",
        "fixated",
        "censored",
        "flagged",
        "rho_exact",
    ]));
    let mut row = params.param_values();
    row.extend([
        opts.start.into(),
        opts.trials.into(),
        opts.seed.into(),
        config.max_steps.into(),
        est.p_hat.into(),
        est.stderr.into(),
        est.trials_used.into(),
        est.fixated.into(),
        est.censored.into(),
        est.flagged.into(),
        exact.into(),
    ]);
    table.push(row);
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::LandscapeName;

    fn params(family: FamilyName, q: Option<f64>, r: Option<f64>, n: usize) -> ModelParams {
        ModelParams {
            family,
            q,
            beta: None,
            landscape: if r.is_some() {
                LandscapeName::Moran
            } else {
                LandscapeName::Neutral
            },
            r,
            game: None,
            n,
        }
    }

    #[test]
    fn fixation_row_layout() {
        let t = fixation(&params(FamilyName::Qreplicator, Some(1.0), None, 10)).unwrap();
        assert_eq!(t.rows.len(), 1);
        let col = t.column("rho_1").unwrap();
        match t.rows[0][col] {
            Value::Float(v) => assert!((v - 0.1).abs() < 1e-15),
            ref other => panic!("{other:?}"),
        }
        assert!(t.column("rho_9").is_some());
        assert!(t.column("rho_10").is_none());
    }

    #[test]
    fn best_reply_uses_the_limit() {
        let t = fixation(&params(FamilyName::BestReply, None, Some(2.0), 10)).unwrap();
        let row = &t.rows[0];
        assert_eq!(row[t.column("rho_1").unwrap()], Value::Float(1.0));
        assert_eq!(row[t.column("converged").unwrap()], Value::Bool(true));
    }

    #[test]
    fn simulate_from_the_boundary() {
        let p = params(FamilyName::Replicator, None, Some(2.0), 5);
        let opts = SimulateOptions {
            start: 5,
            trials: 10,
            seed: 1,
            max_steps: None,
        };
        let t = simulate(&p, opts).unwrap();
        assert_eq!(t.rows[0][t.column("p_hat").unwrap()], Value::Float(1.0));
        assert_eq!(t.rows[0][t.column("rho_exact").unwrap()], Value::Float(1.0));
    }

    #[test]
    fn stationary_rows_cover_all_states() {
        let t =
            stationary_table(&params(FamilyName::Replicator, None, Some(2.0), 6), 0.01).unwrap();
        assert_eq!(t.rows.len(), 7);
    }
}
