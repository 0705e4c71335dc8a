use incentive_chain::chain::{compress, stationary, transition};
use incentive_chain::fixation::fixation_exact;
use incentive_chain::numerics::relative_difference;
use incentive_chain::{Family, FitnessLandscape, IncentiveSpec};

/// Stationary vector by power iteration on the dense kernel.
fn power_iteration(spec: &IncentiveSpec, n: usize, mu: f64) -> Vec<f64> {
    let triples: Vec<_> = (0..=n)
        .map(|i| transition(spec, i, n, mu).unwrap())
        .collect();
    let mut pi = vec![1.0 / (n + 1) as f64; n + 1];
    for _ in 0..200_000 {
        let mut next = vec![0.0; n + 1];
        for (i, t) in triples.iter().enumerate() {
            next[i] += pi[i] * t.stay;
            if i < n {
                next[i + 1] += pi[i] * t.up;
            }
            if i > 0 {
                next[i - 1] += pi[i] * t.down;
            }
        }
        let delta: f64 = next.iter().zip(&pi).map(|(a, b)| (a - b).abs()).sum();
        pi = next;
        if delta < 1e-16 {
            break;
        }
    }
    pi
}

#[test]
fn three_state_chain() {
    // up_0 = 1/2, up_1 = down_1 = 1/4, down_2 = 1/2: pi = (1/4, 1/2, 1/4).
    let spec = IncentiveSpec::new(Family::Replicator, FitnessLandscape::Neutral);
    let s = stationary(&spec, 2, 0.5).unwrap();
    let expected = [0.25, 0.5, 0.25];
    for (got, want) in s.pi.iter().zip(expected) {
        assert!((got - want).abs() < 1e-15);
    }
    let oracle = power_iteration(&spec, 2, 0.5);
    for (got, want) in s.pi.iter().zip(&oracle) {
        assert!((got - want).abs() < 1e-12);
    }
}

#[test]
fn recursion_matches_power_iteration() {
    let specs = [
        IncentiveSpec::q_replicator(0.0, FitnessLandscape::moran(2.0).unwrap()),
        IncentiveSpec::q_replicator(2.0, FitnessLandscape::moran(0.7).unwrap()),
        IncentiveSpec::q_fermi(0.5, 1.0, FitnessLandscape::moran(1.5).unwrap()),
    ];
    for spec in &specs {
        for mu in [0.05, 0.2, 0.5] {
            let s = stationary(spec, 8, mu).unwrap();
            let oracle = power_iteration(spec, 8, mu);
            for (got, want) in s.pi.iter().zip(&oracle) {
                assert!((got - want).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn neutral_symmetry() {
    for q in [-0.5, 0.0, 1.0, 3.0] {
        for mu in [1e-4, 0.1, 0.5] {
            let spec = IncentiveSpec::q_replicator(q, FitnessLandscape::Neutral);
            let s = stationary(&spec, 15, mu).unwrap();
            for i in 0..=15 {
                assert!(relative_difference(s.pi[i], s.pi[15 - i]) < 1e-12);
            }
        }
    }
}

#[test]
fn small_mutation_boundary_ratio() {
    let n = 10;
    let spec = IncentiveSpec::new(Family::Replicator, FitnessLandscape::moran(2.0).unwrap());
    let s = stationary(&spec, n, 1e-8).unwrap();
    let ratio = s.log_boundary_ratio().exp();
    assert!(relative_difference(ratio, 512.0) < 0.01, "{ratio}");
    let fix = fixation_exact(&spec, n).unwrap();
    let two_state = compress(fix.rho_a(), fix.rho_b, 1e-8).unwrap();
    assert!(relative_difference(two_state.pi_all_a / two_state.pi_all_b, 512.0) < 1e-12);
    assert!(relative_difference(two_state.pi_all_a / two_state.pi_all_b, ratio) < 0.01);
}

#[test]
fn boundary_ratio_independent_of_q() {
    for n in [3usize, 10, 20] {
        for r in [0.5, 2.0, 3.0] {
            let ratios: Vec<f64> = [0.0, 1.0, 2.0]
                .iter()
                .map(|&q| {
                    let spec = IncentiveSpec::q_replicator(q, FitnessLandscape::moran(r).unwrap());
                    stationary(&spec, n, 1e-9)
                        .unwrap()
                        .log_boundary_ratio()
                        .exp()
                })
                .collect();
            for w in ratios.windows(2) {
                assert!(
                    relative_difference(w[0], w[1]) < 1e-3,
                    "n={n} r={r} {ratios:?}"
                );
            }
        }
    }
}

#[test]
fn stationary_depends_on_q_away_from_the_limit() {
    let l = FitnessLandscape::moran(2.0).unwrap();
    let s0 = stationary(&IncentiveSpec::q_replicator(0.0, l.clone()), 10, 0.1).unwrap();
    let s1 = stationary(&IncentiveSpec::q_replicator(1.0, l), 10, 0.1).unwrap();
    let sup = s0
        .pi
        .iter()
        .zip(&s1.pi)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(sup > 1e-6);
}

#[test]
fn compression_matches_moran_ratio() {
    for n in [5usize, 10, 40] {
        for q in [0.0, 1.0, 2.0] {
            let r: f64 = 1.5;
            let fix = fixation_exact(
                &IncentiveSpec::q_replicator(q, FitnessLandscape::moran(r).unwrap()),
                n,
            )
            .unwrap();
            let c = compress(fix.rho_a(), fix.rho_b, 0.01).unwrap();
            assert!(relative_difference(c.pi_all_a / c.pi_all_b, r.powi(n as i32 - 1)) < 1e-10);
            assert!((c.pi_all_a + c.pi_all_b - 1.0).abs() < 1e-15);
            assert!(relative_difference(c.pi_all_a / c.pi_all_b, c.t_ba / c.t_ab) < 1e-14);
        }
    }
}
