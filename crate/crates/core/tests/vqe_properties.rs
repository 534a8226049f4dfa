use detect_vqe::noise::{NoiseConfig, ReadoutError, ReadoutModel};
use detect_vqe::vqe::{
    energy_error, minimize_energy, potential_curve, probe_score, run_sweep, CoefficientRow, CoefficientTable,
    Coefficients, Family, Sampling, SweepConfig, TermEstimates, TermValues,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn shots_config(family: Family, p: f64, shots: u64, seed: u64) -> SweepConfig<f64> {
    let mut cfg = SweepConfig::exact(family, NoiseConfig::from_p(p));
    cfg.sampling = Sampling::Shots { shots, seed };
    cfg
}

/// Stand-in coefficients close to H₂ near equilibrium.
fn synthetic_g() -> Coefficients<f64> {
    Coefficients::new([-0.35, -0.39, -0.39, 0.011, 0.18])
}

#[test]
fn exact_noiseless_sweeps_match_analytic_terms() {
    for family in [Family::Physical, Family::Encoded] {
        let est = run_sweep(&SweepConfig::exact(family, NoiseConfig::<f64>::noiseless())).unwrap();
        assert_eq!(est.points.len(), 257);
        for p in &est.points {
            assert!(p.terms.unwrap().max_abs_diff(&TermValues::analytic(p.theta)) < 1e-9, "{family} θ={}", p.theta);
        }
    }
}

#[test]
fn noiseless_minimum_follows_closed_form() {
    let est = run_sweep(&SweepConfig::exact(Family::Encoded, NoiseConfig::<f64>::noiseless())).unwrap();
    let thetas = est.thetas();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..100 {
        let g = Coefficients::new(std::array::from_fn(|_| rng.random_range(-1.0..1.0)));
        let energies: Vec<_> = est.points.iter().map(|p| p.terms.map(|t| g.energy(&t))).collect();
        let m = minimize_energy(&thetas, &energies).unwrap();
        assert!((m.energy - g.ansatz_minimum()).abs() < 1e-9);
        assert!(m.theta.abs() <= std::f64::consts::PI);
    }
}

#[test]
fn noiseless_curve_hits_exact_energies_in_the_ansatz_block() {
    // Rows whose ground state lies in span{|00⟩,|11⟩}: the ansatz reaches it.
    let rows = vec![
        CoefficientRow { r: 0.5, g: Coefficients::new([-0.3, -0.4, -0.4, 0.01, 0.18]) },
        CoefficientRow { r: 1.0, g: Coefficients::new([-0.5, -0.2, -0.2, 0.1, 0.2]) },
    ];
    let table = CoefficientTable::new(rows).unwrap();
    let est = run_sweep(&SweepConfig::exact(Family::Physical, NoiseConfig::<f64>::noiseless())).unwrap();
    for pt in potential_curve(&table, &est).unwrap() {
        assert!(pt.delta.abs() < 1e-9, "{pt:?}");
        assert!(pt.chemically_accurate());
    }
}

#[test]
fn noiseless_shots_within_five_sigma() {
    let est = run_sweep(&shots_config(Family::Encoded, 0.0, 8192, 7)).unwrap();
    for p in &est.points {
        let (t, s) = (p.terms.unwrap(), p.sigma.unwrap());
        let exact = TermValues::analytic(p.theta);
        for ((v, e), sd) in t.as_array().iter().zip(exact.as_array()).zip(s.as_array()) {
            // σ vanishes at |v| = 1; the binomial bound there is exact.
            let bound = 5.0 * sd.max((1.0 / 8192.0f64).sqrt() * 0.05);
            assert!((v - e).abs() <= bound, "θ={} {v} vs {e}", p.theta);
        }
    }
}

fn rms_vs(est: &TermEstimates<f64>, reference: &TermEstimates<f64>) -> f64 {
    let mut acc = 0.0;
    let mut n = 0.0;
    for (a, b) in est.points.iter().zip(&reference.points) {
        for (x, y) in a.terms.unwrap().as_array().iter().zip(b.terms.unwrap().as_array()) {
            acc += (x - y).powi(2);
            n += 1.0;
        }
    }
    (acc / n).sqrt()
}

#[test]
fn shot_noise_scales_as_inverse_root() {
    for family in [Family::Physical, Family::Encoded] {
        let reference = run_sweep(&SweepConfig::exact(family, NoiseConfig::from_p(0.02))).unwrap();
        let rms: Vec<f64> = [1u64 << 10, 1 << 13, 1 << 16]
            .iter()
            .map(|&s| rms_vs(&run_sweep(&shots_config(family, 0.02, s, 3)).unwrap(), &reference))
            .collect();
        for w in rms.windows(2) {
            let ratio = w[0] / w[1];
            let ideal = 8f64.sqrt();
            assert!(ratio > ideal / 2.0 && ratio < ideal * 2.0, "{family}: {rms:?}");
        }
    }
}

#[test]
fn merging_the_shifted_branch_is_unbiased() {
    let merged = run_sweep(&shots_config(Family::Encoded, 0.02, 8192, 11)).unwrap();
    let mut cfg = shots_config(Family::Encoded, 0.02, 8192, 11);
    cfg.merge_branches = false;
    let own = run_sweep(&cfg).unwrap();
    for (m, o) in merged.points.iter().zip(&own.points) {
        let (tm, to, so) = (m.terms.unwrap(), o.terms.unwrap(), o.sigma.unwrap());
        for ((a, b), s) in tm.as_array().iter().zip(to.as_array()).zip(so.as_array()) {
            assert!((a - b).abs() <= 5.0 * s.max(1e-3), "θ={}", m.theta);
        }
    }
}

#[test]
fn errors_grow_with_noise() {
    let g = synthetic_g();
    for family in [Family::Physical, Family::Encoded] {
        let errs: Vec<f64> = [0.0, 0.01, 0.05, 0.1].iter().map(|&p| energy_error(&g, family, p, 257).unwrap()).collect();
        assert!(errs[0] < 1e-9);
        assert!(errs.windows(2).all(|w| w[1] >= w[0]), "{family}: {errs:?}");
    }
}

#[test]
fn encoding_helps_at_five_percent_on_synthetic_row() {
    let g = synthetic_g();
    let phys = energy_error(&g, Family::Physical, 0.05, 257).unwrap();
    let enc = energy_error(&g, Family::Encoded, 0.05, 257).unwrap();
    assert!(enc < phys, "{enc} vs {phys}");
}

#[test]
fn sweeps_are_deterministic_under_seed() {
    let mut cfg = shots_config(Family::Encoded, 0.03, 4096, 42);
    cfg.readout = Some(ReadoutModel::default_asymmetric(6));
    cfg.unfold = Some(Default::default());
    cfg.calibration_shots = Some(20_000);
    assert_eq!(run_sweep(&cfg).unwrap(), run_sweep(&cfg).unwrap());
    let mut other = cfg.clone();
    other.sampling = Sampling::Shots { shots: 4096, seed: 43 };
    assert_ne!(run_sweep(&cfg).unwrap(), run_sweep(&other).unwrap());
}

#[test]
fn noisier_readout_scores_worse() {
    let mut quiet = SweepConfig::exact(Family::Physical, NoiseConfig::from_p(0.01));
    quiet.readout = Some(ReadoutModel::uniform(2, ReadoutError { e01: 0.01, e10: 0.02 }));
    let mut loud = quiet.clone();
    loud.readout = Some(ReadoutModel::uniform(2, ReadoutError { e01: 0.04, e10: 0.08 }));
    assert!(probe_score(&loud).unwrap() > probe_score(&quiet).unwrap());
}

#[test]
fn unfolding_recovers_readout_degraded_terms() {
    let mut cfg = SweepConfig::exact(Family::Encoded, NoiseConfig::<f64>::noiseless());
    cfg.grid_points = 33;
    cfg.readout = Some(ReadoutModel::default_asymmetric(6));
    let raw = run_sweep(&cfg).unwrap();
    cfg.unfold = Some(Default::default());
    let fixed = run_sweep(&cfg).unwrap();
    let dev = |e: &TermEstimates<f64>| {
        e.points.iter().map(|p| p.terms.unwrap().max_abs_diff(&TermValues::analytic(p.theta))).fold(0.0, f64::max)
    };
    assert!(dev(&raw) > 1e-2);
    assert!(dev(&fixed) < 1e-3, "{}", dev(&fixed));
}
