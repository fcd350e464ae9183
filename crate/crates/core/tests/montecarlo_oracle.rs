use stigma_core::montecarlo::{analytic_targets, convergence_report, simulate};
use stigma_core::{Convention, DistributionSpec, ModelParams, SimConfig};

const TAUS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

#[test]
fn welfare_matches_analytic_at_one_million_pairs() {
    let p = ModelParams::example();
    for (i, &tau) in TAUS.iter().enumerate() {
        for convention in [Convention::Corrected, Convention::Literal] {
            let cfg = SimConfig { n_pairs: 1_000_000, seed: 2024 + i as u64, tau_hat: tau, convention };
            let sim = simulate(&p, &cfg).unwrap();
            let target = analytic_targets(&p, tau, convention).unwrap();
            let z = sim.welfare.z_score(target.welfare);
            assert!(z <= 3.0, "tau={tau} {convention}: W_hat {} vs {} (z = {z:.2})", sim.welfare.mean, target.welfare);
            assert_eq!(sim.low_risk_tests, 0);
            assert_eq!(sim.untested_rejections, 0);
        }
    }
}

#[test]
fn stigma_estimate_matches_cdf() {
    let p = ModelParams::example();
    let sim = simulate(&p, &SimConfig { n_pairs: 200_000, seed: 5, tau_hat: 0.3, convention: Convention::Corrected })
        .unwrap();
    assert!(sim.stigma.z_score(0.3) <= 3.0);
}

#[test]
fn piecewise_laws_agree_too() {
    let p = ModelParams {
        present_bias: DistributionSpec::piecewise(vec![(0.0, 0.0), (0.15, 0.3), (0.5, 0.5), (1.0, 1.0)]).unwrap(),
        valuation: DistributionSpec::piecewise(vec![(0.0, 0.0), (0.5, 0.4), (1.0, 0.8), (2.5, 1.0)]).unwrap(),
        ..ModelParams::example()
    };
    for (i, &tau) in [0.1, 0.6].iter().enumerate() {
        let cfg = SimConfig { n_pairs: 400_000, seed: 77 + i as u64, tau_hat: tau, convention: Convention::Corrected };
        let sim = simulate(&p, &cfg).unwrap();
        let t = analytic_targets(&p, tau, Convention::Corrected).unwrap();
        assert!(sim.high_risk_share.z_score(t.high_risk_share) <= 3.0, "r at {tau}");
        assert!(sim.testing_rate.z_score(t.testing_rate) <= 3.0, "R at {tau}");
        assert!(sim.testing_rate_high.z_score(t.testing_rate_high) <= 3.0, "R_H at {tau}");
        assert!(sim.welfare.z_score(t.welfare) <= 3.0, "W at {tau}");
    }
}

#[test]
fn convergence_report_shapes() {
    let p = ModelParams::example();
    let cfg = SimConfig { n_pairs: 0, seed: 99, tau_hat: 0.5, convention: Convention::Corrected };
    let rows = convergence_report(&p, &cfg, &[1_000, 10_000, 100_000]).unwrap();
    assert_eq!(rows.len(), 3);
    for w in rows.windows(2) {
        assert!(w[1].result.high_risk_share.std_error < w[0].result.high_risk_share.std_error);
        assert!(w[1].result.welfare.std_error < w[0].result.welfare.std_error);
        assert_eq!(w[0].targets, w[1].targets);
    }
    // standard errors scale like 1/sqrt(N), within a factor of 4
    for w in rows.windows(2) {
        let ratio = w[0].result.welfare.std_error / w[1].result.welfare.std_error;
        let expected = (w[1].n_pairs as f64 / w[0].n_pairs as f64).sqrt();
        assert!(ratio > expected / 4.0 && ratio < expected * 4.0, "ratio {ratio}");
    }
}

#[test]
fn larger_batches_land_closer_across_seeds() {
    let p = ModelParams::example();
    let mut closer = 0;
    for seed in 0..50 {
        let cfg = SimConfig { n_pairs: 0, seed: 1_000 + seed, tau_hat: 0.5, convention: Convention::Corrected };
        let rows = convergence_report(&p, &cfg, &[1_000, 100_000]).unwrap();
        if rows[1].welfare_gap() <= rows[0].welfare_gap() {
            closer += 1;
        }
    }
    assert!(closer >= 45, "only {closer}/50 seeds improved");
}
