//! Suppression and deterrence over randomized parameter sets.

use proptest::prelude::*;
use stigma_core::welfare::{sweep, unit_grid};
use stigma_core::{Convention, DistributionSpec, ModelParams};

const SLACK: f64 = 1e-10;

fn arb_params() -> impl Strategy<Value = ModelParams> {
    (
        0.02f64..0.5,
        0.05f64..0.5,
        0.05f64..0.95,
        0.5f64..2.0,
        0.01f64..2.0,
        0.2f64..5.0,
        0.01f64..0.4,
        0.5f64..4.0,
        prop::bool::ANY,
    )
        .prop_map(|(theta_low, spread, mix, v, ch_extra, z, u, y_hi, skewed)| {
            let theta_high = (theta_low + spread).min(0.98);
            let test_cost = v * (theta_low + mix * (theta_high - theta_low));
            let mut p = ModelParams {
                theta_low,
                theta_high,
                treatment_benefit: v,
                test_cost,
                partner_health_cost: z,
                safe_sex_cost: u,
                valuation: DistributionSpec::uniform(0.0, y_hi).unwrap(),
                ..ModelParams::example()
            };
            p.infection_cost = p.infection_cost_bound() * (1.0 + ch_extra);
            if skewed {
                p.present_bias =
                    DistributionSpec::piecewise(vec![(0.0, 0.0), (0.2, 0.35), (0.6, 0.55), (1.0, 1.0)]).unwrap();
                p.valuation = DistributionSpec::piecewise(vec![(0.0, 0.0), (0.3 * y_hi, 0.6), (y_hi, 1.0)]).unwrap();
            }
            p
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn stigma_suppresses_testing_and_deters_unsafe_sex(p in arb_params()) {
        prop_assume!(p.validate().is_ok());
        let rows = sweep(&p, &unit_grid(21), Convention::Corrected).unwrap();
        for w in rows.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            prop_assert!(b.stigma >= a.stigma - SLACK);
            prop_assert!(b.testing_rate_high <= a.testing_rate_high + SLACK);
            prop_assert!(b.gap >= a.gap - SLACK);
            prop_assert!(b.high_risk_share <= a.high_risk_share + SLACK);
            prop_assert!(b.hot_share <= a.hot_share + SLACK);
        }
    }

    #[test]
    fn shares_stay_in_bounds(p in arb_params(), tau in 0.0f64..1.0) {
        prop_assume!(p.validate().is_ok());
        let row = sweep(&p, &[tau], Convention::Corrected).unwrap()[0];
        for x in [row.stigma, row.hot_share, row.high_risk_share, row.testing_rate_high, row.testing_rate] {
            prop_assert!((0.0..=1.0).contains(&x));
        }
        prop_assert!(row.gap > 0.0);
        prop_assert!((row.testing_rate - row.high_risk_share * row.testing_rate_high).abs() < 1e-15);
        prop_assert!(row.high_risk_share >= row.hot_share * row.hot_share - SLACK);
    }
}
