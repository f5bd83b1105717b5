//! Randomized property tests over the admissible parameter space.

use proptest::prelude::*;
use relayperf_core::fading::GGHop;
use relayperf_core::relay::{combine_snr, rationalize_beta};
use relayperf_core::special::gamma::{gamma_fn, reg_upper_incomplete_gamma};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn gamma_recurrence(x in 0.1f64..50.0) {
        let lhs = gamma_fn(x + 1.0).unwrap();
        let rhs = x * gamma_fn(x).unwrap();
        prop_assert!(((lhs - rhs) / rhs).abs() <= 1e-12);
    }

    #[test]
    fn incomplete_gamma_bounds_and_monotonicity(a in 0.51f64..20.0, x in 0.0f64..100.0) {
        let q = reg_upper_incomplete_gamma(a, x).unwrap();
        prop_assert!((0.0..=1.0).contains(&q));
        let q2 = reg_upper_incomplete_gamma(a, x + 0.5).unwrap();
        prop_assert!(q2 <= q + 1e-14);
    }

    #[test]
    fn combine_never_exceeds_first_hop(
        g1 in 0.0f64..1e6,
        g2 in 0.0f64..1e6,
        c in 1e-6f64..1e6,
    ) {
        let e = combine_snr(g1, g2, c);
        prop_assert!(e >= 0.0);
        prop_assert!(e <= g1 * (1.0 + 1e-12));
        // monotone in gamma2
        prop_assert!(combine_snr(g1, g2 * 2.0 + 1.0, c) >= e - 1e-12);
    }

    #[test]
    fn hop_cdf_brackets_and_mean(
        m in 0.51f64..5.0,
        beta in 0.5f64..5.0,
        gbar in 0.01f64..1e4,
    ) {
        let hop = GGHop::new(m, beta, gbar).unwrap();
        prop_assert!(((hop.moment(1.0).unwrap() - gbar) / gbar).abs() < 1e-9);
        let mid = hop.cdf(gbar);
        prop_assert!((0.0..1.0).contains(&mid));
        let lo = hop.cdf(1e-12 * gbar);
        prop_assert!(lo < 0.5 && lo <= mid);
        prop_assert!(hop.cdf(1e9 * gbar) > 0.999);
    }

    #[test]
    fn rationalization_is_the_table_optimum(beta in 0.25f64..16.0) {
        let f = rationalize_beta(beta).unwrap();
        prop_assert!(f.k >= 1 && f.k <= 8 && f.l >= 1 && f.l <= 8);
        let best = (1..=8u32)
            .flat_map(|k| (1..=8u32).map(move |l| (beta - 2.0 * l as f64 / k as f64).abs()))
            .fold(f64::INFINITY, f64::min);
        prop_assert!((f.value() - beta).abs() <= best + 1e-12);
    }
}
