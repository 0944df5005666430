use misome::ensembles::*;
use misome::experiments::fstat;
use misome::stats::{ks_test, ScaledF};
use proptest::prelude::*;

#[test]
fn entries_have_unit_variance_and_are_uncorrelated() {
    let draws = 100_000;
    let mut rng = trial_rng(3, 0);
    let mut second = [[0.0f64; 2]; 2];
    let mut cross = nalgebra::Complex::new(0.0, 0.0);
    let mut re2 = 0.0;
    for _ in 0..draws {
        let ch = sample_channel(2, 0, &mut rng).unwrap();
        let h = ch.h_r();
        second[0][0] += h[0].norm_sqr();
        second[1][1] += h[1].norm_sqr();
        cross += h[0] * h[1].conj();
        re2 += h[0].re * h[0].re;
    }
    let n = draws as f64;
    assert!((second[0][0] / n - 1.0).abs() < 0.02);
    assert!((second[1][1] / n - 1.0).abs() < 0.02);
    assert!((cross / n).norm() < 0.02);
    assert!((re2 / n - 0.5).abs() < 0.01);
}

#[test]
fn eavesdropper_entries_have_unit_variance() {
    let trials = 20_000;
    let mut acc = 0.0;
    for k in 0..trials {
        let ch = channel_for_trial(1, 5, 8, k).unwrap();
        acc += ch.h_e().iter().map(|z| z.norm_sqr()).sum::<f64>();
    }
    assert!((acc / (5.0 * trials as f64) - 1.0).abs() < 0.02);
}

#[test]
fn same_seed_same_realization() {
    let a = channel_for_trial(4, 3, 42, 9).unwrap();
    let b = channel_for_trial(4, 3, 42, 9).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, channel_for_trial(4, 3, 43, 9).unwrap());
}

#[test]
fn xi_matches_quadratic_form_mean() {
    // gamma·h̃†(I + gamma·H̃†H̃)^-1 h̃ concentrates at xi(gamma, beta)
    let (n_t, beta, gamma, trials) = (256, 0.5, 10.0, 40);
    let n_e = eavesdropper_antennas(n_t, beta);
    let q: Vec<f64> = (0..trials)
        .map(|k| scaled_quadratic_form(gamma, &channel_for_trial(n_t, n_e, 21, k).unwrap()).unwrap())
        .collect();
    let s = misome::stats::MonteCarloSummary::from_samples("q", &q).unwrap();
    assert!((s.mean - xi(gamma, beta)).abs() < 2.0 * s.std_error + 1e-3, "{} vs {}", s.mean, xi(gamma, beta));
}

#[test]
fn quadratic_form_deviation_shrinks_with_size() {
    let (beta, gamma) = (1.5, 10.0);
    let target = xi(gamma, beta);
    let spread = |n_t: usize| {
        let n_e = eavesdropper_antennas(n_t, beta);
        (0..24)
            .map(|k| (scaled_quadratic_form(gamma, &channel_for_trial(n_t, n_e, 5, k).unwrap()).unwrap() - target).powi(2))
            .sum::<f64>()
            / 24.0
    };
    let (s64, s256) = (spread(64), spread(256));
    assert!(s256 < s64, "{s64} then {s256}");
}

#[test]
fn no_eavesdropper_capacity_concentrates() {
    let spec = EnsembleSpec::new(128, 0.0, 10.0, 200, 4).unwrap();
    let est = monte_carlo_scaled_capacity(&spec).unwrap();
    assert!((est.capacity.mean - 11f64.log2()).abs() < 0.05, "{}", est.capacity.mean);
}

#[test]
fn std_error_scales_as_inverse_root_trials() {
    let a = monte_carlo_scaled_capacity(&EnsembleSpec::new(8, 1.5, 10.0, 1000, 2).unwrap()).unwrap();
    let b = monte_carlo_scaled_capacity(&EnsembleSpec::new(8, 1.5, 10.0, 4000, 2).unwrap()).unwrap();
    let ratio = a.capacity.std_error / b.capacity.std_error;
    assert!((ratio / 2.0 - 1.0).abs() < 0.3, "ratio {ratio}");
}

#[test]
fn summaries_are_bit_identical_across_runs() {
    let spec = EnsembleSpec::new(16, 1.25, 3.0, 64, 77).unwrap();
    assert_eq!(monte_carlo_scaled_capacity(&spec).unwrap(), monte_carlo_scaled_capacity(&spec).unwrap());
}

#[test]
fn top_eigenvalue_law_ks() {
    for (n_t, n_e) in [(1, 2), (2, 4)] {
        let s = sample_lambda_max_rayleigh(n_t, n_e, 10_000, 11).unwrap();
        let (d1, d2, scale) = lambda_max_f_parameters(n_t, n_e);
        let law = ScaledF::new(d1, d2, scale).unwrap();
        assert!(ks_test(&s, |x| law.cdf(x)).p_value > 0.01);
    }
}

#[test]
fn top_eigenvalue_median_at_large_size() {
    let row = fstat(32, 64, 2000, 1).unwrap();
    assert!((row.sample_median - 1.0).abs() < 0.1);
}

#[test]
fn lower_bound_worked_values() {
    assert!(scaled_capacity_lower_bound(10.0, 1.5) < 0.5);
    assert!((scaled_capacity_lower_bound(1e8f64, 1.5) - 1.0).abs() < 0.01);
    let grid: Vec<f64> = (0..20).map(|k| 10f64.powf(-1.0 + 0.3 * k as f64)).collect();
    for b in [0.5, 1.0, 1.5, 2.5] {
        for w in grid.windows(2) {
            assert!(scaled_capacity_lower_bound(w[1], b) >= scaled_capacity_lower_bound(w[0], b));
        }
    }
}

proptest! {
    #[test]
    fn xi_is_between_zero_and_gamma(g in 1e-3f64..1e6, b in 0.0f64..10.0) {
        let x = xi(g, b);
        prop_assert!(x > 0.0);
        prop_assert!(x <= g * (1.0 + 1e-12));
    }

    #[test]
    fn xi_tends_to_gamma_as_beta_vanishes(g in 1e-2f64..1e3) {
        prop_assert!((xi(g, 1e-12) - g).abs() < 1e-5 * g);
    }

    #[test]
    fn lower_bound_never_exceeds_infinite_snr(g in 1e-2f64..1e9, b in 1.001f64..8.0) {
        prop_assert!(scaled_capacity_lower_bound(g, b) <= asymptotic_capacity_infinite_snr(b) + 1e-9);
    }

    #[test]
    fn xi_is_decreasing_in_beta(g in 1e-2f64..1e4, b in 0.0f64..5.0, db in 1e-3f64..1.0) {
        prop_assert!(xi(g, b + db) <= xi(g, b) * (1.0 + 1e-12));
    }

    #[test]
    fn single_precision_xi(g in 1e-2f64..1e4, b in 0.0f64..5.0) {
        let x64 = xi(g, b);
        let x32 = xi(g as f32, b as f32) as f64;
        prop_assert!((x64 - x32).abs() <= 1e-4 * x64.max(1e-3));
    }
}
