//! Property tests for invariants that hold across module boundaries:
//! covariance structure, polarization against increment variances,
//! special-function identities, and sampler determinism.

use proptest::prelude::*;

use hfbm_core::ops::pow_plus;
use hfbm_core::specfun;
use hfbm_core::{
    covariance_quadrature, increment_variance, sample_volterra,
    volterra_discrete_terminal_variance, AlphaParam, QuadratureConfig, StepFunction, TimeGrid,
};

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn any_alpha() -> impl Strategy<Value = f64> {
    0.05..2.5_f64
}

fn any_time() -> impl Strategy<Value = f64> {
    0.01..5.0_f64
}

proptest! {
    #[test]
    fn covariance_is_symmetric_and_cauchy_schwarz(a in any_alpha(), s in any_time(), t in any_time()) {
        let p = AlphaParam::new(a).unwrap();
        let st = covariance_quadrature(&p, s, t, &cfg()).unwrap();
        let ts = covariance_quadrature(&p, t, s, &cfg()).unwrap();
        prop_assert_eq!(st, ts);
        prop_assert!(st > 0.0);
        // sigma_st <= sqrt(sigma_ss sigma_tt) = sqrt(s t).
        prop_assert!(st <= (s * t).sqrt() * (1.0 + 1e-10));
    }

    #[test]
    fn increment_variance_polarizes_the_covariance(a in any_alpha(), u in any_time(), v in any_time()) {
        let (s, t) = if u <= v { (u, v) } else { (v, u) };
        let p = AlphaParam::new(a).unwrap();
        let iv = increment_variance(&p, s, t, &cfg()).unwrap();
        prop_assert!(iv.j1 >= 0.0 && iv.j2 >= 0.0);
        prop_assert!((iv.j1 + iv.j2 - iv.total).abs() <= 1e-12 * iv.total.max(1.0));
        // E(B_t - B_s)^2 = t + s - 2 sigma_st, computed by a different split.
        // The polarized form cancels catastrophically when s is close to t,
        // so the tolerance keeps an absolute term at quadrature precision.
        let sigma = covariance_quadrature(&p, s, t, &cfg()).unwrap();
        let polarized = t + s - 2.0 * sigma;
        prop_assert!(
            (iv.total - polarized).abs() <= 1e-8 * iv.total + 1e-10 * (s + t),
            "total {} vs polarized {}", iv.total, polarized
        );
    }

    #[test]
    fn covariance_scales_linearly(a in any_alpha(), s in any_time(), t in any_time(), c in 0.05..4.0_f64) {
        let p = AlphaParam::new(a).unwrap();
        let base = covariance_quadrature(&p, s, t, &cfg()).unwrap();
        let scaled = covariance_quadrature(&p, c * s, c * t, &cfg()).unwrap();
        prop_assert!((scaled - c * base).abs() <= 1e-8 * c * base);
    }

    #[test]
    fn unit_alpha_covariance_is_brownian(s in any_time(), t in any_time()) {
        let p = AlphaParam::new(1.0).unwrap();
        let sigma = covariance_quadrature(&p, s, t, &cfg()).unwrap();
        prop_assert!((sigma - s.min(t)).abs() <= 1e-12);
    }

    #[test]
    fn regularized_gamma_halves_sum_to_one(a in 0.05..10.0_f64, x in 0.0..20.0_f64) {
        let (p, q) = specfun::regularized_gamma_pair(a, x).unwrap();
        prop_assert!((p + q - 1.0).abs() <= 1e-12);
        prop_assert!((0.0..=1.0).contains(&p));
        // P(a, .) is nondecreasing.
        let (p2, _) = specfun::regularized_gamma_pair(a, x + 0.5).unwrap();
        prop_assert!(p2 >= p - 1e-14);
    }

    #[test]
    fn gamma_satisfies_the_recurrence(x in 0.05..20.0_f64) {
        let g = specfun::gamma(x).unwrap();
        let g1 = specfun::gamma(x + 1.0).unwrap();
        prop_assert!((g1 - x * g).abs() <= 1e-12 * g1.abs());
    }

    #[test]
    fn pow_plus_clamps_the_negative_axis(y in -5.0..5.0_f64, p in 0.1..3.0_f64) {
        let got = pow_plus(y, p);
        if y <= 0.0 {
            prop_assert_eq!(got, 0.0);
        } else {
            prop_assert_eq!(got, y.powf(p));
        }
    }

    #[test]
    fn discrete_terminal_variance_stays_below_the_horizon(
        a in any_alpha(),
        n in 4usize..64,
        t_max in 0.5..4.0_f64,
    ) {
        let p = AlphaParam::new(a).unwrap();
        let v = volterra_discrete_terminal_variance(&p, t_max, n).unwrap();
        prop_assert!(v > 0.0);
        // L2 projection onto the grid filtration only loses variance.
        prop_assert!(v <= t_max * (1.0 + 1e-12));
    }

    #[test]
    fn volterra_sampling_is_a_pure_function_of_the_seed(seed in any::<u64>()) {
        let p = AlphaParam::new(0.7).unwrap();
        let grid = TimeGrid::uniform(1.0, 8).unwrap();
        let a = sample_volterra(&p, &grid, 2, seed).unwrap();
        let b = sample_volterra(&p, &grid, 2, seed).unwrap();
        prop_assert_eq!(a.hfbm_paths(), b.hfbm_paths());
        prop_assert_eq!(a.bm_paths().unwrap(), b.bm_paths().unwrap());
    }

    #[test]
    fn step_function_evaluates_piecewise(coeffs in proptest::collection::vec(-3.0..3.0_f64, 1..6)) {
        let bps: Vec<f64> = (0..=coeffs.len()).map(|i| 0.5 + i as f64).collect();
        let f = StepFunction::new(bps.clone(), coeffs.clone()).unwrap();
        for (i, &c) in coeffs.iter().enumerate() {
            prop_assert_eq!(f.eval(0.5 * (bps[i] + bps[i + 1])), c);
            prop_assert_eq!(f.eval(bps[i]), c);
        }
        prop_assert_eq!(f.eval(0.0), 0.0);
        prop_assert_eq!(f.eval(*bps.last().unwrap()), 0.0);
    }
}
