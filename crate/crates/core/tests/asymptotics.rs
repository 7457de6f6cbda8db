mod common;

use std::f64::consts::{E, PI};

use num_rational::BigRational;

use cprank::asymptotics::{
    beta_from_alpha, estimate_gamma, estimate_rho, exact_mean_rank_asymptotic, loglog_asymptotic,
    mean_rank_asymptotic, mean_rank_log2log_logdomain, pi_asymptotic, solve_alpha, theta_cdf,
    theta_cdf_large, theta_cdf_small, wedderburn_ratios, PaperConstants, KAPPA, LAMBDA,
};
use cprank::enumeration::{caterpillar_probability, exact_moments};
use cprank::numeric::{log2_ln_rational, rational_to_f64};
use cprank::Model;

use common::*;

#[test]
fn theta_limits_and_series() {
    assert!(theta_cdf(50.0) > 1.0 - 1e-12);
    assert!(theta_cdf(0.05) < 1e-12);
    assert_eq!(theta_cdf(0.0), 0.0);
    for x in [0.25, 0.5, 1.0, 1.5, PI.sqrt(), 2.0, 3.0, 4.0] {
        let (s, l) = (theta_cdf_small(x), theta_cdf_large(x));
        assert!((s - l).abs() < 1e-12, "x={x}: {s} vs {l}");
    }
}

#[test]
fn theta_is_monotone() {
    let mut prev = 0.0;
    for i in 1..=10_000 {
        let f = theta_cdf(i as f64 * 1e-3);
        assert!(f >= prev);
        prev = f;
    }
}

#[test]
fn alpha_and_beta() {
    let a = solve_alpha();
    assert!((a - 4.31107).abs() < 5e-6);
    assert!((a * (2.0 * E / a).ln() - 1.0).abs() < 1e-12);
    assert!(a > 2.0);
    assert!((beta_from_alpha(a) - 1.95303).abs() < 5e-6);
    assert!((KAPPA * LAMBDA - 1.0).abs() < 1e-9);
}

#[test]
fn gamma_estimates() {
    let g = estimate_gamma(20).unwrap();
    assert!((g - 1.11625).abs() < 1e-5, "{g}");
    let est: Vec<f64> = (4..=24).map(|k| estimate_gamma(k).unwrap()).collect();
    assert!(est.iter().all(|&g| g > 1.0));
    // k = 8..=19: successive differences shrink until they reach the
    // resolution of a double, after which they stay at that floor.
    let diffs: Vec<f64> = (8..=19)
        .map(|k| (est[k + 1 - 4] - est[k - 4]).abs())
        .collect();
    let floor = 4.0 * f64::EPSILON;
    for w in diffs.windows(2) {
        assert!(w[1] <= w[0] || w[1] <= floor, "{diffs:?}");
    }
    assert!(estimate_gamma(3).is_err());
}

#[test]
fn rho_estimates() {
    let r = wedderburn_ratios(200);
    // U_1 = U_2 = U_3 = 1, so the ratio is strictly below 1 from n = 3.
    assert_eq!(&r[..2], &[1.0, 1.0]);
    assert!(r[2..].iter().all(|&x| x > 0.0 && x < 1.0));
    let raw = r[99];
    assert!(raw > 0.39 && raw < 0.41, "{raw}");
    assert!(estimate_rho(99).is_err());
    let rho = estimate_rho(2000).unwrap();
    assert!((rho - 0.40270).abs() < 5e-4, "{rho}");
}

#[test]
fn caterpillar_probability_asymptotics() {
    for (model, exact) in [
        (Model::UniformLabeled, ratio(64, 429)),
        (Model::UniformUnordered, ratio(1, 23)),
    ] {
        let a = pi_asymptotic(8, model).unwrap();
        let q = a.value / rational_to_f64(&exact);
        assert!((0.5..=2.0).contains(&q), "{model}: {q}");
        assert!((a.ln.exp() - a.value).abs() < 1e-15);
    }
    assert_eq!(caterpillar_probability(5, Model::YuleHarding).unwrap(), ratio(1, 3));
    // Stirling's form should approach 2^(n-2)/(n-1)!.
    let exact = caterpillar_probability(60, Model::YuleHarding).unwrap();
    let ln_exact = rational_to_f64(&exact).ln();
    let ln_asym = pi_asymptotic(60, Model::YuleHarding).unwrap().ln;
    assert!((ln_exact - ln_asym).abs() < 0.05);
    assert!(pi_asymptotic(5000, Model::YuleHarding).unwrap().ln.is_finite());
    assert!(pi_asymptotic(1, Model::YuleHarding).is_err());
}

#[test]
fn loglog_leading_terms() {
    let near = |a: f64, b: f64| (a - b).abs() < 5e-4;
    assert!(near(loglog_asymptotic(20, Model::UniformLabeled).unwrap(), 15.853));
    assert!(near(loglog_asymptotic(20, Model::UniformOrdered).unwrap(), 15.853));
    assert!(near(loglog_asymptotic(20, Model::UniformUnordered).unwrap(), 14.029));
    assert!(near(loglog_asymptotic(20, Model::YuleHarding).unwrap(), 12.915));
    assert!(loglog_asymptotic(1, Model::YuleHarding).is_err());
}

#[test]
fn mean_rank_examples() {
    let m = mean_rank_asymptotic(4, Model::YuleHarding, false).unwrap();
    assert!(m.exact_available);
    assert_eq!(m.mean, Some(ratio(10, 3)));

    let m = mean_rank_asymptotic(8, Model::UniformLabeled, false).unwrap();
    let approx = m.mean.unwrap();
    assert_eq!(approx, ratio(64, 429) * ratio(2598062, 1));
    let e_f = exact_moments(8, Model::UniformLabeled).unwrap().e_f.unwrap();
    let d6 = BigRational::from_integer(oracle_d(6).into());
    let q = &e_f / &approx;
    assert!(q >= BigRational::from_integer(1.into()));
    assert!(q <= BigRational::from_integer(1.into()) + d6 / &approx);

    let big_n = mean_rank_asymptotic(100, Model::UniformUnordered, true).unwrap();
    assert!(!big_n.exact_available && big_n.mean.is_none());
    assert!(big_n.log2log_mean.is_finite());
    assert!(mean_rank_asymptotic(3, Model::YuleHarding, false).is_err());
}

#[test]
fn mean_rank_paths_agree() {
    for n in 8..=24 {
        for model in Model::DISTINCT {
            for variance in [false, true] {
                let exact = exact_mean_rank_asymptotic(n, model, variance).unwrap();
                let want = log2_ln_rational(&exact).unwrap();
                let got = mean_rank_log2log_logdomain(n, model, variance).unwrap();
                assert!((got - want).abs() < 1e-9, "{model} n={n}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn constants_document() {
    let v = PaperConstants::reported().to_json();
    assert_eq!(v["alpha"], "4.3110700000000000e0");
    assert_eq!(v["gamma"], "1.1162500000000000e0");
}
