mod common;

use num_complex::Complex64;
use radial_nlw::norms::sobolev_norm;
use radial_nlw::random_data::{self, kinetic_energy, potential_energy, sample_free, sample_gibbs};
use radial_nlw::rng::member_rng;
use radial_nlw::stats::{ks_two_sample, mean, standard_error};
use radial_nlw::{ModelParams, SpectralField};
use std::f64::consts::PI;

#[test]
fn free_mass_matches_closed_form() {
    let mut rng = member_rng(11, 0);
    let draws: Vec<f64> = (0..100_000).map(|_| sample_free(2, &mut rng).l2_norm_squared()).collect();
    let expected = 5.0 / (4.0 * PI * PI);
    let (m, se) = (mean(&draws), standard_error(&draws));
    assert!((m - expected).abs() < 3.0 * se, "{m} ± {se} vs {expected}");
}

#[test]
fn mode_variances_are_inverse_frequencies_squared() {
    let mut rng = member_rng(12, 0);
    let draws: Vec<SpectralField> = (0..20_000).map(|_| sample_free(4, &mut rng)).collect();
    for n in 1..=4 {
        let v: Vec<f64> = draws.iter().map(|f| f.coeff(n).norm_sqr()).collect();
        let expected = 1.0 / (n as f64 * PI).powi(2);
        assert!((mean(&v) - expected).abs() < 3.0 * standard_error(&v));
        let re: Vec<f64> = draws.iter().map(|f| f.coeff(n).re.powi(2)).collect();
        assert!((mean(&re) - 0.5 * expected).abs() < 3.0 * standard_error(&re));
    }
}

fn expected_sobolev(s: f64, cutoff: usize) -> f64 {
    (1..=cutoff)
        .map(|n| {
            let n = n as f64;
            (1.0 + n * n).powf(s) / (n * n)
        })
        .sum::<f64>()
        / (PI * PI)
}

#[test]
fn sobolev_expectation_grows_above_one_half_and_plateaus_below() {
    let dyadic: Vec<usize> = (4..=12).map(|k| 1 << k).collect();
    let increments = |s: f64| -> Vec<f64> {
        dyadic
            .windows(2)
            .map(|w| expected_sobolev(s, w[1]) - expected_sobolev(s, w[0]))
            .collect()
    };
    let rough = increments(0.6);
    assert!(rough.windows(2).all(|w| w[1] > w[0]));
    let critical = increments(0.5);
    assert!(critical.windows(2).all(|w| (w[1] / w[0] - 1.0).abs() < 0.05));
    let smooth = increments(0.3);
    assert!(smooth.windows(2).all(|w| w[1] < 0.9 * w[0]));
    assert!((expected_sobolev(0.0, 1 << 12) - 1.0 / 6.0).abs() < 1e-4);

    let mut rng = member_rng(13, 0);
    let draws: Vec<f64> = (0..20_000)
        .map(|_| sobolev_norm(&sample_free(16, &mut rng), 0.6).powi(2))
        .collect();
    assert!((mean(&draws) - expected_sobolev(0.6, 16)).abs() < 3.0 * standard_error(&draws));
}

#[test]
fn first_mode_potential_matches_adaptive_quadrature() {
    let field = SpectralField::mode(1, Complex64::new(1.0, 0.0), 1).unwrap();
    let oracle = 0.25 * common::ball_integral(|r| common::mode(1, r).powi(4), 1e-15);
    let v = potential_energy(&field, 2.0).unwrap();
    assert!((v - oracle).abs() < 1e-8, "{v} vs {oracle}");
}

#[test]
fn gradient_term_matches_finite_difference_quadrature() {
    let field = sample_free(8, &mut member_rng(14, 0));
    let re: Vec<f64> = field.coeffs().iter().map(|c| c.re).collect();
    let im: Vec<f64> = field.coeffs().iter().map(|c| c.im).collect();
    let h = 1e-4;
    let derivative = |a: &[f64], r: f64| {
        (common::field(a, r - 2.0 * h) - 8.0 * common::field(a, r - h) + 8.0 * common::field(a, r + h)
            - common::field(a, r + 2.0 * h))
            / (12.0 * h)
    };
    let oracle = common::ball_integral(|r| derivative(&re, r).powi(2) + derivative(&im, r).powi(2), 1e-10);
    let spectral = kinetic_energy(&field);
    assert!((spectral - oracle).abs() < 1e-8 * spectral, "{spectral} vs {oracle}");
}

#[test]
fn small_power_acceptance_approaches_gaussian_limit() {
    let params = ModelParams::new(1e-3, 4).unwrap();
    let mut rng = member_rng(15, 0);
    let (mut accepted, mut attempts) = (0u64, 0u64);
    while attempts < 50_000 {
        attempts += sample_gibbs(&params, &mut rng).unwrap().attempts;
        accepted += 1;
    }
    let rate = accepted as f64 / attempts as f64;
    // E exp(-½‖Re φ‖²) with independent Re c_n ~ N(0, 1/(2n²π²))
    let limit: f64 = (1..=4)
        .map(|n| (1.0 + 1.0 / (2.0 * (n as f64 * PI).powi(2))).powf(-0.5))
        .product();
    let se = (rate * (1.0 - rate) / attempts as f64).sqrt();
    assert!(rate > 0.0 && rate < 1.0);
    assert!((rate - limit).abs() < 3.0 * se + 1e-3, "{rate} vs {limit}");
}

#[test]
fn free_law_is_rotation_invariant() {
    let mut a = member_rng(16, 0);
    let mut b = member_rng(16, 1);
    let theta = Complex64::from_polar(1.0, 0.9);
    let x: Vec<f64> = (0..5000).map(|_| sample_free(3, &mut a).coeff(2).re).collect();
    let y: Vec<f64> = (0..5000).map(|_| (sample_free(3, &mut b).coeff(2) * theta).re).collect();
    assert!(ks_two_sample(&x, &y).unwrap().p_value > 0.01);
}

#[test]
fn gibbs_draws_are_reproducible_and_below_free_potential() {
    let params = ModelParams::new(2.0, 16).unwrap();
    let a = sample_gibbs(&params, &mut member_rng(17, 3)).unwrap();
    let b = sample_gibbs(&params, &mut member_rng(17, 3)).unwrap();
    assert_eq!(a, b);
    assert!((a.potential - random_data::potential_energy(&a.field, 2.0).unwrap()).abs() < 1e-15);
    assert!(sample_gibbs(&ModelParams::new(4.0, 4).unwrap(), &mut member_rng(0, 0)).is_err());
}
