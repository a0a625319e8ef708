use num_complex::Complex64;
use proptest::prelude::*;
use radial_nlw::basis::lp_norm;
use radial_nlw::flow::{evolve_strided, linear_trajectory};
use radial_nlw::norms::{
    embedding_constant, mixed_norm, sobolev_norm, space_time_spectrum, sup_sobolev, xsb_norm, NormSpec, TimeWindow,
};
use radial_nlw::random_data::{sample_free, sample_gibbs};
use radial_nlw::rng::member_rng;
use radial_nlw::{ModelParams, SpectralField, Trajectory};
use std::f64::consts::PI;

fn times(steps: usize, h: f64) -> Vec<f64> {
    (0..=steps).map(|k| k as f64 * h).collect()
}

fn constant(field: &SpectralField, steps: usize, h: f64) -> Trajectory {
    let params = ModelParams::new(2.0, field.cutoff()).unwrap();
    Trajectory::sampled(params, h, vec![field.clone(); steps + 1]).unwrap()
}

fn free_linear(seed: u64, cutoff: usize, steps: usize, h: f64) -> Trajectory {
    let params = ModelParams::new(2.0, cutoff).unwrap();
    linear_trajectory(&sample_free(cutoff, &mut member_rng(seed, 0)), &params, times(steps, h)).unwrap()
}

#[test]
fn constant_first_mode_separates() {
    let e1 = SpectralField::mode(1, Complex64::new(1.0, 0.0), 1).unwrap();
    let traj = constant(&e1, 64, 1.0 / 64.0);
    let value = mixed_norm(&traj, 4.0, 4.0, TimeWindow::whole(&traj)).unwrap();
    let reference = lp_norm(1, 4.0, 4096).unwrap();
    assert!((value - reference).abs() < 1e-8, "{value} vs {reference}");
    let sup = mixed_norm(&traj, f64::INFINITY, f64::INFINITY, TimeWindow::whole(&traj)).unwrap();
    assert!((sup - (PI / 2.0).sqrt()).abs() < 1e-14);
}

#[test]
fn square_norm_is_space_time_parseval() {
    let traj = free_linear(1, 12, 40, 0.025);
    let value = mixed_norm(&traj, 2.0, 2.0, TimeWindow::whole(&traj)).unwrap();
    let masses: Vec<f64> = traj.states().iter().map(SpectralField::l2_norm_squared).collect();
    let h = 0.025;
    let trapezoid = h * (masses.iter().sum::<f64>() - 0.5 * (masses[0] + masses[masses.len() - 1]));
    assert!((value - trapezoid.sqrt()).abs() < 1e-8);
}

#[test]
fn enlarging_the_window_never_decreases_the_norm() {
    let params = ModelParams::new(3.0, 16).unwrap();
    let phi = sample_gibbs(&params, &mut member_rng(2, 0)).unwrap().field;
    let traj = evolve_strided(&phi, &params, 1.0, 1e-3, 10).unwrap();
    for (p, q) in [(4.0, 8.0), (2.0, 2.0), (5.0, f64::INFINITY)] {
        let mut last = 0.0;
        for end in [0.1, 0.3, 0.5, 0.8, 1.0] {
            let v = NormSpec::mixed(p, q).with_window(TimeWindow::new(0.0, end).unwrap()).mixed_norm(&traj).unwrap();
            assert!(v >= last, "p={p}, q={q}, end={end}");
            last = v;
        }
    }
}

#[test]
fn zero_trajectory_has_zero_norms() {
    let traj = constant(&SpectralField::zeros(8), 64, 1.0 / 128.0);
    assert_eq!(mixed_norm(&traj, 4.0, 8.0, TimeWindow::whole(&traj)).unwrap(), 0.0);
    assert_eq!(xsb_norm(&traj, 0.5, 0.55).unwrap(), 0.0);
}

#[test]
fn linear_flow_concentrates_on_the_diagonal() {
    // the window of length 1/2 spreads each mode over a few harmonics; the
    // fraction is the same for every mode and every datum
    for seed in 0..5 {
        let traj = free_linear(seed, 16, 64, 1.0 / 128.0);
        let spectrum = space_time_spectrum(&traj).unwrap();
        let total = spectrum.weighted_energy(0.0, 0.0, 0);
        let leak = spectrum.weighted_energy(0.0, 0.0, 2) / total;
        assert!(leak < LEAKAGE_BOUND, "{leak}");
    }
}

/// Off-diagonal energy fraction of the linear flow, measured at 0.2831.
const LEAKAGE_BOUND: f64 = 0.29;

#[test]
fn restriction_norm_controls_the_sup_norm() {
    let params = ModelParams::new(3.0, 16).unwrap();
    for seed in 0..5 {
        let phi = sample_gibbs(&params, &mut member_rng(3, seed)).unwrap().field;
        let traj = evolve_strided(&phi, &params, 0.5, 1.0 / 1024.0, 8).unwrap();
        for s in [0.0, 0.4, 0.7] {
            let c = embedding_constant(0.55).unwrap();
            assert!(sup_sobolev(&traj, s) <= c * xsb_norm(&traj, s, 0.55).unwrap());
        }
    }
}

#[test]
fn sobolev_norm_at_zero_is_parseval() {
    let f = sample_free(32, &mut member_rng(4, 0));
    assert!((sobolev_norm(&f, 0.0) - f.l2_norm_squared().sqrt()).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn mixed_norm_is_a_norm(seed in 0u64..1000, lambda in -5.0f64..5.0, p in 1.0f64..6.0, q in 1.0f64..10.0) {
        let u = free_linear(seed, 8, 32, 1.0 / 64.0);
        let v = free_linear(seed + 1000, 8, 32, 1.0 / 64.0);
        let w = TimeWindow::whole(&u);
        let nu = mixed_norm(&u, p, q, w).unwrap();
        let scaled = u.map_states(|_, s| s.scaled(lambda)).unwrap();
        prop_assert!((mixed_norm(&scaled, p, q, w).unwrap() - lambda.abs() * nu).abs() <= 1e-9 * (1.0 + nu));
        let sum = Trajectory::sampled(*u.params(), 1.0 / 64.0, u.states().iter().zip(v.states()).map(|(a, b)| a.sum(b)).collect()).unwrap();
        let nv = mixed_norm(&v, p, q, w).unwrap();
        prop_assert!(mixed_norm(&sum, p, q, w).unwrap() <= nu + nv + 1e-9);
    }

    #[test]
    fn restriction_norm_is_a_norm(seed in 0u64..1000, lambda in -5.0f64..5.0, s in 0.0f64..1.0) {
        let u = free_linear(seed, 8, 32, 1.0 / 64.0);
        let v = free_linear(seed + 1000, 8, 32, 1.0 / 64.0);
        let nu = xsb_norm(&u, s, 0.55).unwrap();
        let scaled = u.map_states(|_, x| x.scaled(lambda)).unwrap();
        prop_assert!((xsb_norm(&scaled, s, 0.55).unwrap() - lambda.abs() * nu).abs() <= 1e-12 * (1.0 + nu));
        let sum = Trajectory::sampled(*u.params(), 1.0 / 64.0, u.states().iter().zip(v.states()).map(|(a, b)| a.sum(b)).collect()).unwrap();
        prop_assert!(xsb_norm(&sum, s, 0.55).unwrap() <= nu + xsb_norm(&v, s, 0.55).unwrap() + 1e-9);
    }
}
