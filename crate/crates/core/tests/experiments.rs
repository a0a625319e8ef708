use radial_nlw::experiments::{
    self, execute, invariance_test, run_members, smoothing_check, strichartz_ratio_of, sup_difference,
    tail_estimate, EnsembleConfig, InitialData, Observable, SmoothingStudy, Study, TailQuantity, TailStudy,
};
use radial_nlw::flow::{evolve_strided, linear_trajectory};
use radial_nlw::random_data::sample_free;
use radial_nlw::rng::member_rng;
use radial_nlw::{Error, ModelParams, SpectralField};

#[test]
fn zero_horizon_invariance_has_zero_statistics() {
    let cfg = EnsembleConfig::new(ModelParams::new(2.0, 8).unwrap(), 0.0, 60, 5);
    let report = invariance_test(&cfg).unwrap();
    assert!(report.tests.iter().all(|t| t.statistic == 0.0 && !t.rejects));
}

#[test]
fn linear_flow_preserves_the_free_law() {
    let params = ModelParams::new(2.0, 8).unwrap().with_coupling(0.0);
    let cfg = EnsembleConfig::new(params, 1.0, 400, 6).with_data(InitialData::Free);
    let report = invariance_test(&cfg).unwrap();
    assert!(!report.any_rejects);
    for t in &report.tests {
        match t.observable {
            // moduli are conserved member by member up to rounding, so the
            // empirical CDFs differ by at most one step
            Observable::L2Mass | Observable::AbsCN => assert!(t.statistic <= 1.0 / 400.0 + 1e-12, "{t:?}"),
            _ => assert!(t.statistic > 0.0 && t.p_value > 0.01),
        }
    }
}

#[test]
fn identical_configs_give_identical_reports() {
    let cfg = EnsembleConfig::new(ModelParams::new(3.0, 8).unwrap(), 0.2, 20, 7);
    assert_eq!(invariance_test(&cfg).unwrap(), invariance_test(&cfg).unwrap());
    let study = experiments::InvarianceStudy { config: cfg };
    let forward = run_members(&study, 0..20).unwrap();
    let mut pieces = run_members(&study, 10..20).unwrap();
    pieces.splice(0..0, run_members(&study, 0..10).unwrap());
    assert_eq!(forward, pieces);
}

#[test]
fn coupled_draws_truncate_exactly() {
    for seed in 0..10 {
        let high = sample_free(64, &mut member_rng(seed, 3));
        let low = sample_free(8, &mut member_rng(seed, 3));
        assert_eq!(high.project(8), low);
    }
}

#[test]
fn equal_cutoffs_have_zero_difference() {
    let params = ModelParams::new(3.0, 8).unwrap();
    let phi = sample_free(8, &mut member_rng(1, 0));
    let u = evolve_strided(&phi, &params, 0.2, 1e-3, 10).unwrap();
    let v = evolve_strided(&phi, &params, 0.2, 1e-3, 10).unwrap();
    assert_eq!(sup_difference(&u, &v, 0.4).unwrap(), 0.0);
}

fn smoothing(sigma: f64, data: InitialData) -> SmoothingStudy {
    SmoothingStudy {
        alpha: 3.0,
        sigma,
        n_list: vec![8, 16],
        horizon: 0.2,
        dt: 1e-3,
        count: 8,
        master_seed: 3,
        stride: 10,
        data,
    }
}

#[test]
fn smoothing_of_zero_data_is_zero() {
    let report = smoothing_check(&smoothing(0.8, InitialData::Zero)).unwrap();
    assert!(report.rows.iter().all(|r| r.quantiles.max == 0.0));
}

#[test]
fn smoothing_medians_increase_with_sigma() {
    let rough = smoothing_check(&smoothing(0.8, InitialData::Free)).unwrap();
    let mild = smoothing_check(&smoothing(0.4, InitialData::Free)).unwrap();
    for (a, b) in rough.rows.iter().zip(&mild.rows) {
        assert!(a.quantiles.q50 > b.quantiles.q50);
    }
    assert!(smoothing_check(&smoothing(1.5, InitialData::Free)).is_ok_and(|r| !r.bounded_regime));
}

#[test]
fn strichartz_ratio_is_scale_invariant() {
    let params = ModelParams::new(2.0, 8).unwrap();
    let times: Vec<f64> = (0..=32).map(|k| k as f64 / 64.0).collect();
    let forcing = experiments::random_forcing(&params, &times, &mut member_rng(4, 0)).unwrap();
    let (ratio, _, _) = strichartz_ratio_of(&forcing, 0.7, 0.55, 2.0).unwrap();
    let ratio = ratio.unwrap();
    for lambda in [1e-3, 0.5, 7.0, 1e4] {
        let scaled = forcing.map_states(|_, f| f.scaled(lambda)).unwrap();
        let (r, _, _) = strichartz_ratio_of(&scaled, 0.7, 0.55, 2.0).unwrap();
        assert!((r.unwrap() / ratio - 1.0).abs() < 1e-12);
    }
    let zero = forcing.map_states(|_, f| SpectralField::zeros(f.cutoff())).unwrap();
    assert_eq!(strichartz_ratio_of(&zero, 0.7, 0.55, 2.0).unwrap().0, None);
}

#[test]
fn strichartz_rejects_inadmissible_indices() {
    let cfg = EnsembleConfig::new(ModelParams::new(2.0, 8).unwrap(), 0.5, 4, 0).with_dt(1.0 / 64.0);
    let err = experiments::strichartz_ratio(&cfg, 0.7, 0.55, 1.2).unwrap_err();
    assert!(matches!(err, Error::Parameter(_)) && err.to_string().contains("3/(3-s)"), "{err}");
}

#[test]
fn tail_survival_is_monotone_and_bounded() {
    let cfg = EnsembleConfig::new(ModelParams::new(3.0, 8).unwrap(), 0.25, 200, 8)
        .with_data(InitialData::Free)
        .with_dt(1.0 / 64.0);
    let report = tail_estimate(&cfg, &TailQuantity::LinearMixedNorm { p: 4.0, q: 8.0 }).unwrap();
    let s = &report.series[0];
    assert!(s.mean.is_finite() && s.mean > 0.0);
    assert!(s.survival.windows(2).all(|w| w[1].probability <= w[0].probability));
    assert_eq!(s.survival.last().unwrap().probability, 0.0);
}

#[test]
fn sobolev_data_tail_matches_direct_lp_norm() {
    let cfg = EnsembleConfig::new(ModelParams::new(2.0, 8).unwrap(), 0.0, 4, 9).with_data(InitialData::Free);
    let study = TailStudy { config: cfg.clone(), quantity: TailQuantity::DataSobolevLp { s: 0.0, p: 4.0 } };
    let members = run_members(&study, 0..4).unwrap();
    let mut grid = cfg.params.grid().unwrap();
    for m in members {
        let (phi, _) = cfg.initial_data(&mut grid, m.index).unwrap();
        let direct = radial_nlw::norms::field_lp_norm(&phi, 4.0).unwrap();
        assert!((m.values[0] - direct).abs() < 1e-12);
    }
    assert!(execute(&study).unwrap().series[0].fit.r_squared.is_finite());
}

#[test]
fn linear_tail_member_uses_exact_linear_flow() {
    let params = ModelParams::new(2.0, 8).unwrap();
    let cfg = EnsembleConfig::new(params, 0.5, 2, 10).with_data(InitialData::Free).with_dt(0.125);
    let study = TailStudy { config: cfg.clone(), quantity: TailQuantity::LinearMixedNorm { p: 2.0, q: 2.0 } };
    let member = study.member(1).unwrap();
    let mut grid = params.grid().unwrap();
    let (phi, _) = cfg.initial_data(&mut grid, 1).unwrap();
    let traj = linear_trajectory(&phi, &params, vec![0.0, 0.125, 0.25, 0.375, 0.5]).unwrap();
    // |c_n(t)| is constant, so the L²_x L²_t norm is √T‖φ‖
    assert!((member.values[0] - (0.5 * phi.l2_norm_squared()).sqrt()).abs() < 1e-10);
    assert_eq!(traj.len(), 5);
}
