use zenodec_core::discrete::TransitionEnergies;
use zenodec_core::master::{evolve, fit_decay_rate, init_cat_state};
use zenodec_core::scenarios::{evolution_config, CatSetup, QubitTransition, TrapScenario, DEFAULT_GRID_POINTS};
use zenodec_core::timescales::decoherence_time_generic;

#[test]
fn full_dynamics_decay_rate_within_factor_two_of_closed_form() {
    let sc = TrapScenario::preset_be9();
    let tr = QubitTransition::parse(&sc, "0up-0down").unwrap();
    let setup = CatSetup::for_scenario(&sc, DEFAULT_GRID_POINTS).unwrap();
    let cfg = evolution_config(&sc, &tr, 1e-14, 100).unwrap();
    let (limit, _) = cfg.max_stable_dt(&setup.grid).unwrap();
    assert!(cfg.dt < limit);

    let rho = init_cat_state(setup.grid, setup.c1, setup.c2, setup.sigma, 0.5).unwrap();
    let mut series = vec![(0.0, rho.coherence_at(setup.c1, setup.c2).unwrap())];
    let out = evolve(rho, &cfg, |r| {
        assert!(r.hermiticity_error() < 1e-10);
        assert!((r.trace().re - 1.0).abs() < 1e-6);
        assert!(r.min_diagonal() > -1e-10);
        series.push((r.time(), r.coherence_at(setup.c1, setup.c2).unwrap()));
    })
    .unwrap();
    assert!(out.boundary_magnitude() < 1e-8);

    let rate = fit_decay_rate(&series).unwrap();
    let te = TransitionEnergies::degenerate(sc.epsilon()).unwrap();
    let gamma = zenodec_core::discrete::decay_constant(&te).unwrap();
    let dx = setup.separation();
    let tau_dec = decoherence_time_generic(sc.mass(), gamma, sc.temperature(), dx * dx).unwrap();
    let ratio = rate * tau_dec;
    assert!((0.5..=2.0).contains(&ratio), "rate·tau_dec = {ratio}");
}
