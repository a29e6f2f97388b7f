//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fail.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zenodec_core::discrete::{
    decay_constant, decay_exponent, fitted_rate, iterate_difference_equation, ExponentMode, TransitionEnergies,
};
use zenodec_core::master::{coherence_trace, evolve, fit_decay_rate, init_cat_state, EvolutionConfig, GridSpec};
use zenodec_core::potential::QuarticPotential;
use zenodec_core::scenarios::{sweep, CatSetup, QubitState, RecoilReference, SweepVariable, TrapScenario};
use zenodec_core::timescales::{
    decoherence_time_doublewell, decoherence_time_generic, ratio_dec_zeno, transition_tdec, transition_temperature,
    zeno_time, zeno_time_from_dwell,
};
use zenodec_core::units::{amu_to_kg, HBAR, K_B};

type Outcome = Result<String, String>;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn check(cond: bool, msg: String) -> Outcome {
    if cond {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn be9_mass() -> f64 {
    amu_to_kg(9.012).unwrap()
}

const EPS: f64 = 8.5e-25;
const W: f64 = 1e-6;
const T: f64 = 5e-6;

fn c1_transition_temperature() -> Outcome {
    let sc = TrapScenario::preset_be9();
    let tt = transition_temperature(sc.epsilon(), sc.mass(), sc.well_width()).map_err(|e| e.to_string())?;
    check(
        rel(tt, 200e-6) <= 0.05 && rel(tt, 1.99e-4) <= 5e-3,
        format!("T_tran = {tt:.4e} K (expected just under 200 uK, tol 5%)"),
    )
}

fn c2_decoherence_time() -> Outcome {
    let t = transition_tdec(EPS, be9_mass(), W, T).map_err(|e| e.to_string())?;
    check(
        rel(t, 7e-9) <= 0.05 && rel(t, 6.998e-9) <= 1e-3,
        format!("tau_dec = {t:.4e} s (expected about 7 ns, tol 5%)"),
    )
}

fn c3_zeno_time() -> Outcome {
    let te = TransitionEnergies::degenerate(EPS).unwrap();
    let tz = zeno_time(&te).map_err(|e| e.to_string())?;
    check(
        rel(tz, 0.17e-9) <= 0.05 && rel(tz, 1.754e-10) <= 1e-3,
        format!("tau_Z = {tz:.4e} s (expected 0.17 ns, tol 5%)"),
    )
}

fn c4_identity_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let eps = 10f64.powf(rng.gen_range(-26.0..-23.0));
        let m = amu_to_kg(rng.gen_range(1.0..200.0)).unwrap();
        let w = 10f64.powf(rng.gen_range(-7.0..-5.0));
        let t = 10f64.powf(rng.gen_range(-7.0..-3.0));
        let te = TransitionEnergies::degenerate(eps).unwrap();
        let dw = decoherence_time_doublewell(&te, eps, m, w, t).unwrap();
        let tr = transition_tdec(eps, m, w, t).unwrap();
        let pot = QuarticPotential::from_asymmetry(eps, m, w).unwrap();
        let msd = pot.ground_state().unwrap().msd;
        let generic = decoherence_time_generic(m, decay_constant(&te).unwrap(), t, msd).unwrap();
        worst = worst.max(rel(dw, tr)).max(rel(generic, tr));
    }
    check(
        worst <= 1e-6,
        format!("100 random samples, worst relative mismatch {worst:.2e} (tol 1e-6)"),
    )
}

fn c5_difference_equation() -> Outcome {
    let delta = 1e-10;
    let mut worst = 0.0f64;
    for y in [0.01, 0.1, 0.5, 1.0] {
        let gap = y * HBAR / delta;
        let amps = iterate_difference_equation(gap, delta, 100).map_err(|e| e.to_string())?;
        let fit = fitted_rate(&amps, delta).map_err(|e| e.to_string())?;
        let exact = decay_exponent(gap, delta, ExponentMode::Exact).unwrap().re;
        worst = worst.max(rel(fit, exact));
    }
    let gap = 1e-3 * HBAR / delta;
    let exact = decay_exponent(gap, delta, ExponentMode::Exact).unwrap().re;
    let paper = decay_exponent(gap, delta, ExponentMode::Paper).unwrap().re;
    let limit = rel(paper, 2.0 * exact);
    check(
        worst <= 1e-10 && limit <= 1e-4,
        format!("fit vs exact worst {worst:.2e} (tol 1e-10); series/exact-2 at y=1e-3: {limit:.2e} (tol 1e-4)"),
    )
}

fn c6_master_equation() -> Outcome {
    let sc = TrapScenario::preset_be9();
    let setup = CatSetup::for_scenario(&sc, 256).map_err(|e| e.to_string())?;
    let te = TransitionEnergies::degenerate(sc.epsilon()).unwrap();
    let gamma = decay_constant(&te).unwrap();
    let m = sc.mass();
    let (steps, dt) = (1000, 2e-15);
    let cfg = EvolutionConfig::decoherence_only(m, gamma, sc.temperature(), dt, steps);
    let rho0 = init_cat_state(setup.grid, setup.c1, setup.c2, setup.sigma, 0.5).map_err(|e| e.to_string())?;
    let trace0 = rho0.trace().re;

    let mut herm = 0.0f64;
    let mut trace_drift = 0.0f64;
    let mut series = vec![(0.0, rho0.coherence_at(setup.c1, setup.c2).unwrap())];
    let out = evolve(rho0.clone(), &cfg, |r| {
        herm = herm.max(r.hermiticity_error());
        trace_drift = trace_drift.max(rel(r.trace().re, trace0));
        series.push((r.time(), r.coherence_at(setup.c1, setup.c2).unwrap()));
    })
    .map_err(|e| e.to_string())?;

    let lambda = 2.0 * m * gamma * K_B * sc.temperature() / (HBAR * HBAR);
    let g = setup.grid;
    let t = out.time();
    let mut pointwise = 0.0f64;
    let mut compared = 0usize;
    for j in 0..g.n() {
        for k in 0..g.n() {
            let expected = rho0.get(j, k) * (-lambda * (g.position(j) - g.position(k)).powi(2) * t).exp();
            // relative error is only meaningful for normal-range floats
            if expected.norm() > 1e-290 {
                compared += 1;
                pointwise = pointwise.max((out.get(j, k) - expected).norm() / expected.norm());
            }
        }
    }
    let dx = setup.separation();
    let rate = fit_decay_rate(&series).map_err(|e| e.to_string())?;
    let rate_err = rel(rate, lambda * dx * dx);
    let tau_dec = decoherence_time_generic(m, gamma, sc.temperature(), dx * dx).unwrap();
    let half_life = std::f64::consts::LN_2 / rate;
    let half_err = rel(half_life, std::f64::consts::LN_2 * tau_dec);
    // the single-snapshot route must agree with the streamed series
    let snap_trace = coherence_trace(&[rho0, out], setup.c1, setup.c2).map_err(|e| e.to_string())?;
    let snap_err = rel(
        fit_decay_rate(&[snap_trace[0], series[steps / 2], snap_trace[1]]).unwrap(),
        rate,
    );

    check(
        pointwise <= 1e-9 && rate_err <= 1e-6 && half_err <= 1e-6 && snap_err <= 1e-6 && herm < 1e-10 && trace_drift < 1e-6,
        format!(
            "n=256, 1000 steps: pointwise {pointwise:.1e} over {compared} entries (1e-9), rate {rate_err:.1e} (1e-6), half-life {half_err:.1e} (1e-6), hermiticity {herm:.1e} (1e-10), trace {trace_drift:.1e} (1e-6)"
        ),
    )
}

fn c7_dwell_zeno_limit() -> Outcome {
    let te = TransitionEnergies::degenerate(EPS).unwrap();
    let tz = zeno_time(&te).unwrap();
    let approx = zeno_time_from_dwell(&te, 1e-4 * tz).map_err(|e| e.to_string())?;
    let err = rel(approx, tz);
    check(
        err < 1e-4,
        format!("sqrt(tau_w * tau_M) at tau_M = 1e-4 tau_Z: rel error {err:.2e} (tol 1e-4)"),
    )
}

fn c8_recoil_temperature() -> Outcome {
    let na = RecoilReference::preset_na();
    let tr = na.recoil_temperature().map_err(|e| e.to_string())?;
    let cooled = na.cooled_temperature().unwrap();
    check(
        rel(tr, 2.40e-6) <= 5e-3 && rel(cooled, 1.0e-6) <= 0.05,
        format!("Na T_rec = {tr:.4e} K, 0.42 T_rec = {cooled:.4e} K (expected around 1 uK, tol 5%)"),
    )
}

fn c9_property_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut cases = 0usize;
    let mut failures = Vec::new();

    // stationary points are zeros of the slope
    for _ in 0..400 {
        cases += 1;
        let cubic = rng.gen_range(1.0..30.0);
        let quadratic = rng.gen_range(0.05..0.99) * 9.0 * cubic * cubic / 32.0;
        let p = QuarticPotential::new(
            10f64.powf(rng.gen_range(-27.0..-24.0)),
            10f64.powf(rng.gen_range(3.0..8.0)),
            10f64.powf(rng.gen_range(-8.0..-5.0)),
            cubic,
            quadratic,
        )
        .unwrap();
        let sp = p.stationary_points().unwrap();
        let h = 1e-5 * p.a();
        let slope =
            |x: f64| (p.evaluate(x + h).unwrap() - p.evaluate(x - h).unwrap()) / (2.0 * h) * p.a() / p.energy_scale();
        let reference = (0..=50)
            .map(|i| slope(sp.x2 * i as f64 / 50.0).abs())
            .fold(0.0f64, f64::max);
        if [sp.x0, sp.x1, sp.x2].iter().any(|&x| slope(x).abs() > 1e-6 * reference) {
            failures.push(format!("stationary slope A={cubic} B={quadratic}"));
        }
    }

    // ratio·T is the transition temperature
    for _ in 0..300 {
        cases += 1;
        let eps = 10f64.powf(rng.gen_range(-26.0..-23.0));
        let m = amu_to_kg(rng.gen_range(1.0..200.0)).unwrap();
        let w = 10f64.powf(rng.gen_range(-7.0..-4.0));
        let t = 10f64.powf(rng.gen_range(-8.0..-2.0));
        let tt = transition_temperature(eps, m, w).unwrap();
        if rel(ratio_dec_zeno(eps, m, w, t).unwrap() * t, tt) > 1e-12 {
            failures.push(format!("ratio*T eps={eps} t={t}"));
        }
    }

    // sweep scaling laws
    let base = TrapScenario::preset_be9();
    for _ in 0..250 {
        cases += 1;
        let lo = 10f64.powf(rng.gen_range(-8.0..-5.0));
        let hi = lo * 10f64.powf(rng.gen_range(0.5..3.0));
        let n = rng.gen_range(2..12);
        let var = [SweepVariable::Temperature, SweepVariable::Width, SweepVariable::Epsilon][rng.gen_range(0..3)];
        let (lo, hi) = if var == SweepVariable::Epsilon {
            (lo * 1e-19, hi * 1e-19)
        } else {
            (lo, hi)
        };
        let rows = sweep(&base, QubitState::ZeroUp, QubitState::ZeroDown, var, lo, hi, n).unwrap();
        let ok = rows.windows(2).all(|w| {
            let (a, b) = (&w[0], &w[1]);
            let k = b.value / a.value;
            match var {
                SweepVariable::Temperature => {
                    rel(b.report.ratio, a.report.ratio / k) < 1e-9 && b.report.ratio < a.report.ratio
                }
                SweepVariable::Width => rel(b.report.tau_dec, a.report.tau_dec / k) < 1e-9,
                SweepVariable::Epsilon => rel(b.report.t_tran, a.report.t_tran * k.sqrt()) < 1e-9,
            }
        });
        if !ok {
            failures.push(format!("sweep {var:?} [{lo}, {hi}]"));
        }
    }

    // decoherence-only coherence decays monotonically, diagonal untouched
    let grid = GridSpec::new(-1.5e-6, 1.5e-6, 48).unwrap();
    let (c1, c2) = (grid.snap(-0.4e-6).unwrap(), grid.snap(0.4e-6).unwrap());
    for _ in 0..100 {
        cases += 1;
        let weight = rng.gen_range(0.05..0.95);
        let rho = init_cat_state(grid, c1, c2, rng.gen_range(1.3e-7..1.7e-7), weight).unwrap();
        let gamma = 10f64.powf(rng.gen_range(7.0..10.0));
        let temp = 10f64.powf(rng.gen_range(-7.0..-4.0));
        let cfg = EvolutionConfig::decoherence_only(be9_mass(), gamma, temp, 1e-12, rng.gen_range(1..15));
        let diag: Vec<_> = (0..grid.n()).map(|j| rho.get(j, j)).collect();
        let mut last = rho.coherence_at(c1, c2).unwrap();
        let mut monotone = true;
        let out = evolve(rho, &cfg, |r| {
            let now = r.coherence_at(c1, c2).unwrap();
            monotone &= now <= last;
            last = now;
        })
        .unwrap();
        if !monotone || (0..grid.n()).any(|j| out.get(j, j) != diag[j]) {
            failures.push(format!("coherence monotonicity gamma={gamma} T={temp}"));
        }
    }

    check(
        failures.is_empty() && cases >= 1000,
        format!(
            "{cases} randomized cases, {} failures {:?}",
            failures.len(),
            failures.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("C1 transitional temperature", c1_transition_temperature),
        ("C2 decoherence time", c2_decoherence_time),
        ("C3 Zeno time", c3_zeno_time),
        ("C4 algebraic identity suite", c4_identity_suite),
        ("C5 difference-equation oracle", c5_difference_equation),
        ("C6 master-equation verification", c6_master_equation),
        ("C7 dwell/Zeno limit", c7_dwell_zeno_limit),
        ("C8 recoil temperature", c8_recoil_temperature),
        ("C9 property suite", c9_property_suite),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("[PASS] {name}: {msg} ({secs:.2}s)"),
            Err(msg) => {
                failed += 1;
                println!("[FAIL] {name}: {msg} ({secs:.2}s)");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
