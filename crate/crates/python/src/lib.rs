//! Python bindings: `import zenodec`.

use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

use zenodec_core::discrete::{
    decay_constant, decay_exponent, iterate_difference_equation, relaxation_delta, ExponentMode, TransitionEnergies,
};
use zenodec_core::master::{evolve, fit_decay_rate, init_cat_state, EvolutionConfig};
use zenodec_core::potential::QuarticPotential;
use zenodec_core::scenarios::{
    build_report_with, evolution_config, sweep, CatSetup, EpsilonMode, QubitTransition, SweepVariable, TrapScenario,
    DEFAULT_GRID_POINTS,
};
use zenodec_core::timescales::{self, TimescaleReport};
use zenodec_core::Error;

fn to_py(e: Error) -> PyErr {
    if e.is_numerical() {
        PyArithmeticError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn parse_mode(mode: &str) -> PyResult<EpsilonMode> {
    mode.parse().map_err(to_py)
}

/// Trap configuration: ion mass, qubit and trap frequencies, well width,
/// temperature and asymmetry energy (SI units).
#[pyclass(name = "Scenario", module = "zenodec", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyScenario {
    inner: TrapScenario,
}

#[pymethods]
impl PyScenario {
    #[new]
    #[pyo3(signature = (label, mass_amu, nu0_hz, nux_hz, well_width_m, temperature_k, epsilon_mode = "paper_value", epsilon_j = None))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        label: &str,
        mass_amu: f64,
        nu0_hz: f64,
        nux_hz: f64,
        well_width_m: f64,
        temperature_k: f64,
        epsilon_mode: &str,
        epsilon_j: Option<f64>,
    ) -> PyResult<Self> {
        let mode = parse_mode(epsilon_mode)?;
        TrapScenario::new(
            label,
            mass_amu,
            nu0_hz,
            nux_hz,
            well_width_m,
            temperature_k,
            mode,
            epsilon_j,
        )
        .map(|inner| Self { inner })
        .map_err(to_py)
    }

    #[staticmethod]
    fn preset(name: &str) -> PyResult<Self> {
        TrapScenario::preset(name)
            .map(|inner| Self { inner })
            .ok_or_else(|| PyValueError::new_err(format!("unknown preset {name:?}")))
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        TrapScenario::load(path).map(|inner| Self { inner }).map_err(to_py)
    }

    fn save(&self, path: &str) -> PyResult<()> {
        self.inner.save(path).map_err(to_py)
    }

    fn to_text(&self) -> String {
        self.inner.to_file_string()
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label().to_string()
    }

    #[getter]
    fn mass_kg(&self) -> f64 {
        self.inner.mass()
    }

    #[getter]
    fn mass_amu(&self) -> f64 {
        self.inner.mass_amu()
    }

    #[getter]
    fn nu0_hz(&self) -> f64 {
        self.inner.nu0()
    }

    #[getter]
    fn nux_hz(&self) -> f64 {
        self.inner.nux()
    }

    #[getter]
    fn well_width_m(&self) -> f64 {
        self.inner.well_width()
    }

    #[getter]
    fn temperature_k(&self) -> f64 {
        self.inner.temperature()
    }

    #[getter]
    fn epsilon_j(&self) -> f64 {
        self.inner.epsilon()
    }

    #[getter]
    fn epsilon_mode(&self) -> &'static str {
        self.inner.epsilon_mode().as_str()
    }

    fn with_temperature(&self, temperature_k: f64) -> PyResult<Self> {
        self.inner
            .with_temperature(temperature_k)
            .map(|inner| Self { inner })
            .map_err(to_py)
    }

    fn with_width(&self, well_width_m: f64) -> PyResult<Self> {
        self.inner
            .with_width(well_width_m)
            .map(|inner| Self { inner })
            .map_err(to_py)
    }

    fn with_epsilon(&self, epsilon_j: f64) -> PyResult<Self> {
        self.inner
            .with_epsilon(epsilon_j)
            .map(|inner| Self { inner })
            .map_err(to_py)
    }

    fn with_epsilon_mode(&self, mode: &str) -> PyResult<Self> {
        self.inner
            .with_epsilon_mode(parse_mode(mode)?)
            .map(|inner| Self { inner })
            .map_err(to_py)
    }

    fn potential(&self) -> PyResult<PyPotential> {
        self.inner.potential().map(|inner| PyPotential { inner }).map_err(to_py)
    }

    /// Timescale report for a transition such as "0up-0down"; `tau_m_s`
    /// adds the dwell time for that measurement interval.
    #[pyo3(signature = (transition = "0up-0down", tau_m_s = None))]
    fn report(&self, transition: &str, tau_m_s: Option<f64>) -> PyResult<PyReport> {
        let tr = QubitTransition::parse(&self.inner, transition).map_err(to_py)?;
        build_report_with(&self.inner, &tr, tau_m_s)
            .map(PyReport::from)
            .map_err(to_py)
    }

    /// Log-spaced sweep of `variable` ("temperature", "width", "epsilon");
    /// returns `(value, Report)` pairs.
    #[pyo3(signature = (variable, lo, hi, n, transition = "0up-0down"))]
    fn sweep(&self, variable: &str, lo: f64, hi: f64, n: usize, transition: &str) -> PyResult<Vec<(f64, PyReport)>> {
        let var: SweepVariable = variable.parse().map_err(to_py)?;
        let tr = QubitTransition::parse(&self.inner, transition).map_err(to_py)?;
        let rows = sweep(&self.inner, tr.from_state, tr.to_state, var, lo, hi, n).map_err(to_py)?;
        Ok(rows.into_iter().map(|r| (r.value, PyReport::from(r.report))).collect())
    }

    /// Master-equation run of the two-well cat state. Returns the
    /// `(t_s, |rho(c1, c2)|)` trace and the fitted decay rate in 1/s.
    #[pyo3(signature = (dt_s, steps, transition = "0up-0down", grid_n = DEFAULT_GRID_POINTS, decoherence_only = false, weight = 0.5))]
    #[allow(clippy::too_many_arguments)]
    fn evolve_cat(
        &self,
        py: Python<'_>,
        dt_s: f64,
        steps: usize,
        transition: &str,
        grid_n: usize,
        decoherence_only: bool,
        weight: f64,
    ) -> PyResult<(Vec<(f64, f64)>, f64)> {
        let sc = self.inner.clone();
        let transition = transition.to_string();
        py.detach(move || {
            let tr = QubitTransition::parse(&sc, &transition)?;
            let cat = CatSetup::for_scenario(&sc, grid_n)?;
            let cfg = if decoherence_only {
                let gamma = decay_constant(&tr.energies()?)?;
                EvolutionConfig::decoherence_only(sc.mass(), gamma, sc.temperature(), dt_s, steps)
            } else {
                evolution_config(&sc, &tr, dt_s, steps)?
            };
            let rho = init_cat_state(cat.grid, cat.c1, cat.c2, cat.sigma, weight)?;
            let mut trace = vec![(rho.time(), rho.coherence_at(cat.c1, cat.c2)?)];
            let mut failure = None;
            evolve(rho, &cfg, |r| match r.coherence_at(cat.c1, cat.c2) {
                Ok(c) => trace.push((r.time(), c)),
                Err(e) => failure = Some(e),
            })?;
            if let Some(e) = failure {
                return Err(e);
            }
            let rate = fit_decay_rate(&trace)?;
            Ok((trace, rate))
        })
        .map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "Scenario(label={:?}, mass_amu={}, temperature_k={:e}, well_width_m={:e}, epsilon_j={:e})",
            self.inner.label(),
            self.inner.mass_amu(),
            self.inner.temperature(),
            self.inner.well_width(),
            self.inner.epsilon()
        )
    }
}

#[pyclass(name = "Report", module = "zenodec", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyReport {
    gamma_per_s: f64,
    delta_s: f64,
    tau_dec_s: f64,
    tau_dwell_s: Option<f64>,
    tau_zeno_s: f64,
    ratio: f64,
    t_tran_k: f64,
}

impl From<TimescaleReport> for PyReport {
    fn from(r: TimescaleReport) -> Self {
        Self {
            gamma_per_s: r.gamma,
            delta_s: r.delta,
            tau_dec_s: r.tau_dec,
            tau_dwell_s: r.tau_dwell,
            tau_zeno_s: r.tau_zeno,
            ratio: r.ratio,
            t_tran_k: r.t_tran,
        }
    }
}

#[pymethods]
impl PyReport {
    fn __repr__(&self) -> String {
        format!(
            "Report(tau_dec_s={:e}, tau_zeno_s={:e}, ratio={:e}, t_tran_k={:e})",
            self.tau_dec_s, self.tau_zeno_s, self.ratio, self.t_tran_k
        )
    }
}

/// V(x) = ½ m ω² x² [(x/a)² − A (x/a) + B]
#[pyclass(name = "Potential", module = "zenodec", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPotential {
    inner: QuarticPotential,
}

#[pymethods]
impl PyPotential {
    #[new]
    #[pyo3(signature = (mass_kg, omega, a, cubic = 14.0, quadratic = 45.0))]
    fn new(mass_kg: f64, omega: f64, a: f64, cubic: f64, quadratic: f64) -> PyResult<Self> {
        QuarticPotential::new(mass_kg, omega, a, cubic, quadratic)
            .map(|inner| Self { inner })
            .map_err(to_py)
    }

    #[staticmethod]
    fn from_asymmetry(epsilon_j: f64, mass_kg: f64, well_width_m: f64) -> PyResult<Self> {
        QuarticPotential::from_asymmetry(epsilon_j, mass_kg, well_width_m)
            .map(|inner| Self { inner })
            .map_err(to_py)
    }

    #[getter]
    fn omega(&self) -> f64 {
        self.inner.omega()
    }

    #[getter]
    fn a(&self) -> f64 {
        self.inner.a()
    }

    fn evaluate(&self, x: f64) -> PyResult<f64> {
        self.inner.evaluate(x).map_err(to_py)
    }

    fn dimensionless(&self, xi: f64) -> f64 {
        self.inner.dimensionless(xi)
    }

    /// (x0, x1, x2): left minimum, barrier top, right minimum.
    fn stationary_points(&self) -> PyResult<(f64, f64, f64)> {
        let sp = self.inner.stationary_points().map_err(to_py)?;
        Ok((sp.x0, sp.x1, sp.x2))
    }

    fn well_width(&self) -> PyResult<f64> {
        self.inner.well_width().map_err(to_py)
    }

    fn asymmetry_energy(&self) -> PyResult<f64> {
        self.inner.asymmetry_energy().map_err(to_py)
    }

    /// (nu, mean square displacement in m²) of the ground state.
    fn ground_state(&self) -> PyResult<(f64, f64)> {
        let gs = self.inner.ground_state().map_err(to_py)?;
        Ok((gs.nu, gs.msd))
    }

    fn scan(&self, xi_min: f64, xi_max: f64, n: usize) -> PyResult<Vec<(f64, f64)>> {
        self.inner.scan(xi_min, xi_max, n).map_err(to_py)
    }
}

#[pyfunction]
fn decoherence_time(mass_kg: f64, gamma_per_s: f64, temperature_k: f64, dx_sq_m2: f64) -> PyResult<f64> {
    timescales::decoherence_time_generic(mass_kg, gamma_per_s, temperature_k, dx_sq_m2).map_err(to_py)
}

#[pyfunction]
fn transition_temperature(epsilon_j: f64, mass_kg: f64, well_width_m: f64) -> PyResult<f64> {
    timescales::transition_temperature(epsilon_j, mass_kg, well_width_m).map_err(to_py)
}

#[pyfunction]
fn recoil_temperature(mass_kg: f64, k_per_m: f64) -> PyResult<f64> {
    timescales::recoil_temperature(mass_kg, k_per_m).map_err(to_py)
}

/// (delta_s, gamma_per_s, tau_zeno_s) for a transition given by its two gaps in J.
#[pyfunction]
fn transition_scales(gap_if_j: f64, gap_i0_j: f64) -> PyResult<(f64, f64, f64)> {
    let te = TransitionEnergies::from_gaps(gap_if_j, gap_i0_j).map_err(to_py)?;
    Ok((
        relaxation_delta(&te).map_err(to_py)?,
        decay_constant(&te).map_err(to_py)?,
        timescales::zeno_time(&te).map_err(to_py)?,
    ))
}

/// (Re, Im) of the decay exponent; `mode` is "paper" or "exact".
#[pyfunction]
#[pyo3(signature = (gap_j, delta_s, mode = "paper"))]
fn exponent(gap_j: f64, delta_s: f64, mode: &str) -> PyResult<(f64, f64)> {
    let mode = match mode {
        "paper" => ExponentMode::Paper,
        "exact" => ExponentMode::Exact,
        other => return Err(PyValueError::new_err(format!("unknown exponent mode {other:?}"))),
    };
    let e = decay_exponent(gap_j, delta_s, mode).map_err(to_py)?;
    Ok((e.re, e.im))
}

/// Amplitudes ψ_k of the difference equation, as complex numbers.
#[pyfunction]
fn iterate(gap_j: f64, delta_s: f64, steps: usize) -> PyResult<Vec<num_complex::Complex64>> {
    iterate_difference_equation(gap_j, delta_s, steps).map_err(to_py)
}

#[pymodule]
#[pyo3(name = "zenodec")]
fn zenodec_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScenario>()?;
    m.add_class::<PyReport>()?;
    m.add_class::<PyPotential>()?;
    m.add_function(wrap_pyfunction!(decoherence_time, m)?)?;
    m.add_function(wrap_pyfunction!(transition_temperature, m)?)?;
    m.add_function(wrap_pyfunction!(recoil_temperature, m)?)?;
    m.add_function(wrap_pyfunction!(transition_scales, m)?)?;
    m.add_function(wrap_pyfunction!(exponent, m)?)?;
    m.add_function(wrap_pyfunction!(iterate, m)?)?;
    m.add("HBAR", zenodec_core::units::HBAR)?;
    m.add("K_B", zenodec_core::units::K_B)?;
    m.add("AMU", zenodec_core::units::AMU)?;
    Ok(())
}
