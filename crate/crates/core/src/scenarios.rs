//! Trap presets, qubit ladder bookkeeping, reports and sweeps.
//!
//! The qubit is a product of a motional state |n⟩ (n = 0, 1, split by h·ν_x)
//! and a hyperfine state |↑⟩/|↓⟩ (split by ε). Energies are measured from
//! |0↓⟩:
//!
//! ```text
//! E(|n S⟩) = n·h·ν_x + (S = ↑ ? ε : 0)
//! ```

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;

use crate::discrete::{decay_constant, relaxation_delta, TransitionEnergies};
use crate::error::{positive, Error, Result};
use crate::master::{EvolutionConfig, GridSpec};
use crate::potential::{QuarticPotential, DEFAULT_WIDTH_OVER_A};
use crate::timescales::{
    decoherence_time_doublewell, dwell_time_weak, recoil_temperature, transition_temperature, zeno_time,
    MeasurementContext, TimescaleReport,
};
use crate::units::{amu_to_kg, H};

/// The asymmetry energy quoted for the ⁹Be⁺ hyperfine splitting, J.
pub const DEFAULT_EPSILON_J: f64 = 8.5e-25;

pub const REPORT_HEADER: &str = "variable,value,gamma_per_s,delta_s,tau_dec_s,tau_zeno_s,ratio,t_tran_k";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EpsilonMode {
    /// Explicit value, 8.5e-25 J unless given.
    #[default]
    PaperValue,
    /// ε = h·ν₀.
    HNu0,
}

impl EpsilonMode {
    pub fn as_str(self) -> &'static str {
        match self {
            EpsilonMode::PaperValue => "paper_value",
            EpsilonMode::HNu0 => "h_nu0",
        }
    }
}

impl FromStr for EpsilonMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "paper_value" | "paper" => Ok(EpsilonMode::PaperValue),
            "h_nu0" | "hnu0" => Ok(EpsilonMode::HNu0),
            other => Err(Error::Parse {
                key: "epsilon_mode".into(),
                message: format!("unknown mode `{other}` (expected paper_value or h_nu0)"),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrapScenario {
    label: String,
    mass_amu: f64,
    nu0: f64,
    nux: f64,
    w: f64,
    temperature: f64,
    epsilon_mode: EpsilonMode,
    epsilon: f64,
}

impl TrapScenario {
    /// `epsilon_j` is only consulted in [`EpsilonMode::PaperValue`]; in
    /// [`EpsilonMode::HNu0`] it must agree with h·ν₀ if given.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        label: impl Into<String>,
        mass_amu: f64,
        nu0: f64,
        nux: f64,
        w: f64,
        temperature: f64,
        epsilon_mode: EpsilonMode,
        epsilon_j: Option<f64>,
    ) -> Result<Self> {
        let label = label.into();
        if label.trim().is_empty() || label.contains('\n') {
            return Err(Error::Parse {
                key: "label".into(),
                message: "must be a non-empty single line".into(),
            });
        }
        positive("mass_amu", mass_amu)?;
        positive("nu0_hz", nu0)?;
        positive("nux_hz", nux)?;
        positive("well_width_m", w)?;
        positive("temperature_k", temperature)?;
        let epsilon = match epsilon_mode {
            EpsilonMode::PaperValue => positive("epsilon_j", epsilon_j.unwrap_or(DEFAULT_EPSILON_J))?,
            EpsilonMode::HNu0 => {
                let e = H * nu0;
                if let Some(given) = epsilon_j {
                    if ((given - e) / e).abs() > 1e-12 {
                        return Err(Error::validation("epsilon_j", given, "inconsistent with h*nu0_hz"));
                    }
                }
                e
            }
        };
        Ok(Self {
            label: label.trim().to_string(),
            mass_amu,
            nu0,
            nux,
            w,
            temperature,
            epsilon_mode,
            epsilon,
        })
    }

    /// Single ⁹Be⁺ ion: ν₀ = 1.250 GHz, ν_x = 11 MHz, w = 1 µm, T = 5 µK,
    /// ε = 8.5e-25 J.
    pub fn preset_be9() -> Self {
        Self::new(
            "Be9-hyperfine",
            9.012,
            1.250e9,
            1.1e7,
            1e-6,
            5e-6,
            EpsilonMode::PaperValue,
            None,
        )
        .expect("preset is valid")
    }

    /// Looks up a preset by name.
    pub fn preset(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "be9" | "be9-hyperfine" => Some(Self::preset_be9()),
            _ => None,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn mass_amu(&self) -> f64 {
        self.mass_amu
    }

    /// Ion mass in kg.
    pub fn mass(&self) -> f64 {
        amu_to_kg(self.mass_amu).expect("validated at construction")
    }

    pub fn nu0(&self) -> f64 {
        self.nu0
    }

    pub fn nux(&self) -> f64 {
        self.nux
    }

    pub fn well_width(&self) -> f64 {
        self.w
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn epsilon_mode(&self) -> EpsilonMode {
        self.epsilon_mode
    }

    /// Resolved asymmetry energy, J.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn with_epsilon_mode(&self, mode: EpsilonMode) -> Result<Self> {
        let eps = match mode {
            EpsilonMode::PaperValue if self.epsilon_mode == EpsilonMode::HNu0 => None,
            EpsilonMode::PaperValue => Some(self.epsilon),
            EpsilonMode::HNu0 => None,
        };
        Self::new(
            self.label.clone(),
            self.mass_amu,
            self.nu0,
            self.nux,
            self.w,
            self.temperature,
            mode,
            eps,
        )
    }

    pub fn with_temperature(&self, t: f64) -> Result<Self> {
        positive("temperature_k", t)?;
        Ok(Self {
            temperature: t,
            ..self.clone()
        })
    }

    pub fn with_width(&self, w: f64) -> Result<Self> {
        positive("well_width_m", w)?;
        Ok(Self { w, ..self.clone() })
    }

    /// Replaces ε by an explicit value.
    pub fn with_epsilon(&self, eps: f64) -> Result<Self> {
        positive("epsilon_j", eps)?;
        Ok(Self {
            epsilon: eps,
            epsilon_mode: EpsilonMode::PaperValue,
            ..self.clone()
        })
    }

    pub fn with_nu0(&self, nu0: f64) -> Result<Self> {
        let eps = match self.epsilon_mode {
            EpsilonMode::PaperValue => Some(self.epsilon),
            EpsilonMode::HNu0 => None,
        };
        Self::new(
            self.label.clone(),
            self.mass_amu,
            nu0,
            self.nux,
            self.w,
            self.temperature,
            self.epsilon_mode,
            eps,
        )
    }

    /// Default-geometry double well with this scenario's ε and w.
    pub fn potential(&self) -> Result<QuarticPotential> {
        QuarticPotential::from_asymmetry(self.epsilon, self.mass(), self.w)
    }

    /// Energy of a ladder state, J, with |0↓⟩ at zero.
    pub fn level_energy(&self, state: QubitState) -> f64 {
        let (n, up) = state.quantum_numbers();
        n as f64 * H * self.nux + if up { self.epsilon } else { 0.0 }
    }

    /// Flat `key = value` document.
    pub fn to_file_string(&self) -> String {
        let mut s = String::from("# zenodec trap scenario (SI units)\n");
        s += &format!("label = {}\n", self.label);
        s += &format!("mass_amu = {:e}\n", self.mass_amu);
        s += &format!("nu0_hz = {:e}\n", self.nu0);
        s += &format!("nux_hz = {:e}\n", self.nux);
        s += &format!("well_width_m = {:e}\n", self.w);
        s += &format!("temperature_k = {:e}\n", self.temperature);
        s += &format!("epsilon_mode = {}\n", self.epsilon_mode.as_str());
        s += &format!("epsilon_j = {:e}\n", self.epsilon);
        s
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_file_string())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        std::fs::read_to_string(path)?.parse()
    }
}

const SCENARIO_KEYS: [&str; 8] = [
    "label",
    "mass_amu",
    "nu0_hz",
    "nux_hz",
    "well_width_m",
    "temperature_k",
    "epsilon_mode",
    "epsilon_j",
];

impl FromStr for TrapScenario {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut entries: Vec<(&str, &str)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                key: format!("line {}", lineno + 1),
                message: "expected `key = value`".into(),
            })?;
            let key = key.trim();
            if !SCENARIO_KEYS.contains(&key) {
                return Err(Error::Parse {
                    key: key.into(),
                    message: "unknown key".into(),
                });
            }
            if entries.iter().any(|(k, _)| *k == key) {
                return Err(Error::Parse {
                    key: key.into(),
                    message: "duplicate key".into(),
                });
            }
            entries.push((key, value.trim()));
        }
        let get = |key: &str| entries.iter().find(|(k, _)| *k == key).map(|(_, v)| *v);
        let require = |key: &str| get(key).ok_or_else(|| Error::MissingKey(key.into()));
        let number = |key: &str| -> Result<f64> {
            let v = require(key)?;
            v.parse::<f64>().map_err(|e| Error::Parse {
                key: key.into(),
                message: format!("`{v}`: {e}"),
            })
        };
        let epsilon_j = match get("epsilon_j") {
            None | Some("") => None,
            Some(_) => Some(number("epsilon_j")?),
        };
        TrapScenario::new(
            require("label")?,
            number("mass_amu")?,
            number("nu0_hz")?,
            number("nux_hz")?,
            number("well_width_m")?,
            number("temperature_k")?,
            require("epsilon_mode")?.parse()?,
            epsilon_j,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QubitState {
    ZeroUp,
    ZeroDown,
    OneUp,
    OneDown,
}

impl QubitState {
    pub const ALL: [QubitState; 4] = [
        QubitState::ZeroUp,
        QubitState::ZeroDown,
        QubitState::OneUp,
        QubitState::OneDown,
    ];

    /// (motional quantum number, hyperfine up?)
    pub fn quantum_numbers(self) -> (u32, bool) {
        match self {
            QubitState::ZeroUp => (0, true),
            QubitState::ZeroDown => (0, false),
            QubitState::OneUp => (1, true),
            QubitState::OneDown => (1, false),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            QubitState::ZeroUp => "0up",
            QubitState::ZeroDown => "0down",
            QubitState::OneUp => "1up",
            QubitState::OneDown => "1down",
        }
    }
}

impl fmt::Display for QubitState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for QubitState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        QubitState::ALL
            .into_iter()
            .find(|q| q.as_str() == s.trim())
            .ok_or_else(|| Error::Parse {
                key: "state".into(),
                message: format!("unknown qubit state `{s}` (expected 0up, 0down, 1up or 1down)"),
            })
    }
}

/// A downhill transition on the four-level ladder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitTransition {
    pub from_state: QubitState,
    pub to_state: QubitState,
    pub gap_if: f64,
    pub gap_i0: f64,
}

impl QubitTransition {
    pub fn new(sc: &TrapScenario, from_state: QubitState, to_state: QubitState) -> Result<Self> {
        let e_i = sc.level_energy(from_state);
        let e_f = sc.level_energy(to_state);
        if e_f > e_i {
            return Err(Error::UphillTransition {
                from: from_state.to_string(),
                to: to_state.to_string(),
            });
        }
        Ok(Self {
            from_state,
            to_state,
            gap_if: e_i - e_f,
            gap_i0: e_i - sc.level_energy(QubitState::ZeroDown),
        })
    }

    /// Parses `from-to`, e.g. `0up-0down`.
    pub fn parse(sc: &TrapScenario, spec: &str) -> Result<Self> {
        let (a, b) = spec.split_once('-').ok_or_else(|| Error::Parse {
            key: "transition".into(),
            message: format!("`{spec}` is not of the form from-to"),
        })?;
        Self::new(sc, a.parse()?, b.parse()?)
    }

    pub fn name(&self) -> String {
        format!("{}-{}", self.from_state, self.to_state)
    }

    pub fn energies(&self) -> Result<TransitionEnergies> {
        TransitionEnergies::from_gaps(self.gap_if, self.gap_i0)
    }
}

pub fn build_report(sc: &TrapScenario, transition: &QubitTransition) -> Result<TimescaleReport> {
    build_report_with(sc, transition, None)
}

/// Full report, optionally including the dwell time for a measurement
/// interval `tau_m`.
pub fn build_report_with(
    sc: &TrapScenario,
    transition: &QubitTransition,
    tau_m: Option<f64>,
) -> Result<TimescaleReport> {
    let te = transition.energies()?;
    let name = |e: Error| match e {
        Error::DegenerateTransition(why) => Error::DegenerateTransition(format!("{} ({why})", transition.name())),
        other => other,
    };
    let tau_zeno = zeno_time(&te).map_err(name)?;
    let gamma = decay_constant(&te).map_err(name)?;
    let delta = relaxation_delta(&te).map_err(name)?;
    let (eps, m, w, t) = (sc.epsilon(), sc.mass(), sc.well_width(), sc.temperature());
    let tau_dec = decoherence_time_doublewell(&te, eps, m, w, t).map_err(name)?;
    let tau_dwell = match tau_m {
        Some(tm) => Some(dwell_time_weak(&te, &MeasurementContext::new(tm, &te)?)?),
        None => None,
    };
    Ok(TimescaleReport {
        gamma,
        delta,
        tau_dec,
        tau_dwell,
        tau_zeno,
        ratio: tau_dec / tau_zeno,
        t_tran: transition_temperature(eps, m, w)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    Temperature,
    Width,
    Epsilon,
}

impl SweepVariable {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepVariable::Temperature => "temperature",
            SweepVariable::Width => "width",
            SweepVariable::Epsilon => "epsilon",
        }
    }
}

impl FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "temperature" | "t" => Ok(SweepVariable::Temperature),
            "width" | "w" => Ok(SweepVariable::Width),
            "epsilon" | "eps" => Ok(SweepVariable::Epsilon),
            other => Err(Error::Parse {
                key: "variable".into(),
                message: format!("unknown sweep variable `{other}` (expected temperature, width or epsilon)"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub variable: SweepVariable,
    pub value: f64,
    pub report: TimescaleReport,
}

/// `n` log-spaced values from `lo` to `hi` inclusive.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi.is_finite() && lo < hi && n >= 2) {
        return Err(Error::InvalidRange {
            name: "sweep".into(),
            lo,
            hi,
            n,
        });
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..n)
        .map(|i| match i {
            0 => lo,
            i if i == n - 1 => hi,
            i => (a + (b - a) * i as f64 / (n - 1) as f64).exp(),
        })
        .collect())
}

/// One report per log-spaced value of `variable`; the transition is
/// re-derived for each row so ε sweeps move the ladder too.
pub fn sweep(
    sc: &TrapScenario,
    from_state: QubitState,
    to_state: QubitState,
    variable: SweepVariable,
    lo: f64,
    hi: f64,
    n: usize,
) -> Result<Vec<SweepRow>> {
    let values = log_space(lo, hi, n)?;
    values
        .par_iter()
        .map(|&value| {
            let row_sc = match variable {
                SweepVariable::Temperature => sc.with_temperature(value)?,
                SweepVariable::Width => sc.with_width(value)?,
                SweepVariable::Epsilon => sc.with_epsilon(value)?,
            };
            let tr = QubitTransition::new(&row_sc, from_state, to_state)?;
            Ok(SweepRow {
                variable,
                value,
                report: build_report(&row_sc, &tr)?,
            })
        })
        .collect()
}

fn report_fields(r: &TimescaleReport) -> [f64; 6] {
    [r.gamma, r.delta, r.tau_dec, r.tau_zeno, r.ratio, r.t_tran]
}

/// Writes rows under [`REPORT_HEADER`]. When any row carries a dwell time the
/// column `tau_dwell_s` is appended.
pub fn write_report_csv<W: Write + ?Sized>(out: &mut W, rows: &[SweepRow]) -> std::io::Result<()> {
    let dwell = rows.iter().any(|r| r.report.tau_dwell.is_some());
    if dwell {
        writeln!(out, "{REPORT_HEADER},tau_dwell_s")?;
    } else {
        writeln!(out, "{REPORT_HEADER}")?;
    }
    for row in rows {
        let mut line = format!(
            "{},{},{}",
            row.variable.as_str(),
            crate::format::sig17(row.value),
            crate::format::row(&report_fields(&row.report))
        );
        if dwell {
            line.push(',');
            line += &row.report.tau_dwell.map(crate::format::sig17).unwrap_or_default();
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// Laser-cooling reference: recoil temperature of an atom at one wavelength
/// and the fraction of it reached by Raman cooling.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoilReference {
    pub label: String,
    pub mass_amu: f64,
    pub wavelength: f64,
    pub cooling_fraction: f64,
}

impl RecoilReference {
    /// Sodium D line, Raman cooled to 0.42 of the recoil temperature.
    pub fn preset_na() -> Self {
        Self {
            label: "Na-raman".into(),
            mass_amu: 22.990,
            wavelength: 589e-9,
            cooling_fraction: 0.42,
        }
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.wavelength
    }

    pub fn recoil_temperature(&self) -> Result<f64> {
        recoil_temperature(amu_to_kg(self.mass_amu)?, self.wavenumber())
    }

    pub fn cooled_temperature(&self) -> Result<f64> {
        Ok(self.cooling_fraction * self.recoil_temperature()?)
    }
}

/// Two-well cat state geometry for a scenario: the grid spans [−2a, 10a]
/// and the packets sit on the nodes nearest the two minima.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatSetup {
    pub grid: GridSpec,
    pub c1: f64,
    pub c2: f64,
    pub sigma: f64,
}

pub const DEFAULT_GRID_POINTS: usize = 256;

impl CatSetup {
    pub fn for_scenario(sc: &TrapScenario, n: usize) -> Result<Self> {
        let pot = sc.potential()?;
        let a = sc.well_width() / DEFAULT_WIDTH_OVER_A;
        let grid = GridSpec::new(-2.0 * a, 10.0 * a, n)?;
        let sp = pot.stationary_points()?;
        Ok(Self {
            grid,
            c1: grid.snap(sp.x0)?,
            c2: grid.snap(sp.x2)?,
            sigma: pot.ground_state()?.sigma(),
        })
    }

    /// Spacing of the two packets.
    pub fn separation(&self) -> f64 {
        (self.c2 - self.c1).abs()
    }
}

/// Master-equation configuration for a scenario, with γ taken from the
/// transition and the scenario's double well as potential.
pub fn evolution_config(
    sc: &TrapScenario,
    transition: &QubitTransition,
    dt: f64,
    steps: usize,
) -> Result<EvolutionConfig> {
    let gamma = decay_constant(&transition.energies()?)?;
    Ok(EvolutionConfig::full(
        sc.mass(),
        gamma,
        sc.temperature(),
        Some(sc.potential()?),
        dt,
        steps,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::HBAR;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn be9() -> TrapScenario {
        TrapScenario::preset_be9()
    }

    #[test]
    fn preset_values() {
        let sc = be9();
        assert_eq!(sc.label(), "Be9-hyperfine");
        assert_eq!(sc.epsilon(), 8.5e-25);
        assert_relative_eq!(sc.mass(), 1.49648e-26, max_relative = 1e-5);
        let h = sc.with_epsilon_mode(EpsilonMode::HNu0).unwrap();
        assert_relative_eq!(h.epsilon(), 8.2826e-25, max_relative = 1e-4);
        let back = h.with_epsilon_mode(EpsilonMode::PaperValue).unwrap();
        assert_eq!(back.epsilon(), DEFAULT_EPSILON_J);
        assert_eq!(TrapScenario::preset("BE9"), Some(sc));
        assert_eq!(TrapScenario::preset("ca40"), None);
    }

    #[test]
    fn ladder_bookkeeping() {
        let sc = be9();
        let e = |s| sc.level_energy(s);
        use QubitState::*;
        assert_eq!(e(ZeroDown), 0.0);
        assert_relative_eq!(e(OneUp) - e(ZeroUp), H * sc.nux(), max_relative = 1e-12);
        assert_relative_eq!(e(OneDown) - e(ZeroDown), H * sc.nux(), max_relative = 1e-12);
        assert_relative_eq!(e(ZeroUp) - e(ZeroDown), sc.epsilon(), max_relative = 1e-12);
        assert_relative_eq!(e(OneUp) - e(OneDown), sc.epsilon(), max_relative = 1e-12);
    }

    #[test]
    fn transitions() {
        let sc = be9();
        let t = QubitTransition::parse(&sc, "0up-0down").unwrap();
        assert_eq!((t.gap_if, t.gap_i0), (sc.epsilon(), sc.epsilon()));
        assert_eq!(t.name(), "0up-0down");
        // h·ν_x < ε, so |1↓⟩ sits below |0↑⟩
        assert!(matches!(
            QubitTransition::parse(&sc, "1down-0up"),
            Err(Error::UphillTransition { .. })
        ));
        assert!(QubitTransition::parse(&sc, "0up").is_err());
        assert!(QubitTransition::parse(&sc, "2up-0down").is_err());
    }

    #[test]
    fn be9_report() {
        let sc = be9();
        let t = QubitTransition::parse(&sc, "0up-0down").unwrap();
        let r = build_report(&sc, &t).unwrap();
        assert_relative_eq!(r.tau_dec, 7.0e-9, max_relative = 0.01);
        assert_relative_eq!(r.tau_zeno, 1.75e-10, max_relative = 0.01);
        assert_relative_eq!(r.t_tran, 1.99e-4, max_relative = 0.01);
        assert_relative_eq!(r.ratio, r.tau_dec / r.tau_zeno, max_relative = 1e-12);
        assert!(r.tau_dwell.is_none());

        let at_tran = sc.with_temperature(r.t_tran).unwrap();
        let r2 = build_report(&at_tran, &t).unwrap();
        assert_relative_eq!(r2.ratio, 1.0, max_relative = 1e-9);

        let r3 = build_report_with(&sc, &t, Some(1e-12)).unwrap();
        assert_relative_eq!(r3.tau_dwell.unwrap(), 3.0786e-8, max_relative = 1e-4);
    }

    #[test]
    fn excited_motional_transition() {
        let sc = be9();
        let t = QubitTransition::parse(&sc, "1up-0down").unwrap();
        let gap = sc.epsilon() + H * sc.nux();
        assert_relative_eq!(t.gap_i0, gap, max_relative = 1e-15);
        assert_relative_eq!(t.gap_if, gap, max_relative = 1e-15);
        let r = build_report(&sc, &t).unwrap();
        for v in [r.gamma, r.delta, r.tau_dec, r.tau_zeno, r.ratio, r.t_tran] {
            assert!(v.is_finite() && v > 0.0);
        }
        assert_relative_eq!(r.tau_zeno, std::f64::consts::SQRT_2 * HBAR / gap, max_relative = 1e-12);
    }

    #[test]
    fn self_transition_names_itself() {
        let sc = be9();
        let t = QubitTransition::parse(&sc, "0up-0up").unwrap();
        match build_report(&sc, &t) {
            Err(Error::DegenerateTransition(msg)) => assert!(msg.contains("0up-0up"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn file_round_trip() {
        for sc in [
            be9(),
            be9().with_epsilon_mode(EpsilonMode::HNu0).unwrap(),
            be9().with_temperature(1.234567e-7).unwrap(),
        ] {
            let text = sc.to_file_string();
            let back: TrapScenario = text.parse().unwrap();
            assert_eq!(back, sc);
        }
    }

    #[test]
    fn file_errors() {
        let text = be9().to_file_string();
        let zero_t = text.replace("temperature_k = 5e-6", "temperature_k = 0");
        match zero_t.parse::<TrapScenario>() {
            Err(Error::Validation { name, .. }) => assert_eq!(name, "temperature_k"),
            other => panic!("{other:?}"),
        }
        let missing: String = text
            .lines()
            .filter(|l| !l.starts_with("nux_hz"))
            .map(|l| format!("{l}\n"))
            .collect();
        assert_eq!(missing.parse::<TrapScenario>(), Err(Error::MissingKey("nux_hz".into())));
        let hnu = "label = x\nmass_amu = 9.012\nnu0_hz = 1.25e9\nnux_hz = 1.1e7\nwell_width_m = 1e-6\ntemperature_k = 5e-6\nepsilon_mode = h_nu0\n";
        let sc: TrapScenario = hnu.parse().unwrap();
        assert_relative_eq!(sc.epsilon(), 8.2826e-25, max_relative = 1e-4);
        assert!(format!("{text}bogus = 1\n").parse::<TrapScenario>().is_err());
        assert!(text
            .replace("epsilon_mode = paper_value", "epsilon_mode = guess")
            .parse::<TrapScenario>()
            .is_err());
    }

    #[test]
    fn sweep_temperature_crosses_unity_once() {
        let sc = be9();
        let rows = sweep(
            &sc,
            QubitState::ZeroUp,
            QubitState::ZeroDown,
            SweepVariable::Temperature,
            1e-6,
            1e-3,
            50,
        )
        .unwrap();
        assert_eq!(rows.len(), 50);
        let crossings = rows
            .windows(2)
            .filter(|w| (w[0].report.ratio - 1.0) * (w[1].report.ratio - 1.0) < 0.0)
            .count();
        assert_eq!(crossings, 1);
        assert!(rows.windows(2).all(|w| w[1].report.ratio < w[0].report.ratio));
        assert_eq!(rows[0].value, 1e-6);
        assert_eq!(rows[49].value, 1e-3);
    }

    #[test]
    fn sweep_rejects_bad_ranges() {
        let sc = be9();
        let s = |lo, hi, n| {
            sweep(
                &sc,
                QubitState::ZeroUp,
                QubitState::ZeroDown,
                SweepVariable::Width,
                lo,
                hi,
                n,
            )
        };
        assert!(s(1e-6, 1e-7, 10).is_err());
        assert!(s(0.0, 1e-6, 10).is_err());
        assert!(s(1e-7, 1e-6, 1).is_err());
    }

    #[test]
    fn report_csv_layout() {
        let sc = be9();
        let rows = sweep(
            &sc,
            QubitState::ZeroUp,
            QubitState::ZeroDown,
            SweepVariable::Epsilon,
            1e-25,
            1e-24,
            3,
        )
        .unwrap();
        let mut buf = Vec::new();
        write_report_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), REPORT_HEADER);
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(first.len(), 8);
        assert_eq!(first[0], "epsilon");
    }

    #[test]
    fn sodium_reference() {
        let na = RecoilReference::preset_na();
        assert_relative_eq!(na.recoil_temperature().unwrap(), 2.40e-6, max_relative = 1e-3);
        assert_relative_eq!(na.cooled_temperature().unwrap(), 1.0e-6, max_relative = 0.01);
    }

    #[test]
    fn cat_setup_for_be9() {
        let cs = CatSetup::for_scenario(&be9(), DEFAULT_GRID_POINTS).unwrap();
        assert!(cs.sigma > 2.0 * cs.grid.dx());
        assert_relative_eq!(cs.sigma, 1.3815e-8, max_relative = 1e-3);
        assert_relative_eq!(cs.separation(), 1e-6, max_relative = 0.01);
    }

    proptest! {
        #[test]
        fn report_is_self_consistent(t in 1e-8f64..1e-2, w in 1e-7f64..1e-4, eps in 1e-26f64..1e-23) {
            let sc = be9().with_temperature(t).unwrap().with_width(w).unwrap().with_epsilon(eps).unwrap();
            for (a, b) in [("0up", "0down"), ("1up", "0down"), ("1up", "1down"), ("1down", "0down")] {
                let Ok(tr) = QubitTransition::parse(&sc, &format!("{a}-{b}")) else { continue };
                let r = build_report(&sc, &tr).unwrap();
                prop_assert!(((r.ratio - r.tau_dec / r.tau_zeno) / r.ratio).abs() <= 1e-9);
                prop_assert!(((r.t_tran - r.ratio * t) / r.t_tran).abs() <= 1e-9);
            }
        }
    }
}
