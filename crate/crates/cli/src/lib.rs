//! `zenodec` command line.
//!
//! Data goes to the output stream (or `--output`), diagnostics to the error
//! stream. Exit status: 0 success, 2 usage error, 3 domain or validation
//! error, 4 numerical failure.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};

use zenodec_core::discrete::{
    decay_exponent, fitted_rate, iterate_difference_equation, relaxation_delta, ExponentMode,
};
use zenodec_core::format::{row, sig17};
use zenodec_core::master::{evolve, fit_decay_rate, init_cat_state, write_coherence_csv};
use zenodec_core::potential::{write_scan_csv, QuarticPotential, DEFAULT_CUBIC, DEFAULT_QUADRATIC};
use zenodec_core::scenarios::{
    build_report_with, evolution_config, sweep, write_report_csv, CatSetup, EpsilonMode, QubitTransition, SweepRow,
    SweepVariable, TrapScenario, DEFAULT_GRID_POINTS,
};
use zenodec_core::timescales::decoherence_time_generic;
use zenodec_core::units::{ghz_to_hz, mhz_to_hz, microkelvin_to_kelvin, micrometer_to_meter, HBAR};
use zenodec_core::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "zenodec",
    version,
    about = "Decoherence and Zeno timescales of a trapped ion in a double-well potential"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample the dimensionless quartic potential ξ²(ξ² − Aξ + B)
    Potential(PotentialArgs),
    /// Relaxation step, decay constant and difference-equation check for a transition
    Discrete(DiscreteArgs),
    /// Full timescale report for one scenario and transition
    Timescales(TimescaleArgs),
    /// Log-spaced parameter sweep of timescale reports
    Sweep(SweepArgs),
    /// Master-equation evolution of a two-well cat state; emits the coherence trace
    Evolve(EvolveArgs),
    /// Write a scenario file from a preset or validate an existing one
    Scenario(ScenarioArgs),
}

#[derive(Debug, Args)]
struct OutputArg {
    /// Write CSV to this file instead of standard output
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ScenarioSelect {
    /// Preset name (be9) or path to a scenario file
    #[arg(long, default_value = "be9")]
    scenario: String,
    /// Temperature override [µK]
    #[arg(long, value_name = "UK")]
    temperature_uk: Option<f64>,
    /// Well separation override [µm]
    #[arg(long, value_name = "UM")]
    width_um: Option<f64>,
    /// Hyperfine splitting override [GHz]
    #[arg(long, value_name = "GHZ")]
    nu0_ghz: Option<f64>,
    /// Motional splitting override [MHz]
    #[arg(long, value_name = "MHZ")]
    nux_mhz: Option<f64>,
    /// Asymmetry energy convention [paper_value | h_nu0]
    #[arg(long, value_name = "MODE")]
    epsilon_mode: Option<String>,
    /// Explicit asymmetry energy [J]; implies paper_value mode
    #[arg(long, value_name = "J")]
    epsilon_j: Option<f64>,
}

#[derive(Debug, Args)]
struct TransitionArg {
    /// Qubit transition `from-to` over states 0up, 0down, 1up, 1down [dimensionless labels]
    #[arg(long, default_value = "0up-0down")]
    transition: String,
}

#[derive(Debug, Args)]
struct PotentialArgs {
    /// Sample range and count `XI_MIN:XI_MAX:N` [dimensionless ξ = x/a]
    #[arg(long, default_value = "0:8:100")]
    scan: String,
    /// Cubic shape coefficient A [dimensionless]
    #[arg(long, default_value_t = DEFAULT_CUBIC)]
    cubic: f64,
    /// Quadratic shape coefficient B [dimensionless]
    #[arg(long, default_value_t = DEFAULT_QUADRATIC)]
    quadratic: f64,
    #[command(flatten)]
    out: OutputArg,
}

#[derive(Debug, Args)]
struct DiscreteArgs {
    #[command(flatten)]
    scenario: ScenarioSelect,
    #[command(flatten)]
    transition: TransitionArg,
    /// Override y = gap·δ/ħ, keeping δ from the transition [dimensionless]
    #[arg(long)]
    y: Option<f64>,
    /// Number of difference-equation steps [count]
    #[arg(long, default_value_t = 100)]
    steps: usize,
    /// Emit the amplitude series instead of the summary
    #[arg(long)]
    trace: bool,
    #[command(flatten)]
    out: OutputArg,
}

#[derive(Debug, Args)]
struct TimescaleArgs {
    #[command(flatten)]
    scenario: ScenarioSelect,
    #[command(flatten)]
    transition: TransitionArg,
    /// Measurement interval for the dwell time [ns]; adds a tau_dwell_s column
    #[arg(long, value_name = "NS")]
    tau_m_ns: Option<f64>,
    #[command(flatten)]
    out: OutputArg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SweepVar {
    Temperature,
    Width,
    Epsilon,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    scenario: ScenarioSelect,
    #[command(flatten)]
    transition: TransitionArg,
    /// Swept variable (temperature [K], width [m], epsilon [J])
    #[arg(long = "var", value_enum)]
    variable: SweepVar,
    /// Sweep bounds `LO:HI` in SI units of the swept variable [K | m | J]
    #[arg(long)]
    range: String,
    /// Number of log-spaced rows [count]
    #[arg(long, default_value_t = 50)]
    n: usize,
    #[command(flatten)]
    out: OutputArg,
}

#[derive(Debug, Args)]
struct EvolveArgs {
    #[command(flatten)]
    scenario: ScenarioSelect,
    #[command(flatten)]
    transition: TransitionArg,
    /// Grid points per axis [count]
    #[arg(long = "grid-n", default_value_t = DEFAULT_GRID_POINTS)]
    grid_n: usize,
    /// Time step [fs]
    #[arg(long, default_value_t = 10.0, value_name = "FS")]
    dt_fs: f64,
    /// Number of steps [count]
    #[arg(long, default_value_t = 100)]
    steps: usize,
    /// Comma-separated terms to integrate: hamiltonian, dissipation, decoherence
    #[arg(long, default_value = "hamiltonian,dissipation,decoherence")]
    terms: String,
    /// Weight of the left packet in the cat state [dimensionless, 0..1]
    #[arg(long, default_value_t = 0.5)]
    weight: f64,
    /// Record the coherence every this many steps [count]
    #[arg(long, default_value_t = 1)]
    record_every: usize,
    /// Write the final density matrix as CSV (x_m,xp_m,re,im) to this file
    #[arg(long)]
    snapshot: Option<PathBuf>,
    #[command(flatten)]
    out: OutputArg,
}

#[derive(Debug, Args)]
struct ScenarioArgs {
    #[command(flatten)]
    scenario: ScenarioSelect,
    /// Ion mass override [amu]
    #[arg(long, value_name = "AMU")]
    mass_amu: Option<f64>,
    /// Label override [text]
    #[arg(long)]
    label: Option<String>,
    #[command(flatten)]
    out: OutputArg,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Domain(e.into())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    // Negative values must reach the validators instead of being read as flags.
    let command = Cli::command().mut_subcommands(|sub| sub.allow_negative_numbers(true));
    let parsed = command
        .try_get_matches_from(argv)
        .and_then(|m| Cli::from_arg_matches(&m));
    let cli = match parsed {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{rendered}");
                EXIT_OK
            };
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_numerical() {
                EXIT_NUMERICAL
            } else {
                EXIT_DOMAIN
            }
        }
    }
}

fn dispatch(cmd: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    match cmd {
        Command::Potential(a) => potential(a, stdout),
        Command::Discrete(a) => discrete(a, stdout),
        Command::Timescales(a) => timescales(a, stdout),
        Command::Sweep(a) => run_sweep(a, stdout),
        Command::Evolve(a) => run_evolve(a, stdout, stderr),
        Command::Scenario(a) => scenario(a, stdout),
    }
}

fn with_output(
    out: &OutputArg,
    stdout: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
) -> CliResult<()> {
    match &out.output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            body(&mut w)?;
            w.flush()?;
        }
        None => body(stdout)?,
    }
    Ok(())
}

fn parse_f64(what: &str, s: &str) -> CliResult<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Failure::Usage(format!("{what}: `{s}` is not a number")))
}

/// `LO:HI` or `LO:HI:N`.
fn parse_range(flag: &str, s: &str, with_count: bool) -> CliResult<(f64, f64, Option<usize>)> {
    let parts: Vec<&str> = s.split(':').collect();
    let expected = if with_count { 3 } else { 2 };
    if parts.len() != expected {
        let form = if with_count { "LO:HI:N" } else { "LO:HI" };
        return Err(Failure::Usage(format!("--{flag} expects {form}, got `{s}`")));
    }
    let lo = parse_f64(flag, parts[0])?;
    let hi = parse_f64(flag, parts[1])?;
    let n = if with_count {
        Some(
            parts[2]
                .trim()
                .parse::<usize>()
                .map_err(|_| Failure::Usage(format!("--{flag}: `{}` is not a count", parts[2])))?,
        )
    } else {
        None
    };
    Ok((lo, hi, n))
}

fn resolve_scenario(sel: &ScenarioSelect) -> CliResult<TrapScenario> {
    let mut sc = match TrapScenario::preset(&sel.scenario) {
        Some(sc) => sc,
        None if Path::new(&sel.scenario).exists() => TrapScenario::load(&sel.scenario)?,
        None => {
            return Err(Failure::Usage(format!(
                "--scenario: `{}` is neither a preset (be9) nor an existing file",
                sel.scenario
            )))
        }
    };
    if let Some(mode) = &sel.epsilon_mode {
        sc = sc.with_epsilon_mode(mode.parse::<EpsilonMode>()?)?;
    }
    if let Some(v) = sel.nu0_ghz {
        sc = sc.with_nu0(ghz_to_hz(v))?;
    }
    if let Some(v) = sel.nux_mhz {
        sc = TrapScenario::new(
            sc.label(),
            sc.mass_amu(),
            sc.nu0(),
            mhz_to_hz(v),
            sc.well_width(),
            sc.temperature(),
            sc.epsilon_mode(),
            Some(sc.epsilon()),
        )?;
    }
    if let Some(v) = sel.epsilon_j {
        sc = sc.with_epsilon(v)?;
    }
    if let Some(v) = sel.temperature_uk {
        sc = sc.with_temperature(microkelvin_to_kelvin(v))?;
    }
    if let Some(v) = sel.width_um {
        sc = sc.with_width(micrometer_to_meter(v))?;
    }
    Ok(sc)
}

fn potential(a: PotentialArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let (lo, hi, n) = parse_range("scan", &a.scan, true)?;
    // the dimensionless shape does not depend on m, ω, a
    let pot = QuarticPotential::new(1.0, 1.0, 1.0, a.cubic, a.quadratic)?;
    let rows = pot.scan(lo, hi, n.unwrap_or(0))?;
    with_output(&a.out, stdout, |w| write_scan_csv(w, &rows))
}

fn discrete(a: DiscreteArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let sc = resolve_scenario(&a.scenario)?;
    let tr = QubitTransition::parse(&sc, &a.transition.transition)?;
    let te = tr.energies()?;
    let delta = relaxation_delta(&te)?;
    if delta <= 0.0 {
        return Err(Error::DegenerateTransition(format!("{} has E_i = E_f", tr.name())).into());
    }
    let gap = match a.y {
        Some(y) => y * HBAR / delta,
        None => te.gap_i0(),
    };
    let amps = iterate_difference_equation(gap, delta, a.steps)?;
    if a.trace {
        return with_output(&a.out, stdout, |w| {
            writeln!(w, "step,t_s,re,im,abs")?;
            for (k, amp) in amps.iter().enumerate() {
                writeln!(w, "{},{}", k, row(&[k as f64 * delta, amp.re, amp.im, amp.norm()]))?;
            }
            Ok(())
        });
    }
    let exact = decay_exponent(gap, delta, ExponentMode::Exact)?;
    let paper = decay_exponent(gap, delta, ExponentMode::Paper)?;
    let fitted = fitted_rate(&amps, delta)?;
    let gamma = zenodec_core::discrete::decay_constant(&te)?;
    let rows = [
        ("gap_j", gap),
        ("delta_s", delta),
        ("y", gap * delta / HBAR),
        ("gamma_per_s", gamma),
        ("exact_rate_per_s", exact.re),
        ("series_rate_per_s", paper.re),
        ("fitted_rate_per_s", fitted),
        ("exact_phase_per_s", exact.im),
        ("series_phase_per_s", paper.im),
    ];
    with_output(&a.out, stdout, |w| {
        writeln!(w, "quantity,value")?;
        for (name, v) in rows {
            writeln!(w, "{name},{}", sig17(v))?;
        }
        Ok(())
    })
}

fn timescales(a: TimescaleArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let sc = resolve_scenario(&a.scenario)?;
    let tr = QubitTransition::parse(&sc, &a.transition.transition)?;
    let tau_m = a.tau_m_ns.map(|ns| ns * 1e-9);
    let report = build_report_with(&sc, &tr, tau_m)?;
    let rows = [SweepRow {
        variable: SweepVariable::Temperature,
        value: sc.temperature(),
        report,
    }];
    with_output(&a.out, stdout, |w| write_report_csv(w, &rows))
}

fn run_sweep(a: SweepArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let sc = resolve_scenario(&a.scenario)?;
    let tr = QubitTransition::parse(&sc, &a.transition.transition)?;
    let (lo, hi, _) = parse_range("range", &a.range, false)?;
    let variable = match a.variable {
        SweepVar::Temperature => SweepVariable::Temperature,
        SweepVar::Width => SweepVariable::Width,
        SweepVar::Epsilon => SweepVariable::Epsilon,
    };
    let rows = sweep(&sc, tr.from_state, tr.to_state, variable, lo, hi, a.n)?;
    with_output(&a.out, stdout, |w| write_report_csv(w, &rows))
}

fn run_evolve(a: EvolveArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let sc = resolve_scenario(&a.scenario)?;
    let tr = QubitTransition::parse(&sc, &a.transition.transition)?;
    if a.record_every == 0 {
        return Err(Failure::Usage("--record-every must be at least 1".into()));
    }
    let mut cfg = evolution_config(&sc, &tr, a.dt_fs * 1e-15, a.steps)?;
    cfg.include_hamiltonian = false;
    cfg.include_dissipation = false;
    cfg.include_decoherence = false;
    for term in a.terms.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match term {
            "hamiltonian" => cfg.include_hamiltonian = true,
            "dissipation" => cfg.include_dissipation = true,
            "decoherence" => cfg.include_decoherence = true,
            other => return Err(Failure::Usage(format!("--terms: unknown term `{other}`"))),
        }
    }
    let setup = CatSetup::for_scenario(&sc, a.grid_n)?;
    let rho = init_cat_state(setup.grid, setup.c1, setup.c2, setup.sigma, a.weight)?;
    let mut series = vec![(0.0, rho.coherence_at(setup.c1, setup.c2)?)];
    let every = a.record_every;
    let out = evolve(rho, &cfg, |r| {
        if r.steps() % every == 0 {
            if let Ok(c) = r.coherence_at(setup.c1, setup.c2) {
                series.push((r.time(), c));
            }
        }
    })?;
    with_output(&a.out, stdout, |w| write_coherence_csv(w, &series))?;
    if let Some(path) = &a.snapshot {
        let mut w = BufWriter::new(File::create(path)?);
        out.write_snapshot_csv(&mut w)?;
        w.flush()?;
    }
    let dx = setup.separation();
    let tau_dec = decoherence_time_generic(sc.mass(), cfg.gamma, sc.temperature(), dx * dx)?;
    if series.len() >= 3 && series.iter().all(|s| s.1 > 0.0) {
        let rate = fit_decay_rate(&series)?;
        let _ = writeln!(
            stderr,
            "fitted coherence decay rate {} 1/s; closed-form 1/tau_dec at separation {} m: {} 1/s",
            sig17(rate),
            sig17(dx),
            sig17(1.0 / tau_dec)
        );
    }
    Ok(())
}

fn scenario(a: ScenarioArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let mut sc = resolve_scenario(&a.scenario)?;
    if a.mass_amu.is_some() || a.label.is_some() {
        let eps = match sc.epsilon_mode() {
            EpsilonMode::PaperValue => Some(sc.epsilon()),
            EpsilonMode::HNu0 => None,
        };
        sc = TrapScenario::new(
            a.label.clone().unwrap_or_else(|| sc.label().to_string()),
            a.mass_amu.unwrap_or(sc.mass_amu()),
            sc.nu0(),
            sc.nux(),
            sc.well_width(),
            sc.temperature(),
            sc.epsilon_mode(),
            eps,
        )?;
    }
    let text = sc.to_file_string();
    with_output(&a.out, stdout, |w| w.write_all(text.as_bytes()))
}
