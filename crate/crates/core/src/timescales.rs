//! Closed-form decoherence, dwell, Zeno and temperature scales.
//!
//! `S` below stands for √((E_i − E_f)(E_i − E_0)).

use crate::discrete::TransitionEnergies;
use crate::error::{positive, Result};
use crate::units::{HBAR, K_B};

/// τ^M must sit this far below √2·τ^Z to count as frequent measurement.
pub const ZENO_SEPARATION: f64 = 0.1;

/// Report of every timescale for one transition and trap configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimescaleReport {
    pub gamma: f64,
    pub delta: f64,
    pub tau_dec: f64,
    pub tau_dwell: Option<f64>,
    pub tau_zeno: f64,
    pub ratio: f64,
    pub t_tran: f64,
}

/// Interval between measurements and whether it is short enough for the
/// Zeno regime of the given transition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementContext {
    pub tau_m: f64,
    pub zeno_regime_ok: bool,
}

impl MeasurementContext {
    pub fn new(tau_m: f64, te: &TransitionEnergies) -> Result<Self> {
        positive("tau_m", tau_m)?;
        let tz = zeno_time(te)?;
        Ok(Self {
            tau_m,
            zeno_regime_ok: tau_m < ZENO_SEPARATION * std::f64::consts::SQRT_2 * tz,
        })
    }
}

/// τ_dec = ħ² / (2 m γ k_B T Δx²).
pub fn decoherence_time_generic(mass: f64, gamma: f64, temperature: f64, dx_sq: f64) -> Result<f64> {
    positive("mass", mass)?;
    positive("gamma", gamma)?;
    positive("temperature", temperature)?;
    positive("dx_sq", dx_sq)?;
    Ok(HBAR * HBAR / (2.0 * mass * gamma * K_B * temperature * dx_sq))
}

/// Double-well decoherence time for general gaps:
/// (ħ√3/S)·(2ħ/(w k_B T))·√(2ε/m).
pub fn decoherence_time_doublewell(
    te: &TransitionEnergies,
    eps: f64,
    mass: f64,
    w: f64,
    temperature: f64,
) -> Result<f64> {
    let s = te.require_both_gaps()?;
    positive("epsilon", eps)?;
    positive("mass", mass)?;
    positive("well width", w)?;
    positive("temperature", temperature)?;
    let thermal = 2.0 * HBAR / (w * K_B * temperature) * (2.0 * eps / mass).sqrt();
    Ok(HBAR * 3f64.sqrt() / s * thermal)
}

/// Decoherence time of the |0↑⟩ → |0↓⟩ transition: (2ħ²/(w k_B T))·√(6/(mε)).
pub fn transition_tdec(eps: f64, mass: f64, w: f64, temperature: f64) -> Result<f64> {
    positive("epsilon", eps)?;
    positive("mass", mass)?;
    positive("well width", w)?;
    positive("temperature", temperature)?;
    Ok(2.0 * HBAR * HBAR / (w * K_B * temperature) * (6.0 / (mass * eps)).sqrt())
}

/// coth(x) for x > 0, stable near zero.
fn coth(x: f64) -> f64 {
    if x < 1e-8 {
        // 1/x + x/3 is exact to double precision here
        1.0 / x + x / 3.0
    } else {
        1.0 + 2.0 / (2.0 * x).exp_m1()
    }
}

/// Weak-value dwell time (ħ/S)·coth(τ^M S/(2ħ)).
pub fn dwell_time_weak(te: &TransitionEnergies, ctx: &MeasurementContext) -> Result<f64> {
    let s = te.require_both_gaps()?;
    positive("tau_m", ctx.tau_m)?;
    let x = ctx.tau_m * s / (2.0 * HBAR);
    let out = HBAR / s * coth(x);
    positive("dwell time", out)
}

/// τ^Z = √2·ħ/S.
pub fn zeno_time(te: &TransitionEnergies) -> Result<f64> {
    let s = te.require_both_gaps()?;
    Ok(std::f64::consts::SQRT_2 * HBAR / s)
}

/// √(τ_w^D(τ^M)·τ^M), which tends to τ^Z as τ^M → 0.
pub fn zeno_time_from_dwell(te: &TransitionEnergies, tau_m: f64) -> Result<f64> {
    let ctx = MeasurementContext::new(tau_m, te)?;
    Ok((dwell_time_weak(te, &ctx)? * tau_m).sqrt())
}

/// T_tran = (2ħ/(w k_B))·√(3ε/m).
pub fn transition_temperature(eps: f64, mass: f64, w: f64) -> Result<f64> {
    positive("epsilon", eps)?;
    positive("mass", mass)?;
    positive("well width", w)?;
    Ok(2.0 * HBAR / (w * K_B) * (3.0 * eps / mass).sqrt())
}

/// τ_dec/τ^Z = (2ħ/(w k_B T))·√(3ε/m).
pub fn ratio_dec_zeno(eps: f64, mass: f64, w: f64, temperature: f64) -> Result<f64> {
    positive("temperature", temperature)?;
    Ok(transition_temperature(eps, mass, w)? / temperature)
}

/// Photon recoil temperature ħ²k²/(m k_B).
pub fn recoil_temperature(mass: f64, k: f64) -> Result<f64> {
    positive("mass", mass)?;
    positive("wavenumber", k)?;
    Ok(HBAR * HBAR * k * k / (mass * K_B))
}
