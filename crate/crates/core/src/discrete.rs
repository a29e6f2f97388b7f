//! Discrete-time dissipative evolution.
//!
//! The retarded difference equation
//!
//! ```text
//! (H_i − H_0) ψ(t) = iħ [ψ(t) − ψ(t − δ)] / δ
//! ```
//!
//! has trial solutions ψ(t) = e^{−αt} ψ(0) with α = ln(1 + i·y)/δ,
//! y = (E_i − E_0)·δ/ħ. The relaxation step δ and the decay constant γ follow
//! from the initial, final and ground energies of a transition.

use num_complex::Complex64;

use crate::error::{finite, positive, Error, Result};
use crate::master::fit_decay_rate;
use crate::units::HBAR;

/// Energies (J) of the initial, final and ground levels of a transition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionEnergies {
    e_i: f64,
    e_f: f64,
    e_0: f64,
    gap_if: f64,
    gap_i0: f64,
}

impl TransitionEnergies {
    pub fn new(e_i: f64, e_f: f64, e_0: f64) -> Result<Self> {
        finite("E_i", e_i)?;
        finite("E_f", e_f)?;
        finite("E_0", e_0)?;
        if e_f > e_i {
            return Err(Error::validation("E_f", e_f, "must not exceed E_i"));
        }
        if e_0 > e_i {
            return Err(Error::validation("E_0", e_0, "must not exceed E_i"));
        }
        Ok(Self {
            e_i,
            e_f,
            e_0,
            gap_if: e_i - e_f,
            gap_i0: e_i - e_0,
        })
    }

    /// Builds the triple from its two gaps, with the ground level at zero.
    pub fn from_gaps(gap_if: f64, gap_i0: f64) -> Result<Self> {
        for (name, g) in [("E_i - E_f", gap_if), ("E_i - E_0", gap_i0)] {
            finite(name, g)?;
            if g < 0.0 {
                return Err(Error::validation(name, g, "must be non-negative"));
            }
        }
        Ok(Self {
            e_i: gap_i0,
            e_f: gap_i0 - gap_if,
            e_0: 0.0,
            gap_if,
            gap_i0,
        })
    }

    /// Both gaps equal to `eps`: a direct decay into the ground level.
    pub fn degenerate(eps: f64) -> Result<Self> {
        Self::from_gaps(eps, eps)
    }

    pub fn e_i(&self) -> f64 {
        self.e_i
    }

    pub fn e_f(&self) -> f64 {
        self.e_f
    }

    pub fn e_0(&self) -> f64 {
        self.e_0
    }

    /// E_i − E_f.
    pub fn gap_if(&self) -> f64 {
        self.gap_if
    }

    /// E_i − E_0.
    pub fn gap_i0(&self) -> f64 {
        self.gap_i0
    }

    /// √((E_i − E_f)(E_i − E_0)).
    pub fn geometric_gap(&self) -> f64 {
        (self.gap_if * self.gap_i0).sqrt()
    }

    pub(crate) fn require_ground_gap(&self) -> Result<()> {
        if self.gap_i0 > 0.0 {
            Ok(())
        } else {
            Err(Error::DegenerateTransition("E_i = E_0".into()))
        }
    }

    pub(crate) fn require_both_gaps(&self) -> Result<f64> {
        self.require_ground_gap()?;
        if self.gap_if > 0.0 {
            Ok(self.geometric_gap())
        } else {
            Err(Error::DegenerateTransition("E_i = E_f".into()))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExponentMode {
    /// Full logarithm ln(1 + iy)/δ.
    Exact,
    /// Truncated expansion without the ½ and ⅓ Taylor coefficients, the form
    /// every downstream timescale is built on.
    #[default]
    Paper,
}

/// α = re + i·im, so that ψ(t) = e^{−αt}ψ(0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayExponent {
    pub re: f64,
    pub im: f64,
}

pub fn decay_exponent(gap: f64, delta: f64, mode: ExponentMode) -> Result<DecayExponent> {
    positive("delta", delta)?;
    finite("gap", gap)?;
    if gap < 0.0 {
        return Err(Error::validation("gap", gap, "must be non-negative"));
    }
    let w = gap / HBAR;
    let y = w * delta;
    Ok(match mode {
        ExponentMode::Exact => DecayExponent {
            re: (y * y).ln_1p() / (2.0 * delta),
            im: y.atan() / delta,
        },
        ExponentMode::Paper => DecayExponent {
            re: w * w * delta,
            im: w - w * w * w * delta * delta,
        },
    })
}

/// δ = (ħ/(E_i − E_0))·√((E_i − E_f)/(E_i − E_0)).
pub fn relaxation_delta(te: &TransitionEnergies) -> Result<f64> {
    te.require_ground_gap()?;
    Ok(HBAR / te.gap_i0() * (te.gap_if() / te.gap_i0()).sqrt())
}

/// γ = √((E_i − E_f)(E_i − E_0))/ħ.
pub fn decay_constant(te: &TransitionEnergies) -> Result<f64> {
    te.require_ground_gap()?;
    Ok(te.geometric_gap() / HBAR)
}

/// Iterates ψ(t) = ψ(t − δ)/(1 + i·gap·δ/ħ) from ψ(0) = 1 and returns the
/// `steps + 1` amplitudes including the initial one.
pub fn iterate_difference_equation(gap: f64, delta: f64, steps: usize) -> Result<Vec<Complex64>> {
    positive("delta", delta)?;
    finite("gap", gap)?;
    if steps == 0 {
        return Err(Error::validation("steps", 0.0, "must be at least 1"));
    }
    let y = gap * delta / HBAR;
    if !y.is_finite() {
        return Err(Error::Saturated { step: 0, y });
    }
    let factor = Complex64::new(1.0, y).inv();
    let mut out = Vec::with_capacity(steps + 1);
    let mut amp = Complex64::new(1.0, 0.0);
    out.push(amp);
    for k in 1..=steps {
        amp *= factor;
        let modulus = amp.norm();
        if !modulus.is_finite() || modulus == 0.0 {
            return Err(Error::Saturated { step: k, y });
        }
        out.push(amp);
    }
    Ok(out)
}

/// Least-squares decay rate of |ψ| over the sequence, with samples spaced by δ.
pub fn fitted_rate(amplitudes: &[Complex64], delta: f64) -> Result<f64> {
    let series: Vec<(f64, f64)> = amplitudes
        .iter()
        .enumerate()
        .map(|(k, a)| (k as f64 * delta, a.norm()))
        .collect();
    fit_decay_rate(&series)
}
