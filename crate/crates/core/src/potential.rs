//! Quartic bistable potential
//!
//! ```text
//! V(x) = ½ m ω² x² [ (x/a)² − A (x/a) + B ]
//! ```
//!
//! With ξ = x/a the shape is ξ²(ξ² − Aξ + B), which has a minimum at ξ = 0, a
//! barrier and a second minimum whenever 9A² > 32B. The default geometry
//! A = 14, B = 45 puts the barrier at 3a and the right minimum at 7.5a.

use std::f64::consts::PI;

use crate::error::{finite, positive, Error, Result};
use crate::units::HBAR;

pub const DEFAULT_CUBIC: f64 = 14.0;
pub const DEFAULT_QUADRATIC: f64 = 45.0;

/// ε / (m ω² a²) for the default geometry: −V(7.5a) = (3375/32)·m ω² a².
pub const DEFAULT_ASYMMETRY_FACTOR: f64 = 3375.0 / 32.0;

/// w / a for the default geometry (x2 − x0 = 15a/2).
pub const DEFAULT_WIDTH_OVER_A: f64 = 7.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticPotential {
    mass: f64,
    omega: f64,
    a: f64,
    cubic: f64,
    quadratic: f64,
    beta_sq: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryPoints {
    /// Left minimum, always at the origin.
    pub x0: f64,
    /// Barrier maximum.
    pub x1: f64,
    /// Right minimum.
    pub x2: f64,
}

impl StationaryPoints {
    pub fn well_width(&self) -> f64 {
        self.x2 - self.x0
    }
}

/// Harmonic ground state of the left well, ψ(ξ) ∝ exp(−νξ²/2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundState {
    /// Dimensionless width parameter √B·β².
    pub nu: f64,
    /// Mean-square spatial shift ⟨x²⟩ = a²/(2ν), m².
    pub msd: f64,
    a: f64,
}

impl GroundState {
    /// Amplitude width in metres: ψ(x) ∝ exp(−x²/(2σ²)) with σ = a/√ν.
    pub fn sigma(&self) -> f64 {
        self.a / self.nu.sqrt()
    }

    /// Normalised wavefunction (ν/π)^{1/4} exp(−νξ²/2) / √a, in m^{-1/2}.
    pub fn amplitude(&self, x: f64) -> f64 {
        let xi = x / self.a;
        (self.nu / PI).powf(0.25) * (-0.5 * self.nu * xi * xi).exp() / self.a.sqrt()
    }

    /// Probability density |ψ(x)|², in 1/m.
    pub fn density(&self, x: f64) -> f64 {
        self.amplitude(x).powi(2)
    }
}

impl QuarticPotential {
    /// Builds a potential with explicit shape coefficients `cubic` (A) and
    /// `quadratic` (B).
    pub fn new(mass: f64, omega: f64, a: f64, cubic: f64, quadratic: f64) -> Result<Self> {
        positive("mass", mass)?;
        positive("omega", omega)?;
        positive("a", a)?;
        for (name, v) in [("A", cubic), ("B", quadratic)] {
            finite(name, v)?;
            if v < 0.0 {
                return Err(Error::validation(name, v, "must be non-negative"));
            }
        }
        let beta_sq = mass * omega * a * a / HBAR;
        if !beta_sq.is_finite() || beta_sq <= 0.0 {
            return Err(Error::validation("beta_sq", beta_sq, "must be finite and positive"));
        }
        Ok(Self {
            mass,
            omega,
            a,
            cubic,
            quadratic,
            beta_sq,
        })
    }

    /// Default A = 14, B = 45 double well.
    pub fn double_well(mass: f64, omega: f64, a: f64) -> Result<Self> {
        Self::new(mass, omega, a, DEFAULT_CUBIC, DEFAULT_QUADRATIC)
    }

    /// Default-geometry double well whose asymmetry energy is `eps` and whose
    /// minima are `w` apart.
    pub fn from_asymmetry(eps: f64, mass: f64, w: f64) -> Result<Self> {
        let omega = omega_from_asymmetry(eps, mass, w)?;
        Self::double_well(mass, omega, w / DEFAULT_WIDTH_OVER_A)
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn cubic(&self) -> f64 {
        self.cubic
    }

    pub fn quadratic(&self) -> f64 {
        self.quadratic
    }

    /// β² = m ω a² / ħ.
    pub fn beta_sq(&self) -> f64 {
        self.beta_sq
    }

    /// ½ m ω² a², the energy unit of the dimensionless shape.
    pub fn energy_scale(&self) -> f64 {
        0.5 * self.mass * self.omega * self.omega * self.a * self.a
    }

    fn discriminant(&self) -> f64 {
        9.0 * self.cubic * self.cubic - 32.0 * self.quadratic
    }

    /// True when there are three distinct stationary points.
    pub fn is_double_well(&self) -> bool {
        self.quadratic > 0.0 && self.discriminant() > 0.0
    }

    /// ξ²(ξ² − Aξ + B).
    pub fn dimensionless(&self, xi: f64) -> f64 {
        xi * xi * (xi * xi - self.cubic * xi + self.quadratic)
    }

    pub fn evaluate(&self, x: f64) -> Result<f64> {
        finite("x", x)?;
        Ok(self.energy_scale() * self.dimensionless(x / self.a))
    }

    /// Closed-form stationary points.
    pub fn stationary_points(&self) -> Result<StationaryPoints> {
        if self.quadratic == 0.0 {
            return Err(Error::FlatWell);
        }
        if self.discriminant() <= 0.0 {
            return Err(Error::SingleWell {
                nine_a_sq: 9.0 * self.cubic * self.cubic,
                thirty_two_b: 32.0 * self.quadratic,
            });
        }
        let root = self.discriminant().sqrt();
        let three_a = 3.0 * self.cubic;
        Ok(StationaryPoints {
            x0: 0.0,
            x1: self.a / 8.0 * (three_a - root),
            x2: self.a / 8.0 * (three_a + root),
        })
    }

    /// x2 − x0.
    pub fn well_width(&self) -> Result<f64> {
        Ok(self.stationary_points()?.well_width())
    }

    /// ε = V(x0) − V(x2); positive when the right well is deeper.
    pub fn asymmetry_energy(&self) -> Result<f64> {
        let sp = self.stationary_points()?;
        Ok(self.evaluate(sp.x0)? - self.evaluate(sp.x2)?)
    }

    /// Harmonic approximation of the left well: V ≈ ½β²Bξ² in units of ħω.
    pub fn ground_state(&self) -> Result<GroundState> {
        if self.quadratic == 0.0 {
            return Err(Error::FlatWell);
        }
        let nu = self.quadratic.sqrt() * self.beta_sq;
        Ok(GroundState {
            nu,
            msd: self.a * self.a / (2.0 * nu),
            a: self.a,
        })
    }

    /// `n` uniform samples of (ξ, ξ²(ξ² − Aξ + B)) on `[xi_min, xi_max]`.
    pub fn scan(&self, xi_min: f64, xi_max: f64, n: usize) -> Result<Vec<(f64, f64)>> {
        finite("xi_min", xi_min)?;
        finite("xi_max", xi_max)?;
        if n < 2 || xi_min >= xi_max {
            return Err(Error::InvalidRange {
                name: "xi".into(),
                lo: xi_min,
                hi: xi_max,
                n,
            });
        }
        let step = (xi_max - xi_min) / (n - 1) as f64;
        Ok((0..n)
            .map(|i| {
                let xi = if i == n - 1 { xi_max } else { xi_min + step * i as f64 };
                (xi, self.dimensionless(xi))
            })
            .collect())
    }
}

/// ω = (2/w)·√(2ε/(15m)) for the A = 14, B = 45 geometry.
pub fn omega_from_asymmetry(eps: f64, mass: f64, w: f64) -> Result<f64> {
    positive("epsilon", eps)?;
    positive("mass", mass)?;
    positive("well width", w)?;
    Ok(2.0 / w * (2.0 * eps / (15.0 * mass)).sqrt())
}

/// Writes a scan as CSV with header `xi,v_dimensionless`.
pub fn write_scan_csv<W: std::io::Write + ?Sized>(out: &mut W, rows: &[(f64, f64)]) -> std::io::Result<()> {
    writeln!(out, "xi,v_dimensionless")?;
    for &(xi, v) in rows {
        writeln!(out, "{}", crate::format::row(&[xi, v]))?;
    }
    Ok(())
}
