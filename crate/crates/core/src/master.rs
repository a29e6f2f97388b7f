//! Grid integrator for the position-representation master equation
//!
//! ```text
//! ∂ρ/∂t = −(i/ħ)[H, ρ] − γ(x − x′)(∂_x − ∂_x′)ρ − Λ(x − x′)²ρ,   Λ = 2mγk_BT/ħ²
//! ```
//!
//! on a square grid of ρ(x_j, x_k). The decoherence term is pointwise, so it
//! is integrated exactly through an exponential factor; the commutator and
//! dissipation terms go through a classical fourth-order Runge–Kutta in the
//! interaction picture of that factor (Lawson scheme). With only decoherence
//! enabled the scheme reduces to the exact solution ρ₀·exp(−Λ(x − x′)²t).
//!
//! Derivatives use central differences with ρ = 0 outside the box; the outer
//! ring of the grid is clamped to zero whenever a derivative term is active.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{finite, positive, Error, Result};
use crate::potential::QuarticPotential;
use crate::units::{HBAR, K_B};

pub const MIN_GRID_POINTS: usize = 32;

/// Largest |λ|·dt accepted for the explicit stages (the RK4 stability region
/// reaches 2√2 on the imaginary axis).
pub const RK4_STABILITY_LIMIT: f64 = 2.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    x_min: f64,
    x_max: f64,
    n: usize,
    dx: f64,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        finite("x_min", x_min)?;
        finite("x_max", x_max)?;
        if n < MIN_GRID_POINTS {
            return Err(Error::validation("n", n as f64, "at least 32 points per axis"));
        }
        if x_max <= x_min {
            return Err(Error::InvalidRange {
                name: "grid".into(),
                lo: x_min,
                hi: x_max,
                n,
            });
        }
        Ok(Self {
            x_min,
            x_max,
            n,
            dx: (x_max - x_min) / (n - 1) as f64,
        })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn position(&self, j: usize) -> f64 {
        self.x_min + self.dx * j as f64
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.position(j)).collect()
    }

    /// Index of the node closest to `x`.
    pub fn nearest_node(&self, x: f64) -> Result<usize> {
        finite("x", x)?;
        if x < self.x_min - 0.5 * self.dx || x > self.x_max + 0.5 * self.dx {
            return Err(Error::validation("x", x, "outside the grid"));
        }
        let j = ((x - self.x_min) / self.dx).round();
        Ok((j.max(0.0) as usize).min(self.n - 1))
    }

    /// `x` moved onto its nearest node.
    pub fn snap(&self, x: f64) -> Result<f64> {
        Ok(self.position(self.nearest_node(x)?))
    }
}

/// Samples of ρ(x_j, x_k), row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrixGrid {
    grid: GridSpec,
    values: Vec<Complex64>,
    time: f64,
    steps: usize,
}

impl DensityMatrixGrid {
    pub fn from_values(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n * grid.n {
            return Err(Error::validation("values", values.len() as f64, "length must be n*n"));
        }
        Ok(Self {
            grid,
            values,
            time: 0.0,
            steps: 0,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// Number of steps applied since construction.
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.values[j * self.grid.n + k]
    }

    /// dx·Σ ρ(x_j, x_j).
    pub fn trace(&self) -> Complex64 {
        let n = self.grid.n;
        let sum: Complex64 = (0..n).map(|j| self.values[j * n + j]).sum();
        sum * self.grid.dx
    }

    /// max |ρ_jk − conj(ρ_kj)|.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.grid.n;
        let mut worst = 0.0f64;
        for j in 0..n {
            for k in j..n {
                let d = (self.values[j * n + k] - self.values[k * n + j].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// ∫∫|ρ(x, x′)|² dx dx′.
    pub fn purity(&self) -> f64 {
        let s: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        s * self.grid.dx * self.grid.dx
    }

    pub fn min_diagonal(&self) -> f64 {
        let n = self.grid.n;
        (0..n).map(|j| self.values[j * n + j].re).fold(f64::INFINITY, f64::min)
    }

    /// Largest magnitude on the outermost ring of the grid.
    pub fn boundary_magnitude(&self) -> f64 {
        let n = self.grid.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for (j, k) in [(0, i), (n - 1, i), (i, 0), (i, n - 1)] {
                worst = worst.max(self.values[j * n + k].norm());
            }
        }
        worst
    }

    /// |ρ| at the nodes closest to (c1, c2).
    pub fn coherence_at(&self, c1: f64, c2: f64) -> Result<f64> {
        let j = self.grid.nearest_node(c1)?;
        let k = self.grid.nearest_node(c2)?;
        Ok(self.get(j, k).norm())
    }

    /// CSV rows `x_m,xp_m,re,im` for plotting.
    pub fn write_snapshot_csv<W: Write + ?Sized>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "x_m,xp_m,re,im")?;
        let n = self.grid.n;
        for j in 0..n {
            for k in 0..n {
                let v = self.values[j * n + k];
                writeln!(
                    out,
                    "{}",
                    crate::format::row(&[self.grid.position(j), self.grid.position(k), v.re, v.im])
                )?;
            }
        }
        Ok(())
    }
}

/// Which terms of the master equation to integrate, and the physical inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionConfig {
    pub include_hamiltonian: bool,
    pub include_dissipation: bool,
    pub include_decoherence: bool,
    pub gamma: f64,
    pub temperature: f64,
    pub mass: f64,
    /// `None` means a free particle.
    pub potential: Option<QuarticPotential>,
    pub dt: f64,
    pub steps: usize,
}

impl EvolutionConfig {
    pub fn decoherence_only(mass: f64, gamma: f64, temperature: f64, dt: f64, steps: usize) -> Self {
        Self {
            include_hamiltonian: false,
            include_dissipation: false,
            include_decoherence: true,
            gamma,
            temperature,
            mass,
            potential: None,
            dt,
            steps,
        }
    }

    pub fn full(
        mass: f64,
        gamma: f64,
        temperature: f64,
        potential: Option<QuarticPotential>,
        dt: f64,
        steps: usize,
    ) -> Self {
        Self {
            include_hamiltonian: true,
            include_dissipation: true,
            include_decoherence: true,
            gamma,
            temperature,
            mass,
            potential,
            dt,
            steps,
        }
    }

    /// Λ = 2mγk_BT/ħ², in 1/(m²·s).
    pub fn decoherence_coefficient(&self) -> f64 {
        2.0 * self.mass * self.gamma * K_B * self.temperature / (HBAR * HBAR)
    }

    fn explicit_terms(&self) -> bool {
        self.include_hamiltonian || self.include_dissipation
    }

    /// The largest time step admitted on `grid`, and the term that sets it.
    pub fn max_stable_dt(&self, grid: &GridSpec) -> Result<(f64, &'static str)> {
        let mut limit = f64::INFINITY;
        let mut term = "none";
        let mut rate = 0.0;
        if self.include_hamiltonian {
            let kinetic = 0.1 * 2.0 * self.mass * grid.dx * grid.dx / HBAR;
            if kinetic < limit {
                limit = kinetic;
                term = "kinetic";
            }
            rate += 2.0 * HBAR / (self.mass * grid.dx * grid.dx);
            if let Some(p) = &self.potential {
                let v = grid
                    .positions()
                    .into_iter()
                    .map(|x| p.evaluate(x))
                    .collect::<Result<Vec<_>>>()?;
                let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                rate += (hi - lo) / HBAR;
            }
        }
        if self.include_dissipation {
            rate += 2.0 * self.gamma * (grid.x_max - grid.x_min) / grid.dx;
        }
        if rate > 0.0 && RK4_STABILITY_LIMIT / rate < limit {
            limit = RK4_STABILITY_LIMIT / rate;
            term = "explicit stage spectral radius";
        }
        Ok((limit, term))
    }

    pub fn validate(&self, grid: &GridSpec) -> Result<()> {
        positive("dt", self.dt)?;
        positive("mass", self.mass)?;
        if self.include_decoherence || self.include_dissipation {
            finite("gamma", self.gamma)?;
            if self.gamma < 0.0 {
                return Err(Error::validation("gamma", self.gamma, "must be non-negative"));
            }
        }
        if self.include_decoherence {
            positive("temperature", self.temperature)?;
            finite("decoherence coefficient", self.decoherence_coefficient())?;
        }
        if self.explicit_terms() {
            let (limit, term) = self.max_stable_dt(grid)?;
            if self.dt > limit {
                return Err(Error::Unstable {
                    dt: self.dt,
                    limit,
                    term,
                });
            }
        }
        Ok(())
    }
}

/// Gaussian cat state ψ ∝ √weight·g(c1) + √(1 − weight)·g(c2), with
/// g(c) ∝ exp(−(x − c)²/(2σ²)) normalised on the grid.
pub fn init_cat_state(grid: GridSpec, c1: f64, c2: f64, sigma: f64, weight: f64) -> Result<DensityMatrixGrid> {
    positive("sigma", sigma)?;
    finite("c1", c1)?;
    finite("c2", c2)?;
    if c1 == c2 {
        return Err(Error::validation("c2", c2, "must differ from c1"));
    }
    if sigma <= 2.0 * grid.dx {
        return Err(Error::validation("sigma", sigma, "must exceed twice the grid spacing"));
    }
    if !(0.0..=1.0).contains(&weight) {
        return Err(Error::validation("weight", weight, "must lie in [0, 1]"));
    }
    for (name, c) in [("c1", c1), ("c2", c2)] {
        if c - 6.0 * sigma < grid.x_min || c + 6.0 * sigma > grid.x_max {
            return Err(Error::validation(name, c, "Gaussian not well inside the box"));
        }
    }
    let xs = grid.positions();
    let gaussian = |c: f64| -> Vec<f64> {
        let g: Vec<f64> = xs
            .iter()
            .map(|x| (-(x - c).powi(2) / (2.0 * sigma * sigma)).exp())
            .collect();
        let norm = (g.iter().map(|v| v * v).sum::<f64>() * grid.dx).sqrt();
        g.into_iter().map(|v| v / norm).collect()
    };
    let (g1, g2) = (gaussian(c1), gaussian(c2));
    let (w1, w2) = (weight.sqrt(), (1.0 - weight).sqrt());
    let mut psi: Vec<f64> = g1.iter().zip(&g2).map(|(a, b)| w1 * a + w2 * b).collect();
    let norm = (psi.iter().map(|v| v * v).sum::<f64>() * grid.dx).sqrt();
    psi.iter_mut().for_each(|v| *v /= norm);

    let n = grid.n;
    let mut values = vec![Complex64::new(0.0, 0.0); n * n];
    values.par_chunks_mut(n).enumerate().for_each(|(j, row)| {
        for (k, v) in row.iter_mut().enumerate() {
            *v = Complex64::new(psi[j] * psi[k], 0.0);
        }
    });
    DensityMatrixGrid::from_values(grid, values)
}

/// Reusable stepping state for one grid and configuration.
pub struct Integrator {
    cfg: EvolutionConfig,
    grid: GridSpec,
    potential: Vec<f64>,
    full_factor: Vec<f64>,
    half_factor: Vec<f64>,
    k: [Vec<Complex64>; 4],
    stage: Vec<Complex64>,
}

impl Integrator {
    pub fn new(grid: GridSpec, cfg: EvolutionConfig) -> Result<Self> {
        cfg.validate(&grid)?;
        let n = grid.n;
        let xs = grid.positions();
        let potential = match (&cfg.potential, cfg.include_hamiltonian) {
            (Some(p), true) => xs.iter().map(|&x| p.evaluate(x)).collect::<Result<Vec<_>>>()?,
            _ => vec![0.0; n],
        };
        let lambda = if cfg.include_decoherence {
            cfg.decoherence_coefficient()
        } else {
            0.0
        };
        let mut full_factor = vec![1.0; n * n];
        let mut half_factor = vec![1.0; n * n];
        if lambda > 0.0 {
            for j in 0..n {
                for k in 0..n {
                    let rate = lambda * (xs[j] - xs[k]).powi(2);
                    full_factor[j * n + k] = (-rate * cfg.dt).exp();
                    half_factor[j * n + k] = (-rate * 0.5 * cfg.dt).exp();
                }
            }
        }
        let zeros = vec![Complex64::new(0.0, 0.0); n * n];
        Ok(Self {
            cfg,
            grid,
            potential,
            full_factor,
            half_factor,
            k: [zeros.clone(), zeros.clone(), zeros.clone(), zeros.clone()],
            stage: zeros,
        })
    }

    pub fn config(&self) -> &EvolutionConfig {
        &self.cfg
    }

    /// Commutator and dissipation terms applied to `rho`, written into `out`.
    fn explicit_rhs(&self, rho: &[Complex64], out: &mut [Complex64]) {
        let n = self.grid.n;
        let dx = self.grid.dx;
        let hbar_inv = 1.0 / HBAR;
        let kin = HBAR * HBAR / (2.0 * self.cfg.mass * dx * dx);
        let diss = self.cfg.gamma / (2.0 * dx);
        let ham = self.cfg.include_hamiltonian;
        let dis = self.cfg.include_dissipation;
        let x_min = self.grid.x_min;
        let pot = &self.potential;
        let zero = Complex64::new(0.0, 0.0);
        out.par_chunks_mut(n).enumerate().for_each(|(j, row)| {
            let at = |jj: isize, kk: isize| -> Complex64 {
                if jj < 0 || kk < 0 || jj >= n as isize || kk >= n as isize {
                    zero
                } else {
                    rho[jj as usize * n + kk as usize]
                }
            };
            let ji = j as isize;
            for (k, slot) in row.iter_mut().enumerate() {
                let ki = k as isize;
                let mut acc = zero;
                let (up, down, right, left) = (at(ji + 1, ki), at(ji - 1, ki), at(ji, ki + 1), at(ji, ki - 1));
                if ham {
                    // [H, ρ] with H = −(ħ²/2m)∂² + V on each index
                    let lap = -kin * ((up + down) - (right + left));
                    let comm = lap + rho[j * n + k] * (pot[j] - pot[k]);
                    acc += Complex64::new(comm.im, -comm.re) * hbar_inv;
                }
                if dis {
                    let sep = (x_min + dx * j as f64) - (x_min + dx * k as f64);
                    acc -= ((up - down) - (right - left)) * (diss * sep);
                }
                *slot = acc;
            }
        });
    }

    /// Advances `rho` by one time step.
    pub fn advance(&mut self, mut rho: DensityMatrixGrid) -> Result<DensityMatrixGrid> {
        if rho.grid != self.grid {
            return Err(Error::validation(
                "grid",
                rho.grid.n as f64,
                "does not match the integrator",
            ));
        }
        let dt = self.cfg.dt;
        if self.cfg.explicit_terms() {
            self.lawson_rk4(&mut rho.values, dt);
            enforce_hermiticity(&mut rho.values, self.grid.n);
            clamp_boundary(&mut rho.values, self.grid.n);
        } else if self.cfg.include_decoherence {
            rho.values
                .par_iter_mut()
                .zip(self.full_factor.par_iter())
                .for_each(|(v, f)| *v *= *f);
        }
        rho.steps += 1;
        rho.time = rho.steps as f64 * dt;
        if rho.values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite { step: rho.steps });
        }
        Ok(rho)
    }

    fn lawson_rk4(&mut self, u: &mut [Complex64], dt: f64) {
        let half = 0.5 * dt;
        let [k1, k2, k3, k4] = std::mem::take(&mut self.k);
        let (mut k1, mut k2, mut k3, mut k4) = (k1, k2, k3, k4);
        let mut stage = std::mem::take(&mut self.stage);
        let (ef, eh) = (&self.full_factor, &self.half_factor);

        self.explicit_rhs(u, &mut k1);
        stage
            .par_iter_mut()
            .enumerate()
            .for_each(|(i, s)| *s = (u[i] + k1[i] * half) * eh[i]);
        self.explicit_rhs(&stage, &mut k2);
        stage
            .par_iter_mut()
            .enumerate()
            .for_each(|(i, s)| *s = u[i] * eh[i] + k2[i] * half);
        self.explicit_rhs(&stage, &mut k3);
        stage
            .par_iter_mut()
            .enumerate()
            .for_each(|(i, s)| *s = u[i] * ef[i] + k3[i] * (dt * eh[i]));
        self.explicit_rhs(&stage, &mut k4);
        u.par_iter_mut().enumerate().for_each(|(i, v)| {
            *v = *v * ef[i] + (k1[i] * ef[i] + (k2[i] + k3[i]) * (2.0 * eh[i]) + k4[i]) * (dt / 6.0);
        });

        self.k = [k1, k2, k3, k4];
        self.stage = stage;
    }
}

fn enforce_hermiticity(values: &mut [Complex64], n: usize) {
    for j in 0..n {
        for k in j..n {
            let avg = 0.5 * (values[j * n + k] + values[k * n + j].conj());
            values[j * n + k] = avg;
            values[k * n + j] = avg.conj();
        }
    }
}

fn clamp_boundary(values: &mut [Complex64], n: usize) {
    let zero = Complex64::new(0.0, 0.0);
    for i in 0..n {
        values[i] = zero;
        values[(n - 1) * n + i] = zero;
        values[i * n] = zero;
        values[i * n + n - 1] = zero;
    }
}

/// One time step of `cfg` applied to `rho`.
pub fn step(rho: DensityMatrixGrid, cfg: &EvolutionConfig) -> Result<DensityMatrixGrid> {
    Integrator::new(rho.grid, cfg.clone())?.advance(rho)
}

/// Runs `cfg.steps` steps, calling `observe` after each one.
pub fn evolve<F>(rho: DensityMatrixGrid, cfg: &EvolutionConfig, mut observe: F) -> Result<DensityMatrixGrid>
where
    F: FnMut(&DensityMatrixGrid),
{
    let mut integrator = Integrator::new(rho.grid, cfg.clone())?;
    let mut rho = rho;
    for _ in 0..cfg.steps {
        rho = integrator.advance(rho)?;
        observe(&rho);
    }
    Ok(rho)
}

/// (t, |ρ(c1, c2)|) for each snapshot in `series`.
pub fn coherence_trace(series: &[DensityMatrixGrid], c1: f64, c2: f64) -> Result<Vec<(f64, f64)>> {
    if series.is_empty() {
        return Err(Error::validation("series", 0.0, "must not be empty"));
    }
    series.iter().map(|r| Ok((r.time, r.coherence_at(c1, c2)?))).collect()
}

/// Ordinary least squares of ln(magnitude) against t; returns −slope.
pub fn fit_decay_rate(series: &[(f64, f64)]) -> Result<f64> {
    if series.len() < 3 {
        return Err(Error::validation("samples", series.len() as f64, "need at least 3"));
    }
    for &(t, m) in series {
        finite("t", t)?;
        positive("magnitude", m)?;
    }
    if series.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(Error::validation(
            "t",
            f64::NAN,
            "degenerate time axis (times must strictly increase)",
        ));
    }
    let n = series.len() as f64;
    let t_mean = series.iter().map(|s| s.0).sum::<f64>() / n;
    let y_mean = series.iter().map(|s| s.1.ln()).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(t, m) in series {
        let dt = t - t_mean;
        sxy += dt * (m.ln() - y_mean);
        sxx += dt * dt;
    }
    Ok(-(sxy / sxx))
}

/// Writes `t_s,coherence_abs` CSV.
pub fn write_coherence_csv<W: Write + ?Sized>(out: &mut W, series: &[(f64, f64)]) -> std::io::Result<()> {
    writeln!(out, "t_s,coherence_abs")?;
    for &(t, c) in series {
        writeln!(out, "{}", crate::format::row(&[t, c]))?;
    }
    Ok(())
}
