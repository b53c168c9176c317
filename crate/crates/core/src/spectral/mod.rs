//! Exact spectra and the regularized mode sum.

mod propagator;
mod regularized;
mod roots;
mod secular;

use std::f64::consts::PI;

pub(crate) use propagator::reduced_phases;
pub use propagator::{unitary_at, BondPropagator};
pub use regularized::{
    cylinder_trace, e_finite, richardson_extrapolate, ExtrapolationVariable,
    RegularizedEnergySeries, TAIL_FACTOR,
};
pub use roots::{compute_spectrum, compute_spectrum_with, SpectrumConfig};
pub use secular::secular_star;

use crate::exec::Execution;
use crate::graph::Graph;
use crate::{EnergyResult, Error, ForceEntry, Method, Parameters, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub omega: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumMethod {
    /// Winding count of the eigenphases of `U(ω)`.
    EigenphaseCount,
}

impl SpectrumMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            SpectrumMethod::EigenphaseCount => "eigenphase-count",
        }
    }
}

/// Nonzero frequencies up to a cutoff, ascending, with multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub modes: Vec<Mode>,
    pub omega_max: f64,
    pub tol: f64,
    /// Roots closer than this were merged into one mode.
    pub cluster_tol: f64,
    pub method: SpectrumMethod,
}

impl Spectrum {
    /// `N(ω)`: modes in `(0, ω]` counted with multiplicity.
    pub fn count(&self, omega: f64) -> usize {
        self.modes
            .iter()
            .take_while(|m| m.omega <= omega)
            .map(|m| m.multiplicity)
            .sum()
    }

    pub fn total(&self) -> usize {
        self.modes.iter().map(|m| m.multiplicity).sum()
    }

    /// `max |N(ω) − Lω/π|` over the cutoff range, checked on both sides of
    /// every jump.
    pub fn weyl_deviation(&self, total_length: f64) -> f64 {
        let smooth = |w: f64| total_length * w / PI;
        let mut n = 0usize;
        let mut worst = 0.0f64;
        for m in &self.modes {
            worst = worst.max((n as f64 - smooth(m.omega)).abs());
            n += m.multiplicity;
            worst = worst.max((n as f64 - smooth(m.omega)).abs());
        }
        worst.max((n as f64 - smooth(self.omega_max)).abs())
    }
}

/// Configuration of the spectral energy pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralConfig {
    /// Regularization parameters in units of the shortest bond length.
    pub t_grid: Vec<f64>,
    /// Number of grid points used, taken from the smallest `t` upward.
    pub order: usize,
    pub tol: f64,
    /// The cutoff is `omega_max_factor / t_min`.
    pub omega_max_factor: f64,
    pub variable: ExtrapolationVariable,
    pub exec: Execution,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig {
            t_grid: vec![0.4, 0.2, 0.1, 0.05],
            order: 4,
            tol: 1e-11,
            omega_max_factor: TAIL_FACTOR,
            variable: ExtrapolationVariable::default(),
            exec: Execution::default(),
        }
    }
}

impl SpectralConfig {
    fn check(&self) -> Result<()> {
        if self.order < 2 || self.order > self.t_grid.len() {
            return Err(Error::InvalidConfig(format!(
                "order {} needs between 2 and {} grid points",
                self.order,
                self.t_grid.len()
            )));
        }
        if self.t_grid.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
            return Err(Error::InvalidConfig("t grid must be positive".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tol = {} must be positive",
                self.tol
            )));
        }
        if self.omega_max_factor < TAIL_FACTOR {
            return Err(Error::InvalidConfig(format!(
                "omega_max_factor must be at least {TAIL_FACTOR}"
            )));
        }
        Ok(())
    }

    /// Absolute `t` values for a given length scale, ascending.
    fn t_values(&self, scale: f64) -> Vec<f64> {
        let mut t: Vec<f64> = self.t_grid.iter().map(|x| x * scale).collect();
        t.sort_by(f64::total_cmp);
        t.truncate(self.order);
        t
    }
}

/// Spectrum, regularized sums on the `t` grid and extrapolation to `t = 0`.
pub fn vacuum_energy_spectral(g: &Graph, cfg: &SpectralConfig) -> Result<EnergyResult> {
    vacuum_energy_spectral_scaled(g, cfg, g.min_bond_length())
}

fn vacuum_energy_spectral_scaled(
    g: &Graph,
    cfg: &SpectralConfig,
    scale: f64,
) -> Result<EnergyResult> {
    cfg.check()?;
    let t_values = cfg.t_values(scale);
    if t_values.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::DegenerateNodes);
    }
    let omega_max = cfg.omega_max_factor / t_values[0];
    let spec = compute_spectrum_with(
        g,
        &SpectrumConfig {
            omega_max,
            tol: cfg.tol,
            exec: cfg.exec,
        },
    )?;
    let samples = t_values
        .iter()
        .map(|&t| Ok((t, e_finite(&spec, t, g.total_length())?)))
        .collect::<Result<Vec<_>>>()?;
    let fit = richardson_extrapolate(&RegularizedEnergySeries {
        samples,
        variable: cfg.variable,
    })?;
    Ok(EnergyResult {
        value: fit.value,
        error_estimate: fit.error_estimate,
        method: Method::Spectral,
        parameters: Parameters::Spectral {
            t_values,
            order: cfg.order,
            omega_max,
            tol: cfg.tol,
            mode_count: spec.total(),
        },
    })
}

/// Step used by [`force_spectral`] when none is given: `10⁻³ L_j`.
pub fn default_step(g: &Graph, bond: usize) -> f64 {
    1e-3 * g.bonds()[bond].length
}

/// Central difference `−[E_c(L_j+h) − E_c(L_j−h)]/(2h)`. Both energies use
/// the `t` scale of the unperturbed graph so that the difference is not
/// polluted by a change of grid.
pub fn force_spectral(
    g: &Graph,
    bond: &str,
    step: f64,
    cfg: &SpectralConfig,
) -> Result<ForceEntry> {
    let j = g.require_bond(bond)?;
    let length = g.bonds()[j].length;
    if !(step > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "step = {step} must be positive"
        )));
    }
    if step >= length / 4.0 {
        return Err(Error::StepTooLarge { step, length });
    }
    let scale = g.min_bond_length();
    let plus = vacuum_energy_spectral_scaled(&g.with_bond_length(j, length + step)?, cfg, scale)?;
    let minus = vacuum_energy_spectral_scaled(&g.with_bond_length(j, length - step)?, cfg, scale)?;
    Ok(ForceEntry {
        bond: g.bonds()[j].name.clone(),
        force: -(plus.value - minus.value) / (2.0 * step),
        error_estimate: (plus.error_estimate + minus.error_estimate) / (2.0 * step),
        method: Method::Spectral,
    })
}
