use std::f64::consts::PI;

use super::Spectrum;
use crate::sum::CompensatedSum;
use crate::{EnergyResult, Error, Method, Parameters, Result};

/// The cutoff must satisfy `ω_max ≥ TAIL_FACTOR / t`; the dropped tail is
/// then suppressed by `e^{-40}`.
pub const TAIL_FACTOR: f64 = 40.0;

fn check_cutoff(spec: &Spectrum, t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidConfig(format!("t = {t} must be positive")));
    }
    let required = TAIL_FACTOR / t;
    if spec.omega_max < required * (1.0 - 1e-12) {
        return Err(Error::CutoffTooLow {
            omega_max: spec.omega_max,
            required,
        });
    }
    Ok(())
}

/// Cylinder-kernel trace `T(t) = Σ_n e^{−ω_n t}` over the nonzero modes.
pub fn cylinder_trace(spec: &Spectrum, t: f64) -> Result<f64> {
    check_cutoff(spec, t)?;
    let s: CompensatedSum = spec
        .modes
        .iter()
        .map(|m| m.multiplicity as f64 * (-m.omega * t).exp())
        .collect();
    Ok(s.value())
}

/// `E_finite(t) = Σ ½ ω_n e^{−ω_n t} − L/(2πt²)`.
pub fn e_finite(spec: &Spectrum, t: f64, total_length: f64) -> Result<f64> {
    check_cutoff(spec, t)?;
    let mut s: CompensatedSum = spec
        .modes
        .iter()
        .map(|m| 0.5 * m.multiplicity as f64 * m.omega * (-m.omega * t).exp())
        .collect();
    s.add(-total_length / (2.0 * PI * t * t));
    Ok(s.value())
}

/// Variable in which `E_finite` is fitted by a polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExtrapolationVariable {
    /// `E_c + α₁ t + α₂ t² + …`
    Linear,
    /// `E_c + β₁ t² + β₂ t⁴ + …`; the regularized energy of a graph with
    /// frequency-independent scattering has only even powers of `t`.
    #[default]
    Quadratic,
}

impl ExtrapolationVariable {
    fn abscissa(self, t: f64) -> f64 {
        match self {
            ExtrapolationVariable::Linear => t,
            ExtrapolationVariable::Quadratic => t * t,
        }
    }
}

/// Samples `(t, E_finite(t))` to be extrapolated to `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularizedEnergySeries {
    pub samples: Vec<(f64, f64)>,
    pub variable: ExtrapolationVariable,
}

/// Polynomial (Neville) extrapolation to `t = 0` through all samples. The
/// error estimate is the change from dropping the largest `t`.
pub fn richardson_extrapolate(series: &RegularizedEnergySeries) -> Result<EnergyResult> {
    let order = series.samples.len();
    if order < 2 {
        return Err(Error::InvalidConfig(format!(
            "extrapolation needs at least 2 samples, got {order}"
        )));
    }
    let mut samples = series.samples.clone();
    if samples.iter().any(|&(t, e)| !(t > 0.0) || !e.is_finite()) {
        return Err(Error::InvalidConfig(
            "samples need t > 0 and finite values".into(),
        ));
    }
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    if samples.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::DegenerateNodes);
    }
    let points: Vec<(f64, f64)> = samples
        .iter()
        .map(|&(t, e)| (series.variable.abscissa(t), e))
        .collect();
    let full = neville_at_zero(&points);
    let reduced = neville_at_zero(&points[..order - 1]);
    Ok(EnergyResult {
        value: full,
        error_estimate: (full - reduced).abs(),
        method: Method::Spectral,
        parameters: Parameters::Extrapolation { order },
    })
}

fn neville_at_zero(points: &[(f64, f64)]) -> f64 {
    let x: Vec<f64> = points.iter().map(|p| p.0).collect();
    let mut p: Vec<f64> = points.iter().map(|p| p.1).collect();
    let n = p.len();
    for k in 1..n {
        for i in 0..n - k {
            p[i] = (x[i] * p[i + 1] - x[i + k] * p[i]) / (x[i] - x[i + k]);
        }
    }
    p[0]
}
