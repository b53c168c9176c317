//! Equal-length resummation: when every bond has length `L₀`, each orbit of
//! `n` steps has length `n·L₀`, and grouping the orbit sum by step count gives
//! `E_c = −(1/(2πL₀)) Σ_N Tr(S^N)/N²` with `S` the directed-bond scattering
//! matrix.

use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix};

use crate::graph::{assemble_global_scattering, Graph};
use crate::spectral::reduced_phases;
use crate::sum::CompensatedSum;
use crate::{EnergyResult, Error, Method, Parameters, Result};

/// How far the trace series is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceDepth {
    /// `N = 1..=N_max`.
    Truncated(usize),
    /// All `N`, by summing `Re Li₂(e^{iθ_k})` over the eigenphases of `S`.
    Resummed,
}

fn common_length(g: &Graph) -> Result<f64> {
    let l0 = g.bonds()[0].length;
    if g.bonds().iter().any(|b| (b.length - l0).abs() > 1e-12 * l0) {
        return Err(Error::UnequalLengths);
    }
    Ok(l0)
}

/// `Re Li₂(e^{iθ}) = π²/6 − θ(2π − θ)/4` for `θ ∈ [0, 2π]`.
fn re_dilog_unit(theta: f64) -> f64 {
    PI * PI / 6.0 - theta * (2.0 * PI - theta) / 4.0
}

pub fn equal_length_trace_energy(g: &Graph, depth: TraceDepth) -> Result<EnergyResult> {
    let l0 = common_length(g)?;
    let s = assemble_global_scattering(g).matrix;
    let dim = s.nrows();
    let prefactor = -1.0 / (2.0 * PI * l0);
    let (value, error_estimate) = match depth {
        TraceDepth::Truncated(n_max) => {
            if n_max == 0 {
                return Err(Error::InvalidConfig("N_max must be at least 1".into()));
            }
            let mut power = DMatrix::<f64>::identity(dim, dim);
            let mut sum = CompensatedSum::default();
            for n in 1..=n_max {
                power = &power * &s;
                sum.add(power.trace() / (n * n) as f64);
            }
            (
                prefactor * sum.value(),
                (prefactor * 2.0 * (g.bond_count() as f64) / n_max as f64).abs(),
            )
        }
        TraceDepth::Resummed => {
            let phases = reduced_phases(s.map(|x| Complex::new(x, 0.0)))?;
            let sum: CompensatedSum = phases.iter().map(|&t| re_dilog_unit(t)).collect();
            let rounding = dim as f64 * 1e-12 * (PI * PI / 6.0) * prefactor.abs();
            (prefactor * sum.value(), rounding)
        }
    };
    Ok(EnergyResult {
        value,
        error_estimate,
        method: Method::Transfer,
        parameters: Parameters::Transfer {
            depth,
            bond_length: l0,
        },
    })
}
