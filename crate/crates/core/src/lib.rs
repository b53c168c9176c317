//! Vacuum (Casimir) energies and piston forces on finite metric graphs.
//!
//! Three independent routes are provided and cross-check one another:
//!
//! * [`closed_form`]: analytic energies for intervals and equal-length stars,
//!   plus the real dilogarithm.
//! * [`spectral`]: exact spectra by eigenphase counting of the bond
//!   propagator `U(ω) = S·D(ω)`, exponentially regularized mode sums and
//!   Richardson extrapolation to `t → 0`.
//! * [`orbits`]: the periodic-orbit expansion
//!   `E_c = -(1/2π) Σ_p Σ_r A_p^r / (r² L_p)` over primitive cycles, with
//!   term-by-term forces, the shortest-orbit approximation, an equal-length
//!   transfer-matrix resummation and convergence studies.
//!
//! [`em_piston`] holds the electromagnetic piston pressures.
//!
//! The inner loops (root scanning over frequency windows, orbit search over
//! subtrees) run on rayon when the `parallel` feature is enabled and on the
//! calling thread otherwise. Results are bit-identical either way.

// `!(x > 0.0)` is used on purpose: it rejects NaN along with the rest.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod closed_form;
pub mod em_piston;
mod error;
pub mod exec;
pub mod graph;
pub mod orbits;
pub mod report;
pub mod spectral;
mod sum;

pub use error::{Error, Result};
pub use exec::Execution;
pub use graph::{BoundaryKind, Graph, GraphSpec};

/// Which route produced an [`EnergyResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Spectral,
    Orbit,
    Analytic,
    Transfer,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Spectral => "spectral",
            Method::Orbit => "orbit",
            Method::Analytic => "analytic",
            Method::Transfer => "transfer",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spectral" => Ok(Method::Spectral),
            "orbit" => Ok(Method::Orbit),
            "analytic" => Ok(Method::Analytic),
            "transfer" => Ok(Method::Transfer),
            other => Err(Error::InvalidConfig(format!("unknown method `{other}`"))),
        }
    }
}

/// Method-specific parameters that reproduce an [`EnergyResult`].
#[derive(Debug, Clone, PartialEq)]
pub enum Parameters {
    Spectral {
        /// Absolute regularization parameters used, ascending.
        t_values: Vec<f64>,
        order: usize,
        omega_max: f64,
        tol: f64,
        mode_count: usize,
    },
    Orbit {
        l_max: f64,
        repetitions: orbits::Repetitions,
        orbit_count: usize,
        shell_width: f64,
    },
    Transfer {
        depth: orbits::TraceDepth,
        bond_length: f64,
    },
    Analytic {
        formula: &'static str,
    },
    Extrapolation {
        order: usize,
    },
}

/// A vacuum energy with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyResult {
    /// Renormalized vacuum energy `E_c` in units of 1/length.
    pub value: f64,
    pub error_estimate: f64,
    pub method: Method,
    pub parameters: Parameters,
}

/// Force on one bond; positive values push the piston outward.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceEntry {
    pub bond: String,
    /// `-∂E_c/∂L_j`, units 1/length².
    pub force: f64,
    pub error_estimate: f64,
    pub method: Method,
}

/// Forces keyed by bond name, in bond order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ForceResult {
    pub entries: Vec<ForceEntry>,
}

impl ForceResult {
    pub fn get(&self, bond: &str) -> Option<&ForceEntry> {
        self.entries.iter().find(|e| e.bond == bond)
    }
}
