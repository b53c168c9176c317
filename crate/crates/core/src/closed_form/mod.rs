//! Analytic vacuum energies and forces for intervals and equal-length
//! stars, and the dilogarithm used by the shortest-orbit formulas.
//!
//! Forces follow `F = −∂E/∂a`; positive means the piston is pushed outward.
//! Every energy here scales as `1/a`, so the collective force is `E/a`.

mod dilog;

use std::f64::consts::PI;

pub use dilog::dilog;
pub(crate) use dilog::dilog_unchecked;

use crate::graph::{BoundaryKind, Graph, Star};
use crate::{EnergyResult, Error, Method, Parameters, Result};

/// Interval of length `a` with a piston condition at each end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalSpec {
    pub a: f64,
    pub left: BoundaryKind,
    pub right: BoundaryKind,
}

impl IntervalSpec {
    pub fn new(a: f64, left: BoundaryKind, right: BoundaryKind) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "interval length {a} must be positive"
            )));
        }
        Ok(IntervalSpec { a, left, right })
    }

    /// Same condition at both ends (a valence-1 Kirchhoff end is Neumann).
    fn is_symmetric(&self) -> bool {
        let d = |k: BoundaryKind| k == BoundaryKind::Dirichlet;
        d(self.left) == d(self.right)
    }
}

/// `−π/(24a)` for NN or DD, `+π/(48a)` for mixed ends.
pub fn interval_energy(spec: IntervalSpec) -> f64 {
    if spec.is_symmetric() {
        -PI / (24.0 * spec.a)
    } else {
        PI / (48.0 * spec.a)
    }
}

pub fn interval_force(spec: IntervalSpec) -> f64 {
    interval_energy(spec) / spec.a
}

/// `(B−3)π/(48a)` for `B` equal Neumann arms on a Kirchhoff center.
pub fn star_energy_equal(arms: usize, a: f64) -> f64 {
    (arms as f64 - 3.0) * PI / (48.0 * a)
}

/// Force with all pistons moving together, `(B−3)π/(48a²)`.
pub fn star_collective_force_equal(arms: usize, a: f64) -> f64 {
    star_energy_equal(arms, a) / a
}

/// Share of the collective force carried by one piston.
pub fn star_per_piston_force_equal(arms: usize, a: f64) -> f64 {
    star_collective_force_equal(arms, a) / arms as f64
}

/// Equal star with Dirichlet pistons: one DN-type family and `B−1` NN-type
/// families, `π/(48a) − (B−1)π/(24a) = (3−2B)π/(48a)`.
pub fn dirichlet_star_energy_equal(arms: usize, a: f64) -> f64 {
    (3.0 - 2.0 * arms as f64) * PI / (48.0 * a)
}

pub fn dirichlet_star_collective_force_equal(arms: usize, a: f64) -> f64 {
    dirichlet_star_energy_equal(arms, a) / a
}

pub fn dirichlet_star_per_piston_force_equal(arms: usize, a: f64) -> f64 {
    dirichlet_star_collective_force_equal(arms, a) / arms as f64
}

/// Two-term large-`B` expansion of the all-Neumann shortest-orbit energy,
/// `(π/48)(1 − 24 ln 2/(π² B)) Σ 1/a_j`.
pub fn shortest_energy_expansion(arms: usize, inverse_length_sum: f64) -> f64 {
    let b = arms as f64;
    PI / 48.0 * (1.0 - 24.0 * std::f64::consts::LN_2 / (PI * PI * b)) * inverse_length_sum
}

/// The shapes with a closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedFormShape {
    Interval(IntervalSpec),
    NeumannStar { arms: usize, a: f64 },
    DirichletStar { arms: usize, a: f64 },
}

impl ClosedFormShape {
    pub fn recognize(g: &Graph) -> Result<ClosedFormShape> {
        if g.bond_count() == 1 {
            let bond = &g.bonds()[0];
            if bond.ends[0] != bond.ends[1] {
                let kind = |v: usize| g.vertices()[v].kind;
                return Ok(ClosedFormShape::Interval(IntervalSpec::new(
                    bond.length,
                    kind(bond.ends[0]),
                    kind(bond.ends[1]),
                )?));
            }
        }
        let star = Star::detect(g).ok_or(Error::NoClosedForm)?;
        let a = star.legs[0].length;
        let equal = star.legs.iter().all(|l| (l.length - a).abs() <= 1e-12 * a);
        if !equal {
            return Err(Error::NoClosedForm);
        }
        let arms = star.arms();
        if star.legs.iter().all(|l| l.piston == BoundaryKind::Neumann) {
            Ok(ClosedFormShape::NeumannStar { arms, a })
        } else if star
            .legs
            .iter()
            .all(|l| l.piston == BoundaryKind::Dirichlet)
        {
            Ok(ClosedFormShape::DirichletStar { arms, a })
        } else {
            Err(Error::NoClosedForm)
        }
    }

    pub fn energy(&self) -> f64 {
        match *self {
            ClosedFormShape::Interval(spec) => interval_energy(spec),
            ClosedFormShape::NeumannStar { arms, a } => star_energy_equal(arms, a),
            ClosedFormShape::DirichletStar { arms, a } => dirichlet_star_energy_equal(arms, a),
        }
    }

    /// Force on a single piston (for stars, one arm's share).
    pub fn per_piston_force(&self) -> f64 {
        match *self {
            ClosedFormShape::Interval(spec) => interval_force(spec),
            ClosedFormShape::NeumannStar { arms, a } => star_per_piston_force_equal(arms, a),
            ClosedFormShape::DirichletStar { arms, a } => {
                dirichlet_star_per_piston_force_equal(arms, a)
            }
        }
    }

    fn formula(&self) -> &'static str {
        match self {
            ClosedFormShape::Interval(spec) if spec.is_symmetric() => "-pi/(24a)",
            ClosedFormShape::Interval(_) => "+pi/(48a)",
            ClosedFormShape::NeumannStar { .. } => "(B-3)pi/(48a)",
            ClosedFormShape::DirichletStar { .. } => "(3-2B)pi/(48a)",
        }
    }
}

/// Closed-form energy of an interval or equal-length uniform star.
pub fn analytic_energy(g: &Graph) -> Result<EnergyResult> {
    let shape = ClosedFormShape::recognize(g)?;
    Ok(EnergyResult {
        value: shape.energy(),
        error_estimate: 0.0,
        method: Method::Analytic,
        parameters: Parameters::Analytic {
            formula: shape.formula(),
        },
    })
}
