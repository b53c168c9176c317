use std::f64::consts::TAU;

use nalgebra::{Complex, DMatrix, Schur};

use crate::graph::{assemble_global_scattering, DirectedBond, Graph};
use crate::{Error, Result};

/// Eigenphases this close below `2π` are taken to sit exactly at zero.
const PHASE_SNAP: f64 = 1e-12;
/// Allowed distance of the counting function from an integer.
const COUNT_SLACK: f64 = 1e-6;

/// Quantization map `U(ω) = S·D(ω)` on the `2B` directed bonds, with
/// `D = diag(exp(iωL_d))`. Frequencies of the graph are the `ω > 0` at which
/// `U(ω)` has eigenvalue 1.
///
/// Since `det U(ω) = det S · e^{2iωL}`, the unwrapped eigenphases always sum
/// to `R(0) + 2ωL`. Comparing that with the sum of the phases reduced to
/// `[0, 2π)` counts how many times eigenvalues have passed through 1, which
/// gives an exact mode count `N(ω)` from a single diagonalization.
#[derive(Debug, Clone)]
pub struct BondPropagator {
    scattering: DMatrix<f64>,
    lengths: Vec<f64>,
    total_length: f64,
    base_phase: f64,
}

impl BondPropagator {
    pub fn new(g: &Graph) -> Result<Self> {
        let scattering = assemble_global_scattering(g).matrix;
        let lengths = (0..g.directed_count())
            .map(|i| g.bonds()[DirectedBond::from_index(i).bond].length)
            .collect();
        let base = scattering.map(|x| Complex::new(x, 0.0));
        let base_phase = reduced_phases(base)?.iter().sum();
        Ok(BondPropagator {
            scattering,
            lengths,
            total_length: g.total_length(),
            base_phase,
        })
    }

    pub fn dimension(&self) -> usize {
        self.lengths.len()
    }

    pub fn unitary(&self, omega: f64) -> DMatrix<Complex<f64>> {
        let n = self.dimension();
        let phases: Vec<Complex<f64>> = self
            .lengths
            .iter()
            .map(|&l| Complex::from_polar(1.0, omega * l))
            .collect();
        DMatrix::from_fn(n, n, |i, j| phases[j] * self.scattering[(i, j)])
    }

    /// Eigenphases of `U(ω)` in `[0, 2π)`, ascending.
    pub fn eigenphases(&self, omega: f64) -> Result<Vec<f64>> {
        let mut p = reduced_phases(self.unitary(omega))?;
        p.sort_by(f64::total_cmp);
        Ok(p)
    }

    /// Number of eigenvalue passages through 1 on `(0, ω]`, counted with
    /// multiplicity.
    pub fn counting(&self, omega: f64) -> Result<usize> {
        let reduced: f64 = reduced_phases(self.unitary(omega))?.iter().sum();
        let winding = (self.base_phase + 2.0 * omega * self.total_length - reduced) / TAU;
        let n = winding.round();
        if (winding - n).abs() > COUNT_SLACK || n < -0.5 {
            return Err(Error::ConvergenceFailure(format!(
                "eigenphase count {winding} at ω = {omega} is not an integer"
            )));
        }
        Ok(n as usize)
    }

    /// Real secular function `det(I − U(ω))·e^{−i(ωL + R(0)/2)}`. It
    /// vanishes exactly on the spectrum and changes sign at simple roots.
    pub fn secular(&self, omega: f64) -> f64 {
        let n = self.dimension();
        let m = DMatrix::<Complex<f64>>::identity(n, n) - self.unitary(omega);
        let rot = Complex::from_polar(1.0, -(omega * self.total_length + 0.5 * self.base_phase));
        (m.determinant() * rot).re
    }
}

pub(crate) fn reduced_phases(u: DMatrix<Complex<f64>>) -> Result<Vec<f64>> {
    let raw = match cayley_phases(&u) {
        Some(p) => p,
        None => eigenvalues(u)?.iter().map(|z| z.im.atan2(z.re)).collect(),
    };
    Ok(raw
        .into_iter()
        .map(|p| {
            let p = p.rem_euclid(TAU);
            if p >= TAU - PHASE_SNAP {
                0.0
            } else {
                p
            }
        })
        .collect())
}

/// Shifts tried by [`cayley_phases`]; any `2B` eigenphases leave one free.
const CAYLEY_SHIFTS: [f64; 6] = [0.0, 0.7137, 1.9093, 2.8561, 3.7919, 5.1231];
/// Largest `|tan((θ − φ)/2)|` accepted, keeping every phase well away from
/// the pole of the transform.
const CAYLEY_BOUND: f64 = 1e4;

/// Eigenphases through the Cayley transform of `V = e^{−iφ}U`,
/// `H = i(I − V)(I + V)⁻¹`, which is Hermitian with eigenvalues
/// `tan((θ − φ)/2)`. A Hermitian solver is fast and indifferent to the heavy
/// degeneracies of symmetric graphs, where Schur iteration crawls. `None`
/// if no shift keeps `H` bounded.
fn cayley_phases(u: &DMatrix<Complex<f64>>) -> Option<Vec<f64>> {
    let n = u.nrows();
    let id = DMatrix::<Complex<f64>>::identity(n, n);
    for &phi in &CAYLEY_SHIFTS {
        let v = u * Complex::from_polar(1.0, -phi);
        // Hᵀ = (I + V)⁻ᵀ · i(I − V)ᵀ
        let Some(ht) = (&id + &v)
            .transpose()
            .lu()
            .solve(&((&id - &v).transpose() * Complex::i()))
        else {
            continue;
        };
        if !ht.iter().all(|z| z.norm() <= CAYLEY_BOUND) {
            continue;
        }
        let h = ht.transpose();
        let herm = (&h + h.adjoint()) * Complex::new(0.5, 0.0);
        let Some(eig) = nalgebra::SymmetricEigen::try_new(herm, f64::EPSILON, 0) else {
            continue;
        };
        if eig.eigenvalues.iter().all(|l| l.abs() <= CAYLEY_BOUND) {
            return Some(
                eig.eigenvalues
                    .iter()
                    .map(|&l| phi + 2.0 * l.atan())
                    .collect(),
            );
        }
    }
    None
}

/// Eigenvalues by complex Schur. Unshifted structure such as permutation
/// blocks can stall the QR iteration; in that case the matrix is conjugated
/// by a fixed Householder reflection, which leaves the spectrum unchanged.
fn eigenvalues(u: DMatrix<Complex<f64>>) -> Result<nalgebra::DVector<Complex<f64>>> {
    let n = u.nrows();
    let iters = 100 * n.max(10);
    if let Some(e) = Schur::try_new(u.clone(), f64::EPSILON, iters).and_then(|s| s.eigenvalues()) {
        return Ok(e);
    }
    for attempt in 1..=3 {
        let v = nalgebra::DVector::from_fn(n, |i, _| {
            Complex::new(1.0 + (0.731 * (attempt * (i + 1)) as f64).sin(), 0.0)
        });
        let h = DMatrix::<Complex<f64>>::identity(n, n)
            - (&v * v.adjoint()) * Complex::new(2.0 / v.norm_squared(), 0.0);
        let conj = &h * &u * &h;
        if let Some(e) = Schur::try_new(conj, f64::EPSILON, iters).and_then(|s| s.eigenvalues()) {
            return Ok(e);
        }
    }
    Err(Error::ConvergenceFailure(
        "Schur decomposition did not converge".into(),
    ))
}

/// `U(ω)` for a graph.
pub fn unitary_at(g: &Graph, omega: f64) -> Result<DMatrix<Complex<f64>>> {
    if !(omega > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "ω = {omega} must be positive"
        )));
    }
    Ok(BondPropagator::new(g)?.unitary(omega))
}
