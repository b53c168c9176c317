use std::f64::consts::PI;

use super::propagator::BondPropagator;
use super::{Mode, Spectrum, SpectrumMethod};
use crate::exec::{map_ordered, Execution};
use crate::graph::Graph;
use crate::{Error, Result};

/// Grid cells handled by one work item.
const CELLS_PER_CHUNK: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumConfig {
    pub omega_max: f64,
    /// Absolute accuracy of each located root.
    pub tol: f64,
    pub exec: Execution,
}

impl SpectrumConfig {
    pub fn new(omega_max: f64, tol: f64) -> Self {
        SpectrumConfig {
            omega_max,
            tol,
            exec: Execution::default(),
        }
    }
}

/// All frequencies in `(0, omega_max]`, each located to `tol`.
pub fn compute_spectrum(g: &Graph, omega_max: f64, tol: f64) -> Result<Spectrum> {
    compute_spectrum_with(g, &SpectrumConfig::new(omega_max, tol))
}

/// Scan `(0, ω_max]` on a grid of step at most `π/(4L)`, a quarter of the
/// mean level spacing; every cell whose mode count increases is refined.
/// Cells holding a single crossing are solved with Brent's method on the
/// secular function, the rest by bisection on the count until the bracket is
/// narrower than `tol` (which keeps exact degeneracies together).
pub fn compute_spectrum_with(g: &Graph, cfg: &SpectrumConfig) -> Result<Spectrum> {
    if !(cfg.omega_max > 0.0 && cfg.omega_max.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "omega_max = {} must be positive",
            cfg.omega_max
        )));
    }
    if !(cfg.tol > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "tol = {} must be positive",
            cfg.tol
        )));
    }
    let propagator = BondPropagator::new(g)?;
    let step = PI / (4.0 * g.total_length());
    let cells = (cfg.omega_max / step).ceil().max(1.0) as usize;
    let grid = |i: usize| cfg.omega_max * i as f64 / cells as f64;

    let chunks: Vec<(usize, usize)> = (0..cells)
        .step_by(CELLS_PER_CHUNK)
        .map(|start| (start, (start + CELLS_PER_CHUNK).min(cells)))
        .collect();
    let scanner = Scanner {
        propagator: &propagator,
        tol: cfg.tol,
    };
    let results = map_ordered(cfg.exec, &chunks, |&(start, end)| {
        scanner.scan_chunk((start..=end).map(grid).collect())
    });

    let mut roots = Vec::new();
    let mut last_count = 0;
    for r in results {
        let chunk = r?;
        if chunk.first_count < last_count {
            return Err(Error::ConvergenceFailure(
                "mode count decreased between scan windows".into(),
            ));
        }
        last_count = chunk.last_count;
        roots.extend(chunk.roots);
    }

    let cluster_tol = 10.0 * cfg.tol;
    let modes = cluster(roots, cluster_tol);
    let total: usize = modes.iter().map(|m| m.multiplicity).sum();
    if total != last_count {
        return Err(Error::ConvergenceFailure(format!(
            "located {total} modes but the count at omega_max is {last_count}"
        )));
    }
    Ok(Spectrum {
        modes,
        omega_max: cfg.omega_max,
        tol: cfg.tol,
        cluster_tol,
        method: SpectrumMethod::EigenphaseCount,
    })
}

struct ChunkResult {
    roots: Vec<(f64, usize)>,
    first_count: usize,
    last_count: usize,
}

struct Scanner<'a> {
    propagator: &'a BondPropagator,
    tol: f64,
}

impl Scanner<'_> {
    fn count(&self, omega: f64) -> Result<usize> {
        if omega <= 0.0 {
            Ok(0)
        } else {
            self.propagator.counting(omega)
        }
    }

    fn scan_chunk(&self, points: Vec<f64>) -> Result<ChunkResult> {
        let counts = points
            .iter()
            .map(|&w| self.count(w))
            .collect::<Result<Vec<_>>>()?;
        let mut roots = Vec::new();
        for i in 0..points.len() - 1 {
            self.refine(
                points[i],
                points[i + 1],
                counts[i],
                counts[i + 1],
                true,
                &mut roots,
            )?;
        }
        Ok(ChunkResult {
            roots,
            first_count: counts[0],
            last_count: counts[counts.len() - 1],
        })
    }

    fn refine(
        &self,
        lo: f64,
        hi: f64,
        n_lo: usize,
        n_hi: usize,
        use_brent: bool,
        out: &mut Vec<(f64, usize)>,
    ) -> Result<()> {
        if n_hi < n_lo {
            return Err(Error::ConvergenceFailure(format!(
                "eigenphases not monotone on ({lo}, {hi}]"
            )));
        }
        let crossings = n_hi - n_lo;
        if crossings == 0 {
            return Ok(());
        }
        if crossings == 1 && use_brent {
            if let Some(root) = brent(|w| self.propagator.secular(w), lo, hi, self.tol) {
                out.push((root, 1));
                return Ok(());
            }
        }
        if hi - lo <= self.tol {
            out.push((0.5 * (lo + hi), crossings));
            return Ok(());
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            out.push((mid, crossings));
            return Ok(());
        }
        let n_mid = self.count(mid)?;
        let retry = use_brent && crossings > 1;
        self.refine(lo, mid, n_lo, n_mid, retry, out)?;
        self.refine(mid, hi, n_mid, n_hi, retry, out)
    }
}

/// Brent's method on a sign-changing bracket; `None` if there is no sign
/// change to work with.
fn brent(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Option<f64> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fb == 0.0 {
        return Some(b);
    }
    if fa == 0.0 {
        return Some(a);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return None;
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol1 || fb == 0.0 {
            return Some(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(m) };
        fb = f(b);
    }
    None
}

/// Merge roots closer than `cluster_tol`, summing multiplicities.
fn cluster(mut roots: Vec<(f64, usize)>, cluster_tol: f64) -> Vec<Mode> {
    roots.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut modes: Vec<Mode> = Vec::with_capacity(roots.len());
    let mut last_raw = f64::NEG_INFINITY;
    for (w, m) in roots {
        match modes.last_mut() {
            Some(prev) if w - last_raw < cluster_tol => {
                let total = prev.multiplicity + m;
                prev.omega = (prev.omega * prev.multiplicity as f64 + w * m as f64) / total as f64;
                prev.multiplicity = total;
            }
            _ => modes.push(Mode {
                omega: w,
                multiplicity: m,
            }),
        }
        last_raw = w;
    }
    modes
}
