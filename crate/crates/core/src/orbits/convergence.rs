use super::search::{self, within, LENGTH_EPS};
use super::{OrbitAlphabet, OrbitSumConfig, ShellSink};
use crate::graph::Graph;
use crate::sum::CompensatedSum;
use crate::{EnergyResult, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergencePoint {
    pub l_max: f64,
    pub energy: f64,
    pub abs_error: f64,
    /// Contribution of the shell `(L_max − Δ, L_max]`.
    pub last_shell: f64,
    /// Whether the point entered the slope fit.
    pub fitted: bool,
}

/// Total contribution `D_n` of the orbit terms with length in `(start, end]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LengthBin {
    pub start: f64,
    pub end: f64,
    pub contribution: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceStudy {
    pub points: Vec<ConvergencePoint>,
    pub bin_width: f64,
    pub bins: Vec<LengthBin>,
    /// Least-squares slope of `log|error|` against `log L_max`.
    pub fitted_slope: f64,
    /// RMS residual of that fit, in natural-log units.
    pub fit_residual: f64,
    pub reference: EnergyResult,
}

/// Truncated orbit sums on a grid of cutoffs against a reference energy.
/// The orbits are enumerated once, at the largest cutoff, and accumulated
/// into length shells from which every grid point is read off.
pub fn convergence_study(
    g: &Graph,
    l_grid: &[f64],
    reference: &EnergyResult,
    delta: f64,
    cfg: &OrbitSumConfig,
) -> Result<ConvergenceStudy> {
    if l_grid.is_empty() {
        return Err(Error::InvalidConfig("empty L_max grid".into()));
    }
    if l_grid.iter().any(|&l| !(l > 0.0 && l.is_finite()))
        || l_grid.windows(2).any(|w| w[1] <= w[0])
    {
        return Err(Error::InvalidConfig(
            "L_max grid must be positive and strictly increasing".into(),
        ));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "bin width {delta} must be positive"
        )));
    }
    let l_top = *l_grid.last().unwrap();
    let cfg = OrbitSumConfig {
        l_max: l_top,
        ..*cfg
    };
    cfg.check()?;

    let bins = (l_top / delta).ceil() as usize;
    let mut edges: Vec<f64> = (1..=bins).map(|n| n as f64 * delta).collect();
    edges.extend(l_grid.iter().copied());
    edges.extend(l_grid.iter().map(|l| l - delta).filter(|&l| l > 0.0));
    edges.sort_by(f64::total_cmp);
    edges.dedup_by(|b, a| (*b - *a).abs() <= LENGTH_EPS * a.abs().max(1.0));
    // the top edge must be the largest cutoff itself
    edges.retain(|&e| e < l_top * (1.0 - LENGTH_EPS));
    edges.push(l_top);

    let alphabet = OrbitAlphabet::new(g);
    let (sink, _) = search::search(&alphabet.alpha, cfg.limits(l_top), cfg.exec, || {
        ShellSink::new(&alphabet, &edges, cfg.repetitions, &[])
    })?;
    let shells: Vec<f64> = sink.energy.iter().map(|s| s.value()).collect();

    let up_to = |l: f64| {
        let mut s = CompensatedSum::default();
        for (e, x) in edges.iter().zip(&sink.energy) {
            if within(*e, l) {
                s.merge(x);
            }
        }
        s.value()
    };
    let between = |lo: f64, hi: f64| -> f64 {
        edges
            .iter()
            .zip(&shells)
            .filter(|(e, _)| !within(**e, lo) && within(**e, hi))
            .map(|(_, x)| x)
            .sum()
    };

    let mut points: Vec<ConvergencePoint> = l_grid
        .iter()
        .map(|&l| {
            let energy = up_to(l);
            ConvergencePoint {
                l_max: l,
                energy,
                abs_error: (energy - reference.value).abs(),
                last_shell: between(l - delta, l),
                fitted: false,
            }
        })
        .collect();

    let smallest = points
        .iter()
        .map(|p| p.abs_error)
        .fold(f64::INFINITY, f64::min);
    if reference.error_estimate > 0.1 * smallest {
        return Err(Error::ReferenceTooCoarse {
            reference_error: reference.error_estimate,
            smallest_error: smallest,
        });
    }
    let floor = 10.0 * reference.error_estimate;
    for p in &mut points {
        p.fitted = p.abs_error > floor && p.abs_error > 0.0;
    }
    let (fitted_slope, fit_residual) = fit_log_log(&points)?;

    let bins = (0..bins)
        .map(|n| {
            let start = n as f64 * delta;
            let end = start + delta;
            LengthBin {
                start,
                end,
                contribution: between(start, end.min(l_top)),
            }
        })
        .collect();

    Ok(ConvergenceStudy {
        points,
        bin_width: delta,
        bins,
        fitted_slope,
        fit_residual,
        reference: reference.clone(),
    })
}

fn fit_log_log(points: &[ConvergencePoint]) -> Result<(f64, f64)> {
    let xy: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.fitted)
        .map(|p| (p.l_max.ln(), p.abs_error.ln()))
        .collect();
    if xy.len() < 2 {
        return Err(Error::InvalidConfig(
            "fewer than two grid points above the reference noise".into(),
        ));
    }
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let icept = my - slope * mx;
    let rss: f64 = xy.iter().map(|p| (p.1 - icept - slope * p.0).powi(2)).sum();
    Ok((slope, (rss / n).sqrt()))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::graph::{interval, BoundaryKind::*};
    use crate::{Method, Parameters};

    #[test]
    fn single_bond_tail_decays_fast() {
        let g = interval(1.0, Neumann, Neumann).unwrap();
        let reference = EnergyResult {
            value: -PI / 24.0,
            error_estimate: 0.0,
            method: Method::Analytic,
            parameters: Parameters::Analytic {
                formula: "-pi/(24a)",
            },
        };
        let grid: Vec<f64> = (0..8).map(|k| 8.0 + 4.0 * k as f64 + 0.5).collect();
        let study =
            convergence_study(&g, &grid, &reference, 1.0, &OrbitSumConfig::new(1.0)).unwrap();
        assert!(study.fitted_slope <= -0.95, "{}", study.fitted_slope);
        // Σ_{r>R} 1/r² ≈ 1/R, scaled by 1/(2π·2)
        let p = study.points[0];
        let r = (p.l_max / 2.0).floor();
        assert!((p.abs_error - 1.0 / (4.0 * PI) * (1.0 / r - 0.5 / (r * r))).abs() < 1e-3);
        let d: f64 = study.bins.iter().map(|b| b.contribution).sum();
        assert!((d - study.points.last().unwrap().energy).abs() < 1e-12);
    }

    #[test]
    fn coarse_reference_is_rejected() {
        let g = interval(1.0, Neumann, Neumann).unwrap();
        let reference = EnergyResult {
            value: -PI / 24.0,
            error_estimate: 1.0,
            method: Method::Analytic,
            parameters: Parameters::Analytic { formula: "" },
        };
        let r = convergence_study(&g, &[8.0, 16.0], &reference, 1.0, &OrbitSumConfig::new(1.0));
        assert!(matches!(r, Err(Error::ReferenceTooCoarse { .. })));
    }
}
