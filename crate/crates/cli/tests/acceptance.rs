//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use graph_casimir::closed_form::{
    dirichlet_star_energy_equal, interval_energy, shortest_energy_expansion, star_energy_equal,
    IntervalSpec,
};
use graph_casimir::em_piston::{
    conducting_pressure_inside, crossover_depth, permeable_pressure_inside, piston_net_force,
    rayleigh_dowker, PistonGeometry,
};
use graph_casimir::graph::{
    assemble_global_scattering, build_star, interval, unequal_star, vertex_scattering, Graph,
};
use graph_casimir::orbits::{
    convergence_study, enumerate_primitive_orbits, equal_length_trace_energy, force_orbits,
    shortest_orbit_energy, vacuum_energy_orbits, OrbitSumConfig, TraceDepth,
};
use graph_casimir::spectral::{
    compute_spectrum, force_spectral, vacuum_energy_spectral, SpectralConfig,
};
use graph_casimir::BoundaryKind::{self, Dirichlet, Kirchhoff, Neumann};
use nalgebra::DMatrix;

const BIN: &str = env!("CARGO_BIN_EXE_graph-casimir");

type Check = Result<String, String>;
/// name, runtime limit in seconds, check
type Criterion = (&'static str, u64, Box<dyn Fn() -> Check>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn star(b: usize, kind: BoundaryKind) -> Graph {
    build_star(b, &vec![1.0; b], &vec![kind; b]).unwrap()
}

fn cli(args: &[&str]) -> Vec<u8> {
    let o = Command::new(BIN)
        .args(args)
        .output()
        .expect("spawn graph-casimir");
    assert!(
        o.status.success(),
        "graph-casimir {args:?} failed: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    o.stdout
}

fn grid_8_32() -> Vec<f64> {
    (0..=48).map(|k| 8.0 + 0.5 * k as f64).collect()
}

fn c1_intervals() -> Check {
    let cfg = SpectralConfig::default();
    let orbit = OrbitSumConfig::unbounded(2.0);
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    for (g, e) in [
        (interval(1.0, Neumann, Neumann).unwrap(), -PI / 24.0),
        (interval(1.0, Dirichlet, Neumann).unwrap(), PI / 48.0),
    ] {
        let es = vacuum_energy_spectral(&g, &cfg)
            .map_err(|e| e.to_string())?
            .value;
        let fs = force_spectral(&g, "b1", 1e-3, &cfg)
            .map_err(|e| e.to_string())?
            .force;
        let eo = vacuum_energy_orbits(&g, &orbit)
            .map_err(|e| e.to_string())?
            .value;
        let fo = force_orbits(&g, "b1", &orbit)
            .map_err(|e| e.to_string())?
            .force;
        // F = E/a at a = 1 for the interval
        ensure((es - e).abs() <= 1e-5, || {
            format!("spectral energy {es} vs {e}")
        })?;
        ensure((fs - e).abs() <= 1e-4, || {
            format!("spectral force {fs} vs {e}")
        })?;
        ensure((eo - e).abs() <= 1e-10, || {
            format!("orbit energy {eo} vs {e}")
        })?;
        ensure((fo - e).abs() <= 1e-10, || {
            format!("orbit force {fo} vs {e}")
        })?;
        worst.0 = worst.0.max((es - e).abs());
        worst.1 = worst.1.max((fs - e).abs());
        worst.2 = worst.2.max((eo - e).abs()).max((fo - e).abs());
    }
    Ok(format!(
        "max errors: spectral E {:.1e}, spectral F {:.1e}, orbit {:.1e}",
        worst.0, worst.1, worst.2
    ))
}

fn c2_stars() -> Check {
    let cfg = SpectralConfig::default();
    let mut worst = 0.0f64;
    let mut signs = String::new();
    for b in 1..=8 {
        let g = star(b, Neumann);
        let e = vacuum_energy_spectral(&g, &cfg)
            .map_err(|e| e.to_string())?
            .value;
        let expect = star_energy_equal(b, 1.0);
        ensure((e - expect).abs() <= 1e-5, || {
            format!("B={b}: E {e} vs {expect}")
        })?;
        worst = worst.max((e - expect).abs());
        let f = force_spectral(&g, "b1", 1e-3, &cfg)
            .map_err(|e| e.to_string())?
            .force;
        let ok = match b {
            1 | 2 => f < 0.0,
            3 => f.abs() <= 1e-5,
            _ => f > 0.0,
        };
        ensure(ok, || {
            format!("B={b}: per-piston force {f} breaks the sign law")
        })?;
        signs.push(if b == 3 {
            '0'
        } else if f > 0.0 {
            '+'
        } else {
            '-'
        });
    }
    Ok(format!(
        "max |E - (B-3)pi/48| = {worst:.1e}; force signs B=1..8: {signs}"
    ))
}

fn c3_degeneracy() -> Check {
    let s = compute_spectrum(&star(5, Neumann), 2.0, 1e-12).map_err(|e| e.to_string())?;
    let m = s
        .modes
        .iter()
        .find(|m| (m.omega - PI / 2.0).abs() < 1e-9)
        .ok_or("no mode at pi/2")?;
    ensure(m.multiplicity == 4, || {
        format!("multiplicity {}", m.multiplicity)
    })?;
    Ok(format!("omega = {:.12} with multiplicity 4", m.omega))
}

fn c4_weyl() -> Check {
    let g = unequal_star(false);
    let s = compute_spectrum(&g, 200.0, 1e-10).map_err(|e| e.to_string())?;
    let dev = s.weyl_deviation(g.total_length());
    ensure(dev <= 8.0, || format!("max |N - L omega/pi| = {dev}"))?;
    Ok(format!(
        "max |N - L omega/pi| = {dev:.3} over {} modes",
        s.total()
    ))
}

fn c5_figure2() -> Check {
    for b in 1..=30 {
        for (kind, exact) in [
            (Neumann, star_energy_equal(b, 1.0)),
            (Dirichlet, dirichlet_star_energy_equal(b, 1.0)),
        ] {
            let e = equal_length_trace_energy(&star(b, kind), TraceDepth::Resummed)
                .map_err(|e| e.to_string())?
                .value;
            ensure((e - exact).abs() <= 1e-10, || {
                format!("B={b} {kind:?}: transfer {e} vs {exact}")
            })?;
        }
    }
    let out = String::from_utf8(cli(&["figure", "2"])).unwrap();
    let mut rel = std::collections::HashMap::new();
    let rows = out.lines().skip(1).count();
    ensure(rows == 60, || format!("expected 60 rows, got {rows}"))?;
    for line in out.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let b: usize = f[0].parse().unwrap();
        let kind = f[1].to_string();
        let v: Vec<f64> = f[2..].iter().map(|x| x.parse().unwrap()).collect();
        let exact = if kind == "neumann" {
            star_energy_equal(b, 1.0)
        } else {
            dirichlet_star_energy_equal(b, 1.0)
        };
        ensure((v[2] - exact).abs() <= 1e-8, || {
            format!("B={b} {kind}: collective {} vs {exact}", v[2])
        })?;
        ensure((v[1] - exact / b as f64).abs() <= 1e-8, || {
            format!("B={b} {kind}: per-piston {}", v[1])
        })?;
        // the B = 3 Neumann force vanishes; no relative error there
        if v[1].abs() > 1e-8 {
            rel.insert((b, kind), (v[0] - v[1]).abs() / v[1].abs());
        }
    }
    for kind in ["neumann", "dirichlet"] {
        for b in 10..30 {
            let (r0, r1) = (rel[&(b, kind.to_string())], rel[&(b + 1, kind.to_string())]);
            ensure(r1 < r0, || {
                format!("{kind}: relative error grows from B={b} to {}", b + 1)
            })?;
        }
    }
    let rn = rel[&(30, "neumann".to_string())];
    let rd = rel[&(30, "dirichlet".to_string())];
    ensure(rn <= 0.10, || {
        format!("Neumann relative error at B=30 is {rn:.4}")
    })?;
    Ok(format!(
        "relative error at B=30: Neumann {:.2}% (bound 10%), Dirichlet {:.2}%; both decrease monotonically for B >= 10",
        100.0 * rn,
        100.0 * rd
    ))
}

fn c6_expansion() -> Check {
    let points: Vec<(f64, f64)> = (8..=64)
        .map(|b| {
            let exact = shortest_orbit_energy(&star(b, Neumann)).unwrap() / b as f64;
            let approx = shortest_energy_expansion(b, 1.0);
            ((b as f64).ln(), (approx - exact).abs().ln())
        })
        .collect();
    let slope = fit(&points);
    ensure((slope + 2.0).abs() <= 0.2, || format!("slope {slope}"))?;
    Ok(format!("log-log slope {slope:.3} (target -2 +/- 0.2)"))
}

fn fit(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn convergence(dirichlet: bool, range: (f64, f64)) -> Check {
    let g = unequal_star(dirichlet);
    let reference =
        vacuum_energy_spectral(&g, &SpectralConfig::default()).map_err(|e| e.to_string())?;
    let study = convergence_study(
        &g,
        &grid_8_32(),
        &reference,
        1.0,
        &OrbitSumConfig::new(32.0),
    )
    .map_err(|e| e.to_string())?;
    let smallest = study
        .points
        .iter()
        .map(|p| p.abs_error)
        .fold(f64::INFINITY, f64::min);
    let ratio = reference.error_estimate / smallest;
    ensure(ratio < 0.1, || {
        format!("reference error is {ratio:.3} of the smallest grid error")
    })?;
    let s = study.fitted_slope;
    ensure(s >= range.0 && s <= range.1, || {
        format!("fitted slope {s:.3} outside [{}, {}]", range.0, range.1)
    })?;
    Ok(format!(
        "fitted slope {s:.3} in [{}, {}] over {} grid points; reference error / smallest error = {ratio:.1e}",
        range.0,
        range.1,
        study.points.iter().filter(|p| p.fitted).count()
    ))
}

fn c9_appendix() -> Check {
    for a in [0.1, 0.5, 1.0, 3.0] {
        let r = permeable_pressure_inside(a) / conducting_pressure_inside(a).abs();
        // exact up to the rounding of the two pressures
        ensure((r - 0.875).abs() <= f64::EPSILON, || {
            format!("ratio {r} at a = {a}")
        })?;
    }
    let nn = |a: f64| interval_energy(IntervalSpec::new(a, Neumann, Neumann).unwrap());
    let mut worst = 0.0f64;
    for k in 1..=10 {
        let a = 0.3 * k as f64;
        let dn = interval_energy(IntervalSpec::new(a, Dirichlet, Neumann).unwrap());
        worst = worst.max((rayleigh_dowker(nn, a) - dn).abs());
    }
    ensure(worst <= 1e-12, || {
        format!("Rayleigh-Dowker mismatch {worst:e}")
    })?;
    let near = piston_net_force(PistonGeometry::new(0.1, 1.0).unwrap()).force;
    let a_star = crossover_depth(1.0);
    let far = piston_net_force(PistonGeometry::new(1.1 * a_star, 1.0).unwrap()).force;
    ensure(near > 0.0, || format!("force at a = 0.1 is {near}"))?;
    ensure(far < 0.0, || format!("force at 1.1 a* is {far}"))?;
    Ok(format!(
        "ratio 7/8 to machine precision; Rayleigh-Dowker error {worst:.1e}; F(0.1) = {near:.4}, a* = {a_star:.5}, F(1.1 a*) = {far:.3e}"
    ))
}

fn c10_properties() -> Check {
    // scattering invariants
    for v in 1..=8 {
        let s = vertex_scattering(Kirchhoff, v).unwrap().matrix;
        let err = (&s * &s - DMatrix::<f64>::identity(v, v)).abs().max();
        ensure(err < 1e-12, || {
            format!("sigma^2 - I = {err:e} at valence {v}")
        })?;
    }
    let graphs = [
        unequal_star(false),
        unequal_star(true),
        star(7, Neumann),
        interval(2.0, Dirichlet, Neumann).unwrap(),
    ];
    for g in &graphs {
        let s = assemble_global_scattering(g).matrix;
        let n = s.nrows();
        let err = (&s * s.transpose() - DMatrix::<f64>::identity(n, n))
            .abs()
            .max();
        ensure(err < 1e-12, || format!("S S^T - I = {err:e}"))?;
    }
    // canonical forms
    let g = unequal_star(true);
    let orbits =
        enumerate_primitive_orbits(&g, &OrbitSumConfig::new(14.0)).map_err(|e| e.to_string())?;
    let mut seen = std::collections::HashSet::new();
    for p in &orbits {
        let n = p.sequence.len();
        let rots: Vec<Vec<_>> = (0..n)
            .map(|i| {
                p.sequence[i..]
                    .iter()
                    .chain(&p.sequence[..i])
                    .copied()
                    .collect()
            })
            .collect();
        ensure(rots.iter().all(|r| &p.sequence <= r), || {
            "sequence is not its least rotation".into()
        })?;
        let distinct: std::collections::HashSet<_> = rots.iter().collect();
        ensure(distinct.len() == n, || "sequence is a repetition".into())?;
        for r in rots {
            ensure(seen.insert(r), || {
                "two orbits share a rotation class".into()
            })?;
        }
    }
    // byte-identical reruns
    let commands: &[&[&str]] = &[
        &[
            "validate",
            "--star",
            "4",
            "--length",
            "1.1,1.6176,1.2985,1.1159",
        ],
        &[
            "spectrum",
            "--star",
            "4",
            "--length",
            "1.1,1.6176,1.2985,1.1159",
            "--omega-max",
            "60",
        ],
        &[
            "energy",
            "--star",
            "4",
            "--length",
            "1.1,1.6176,1.2985,1.1159",
        ],
        &["energy", "--star", "4", "--method", "orbit", "--lmax", "24"],
        &["energy", "--star", "6", "--method", "transfer"],
        &["energy", "--star", "6", "--method", "analytic"],
        &["force", "--star", "3", "--piston", "dirichlet"],
        &["force", "--star", "4", "--method", "orbit", "--lmax", "20"],
        &[
            "orbits",
            "--star",
            "4",
            "--length",
            "1.1,1.6176,1.2985,1.1159",
            "--lmax",
            "12",
        ],
        &[
            "converge",
            "--star",
            "4",
            "--length",
            "1.1,1.6176,1.2985,1.1159",
            "--lmax-grid",
            "8:20:1",
        ],
        &["empiston", "--a", "0.1", "--b", "1"],
        &["figure", "2"],
        &["figure", "3"],
        &["figure", "4"],
    ];
    for args in commands {
        ensure(cli(args) == cli(args), || {
            format!("output of {args:?} differs between runs")
        })?;
    }
    Ok(format!(
        "sigma and S invariants hold; {} orbits canonical, primitive and unique; {} CLI commands byte-identical on rerun",
        orbits.len(),
        commands.len()
    ))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("interval benchmarks", 10, Box::new(c1_intervals)),
        ("star closed forms and sign law", 60, Box::new(c2_stars)),
        ("degeneracy of the B=5 star", 5, Box::new(c3_degeneracy)),
        ("Weyl bound on the unequal star", 10, Box::new(c4_weyl)),
        (
            "shortest-orbit force against exact force",
            30,
            Box::new(c5_figure2),
        ),
        (
            "1/B expansion of the shortest-orbit energy",
            5,
            Box::new(c6_expansion),
        ),
        (
            "convergence, all Neumann",
            600,
            Box::new(|| convergence(false, (-1.3, -0.7))),
        ),
        (
            "convergence, one Dirichlet piston",
            600,
            Box::new(|| convergence(true, (-1.85, -1.15))),
        ),
        ("electromagnetic piston", 1, Box::new(c9_appendix)),
        ("property suites", 60, Box::new(c10_properties)),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let result = match result {
            Ok(d) if elapsed > Duration::from_secs(*limit) => Err(format!(
                "{d}; runtime {:.1} s exceeds {limit} s",
                elapsed.as_secs_f64()
            )),
            r => r,
        };
        match result {
            Ok(detail) => println!(
                "criterion {:>2} PASS  {name}: {detail} [{:.2} s]",
                i + 1,
                elapsed.as_secs_f64()
            ),
            Err(why) => {
                failed += 1;
                println!(
                    "criterion {:>2} FAIL  {name}: {why} [{:.2} s]",
                    i + 1,
                    elapsed.as_secs_f64()
                );
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
