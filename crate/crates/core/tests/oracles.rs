//! Reference values for the spectral, orbit and transfer routes.

use std::f64::consts::PI;

use graph_casimir::closed_form::{dilog, dirichlet_star_energy_equal, star_energy_equal};
use graph_casimir::graph::{build_star, interval, unequal_star, BoundaryKind::*, Graph};
use graph_casimir::orbits::*;
use graph_casimir::spectral::*;

fn star(b: usize, kind: graph_casimir::BoundaryKind) -> Graph {
    build_star(b, &vec![1.0; b], &vec![kind; b]).unwrap()
}

#[test]
fn interval_spectra() {
    let g = interval(1.0, Neumann, Neumann).unwrap();
    let s = compute_spectrum(&g, 10.0, 1e-12).unwrap();
    let w: Vec<f64> = s.modes.iter().map(|m| m.omega).collect();
    assert_eq!(w.len(), 3);
    for (n, x) in w.iter().enumerate() {
        assert!((x - (n + 1) as f64 * PI).abs() < 1e-11);
        assert_eq!(s.modes[n].multiplicity, 1);
    }
    let g = interval(1.0, Dirichlet, Neumann).unwrap();
    let s = compute_spectrum(&g, 20.0, 1e-12).unwrap();
    for (n, m) in s.modes.iter().enumerate() {
        assert!((m.omega - (2 * n + 1) as f64 * PI / 2.0).abs() < 1e-11);
    }
}

#[test]
fn star_degeneracies() {
    let s = compute_spectrum(&star(5, Neumann), 20.0, 1e-12).unwrap();
    for m in &s.modes {
        let half = m.omega / (PI / 2.0);
        let k = half.round() as usize;
        assert!((half - k as f64).abs() < 1e-9);
        let expect = if k % 2 == 1 { 4 } else { 1 };
        assert_eq!(m.multiplicity, expect, "ω = {}", m.omega);
    }
}

#[test]
fn transparent_center() {
    let a = compute_spectrum(&star(2, Neumann), 30.0, 1e-12).unwrap();
    let b = compute_spectrum(&interval(2.0, Neumann, Neumann).unwrap(), 30.0, 1e-12).unwrap();
    assert_eq!(a.modes.len(), b.modes.len());
    for (x, y) in a.modes.iter().zip(&b.modes) {
        assert!((x.omega - y.omega).abs() < 1e-11);
        assert_eq!(x.multiplicity, y.multiplicity);
    }
}

#[test]
fn secular_function_agrees_with_spectrum() {
    let g = unequal_star(false);
    let s = compute_spectrum(&g, 3.0, 1e-12).unwrap();
    let w0 = s.modes[0].omega;
    assert!(secular_star(&g, w0).unwrap().abs() < 1e-10);
    let (lo, hi) = (w0 - 1e-3, w0 + 1e-3);
    assert!(secular_star(&g, lo).unwrap() * secular_star(&g, hi).unwrap() < 0.0);
    let g = unequal_star(true);
    let s = compute_spectrum(&g, 3.0, 1e-12).unwrap();
    assert!(secular_star(&g, s.modes[0].omega).unwrap().abs() < 1e-10);
}

#[test]
fn cylinder_traces() {
    let nn = compute_spectrum(&interval(1.0, Neumann, Neumann).unwrap(), 40.0, 1e-12).unwrap();
    let t = cylinder_trace(&nn, 1.0).unwrap();
    assert!((t - 1.0 / (PI.exp() - 1.0)).abs() < 1e-12);
    let dn = compute_spectrum(&interval(1.0, Dirichlet, Neumann).unwrap(), 40.0, 1e-12).unwrap();
    let t = cylinder_trace(&dn, 1.0).unwrap();
    assert!((t - 1.0 / (2.0 * (PI / 2.0).sinh())).abs() < 1e-12);
}

#[test]
fn extrapolated_energies() {
    let cfg = SpectralConfig::default();
    let cases = [
        (interval(1.0, Neumann, Neumann).unwrap(), -PI / 24.0),
        (interval(1.0, Dirichlet, Neumann).unwrap(), PI / 48.0),
        (star(7, Neumann), 4.0 * PI / 48.0),
        (star(3, Neumann), 0.0),
        (star(2, Dirichlet), -PI / 48.0),
        (star(4, Dirichlet), -5.0 * PI / 48.0),
    ];
    for (g, expect) in &cases {
        let e = vacuum_energy_spectral(g, &cfg).unwrap();
        assert!((e.value - expect).abs() < 1e-6, "{} vs {expect}", e.value);
        assert!(e.error_estimate < 1e-6);
    }
    assert!((dirichlet_star_energy_equal(4, 1.0) + 5.0 * PI / 48.0).abs() < 1e-15);
}

#[test]
fn linear_extrapolation_is_less_accurate() {
    let g = interval(1.0, Neumann, Neumann).unwrap();
    let lin = SpectralConfig {
        variable: ExtrapolationVariable::Linear,
        ..SpectralConfig::default()
    };
    let e = vacuum_energy_spectral(&g, &lin).unwrap();
    assert!((e.value + PI / 24.0).abs() < 1e-4);
    let q = vacuum_energy_spectral(&g, &SpectralConfig::default()).unwrap();
    assert!((q.value + PI / 24.0).abs() < (e.value + PI / 24.0).abs());
}

#[test]
fn finite_difference_forces() {
    let cfg = SpectralConfig::default();
    let g = interval(1.0, Neumann, Neumann).unwrap();
    let f = force_spectral(&g, "b1", 1e-3, &cfg).unwrap();
    assert!((f.force + PI / 24.0).abs() < 1e-4);
    let g = interval(1.0, Dirichlet, Neumann).unwrap();
    let f = force_spectral(&g, "b1", 1e-3, &cfg).unwrap();
    assert!((f.force - PI / 48.0).abs() < 1e-4);
    let f = force_spectral(&star(4, Neumann), "b2", 1e-3, &cfg).unwrap();
    assert!((f.force - 0.016_362_5).abs() < 1e-6, "{}", f.force);
}

#[test]
fn orbit_enumeration_examples() {
    let o = enumerate_primitive_orbits(
        &interval(1.0, Neumann, Neumann).unwrap(),
        &OrbitSumConfig::new(2.0),
    )
    .unwrap();
    assert_eq!(o.len(), 1);
    let o = enumerate_primitive_orbits(&star(4, Neumann), &OrbitSumConfig::new(2.0)).unwrap();
    assert_eq!(o.len(), 4);
    assert!(o.iter().all(|p| p.amplitude == -0.5 && p.length == 2.0));
    // general directed-bond search agrees with the leg search
    let mut spec = star(3, Neumann).to_spec();
    spec.vertices[0].kind = Kirchhoff;
    spec.bond("extra", "p1", "p1", 0.7);
    for v in &mut spec.vertices {
        v.kind = Kirchhoff;
    }
    let looped = spec.build().unwrap();
    let o = enumerate_primitive_orbits(&looped, &OrbitSumConfig::new(4.0)).unwrap();
    assert!(!o.is_empty());
    for p in &o {
        assert!((orbit_amplitude(&looped, &p.sequence).unwrap() - p.amplitude).abs() < 1e-14);
    }
}

#[test]
fn leg_and_directed_searches_agree() {
    // a Neumann leaf of valence 1 behaves like a Kirchhoff leaf, but the
    // three-bond path below is not a star, so it takes the directed-bond route
    let mut spec = graph_casimir::GraphSpec::default();
    spec.vertex("a", Neumann)
        .vertex("m", Kirchhoff)
        .vertex("n", Kirchhoff)
        .vertex("b", Dirichlet)
        .bond("x", "a", "m", 1.0)
        .bond("y", "m", "n", 1.3)
        .bond("z", "n", "b", 0.8);
    let path = spec.build().unwrap();
    let e = vacuum_energy_orbits(&path, &OrbitSumConfig::unbounded(12.0)).unwrap();
    let s = vacuum_energy_spectral(&path, &SpectralConfig::default()).unwrap();
    // Kirchhoff vertices of valence 2 are transparent: a DN interval of length 3.1
    assert!((s.value - PI / (48.0 * 3.1)).abs() < 1e-6);
    assert!(
        (e.value - s.value).abs() < 1e-9,
        "{} vs {}",
        e.value,
        s.value
    );
}

#[test]
fn orbit_energies() {
    let cfg = OrbitSumConfig::unbounded(2.0);
    let e = vacuum_energy_orbits(&interval(1.0, Neumann, Neumann).unwrap(), &cfg).unwrap();
    assert!((e.value + PI / 24.0).abs() < 1e-14);
    let e = vacuum_energy_orbits(&interval(1.0, Dirichlet, Neumann).unwrap(), &cfg).unwrap();
    assert!((e.value - PI / 48.0).abs() < 1e-14);

    let g = unequal_star(false);
    let reference = vacuum_energy_spectral(&g, &SpectralConfig::default()).unwrap();
    let e = vacuum_energy_orbits(&g, &OrbitSumConfig::new(30.0)).unwrap();
    assert!((e.value - reference.value).abs() < 1.0 / 30.0);
    assert!(e.error_estimate > 0.0);
}

#[test]
fn orbit_forces() {
    let cfg = OrbitSumConfig::unbounded(2.0);
    let f = force_orbits(&interval(1.0, Neumann, Neumann).unwrap(), "b1", &cfg).unwrap();
    assert!((f.force + PI / 24.0).abs() < 1e-14);
    let f = force_orbits(&interval(1.0, Dirichlet, Neumann).unwrap(), "b1", &cfg).unwrap();
    assert!((f.force - PI / 48.0).abs() < 1e-14);
    let f = force_orbits(&star(4, Neumann), "b1", &OrbitSumConfig::unbounded(24.0)).unwrap();
    assert!(f.force > 0.0);
    assert!(
        (f.force - PI / 192.0).abs() < 0.25 * PI / 192.0,
        "{}",
        f.force
    );
    assert!(force_orbits(&star(4, Neumann), "b9", &cfg).is_err());
}

#[test]
fn shortest_orbit_limits() {
    assert!((shortest_orbit_energy(&star(1, Neumann)).unwrap() + PI / 24.0).abs() < 1e-14);
    assert_eq!(shortest_orbit_energy(&star(2, Neumann)).unwrap(), 0.0);
    let b = 2000;
    let ratio = shortest_orbit_energy(&star(b, Neumann)).unwrap() / (PI / 48.0 * b as f64);
    assert!((ratio - 1.0).abs() < 2.0 / b as f64);
    let f = shortest_orbit_force(&star(4, Neumann), "b3").unwrap();
    assert!((f - -dilog(-0.5).unwrap() / (4.0 * PI)).abs() < 1e-15);
    assert!((f - 0.035_683_7).abs() < 1e-6, "{f}");
    let f = shortest_orbit_force(&star(4, Dirichlet), "b3").unwrap();
    assert!((f + 0.046_333_7).abs() < 1e-6, "{f}");
    assert_eq!(
        shortest_orbit_force(&star(2, Dirichlet), "b1").unwrap(),
        0.0
    );
}

#[test]
fn shortest_orbit_is_the_bounce_restriction() {
    let g = unequal_star(true);
    let bounces: Vec<_> = enumerate_primitive_orbits(&g, &OrbitSumConfig::new(4.0))
        .unwrap()
        .into_iter()
        .filter(|p| p.sequence.len() == 2)
        .collect();
    assert_eq!(bounces.len(), 4);
    let e: f64 = bounces
        .iter()
        .map(|p| -dilog(p.amplitude).unwrap() / (2.0 * PI * p.length))
        .sum();
    assert!((e - shortest_orbit_energy(&g).unwrap()).abs() < 1e-15);
}

#[test]
fn transfer_path() {
    for b in [1usize, 4, 30] {
        let e = equal_length_trace_energy(&star(b, Neumann), TraceDepth::Resummed).unwrap();
        assert!((e.value - star_energy_equal(b, 1.0)).abs() < 1e-12);
    }
    let e = equal_length_trace_energy(&star(30, Neumann), TraceDepth::Resummed).unwrap();
    assert!((e.value - 27.0 * PI / 48.0).abs() < 1e-11);
    // truncated trace and truncated orbit sum cover the same terms
    for n_max in [6usize, 12, 20] {
        let t = equal_length_trace_energy(&star(3, Neumann), TraceDepth::Truncated(n_max)).unwrap();
        let o =
            vacuum_energy_orbits(&star(3, Neumann), &OrbitSumConfig::new(n_max as f64)).unwrap();
        assert!(
            (t.value - o.value).abs() < 1e-8,
            "{} vs {}",
            t.value,
            o.value
        );
    }
    assert!(equal_length_trace_energy(&unequal_star(false), TraceDepth::Resummed).is_err());
}

#[test]
fn convergence_rates() {
    let grid: Vec<f64> = (0..=48).map(|k| 8.0 + 0.5 * k as f64).collect();
    let g3 = unequal_star(false);
    let r3 = vacuum_energy_spectral(&g3, &SpectralConfig::default()).unwrap();
    let s3 = convergence_study(&g3, &grid, &r3, 1.0, &OrbitSumConfig::new(32.0)).unwrap();
    assert!(
        (-1.3..=-0.7).contains(&s3.fitted_slope),
        "{}",
        s3.fitted_slope
    );
    let g4 = unequal_star(true);
    let r4 = vacuum_energy_spectral(&g4, &SpectralConfig::default()).unwrap();
    let s4 = convergence_study(&g4, &grid, &r4, 1.0, &OrbitSumConfig::new(32.0)).unwrap();
    assert!(s4.fitted_slope < s3.fitted_slope);
    assert!(s4.bins.len() == 32 && s4.bin_width == 1.0);

    let dn = interval(1.0, Dirichlet, Neumann).unwrap();
    let exact = graph_casimir::closed_form::analytic_energy(&dn).unwrap();
    let grid: Vec<f64> = (4..=16).map(|k| 4.0 * k as f64 + 1.0).collect();
    let s = convergence_study(&dn, &grid, &exact, 1.0, &OrbitSumConfig::new(1.0)).unwrap();
    assert!(s.fitted_slope <= -1.9, "{}", s.fitted_slope);
}
