//! Periodic-orbit expansion of the vacuum energy,
//! `E_c = −(1/2π) Σ_p Σ_r A_p^r / (r² L_p)`.

mod convergence;
mod search;
mod transfer;

use std::f64::consts::PI;

pub use convergence::{convergence_study, ConvergencePoint, ConvergenceStudy, LengthBin};
pub use transfer::{equal_length_trace_energy, TraceDepth};

use crate::closed_form::dilog_unchecked;
use crate::exec::Execution;
use crate::graph::{assemble_global_scattering, BoundaryKind, DirectedBond, Graph, Leg, Star};
use crate::sum::CompensatedSum;
use crate::{EnergyResult, Error, ForceEntry, Method, Parameters, Result};
use search::{within, Alphabet, Limits, Sink};

/// Default cap on DFS nodes.
pub const DEFAULT_BUDGET: u64 = 100_000_000;
/// Environment variable read by [`budget_from_env`].
pub const BUDGET_ENV: &str = "GRAPH_CASIMIR_BUDGET";

/// Node budget from `GRAPH_CASIMIR_BUDGET`, or the default when unset.
pub fn budget_from_env() -> Result<u64> {
    match std::env::var(BUDGET_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("{BUDGET_ENV}={s} is not an integer"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

/// How repetitions `r ≥ 2` of a primitive orbit are summed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Repetitions {
    /// Only `r·L_p ≤ L_max`.
    #[default]
    Truncated,
    /// All `r ≥ 1`, giving `Li₂(A_p)`.
    Unbounded,
}

impl Repetitions {
    pub fn as_str(self) -> &'static str {
        match self {
            Repetitions::Truncated => "truncated",
            Repetitions::Unbounded => "unbounded",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitSumConfig {
    /// Longest primitive orbit kept.
    pub l_max: f64,
    /// Branches with partial amplitude magnitude at or below this are cut.
    pub amplitude_floor: f64,
    pub repetitions: Repetitions,
    /// Cap on DFS nodes.
    pub budget: u64,
    /// Width of the last shell reported as the error estimate. Defaults to
    /// twice the shortest bond.
    pub shell_width: Option<f64>,
    pub exec: Execution,
}

impl OrbitSumConfig {
    pub fn new(l_max: f64) -> Self {
        OrbitSumConfig {
            l_max,
            amplitude_floor: 0.0,
            repetitions: Repetitions::default(),
            budget: DEFAULT_BUDGET,
            shell_width: None,
            exec: Execution::default(),
        }
    }

    pub fn unbounded(l_max: f64) -> Self {
        OrbitSumConfig {
            repetitions: Repetitions::Unbounded,
            ..Self::new(l_max)
        }
    }

    fn check(&self) -> Result<()> {
        if !(self.l_max > 0.0 && self.l_max.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "L_max = {} must be positive",
                self.l_max
            )));
        }
        if !(self.amplitude_floor >= 0.0) {
            return Err(Error::InvalidConfig(
                "amplitude floor must be nonnegative".into(),
            ));
        }
        if let Some(w) = self.shell_width {
            if !(w > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "shell width {w} must be positive"
                )));
            }
        }
        Ok(())
    }

    fn limits(&self, l_max: f64) -> Limits {
        Limits {
            l_max,
            floor: self.amplitude_floor,
            budget: self.budget,
        }
    }
}

/// A primitive periodic orbit in canonical form.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimitiveOrbit {
    /// Least rotation of the directed-bond cycle.
    pub sequence: Vec<DirectedBond>,
    pub length: f64,
    pub amplitude: f64,
    /// `m_j` for every bond, in bond order.
    pub traversals: Vec<u32>,
}

/// Search alphabet for a graph. Stars with a Kirchhoff center use legs
/// (out-and-back excursions from the center); anything else uses directed
/// bonds.
pub(crate) struct OrbitAlphabet {
    pub alpha: Alphabet,
    kind: Symbols,
    bonds: usize,
}

enum Symbols {
    Legs(Vec<Leg>),
    Directed,
}

impl OrbitAlphabet {
    pub fn new(g: &Graph) -> Self {
        match Star::detect(g) {
            Some(star) if star_has_kirchhoff_center(g, &star) => Self::legs(g, star),
            _ => Self::directed(g),
        }
    }

    fn legs(g: &Graph, star: Star) -> Self {
        let b = star.arms() as f64;
        let lengths = star.legs.iter().map(|l| 2.0 * l.length).collect();
        let refl: Vec<f64> = star.legs.iter().map(Leg::reflection).collect();
        let alpha = Alphabet::new(lengths, |a, c| {
            let center = if a == c { 2.0 / b - 1.0 } else { 2.0 / b };
            refl[a] * center
        });
        OrbitAlphabet {
            alpha,
            kind: Symbols::Legs(star.legs),
            bonds: g.bond_count(),
        }
    }

    fn directed(g: &Graph) -> Self {
        let s = assemble_global_scattering(g);
        let lengths = (0..g.directed_count())
            .map(|i| g.bonds()[DirectedBond::from_index(i).bond].length)
            .collect();
        let alpha = Alphabet::new(lengths, |a, c| {
            s.amplitude(DirectedBond::from_index(a), DirectedBond::from_index(c))
        });
        OrbitAlphabet {
            alpha,
            kind: Symbols::Directed,
            bonds: g.bond_count(),
        }
    }

    /// Bond carried by a symbol and how often one use of it traverses that bond.
    #[inline]
    fn symbol_bond(&self, s: u16) -> (usize, u32) {
        match &self.kind {
            Symbols::Legs(legs) => (legs[s as usize].bond, 2),
            Symbols::Directed => (DirectedBond::from_index(s as usize).bond, 1),
        }
    }

    fn traversals(&self, word: &[u16]) -> Vec<u32> {
        let mut m = vec![0; self.bonds];
        for &s in word {
            let (b, k) = self.symbol_bond(s);
            m[b] += k;
        }
        m
    }

    fn traversals_of(&self, word: &[u16], bond: usize) -> u32 {
        word.iter()
            .map(|&s| self.symbol_bond(s))
            .filter(|&(b, _)| b == bond)
            .map(|(_, k)| k)
            .sum()
    }

    fn canonical_sequence(&self, word: &[u16]) -> Vec<DirectedBond> {
        match &self.kind {
            Symbols::Directed => word
                .iter()
                .map(|&s| DirectedBond::from_index(s as usize))
                .collect(),
            Symbols::Legs(legs) => {
                let seq: Vec<DirectedBond> = word
                    .iter()
                    .flat_map(|&s| {
                        let out = legs[s as usize].outward;
                        [out, out.reversed()]
                    })
                    .collect();
                least_rotation(&seq)
            }
        }
    }
}

fn star_has_kirchhoff_center(g: &Graph, star: &Star) -> bool {
    star.arms() == 1 || g.vertices()[star.center].kind == BoundaryKind::Kirchhoff
}

fn least_rotation<T: Ord + Copy>(seq: &[T]) -> Vec<T> {
    let n = seq.len();
    let best = (0..n)
        .min_by(|&i, &j| {
            let a = seq[i..].iter().chain(&seq[..i]);
            let b = seq[j..].iter().chain(&seq[..j]);
            a.cmp(b)
        })
        .unwrap_or(0);
    seq[best..].iter().chain(&seq[..best]).copied().collect()
}

/// Calls `f(length, weight)` for each repetition term of one primitive
/// orbit, where `weight = Σ A^r / r²` over the repetitions landing at
/// `length`. Used by every sum over orbits, so restricted sums (such as the
/// shortest-orbit approximation) agree with the full one term by term.
#[inline]
pub(crate) fn repetition_terms(
    amplitude: f64,
    length: f64,
    repetitions: Repetitions,
    l_max: f64,
    mut f: impl FnMut(f64, f64),
) {
    match repetitions {
        Repetitions::Unbounded => f(length, dilog_unchecked(amplitude.clamp(-1.0, 1.0))),
        Repetitions::Truncated => {
            let mut power = amplitude;
            let mut r = 1u32;
            while within(r as f64 * length, l_max) {
                let rr = r as f64;
                f(rr * length, power / (rr * rr));
                power *= amplitude;
                r += 1;
                if power == 0.0 {
                    break;
                }
            }
        }
    }
}

/// Energy contribution `−weight/(2π L_p)`.
#[inline]
pub(crate) fn energy_term(weight: f64, length: f64) -> f64 {
    -weight / (2.0 * PI * length)
}

/// Force contribution on a bond traversed `m` times: `−weight·m/(2π L_p²)`.
#[inline]
pub(crate) fn force_term(weight: f64, length: f64, m: u32) -> f64 {
    -weight * m as f64 / (2.0 * PI * length * length)
}

/// Accumulates energy and forces into length shells `(edge[i−1], edge[i]]`.
pub(crate) struct ShellSink<'a> {
    alphabet: &'a OrbitAlphabet,
    edges: &'a [f64],
    repetitions: Repetitions,
    l_max: f64,
    force_bonds: &'a [usize],
    pub energy: Vec<CompensatedSum>,
    /// `force[k][i]` for bond `force_bonds[k]` and shell `i`.
    pub force: Vec<Vec<CompensatedSum>>,
    pub orbits: usize,
    scratch: Vec<u32>,
}

impl<'a> ShellSink<'a> {
    pub fn new(
        alphabet: &'a OrbitAlphabet,
        edges: &'a [f64],
        repetitions: Repetitions,
        force_bonds: &'a [usize],
    ) -> Self {
        let l_max = edges.last().copied().unwrap_or(0.0);
        ShellSink {
            alphabet,
            edges,
            repetitions,
            l_max,
            force_bonds,
            energy: vec![CompensatedSum::default(); edges.len()],
            force: vec![vec![CompensatedSum::default(); edges.len()]; force_bonds.len()],
            orbits: 0,
            scratch: Vec::new(),
        }
    }
}

impl Sink for ShellSink<'_> {
    fn visit(&mut self, word: &[u16], length: f64, amplitude: f64) {
        self.orbits += 1;
        let mut ms = std::mem::take(&mut self.scratch);
        ms.clear();
        ms.extend(
            self.force_bonds
                .iter()
                .map(|&b| self.alphabet.traversals_of(word, b)),
        );
        let (energy, force) = (&mut self.energy, &mut self.force);
        let edges = self.edges;
        repetition_terms(
            amplitude,
            length,
            self.repetitions,
            self.l_max,
            |at, weight| {
                let i = edges
                    .partition_point(|&e| !within(at, e))
                    .min(edges.len() - 1);
                energy[i].add(energy_term(weight, length));
                for (k, &mk) in ms.iter().enumerate() {
                    if mk > 0 {
                        force[k][i].add(force_term(weight, length, mk));
                    }
                }
            },
        );
        self.scratch = ms;
    }

    fn absorb(&mut self, later: Self) {
        self.orbits += later.orbits;
        for (a, b) in self.energy.iter_mut().zip(&later.energy) {
            a.merge(b);
        }
        for (fa, fb) in self.force.iter_mut().zip(&later.force) {
            for (a, b) in fa.iter_mut().zip(fb) {
                a.merge(b);
            }
        }
    }
}

struct CollectSink {
    found: Vec<(Vec<u16>, f64, f64)>,
}

impl Sink for CollectSink {
    fn visit(&mut self, word: &[u16], length: f64, amplitude: f64) {
        self.found.push((word.to_vec(), length, amplitude));
    }

    fn absorb(&mut self, later: Self) {
        self.found.extend(later.found);
    }
}

/// Every primitive orbit with `L_p ≤ L_max` and nonzero amplitude, sorted by
/// length and then by sequence.
pub fn enumerate_primitive_orbits(g: &Graph, cfg: &OrbitSumConfig) -> Result<Vec<PrimitiveOrbit>> {
    cfg.check()?;
    let alphabet = OrbitAlphabet::new(g);
    let (sink, _) = search::search(&alphabet.alpha, cfg.limits(cfg.l_max), cfg.exec, || {
        CollectSink { found: Vec::new() }
    })?;
    let mut orbits: Vec<PrimitiveOrbit> = sink
        .found
        .into_iter()
        .map(|(word, length, amplitude)| PrimitiveOrbit {
            sequence: alphabet.canonical_sequence(&word),
            length,
            amplitude,
            traversals: alphabet.traversals(&word),
        })
        .collect();
    orbits.sort_by(|a, b| {
        a.length
            .total_cmp(&b.length)
            .then_with(|| a.sequence.cmp(&b.sequence))
    });
    Ok(orbits)
}

/// Product of scattering amplitudes around a cycle, wraparound included.
pub fn orbit_amplitude(g: &Graph, sequence: &[DirectedBond]) -> Result<f64> {
    if sequence.is_empty() {
        return Err(Error::InvalidConfig("empty orbit".into()));
    }
    let s = assemble_global_scattering(g);
    let mut amp = 1.0;
    for (i, &from) in sequence.iter().enumerate() {
        if from.bond >= g.bond_count() {
            return Err(Error::UnknownBond(format!("#{}", from.bond)));
        }
        let to = sequence[(i + 1) % sequence.len()];
        if to.bond >= g.bond_count() {
            return Err(Error::UnknownBond(format!("#{}", to.bond)));
        }
        if from.head(g) != to.tail(g) {
            return Err(Error::DisconnectedStep { position: i });
        }
        amp *= s.amplitude(from, to);
    }
    Ok(amp)
}

fn default_shell_width(g: &Graph, cfg: &OrbitSumConfig) -> f64 {
    cfg.shell_width.unwrap_or(2.0 * g.min_bond_length())
}

fn shell_edges(l_max: f64, width: f64) -> Vec<f64> {
    if l_max - width > 0.0 {
        vec![l_max - width, l_max]
    } else {
        vec![l_max]
    }
}

fn total(sums: &[CompensatedSum]) -> f64 {
    let mut s = CompensatedSum::default();
    for x in sums {
        s.merge(x);
    }
    s.value()
}

/// Truncated orbit sum for the energy. The error estimate is the size of the
/// contribution from the last length shell `(L_max − Δ, L_max]`.
pub fn vacuum_energy_orbits(g: &Graph, cfg: &OrbitSumConfig) -> Result<EnergyResult> {
    cfg.check()?;
    let alphabet = OrbitAlphabet::new(g);
    let width = default_shell_width(g, cfg);
    let edges = shell_edges(cfg.l_max, width);
    let (sink, _) = search::search(&alphabet.alpha, cfg.limits(cfg.l_max), cfg.exec, || {
        ShellSink::new(&alphabet, &edges, cfg.repetitions, &[])
    })?;
    Ok(EnergyResult {
        value: total(&sink.energy),
        error_estimate: sink.energy.last().map_or(0.0, |s| s.value().abs()),
        method: Method::Orbit,
        parameters: Parameters::Orbit {
            l_max: cfg.l_max,
            repetitions: cfg.repetitions,
            orbit_count: sink.orbits,
            shell_width: width,
        },
    })
}

/// Term-by-term derivative `F_j = −(1/2π) Σ_p Σ_r A_p^r m_j / (r² L_p²)`.
pub fn force_orbits(g: &Graph, bond: &str, cfg: &OrbitSumConfig) -> Result<ForceEntry> {
    let j = g.require_bond(bond)?;
    cfg.check()?;
    let alphabet = OrbitAlphabet::new(g);
    let edges = shell_edges(cfg.l_max, default_shell_width(g, cfg));
    let bonds = [j];
    let (sink, _) = search::search(&alphabet.alpha, cfg.limits(cfg.l_max), cfg.exec, || {
        ShellSink::new(&alphabet, &edges, cfg.repetitions, &bonds)
    })?;
    Ok(ForceEntry {
        bond: g.bonds()[j].name.clone(),
        force: total(&sink.force[0]),
        error_estimate: sink.force[0].last().map_or(0.0, |s| s.value().abs()),
        method: Method::Orbit,
    })
}

fn kirchhoff_star(g: &Graph) -> Result<Star> {
    let star = Star::detect(g).ok_or(Error::NotAStar)?;
    if !star_has_kirchhoff_center(g, &star) {
        return Err(Error::NotAStar);
    }
    Ok(star)
}

fn bounce(star: &Star, leg: &Leg) -> (f64, f64) {
    let b = star.arms() as f64;
    (leg.reflection() * (2.0 / b - 1.0), 2.0 * leg.length)
}

/// Energy from the single-leg bounce orbits alone, all repetitions:
/// `−(1/4π) Σ_j Li₂(±(2/B − 1)) / a_j`.
pub fn shortest_orbit_energy(g: &Graph) -> Result<f64> {
    let star = kirchhoff_star(g)?;
    let mut s = CompensatedSum::default();
    for leg in &star.legs {
        let (amp, len) = bounce(&star, leg);
        repetition_terms(amp, len, Repetitions::Unbounded, f64::INFINITY, |_, w| {
            s.add(energy_term(w, len))
        });
    }
    Ok(s.value())
}

/// `−∂/∂a_j` of [`shortest_orbit_energy`]: `−(1/4π) Li₂(±(2/B − 1)) / a_j²`.
pub fn shortest_orbit_force(g: &Graph, bond: &str) -> Result<f64> {
    let j = g.require_bond(bond)?;
    let star = kirchhoff_star(g)?;
    let leg = star
        .legs
        .iter()
        .find(|l| l.bond == j)
        .ok_or(Error::NotAStar)?;
    let (amp, len) = bounce(&star, leg);
    let mut f = 0.0;
    repetition_terms(amp, len, Repetitions::Unbounded, f64::INFINITY, |_, w| {
        f += force_term(w, len, 2)
    });
    Ok(f)
}
