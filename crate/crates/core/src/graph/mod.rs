//! Metric graphs: bonds with lengths, vertices with boundary conditions, and
//! the scattering matrices derived from them.

mod builders;
mod format;
mod scattering;
mod star;

use std::collections::HashMap;
use std::fmt;

use crate::{Error, Result};

pub use builders::{build_star, interval, unequal_star, UNEQUAL_STAR_LENGTHS};
pub use format::{parse_graph_file, to_graph_file};
pub use scattering::{
    assemble_global_scattering, vertex_scattering, DirectedBond, GlobalScattering, VertexScattering,
};
pub use star::{Leg, Star};

/// Vertex boundary condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryKind {
    Neumann,
    Dirichlet,
    Kirchhoff,
}

impl BoundaryKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryKind::Neumann => "neumann",
            BoundaryKind::Dirichlet => "dirichlet",
            BoundaryKind::Kirchhoff => "kirchhoff",
        }
    }

    /// Neumann and Dirichlet are piston conditions, legal only at valence 1.
    pub fn is_piston(self) -> bool {
        !matches!(self, BoundaryKind::Kirchhoff)
    }

    pub fn allows_valence(self, valence: usize) -> bool {
        valence >= 1 && (!self.is_piston() || valence == 1)
    }
}

impl fmt::Display for BoundaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for BoundaryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "neumann" => Ok(BoundaryKind::Neumann),
            "dirichlet" => Ok(BoundaryKind::Dirichlet),
            "kirchhoff" => Ok(BoundaryKind::Kirchhoff),
            other => Err(Error::InvalidConfig(format!(
                "unknown boundary kind `{other}` (expected kirchhoff, neumann or dirichlet)"
            ))),
        }
    }
}

/// One end of a bond: `end == 0` is `ends[0]`, `end == 1` is `ends[1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BondEnd {
    pub bond: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub name: String,
    pub kind: BoundaryKind,
    /// Bond-ends meeting here, ordered by (bond, end).
    pub incident: Vec<BondEnd>,
}

impl Vertex {
    pub fn valence(&self) -> usize {
        self.incident.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bond {
    pub name: String,
    /// Vertex indices; equal for a loop.
    pub ends: [usize; 2],
    pub length: f64,
}

/// A validated metric graph. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    vertices: Vec<Vertex>,
    bonds: Vec<Bond>,
    total_length: f64,
}

impl Graph {
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn bond_count(&self) -> usize {
        self.bonds.len()
    }

    /// Number of directed bonds, `2B`.
    pub fn directed_count(&self) -> usize {
        2 * self.bonds.len()
    }

    /// `L = Σ L_j`.
    pub fn total_length(&self) -> f64 {
        self.total_length
    }

    pub fn min_bond_length(&self) -> f64 {
        self.bonds
            .iter()
            .map(|b| b.length)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn bond_index(&self, name: &str) -> Option<usize> {
        self.bonds.iter().position(|b| b.name == name)
    }

    pub fn require_bond(&self, name: &str) -> Result<usize> {
        self.bond_index(name)
            .ok_or_else(|| Error::UnknownBond(name.to_owned()))
    }

    /// Copy of the graph with one bond length replaced.
    pub fn with_bond_length(&self, bond: usize, length: f64) -> Result<Graph> {
        let mut spec = self.to_spec();
        spec.bonds
            .get_mut(bond)
            .ok_or_else(|| Error::UnknownBond(format!("#{bond}")))?
            .length = length;
        spec.build()
    }

    pub fn to_spec(&self) -> GraphSpec {
        GraphSpec {
            vertices: self
                .vertices
                .iter()
                .map(|v| VertexSpec {
                    name: v.name.clone(),
                    kind: v.kind,
                })
                .collect(),
            bonds: self
                .bonds
                .iter()
                .map(|b| BondSpec {
                    name: b.name.clone(),
                    from: self.vertices[b.ends[0]].name.clone(),
                    to: self.vertices[b.ends[1]].name.clone(),
                    length: b.length,
                })
                .collect(),
        }
    }

    pub fn validate(&self) -> ValidationReport {
        validate_graph(&self.to_spec())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VertexSpec {
    pub name: String,
    pub kind: BoundaryKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BondSpec {
    pub name: String,
    pub from: String,
    pub to: String,
    pub length: f64,
}

/// Unvalidated graph description, as read from a file or assembled by hand.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GraphSpec {
    pub vertices: Vec<VertexSpec>,
    pub bonds: Vec<BondSpec>,
}

impl GraphSpec {
    pub fn vertex(&mut self, name: impl Into<String>, kind: BoundaryKind) -> &mut Self {
        self.vertices.push(VertexSpec {
            name: name.into(),
            kind,
        });
        self
    }

    pub fn bond(
        &mut self,
        name: impl Into<String>,
        from: impl Into<String>,
        to: impl Into<String>,
        length: f64,
    ) -> &mut Self {
        self.bonds.push(BondSpec {
            name: name.into(),
            from: from.into(),
            to: to.into(),
            length,
        });
        self
    }

    /// Validate and build. Fails with the full violation report.
    pub fn build(&self) -> Result<Graph> {
        let report = validate_graph(self);
        if !report.is_empty() {
            return Err(Error::Invalid(report));
        }
        let index: HashMap<&str, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.name.as_str(), i))
            .collect();
        let mut vertices: Vec<Vertex> = self
            .vertices
            .iter()
            .map(|v| Vertex {
                name: v.name.clone(),
                kind: v.kind,
                incident: Vec::new(),
            })
            .collect();
        let mut bonds = Vec::with_capacity(self.bonds.len());
        for (j, b) in self.bonds.iter().enumerate() {
            let ends = [index[b.from.as_str()], index[b.to.as_str()]];
            vertices[ends[0]].incident.push(BondEnd { bond: j, end: 0 });
            vertices[ends[1]].incident.push(BondEnd { bond: j, end: 1 });
            bonds.push(Bond {
                name: b.name.clone(),
                ends,
                length: b.length,
            });
        }
        let total_length = bonds.iter().map(|b| b.length).sum();
        Ok(Graph {
            vertices,
            bonds,
            total_length,
        })
    }
}

/// A single broken invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    InvalidName {
        what: &'static str,
        name: String,
    },
    DuplicateVertex(String),
    DuplicateBond(String),
    DanglingVertex {
        bond: String,
        vertex: String,
    },
    NonpositiveLength {
        bond: String,
        length: f64,
    },
    IsolatedVertex(String),
    PistonAtHigherValence {
        vertex: String,
        kind: BoundaryKind,
        valence: usize,
    },
    Empty,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::InvalidName { what, name } => write!(f, "invalid {what} name `{name}`"),
            Violation::DuplicateVertex(n) => write!(f, "duplicate vertex `{n}`"),
            Violation::DuplicateBond(n) => write!(f, "duplicate bond `{n}`"),
            Violation::DanglingVertex { bond, vertex } => {
                write!(f, "bond `{bond}` references missing vertex `{vertex}`")
            }
            Violation::NonpositiveLength { bond, length } => {
                write!(f, "bond `{bond}`: nonpositive length {length}")
            }
            Violation::IsolatedVertex(n) => write!(f, "vertex `{n}` has no bonds"),
            Violation::PistonAtHigherValence {
                vertex,
                kind,
                valence,
            } => write!(
                f,
                "vertex `{vertex}`: piston kind at valence > 1 ({kind} at valence {valence})"
            ),
            Violation::Empty => f.write_str("graph has no bonds"),
        }
    }
}

/// Every violation found in a [`GraphSpec`]; empty means valid.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

pub(crate) fn is_valid_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn validate_graph(spec: &GraphSpec) -> ValidationReport {
    let mut violations = Vec::new();
    let mut valence: HashMap<&str, usize> = HashMap::new();
    for v in &spec.vertices {
        if !is_valid_name(&v.name) {
            violations.push(Violation::InvalidName {
                what: "vertex",
                name: v.name.clone(),
            });
        }
        if valence.insert(v.name.as_str(), 0).is_some() {
            violations.push(Violation::DuplicateVertex(v.name.clone()));
        }
    }
    let mut bond_names = std::collections::HashSet::new();
    for b in &spec.bonds {
        if !is_valid_name(&b.name) {
            violations.push(Violation::InvalidName {
                what: "bond",
                name: b.name.clone(),
            });
        }
        if !bond_names.insert(b.name.as_str()) {
            violations.push(Violation::DuplicateBond(b.name.clone()));
        }
        if !(b.length > 0.0 && b.length.is_finite()) {
            violations.push(Violation::NonpositiveLength {
                bond: b.name.clone(),
                length: b.length,
            });
        }
        for end in [&b.from, &b.to] {
            match valence.get_mut(end.as_str()) {
                Some(n) => *n += 1,
                None => violations.push(Violation::DanglingVertex {
                    bond: b.name.clone(),
                    vertex: end.clone(),
                }),
            }
        }
    }
    if spec.bonds.is_empty() {
        violations.push(Violation::Empty);
    }
    let mut reported = std::collections::HashSet::new();
    for v in &spec.vertices {
        if !reported.insert(v.name.as_str()) {
            continue;
        }
        let n = valence[v.name.as_str()];
        if n == 0 {
            violations.push(Violation::IsolatedVertex(v.name.clone()));
        } else if !v.kind.allows_valence(n) {
            violations.push(Violation::PistonAtHigherValence {
                vertex: v.name.clone(),
                kind: v.kind,
                valence: n,
            });
        }
    }
    ValidationReport { violations }
}
