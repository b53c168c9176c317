use nalgebra::DMatrix;

use super::{BoundaryKind, Graph};
use crate::{Error, Result};

/// Real orthogonal `v × v` vertex scattering matrix, indexed by the
/// vertex's incident bond-ends.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexScattering {
    pub matrix: DMatrix<f64>,
}

/// `σ = (+1)` for Neumann, `(-1)` for Dirichlet, `2/v - δ` for Kirchhoff.
pub fn vertex_scattering(kind: BoundaryKind, valence: usize) -> Result<VertexScattering> {
    if !kind.allows_valence(valence) {
        return Err(Error::IllegalValence { kind, valence });
    }
    let matrix = match kind {
        BoundaryKind::Neumann => DMatrix::from_element(1, 1, 1.0),
        BoundaryKind::Dirichlet => DMatrix::from_element(1, 1, -1.0),
        BoundaryKind::Kirchhoff => {
            let t = 2.0 / valence as f64;
            DMatrix::from_fn(valence, valence, |i, j| if i == j { t - 1.0 } else { t })
        }
    };
    Ok(VertexScattering { matrix })
}

/// A bond with a traversal direction. Forward runs `ends[0] → ends[1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirectedBond {
    pub bond: usize,
    pub reverse: bool,
}

impl DirectedBond {
    pub fn forward(bond: usize) -> Self {
        DirectedBond {
            bond,
            reverse: false,
        }
    }

    pub fn backward(bond: usize) -> Self {
        DirectedBond {
            bond,
            reverse: true,
        }
    }

    /// Index in `0..2B`: `2·bond + reverse`.
    pub fn index(self) -> usize {
        2 * self.bond + self.reverse as usize
    }

    pub fn from_index(i: usize) -> Self {
        DirectedBond {
            bond: i / 2,
            reverse: i % 2 == 1,
        }
    }

    pub fn reversed(self) -> Self {
        DirectedBond {
            bond: self.bond,
            reverse: !self.reverse,
        }
    }

    /// Bond-end the wave leaves from.
    pub fn departure_end(self) -> usize {
        self.reverse as usize
    }

    /// Bond-end the wave arrives at.
    pub fn arrival_end(self) -> usize {
        1 - self.reverse as usize
    }

    pub fn tail(self, g: &Graph) -> usize {
        g.bonds()[self.bond].ends[self.departure_end()]
    }

    pub fn head(self, g: &Graph) -> usize {
        g.bonds()[self.bond].ends[self.arrival_end()]
    }

    /// `name+` for forward, `name-` for reverse.
    pub fn label(self, g: &Graph) -> String {
        let sign = if self.reverse { '-' } else { '+' };
        format!("{}{}", g.bonds()[self.bond].name, sign)
    }
}

/// `2B × 2B` bond scattering matrix; `matrix[(d', d)]` is the amplitude to
/// scatter from directed bond `d` into `d'`.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalScattering {
    pub matrix: DMatrix<f64>,
}

impl GlobalScattering {
    pub fn amplitude(&self, from: DirectedBond, to: DirectedBond) -> f64 {
        self.matrix[(to.index(), from.index())]
    }
}

pub fn assemble_global_scattering(g: &Graph) -> GlobalScattering {
    let n = g.directed_count();
    let mut matrix = DMatrix::zeros(n, n);
    for v in g.vertices() {
        // The graph is validated, so the kind/valence pair is legal.
        let sigma = vertex_scattering(v.kind, v.valence())
            .expect("validated graph has legal vertex conditions")
            .matrix;
        for (i, incoming) in v.incident.iter().enumerate() {
            // The directed bond arriving at this bond-end.
            let d = DirectedBond {
                bond: incoming.bond,
                reverse: incoming.end == 0,
            };
            for (k, outgoing) in v.incident.iter().enumerate() {
                let d_out = DirectedBond {
                    bond: outgoing.bond,
                    reverse: outgoing.end == 1,
                };
                matrix[(d_out.index(), d.index())] = sigma[(k, i)];
            }
        }
    }
    GlobalScattering { matrix }
}
