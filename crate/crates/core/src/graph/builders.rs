use super::{BoundaryKind, Graph, GraphSpec};
use crate::{Error, Result};

/// Bond lengths of the four-arm reference star used in the convergence
/// figures.
pub const UNEQUAL_STAR_LENGTHS: [f64; 4] = [1.1, 1.6176, 1.2985, 1.1159];

/// Star with a Kirchhoff center `center`, leaves `p1..pB` and bonds
/// `b1..bB` oriented center → leaf.
pub fn build_star(arms: usize, lengths: &[f64], pistons: &[BoundaryKind]) -> Result<Graph> {
    if arms == 0 {
        return Err(Error::InvalidConfig(
            "a star needs at least one bond".into(),
        ));
    }
    if lengths.len() != arms {
        return Err(Error::SizeMismatch {
            what: "star lengths",
            expected: arms,
            got: lengths.len(),
        });
    }
    if pistons.len() != arms {
        return Err(Error::SizeMismatch {
            what: "star pistons",
            expected: arms,
            got: pistons.len(),
        });
    }
    if let Some(k) = pistons.iter().find(|k| !k.is_piston()) {
        return Err(Error::InvalidConfig(format!(
            "star pistons must be neumann or dirichlet, got {k}"
        )));
    }
    let mut spec = GraphSpec::default();
    spec.vertex("center", BoundaryKind::Kirchhoff);
    for (j, (&len, &kind)) in lengths.iter().zip(pistons).enumerate() {
        let leaf = format!("p{}", j + 1);
        spec.vertex(leaf.clone(), kind);
        spec.bond(format!("b{}", j + 1), "center", leaf, len);
    }
    spec.build()
}

/// Single bond `b1` from `left` to `right`.
pub fn interval(length: f64, left: BoundaryKind, right: BoundaryKind) -> Result<Graph> {
    let mut spec = GraphSpec::default();
    spec.vertex("left", left)
        .vertex("right", right)
        .bond("b1", "left", "right", length);
    spec.build()
}

/// The reference four-arm star, all Neumann, optionally with a Dirichlet
/// piston on the first bond.
pub fn unequal_star(dirichlet_first: bool) -> Graph {
    let mut pistons = [BoundaryKind::Neumann; 4];
    if dirichlet_first {
        pistons[0] = BoundaryKind::Dirichlet;
    }
    build_star(4, &UNEQUAL_STAR_LENGTHS, &pistons).expect("reference star is valid")
}
