use super::{BoundaryKind, DirectedBond, Graph};

/// One arm of a star: center → leaf along `bond`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Leg {
    pub bond: usize,
    pub leaf: usize,
    pub length: f64,
    /// Piston condition, Neumann or Dirichlet (a valence-1 Kirchhoff leaf is
    /// reported as Neumann).
    pub piston: BoundaryKind,
    /// Directed bond pointing away from the center.
    pub outward: DirectedBond,
}

impl Leg {
    /// Reflection amplitude at the piston, `±1`.
    pub fn reflection(&self) -> f64 {
        match self.piston {
            BoundaryKind::Dirichlet => -1.0,
            _ => 1.0,
        }
    }
}

/// A graph viewed as a star: one Kirchhoff center joined to distinct
/// valence-1 leaves, every bond being a leg.
#[derive(Debug, Clone, PartialEq)]
pub struct Star {
    pub center: usize,
    /// In bond order.
    pub legs: Vec<Leg>,
}

impl Star {
    pub fn arms(&self) -> usize {
        self.legs.len()
    }

    /// Finds a center if the graph is a star. A valence-1 Neumann vertex
    /// also qualifies as center, so intervals with a Neumann end are
    /// one-legged stars; Kirchhoff candidates are preferred.
    pub fn detect(g: &Graph) -> Option<Star> {
        let b = g.bond_count();
        let mut candidates: Vec<usize> = (0..g.vertex_count())
            .filter(|&c| {
                let v = &g.vertices()[c];
                v.valence() == b
                    && match v.kind {
                        BoundaryKind::Kirchhoff => true,
                        BoundaryKind::Neumann => b == 1,
                        BoundaryKind::Dirichlet => false,
                    }
            })
            .collect();
        candidates.sort_by_key(|&c| g.vertices()[c].kind != BoundaryKind::Kirchhoff);
        candidates.into_iter().find_map(|c| Self::with_center(g, c))
    }

    fn with_center(g: &Graph, center: usize) -> Option<Star> {
        let mut legs = Vec::with_capacity(g.bond_count());
        let mut leaves = std::collections::HashSet::new();
        for (j, bond) in g.bonds().iter().enumerate() {
            let outward = match bond.ends {
                [a, b] if a == center && b != center => DirectedBond::forward(j),
                [a, b] if b == center && a != center => DirectedBond::backward(j),
                _ => return None,
            };
            let leaf = outward.head(g);
            let v = &g.vertices()[leaf];
            if v.valence() != 1 || !leaves.insert(leaf) {
                return None;
            }
            let piston = match v.kind {
                BoundaryKind::Dirichlet => BoundaryKind::Dirichlet,
                _ => BoundaryKind::Neumann,
            };
            legs.push(Leg {
                bond: j,
                leaf,
                length: bond.length,
                piston,
                outward,
            });
        }
        Some(Star { center, legs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_star, interval, GraphSpec};

    #[test]
    fn detects_built_stars() {
        let g = build_star(
            3,
            &[1.0, 2.0, 3.0],
            &[
                BoundaryKind::Dirichlet,
                BoundaryKind::Neumann,
                BoundaryKind::Neumann,
            ],
        )
        .unwrap();
        let s = Star::detect(&g).unwrap();
        assert_eq!(s.arms(), 3);
        assert_eq!(s.legs[0].reflection(), -1.0);
        assert_eq!(s.legs[2].length, 3.0);
    }

    #[test]
    fn intervals_with_a_neumann_end_are_stars() {
        let g = interval(1.0, BoundaryKind::Dirichlet, BoundaryKind::Neumann).unwrap();
        let s = Star::detect(&g).unwrap();
        assert_eq!(s.legs[0].piston, BoundaryKind::Dirichlet);
        assert_eq!(g.vertices()[s.center].kind, BoundaryKind::Neumann);
        let dd = interval(1.0, BoundaryKind::Dirichlet, BoundaryKind::Dirichlet).unwrap();
        assert!(Star::detect(&dd).is_none());
    }

    #[test]
    fn rejects_non_stars() {
        let mut spec = GraphSpec::default();
        spec.vertex("a", BoundaryKind::Kirchhoff)
            .vertex("b", BoundaryKind::Kirchhoff)
            .vertex("p", BoundaryKind::Neumann)
            .bond("e1", "a", "b", 1.0)
            .bond("e2", "a", "b", 1.0)
            .bond("e3", "b", "p", 1.0);
        assert!(Star::detect(&spec.build().unwrap()).is_none());
    }
}
