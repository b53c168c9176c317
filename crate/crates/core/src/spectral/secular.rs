use std::f64::consts::FRAC_PI_2;

use crate::graph::{BoundaryKind, Graph, Star};
use crate::{Error, Result};

/// Pole-free star secular function
/// `F(ω) = Σ_j sin(ωL_j + θ_j) Π_{i≠j} cos(ωL_i + θ_i)`,
/// with `θ = 0` on Neumann legs and `θ = π/2` on Dirichlet legs. Its zeros are
/// the zeros of `Σ_j tan(ωL_j + θ_j)` wherever no two cosines vanish at once.
pub fn secular_star(g: &Graph, omega: f64) -> Result<f64> {
    let star = Star::detect(g).ok_or(Error::NotAStar)?;
    if g.vertices()[star.center].kind != BoundaryKind::Kirchhoff && star.arms() > 1 {
        return Err(Error::NotAStar);
    }
    let args: Vec<f64> = star
        .legs
        .iter()
        .map(|leg| {
            let theta = match leg.piston {
                BoundaryKind::Dirichlet => FRAC_PI_2,
                _ => 0.0,
            };
            omega * leg.length + theta
        })
        .collect();
    let cos: Vec<f64> = args.iter().map(|x| x.cos()).collect();
    let total = args
        .iter()
        .enumerate()
        .map(|(j, x)| {
            let rest: f64 = cos
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(_, c)| c)
                .product();
            x.sin() * rest
        })
        .sum();
    Ok(total)
}
