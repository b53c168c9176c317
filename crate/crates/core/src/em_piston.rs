//! Electromagnetic piston: an infinitely permeable piston in a perfectly
//! conducting rectangular shaft of square cross-section `b × b`, a distance
//! `a` from the conducting baffle.
//!
//! The pressures are the limiting forms for `a ≪ b` (inside) and a long
//! external shaft (outside). Pressure is force per area, positive outward.

use std::f64::consts::PI;

/// Catalan's constant.
pub const CATALAN: f64 = 0.915_965_594_177_219;

/// Ratio `a/b` above which the thin-box pressures are reported out of regime.
pub const REGIME_THRESHOLD: f64 = 0.2;

/// Energy of a box with one permeable wall, `Ē(a) = E(2a) − E(a)`, from the
/// all-conducting energy `E`.
pub fn rayleigh_dowker(energy: impl Fn(f64) -> f64, a: f64) -> f64 {
    energy(2.0 * a) - energy(a)
}

/// Force version of [`rayleigh_dowker`], differentiating with respect to
/// `a`: `F̄(a) = 2F(2a) − F(a)` for `F = −∂E/∂a`.
pub fn rayleigh_dowker_force(force: impl Fn(f64) -> f64, a: f64) -> f64 {
    2.0 * force(2.0 * a) - force(a)
}

/// Conducting box, `P_a = −π²/(240 a⁴)` (attractive).
pub fn conducting_pressure_inside(a: f64) -> f64 {
    -PI * PI / (240.0 * a.powi(4))
}

/// Box with a permeable piston, `P̄_a = +(7/8) π²/(240 a⁴)` (repulsive).
pub fn permeable_pressure_inside(a: f64) -> f64 {
    -0.875 * conducting_pressure_inside(a)
}

/// Long conducting shaft, `P = +G/(24 b⁴)`; independent of the shaft length.
pub fn shaft_pressure(b: f64) -> f64 {
    CATALAN / (24.0 * b.powi(4))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PistonGeometry {
    pub a: f64,
    pub b: f64,
}

impl PistonGeometry {
    pub fn new(a: f64, b: f64) -> crate::Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(crate::Error::InvalidConfig(format!(
                "piston dimensions must be positive, got a = {a}, b = {b}"
            )));
        }
        Ok(PistonGeometry { a, b })
    }

    pub fn in_regime(&self) -> bool {
        self.a / self.b <= REGIME_THRESHOLD
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PistonForce {
    pub inside_pressure: f64,
    pub shaft_pressure: f64,
    /// `b²·(P̄_a − P_shaft)`; positive is repulsive.
    pub force: f64,
    /// False when `a/b` exceeds [`REGIME_THRESHOLD`].
    pub in_regime: bool,
}

impl PistonForce {
    pub fn classification(&self) -> &'static str {
        if self.force > 0.0 {
            "repulsive"
        } else if self.force < 0.0 {
            "attractive"
        } else {
            "neutral"
        }
    }
}

pub fn piston_net_force(geom: PistonGeometry) -> PistonForce {
    let inside = permeable_pressure_inside(geom.a);
    let shaft = shaft_pressure(geom.b);
    PistonForce {
        inside_pressure: inside,
        shaft_pressure: shaft,
        force: geom.b * geom.b * (inside - shaft),
        in_regime: geom.in_regime(),
    }
}

/// Depth at which the net force changes sign, `a* = b (7π²/(80 G))^{1/4}`.
pub fn crossover_depth(b: f64) -> f64 {
    b * (7.0 * PI * PI / (80.0 * CATALAN)).powf(0.25)
}

/// Plain-text report for the command line.
pub fn report(geom: PistonGeometry) -> String {
    let f = piston_net_force(geom);
    let mut out = String::new();
    out.push_str(&format!("a = {}\nb = {}\n", geom.a, geom.b));
    out.push_str(&format!(
        "conducting pressure inside  P_a    = {:.9e}\n",
        conducting_pressure_inside(geom.a)
    ));
    out.push_str(&format!(
        "permeable pressure inside   Pbar_a = {:.9e}\n",
        f.inside_pressure
    ));
    out.push_str(&format!(
        "shaft pressure              P      = {:.9e}\n",
        f.shaft_pressure
    ));
    out.push_str(&format!(
        "net force                   F      = {:.9e}\n",
        f.force
    ));
    out.push_str(&format!("classification: {}\n", f.classification()));
    if f.in_regime {
        out.push_str(&format!(
            "regime: ok (a/b = {:.4} <= {REGIME_THRESHOLD})\n",
            geom.a / geom.b
        ));
    } else {
        out.push_str(&format!(
            "regime: WARNING a/b = {:.4} > {REGIME_THRESHOLD}; thin-box pressures are not valid here\n",
            geom.a / geom.b
        ));
    }
    out.push_str("note: for a cube the permeable piston is attractive; not computed here\n");
    out
}
