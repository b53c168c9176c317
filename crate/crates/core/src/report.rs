//! CSV output with a fixed number format.

use std::io::{self, Write};

use crate::graph::Graph;
use crate::orbits::{ConvergenceStudy, PrimitiveOrbit};
use crate::spectral::Spectrum;

/// Formats like C's `%.9g`: nine significant digits, trailing zeros removed,
/// scientific notation outside `[1e-5, 1e9)`.
pub fn fmt_sig9(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.8e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa), exp)
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// `n,omega,multiplicity`, one row per distinct frequency.
pub fn write_spectrum_csv(w: &mut dyn Write, spec: &Spectrum) -> io::Result<()> {
    writeln!(w, "n,omega,multiplicity")?;
    for (i, m) in spec.modes.iter().enumerate() {
        writeln!(w, "{},{},{}", i + 1, fmt_sig9(m.omega), m.multiplicity)?;
    }
    Ok(())
}

/// `sequence,L_p,A_p,m_<bond>...`; the sequence lists directed bonds as
/// `name+` / `name-` separated by spaces.
pub fn write_orbits_csv(w: &mut dyn Write, g: &Graph, orbits: &[PrimitiveOrbit]) -> io::Result<()> {
    write!(w, "sequence,L_p,A_p")?;
    for b in g.bonds() {
        write!(w, ",m_{}", b.name)?;
    }
    writeln!(w)?;
    for o in orbits {
        let seq: Vec<String> = o.sequence.iter().map(|d| d.label(g)).collect();
        write!(
            w,
            "{},{},{}",
            seq.join(" "),
            fmt_sig9(o.length),
            fmt_sig9(o.amplitude)
        )?;
        for m in &o.traversals {
            write!(w, ",{m}")?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// `L_max,E_c,abs_error`.
pub fn write_convergence_csv(w: &mut dyn Write, study: &ConvergenceStudy) -> io::Result<()> {
    writeln!(w, "L_max,E_c,abs_error")?;
    for p in &study.points {
        writeln!(
            w,
            "{},{},{}",
            fmt_sig9(p.l_max),
            fmt_sig9(p.energy),
            fmt_sig9(p.abs_error)
        )?;
    }
    Ok(())
}
