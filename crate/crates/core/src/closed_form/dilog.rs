use std::f64::consts::PI;

use crate::{Error, Result};

const ZETA2: f64 = PI * PI / 6.0;

/// Real dilogarithm `Li₂(x) = Σ_{r≥1} x^r / r²` for `|x| ≤ 1`.
///
/// Direct series on `|x| ≤ 1/2`; the reflection
/// `Li₂(x) = π²/6 − ln x ln(1−x) − Li₂(1−x)` on `(1/2, 1)` and the Landen
/// identity `Li₂(x) = −Li₂(x/(x−1)) − ½ ln²(1−x)` on `[−1, −1/2)`.
pub fn dilog(x: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::Domain(x));
    }
    Ok(dilog_unchecked(x))
}

pub(crate) fn dilog_unchecked(x: f64) -> f64 {
    if x == 1.0 {
        ZETA2
    } else if x == -1.0 {
        -ZETA2 / 2.0
    } else if x > 0.5 {
        ZETA2 - x.ln() * (-x).ln_1p() - series(1.0 - x)
    } else if x < -0.5 {
        let l = (-x).ln_1p();
        -series(x / (x - 1.0)) - 0.5 * l * l
    } else {
        series(x)
    }
}

fn series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut power = x;
    let mut r = 1.0_f64;
    loop {
        let term = power / (r * r);
        sum += term;
        if term.abs() <= 1e-18 * sum.abs().max(1e-300) || power == 0.0 {
            break;
        }
        power *= x;
        r += 1.0;
    }
    sum
}
