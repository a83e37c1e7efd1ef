//! Gamma function for positive real arguments.
//!
//! Lanczos approximation with g = 7 and the nine-term coefficient set
//! published with the GNU Scientific Library. Arguments below 1/2 go
//! through the reflection formula so the series is only ever evaluated
//! on [1/2, inf).

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;

#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) for x > 0.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::NonPositiveArgument(x));
    }
    Ok(gamma_unchecked(x))
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::NonPositiveArgument(x));
    }
    if x < 0.5 {
        // Γ(x)Γ(1-x) = π / sin(πx), and sin(πx) > 0 on (0, 1/2).
        return Ok(PI.ln() - (PI * x).sin().ln() - ln_gamma_series(1.0 - x));
    }
    Ok(ln_gamma_series(x))
}

pub(crate) fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_unchecked(1.0 - x));
    }
    let (t, series) = lanczos_parts(x);
    // Split the power so w^(x-1/2) cannot overflow before e^-w pulls it back.
    let half = t.powf(0.5 * (x - 0.5));
    (2.0 * PI).sqrt() * half * (-t).exp() * half * series
}

fn ln_gamma_series(x: f64) -> f64 {
    let (t, series) = lanczos_parts(x);
    0.5 * (2.0 * PI).ln() + (x - 0.5) * t.ln() - t + series.ln()
}

fn lanczos_parts(x: f64) -> (f64, f64) {
    let z = x - 1.0;
    let mut series = LANCZOS_COEFFS[0];
    for (k, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (z + k as f64);
    }
    (z + LANCZOS_G + 0.5, series)
}
