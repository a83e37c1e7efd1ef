//! Closed-form constants and the whole-space bubble.
//!
//! Everything here is a pure function of (n, alpha); the numerical layers
//! are checked against these values.

mod exponents;
mod gamma;

use std::f64::consts::PI;

pub(crate) use exponents::validate_order;
pub use exponents::{
    critical_p, critical_q, derive_exponents, subcritical_range, Exponents, Regime,
};
pub use gamma::{gamma_fn, ln_gamma};

use crate::error::{Error, Result};
use gamma::gamma_unchecked;

/// Surface area of the unit sphere in R^n, 2 π^{n/2} / Γ(n/2).
pub fn omega(n: usize) -> f64 {
    let h = 0.5 * n as f64;
    2.0 * PI.powf(h) / gamma_unchecked(h)
}

/// ∫₀^∞ r^{n-1} (1+r²)^{-s} dr = Γ(n/2) Γ(s - n/2) / (2 Γ(s)).
pub fn radial_integral(n: usize, s: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidDimension(n));
    }
    let h = 0.5 * n as f64;
    if !(s > h) || !s.is_finite() {
        return Err(Error::DivergentIntegral { n, s });
    }
    Ok(gamma_unchecked(h) * gamma_unchecked(s - h) / (2.0 * gamma_unchecked(s)))
}

/// σ_{n,α} = (π^{n/2} Γ(α/2) / Γ((n+α)/2))^{(α-n)/α}, the limit constant of
/// u(x_q)·u(x)·|x - x_0|^{n-α}.
pub fn sigma_const(n: usize, alpha: f64) -> Result<f64> {
    validate_order(n, alpha)?;
    let nf = n as f64;
    let base =
        PI.powf(0.5 * nf) * gamma_unchecked(0.5 * alpha) / gamma_unchecked(0.5 * (nf + alpha));
    Ok(base.powf((alpha - nf) / alpha))
}

/// Whole-space sharp constant of the energy quotient at q = q_crit:
/// π^{(n-α)/2} Γ(α/2)/Γ((n+α)/2) · (Γ(n/2)/Γ(n))^{-α/n}.
///
/// The reversed regime reuses the same expression; the bubble-integral
/// identity in the tests is what backs that choice.
pub fn sharp_constant(n: usize, alpha: f64) -> Result<f64> {
    validate_order(n, alpha)?;
    let nf = n as f64;
    let lead = PI.powf(0.5 * (nf - alpha)) * gamma_unchecked(0.5 * alpha)
        / gamma_unchecked(0.5 * (nf + alpha));
    let tail = (gamma_unchecked(0.5 * nf) / gamma_unchecked(nf)).powf(-alpha / nf);
    Ok(lead * tail)
}

/// v(z) = c1 · (c2 + |z|²)^{-(n-α)/2}
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BubbleProfile {
    pub c1: f64,
    pub c2: f64,
    pub n: usize,
    pub alpha: f64,
}

impl BubbleProfile {
    pub fn new(c1: f64, c2: f64, n: usize, alpha: f64) -> Result<Self> {
        validate_order(n, alpha)?;
        if !(c1 > 0.0 && c2 > 0.0) || !c1.is_finite() || !c2.is_finite() {
            return Err(Error::DegenerateDomain(format!(
                "bubble parameters must be positive, got c1 = {c1}, c2 = {c2}"
            )));
        }
        Ok(Self { c1, c2, n, alpha })
    }

    /// Value at squared radius |z|².
    pub fn eval_sq(&self, r2: f64) -> f64 {
        self.c1 * (self.c2 + r2).powf(-0.5 * (self.n as f64 - self.alpha))
    }

    pub fn eval(&self, z: &[f64]) -> f64 {
        self.eval_sq(z.iter().map(|c| c * c).sum())
    }

    /// |c1 · c2^{(α-n)/2} - 1|; zero exactly when v(0) = 1.
    pub fn constraint_dev(&self) -> f64 {
        constraint_dev(self.c1, self.c2, self.n, self.alpha)
    }
}

pub(crate) fn constraint_dev(c1: f64, c2: f64, n: usize, alpha: f64) -> f64 {
    (c1 * c2.powf(0.5 * (alpha - n as f64)) - 1.0).abs()
}

/// The bubble with v(0) = 1 and ∫ v^{p_crit} = sharp_constant^{-n/α}.
pub fn pin_bubble(n: usize, alpha: f64) -> Result<BubbleProfile> {
    validate_order(n, alpha)?;
    let nf = n as f64;
    let xi = sharp_constant(n, alpha)?;
    let mass = xi.powf(-nf / alpha);
    let c2 = (mass / (omega(n) * radial_integral(n, nf)?)).powf(2.0 / nf);
    let c1 = c2.powf(0.5 * (nf - alpha));
    BubbleProfile::new(c1, c2, n, alpha)
}

/// (∫ v^{p_crit} dz, ∫ v^{p_crit - 1} dz) over R^n, in closed form.
pub fn bubble_integrals(profile: &BubbleProfile) -> Result<(f64, f64)> {
    let BubbleProfile { c1, c2, n, alpha } = *profile;
    let nf = n as f64;
    let pc = critical_p(n, alpha);
    let w = omega(n);
    // v^{p_crit} = c1^{p_crit} (c2+r²)^{-n}
    let first = c1.powf(pc) * c2.powf(-0.5 * nf) * w * radial_integral(n, nf)?;
    // v^{p_crit-1} = c1^{p_crit-1} (c2+r²)^{-(n+α)/2}
    let second =
        c1.powf(pc - 1.0) * c2.powf(-0.5 * alpha) * w * radial_integral(n, 0.5 * (nf + alpha))?;
    Ok((first, second))
}

/// The constants attached to a fixed (n, α).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharpConstants {
    pub sigma: f64,
    pub xi_sharp: f64,
    pub c2_star: f64,
    pub omega_n: f64,
}

impl SharpConstants {
    pub fn new(n: usize, alpha: f64) -> Result<Self> {
        Ok(Self {
            sigma: sigma_const(n, alpha)?,
            xi_sharp: sharp_constant(n, alpha)?,
            c2_star: pin_bubble(n, alpha)?.c2,
            omega_n: omega(n),
        })
    }
}
