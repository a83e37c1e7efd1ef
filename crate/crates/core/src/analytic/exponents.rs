use std::fmt;

use crate::error::{Error, Result};

/// Which side of the critical kernel order the parameters sit on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// 1 < alpha < n: extremals maximize the energy quotient, q in (q_crit, 2).
    Hls,
    /// alpha > n: extremals minimize the energy quotient, q in (0, q_crit).
    ReversedHls,
}

impl Regime {
    pub fn of(n: usize, alpha: f64) -> Result<Self> {
        validate_order(n, alpha)?;
        Ok(if alpha < n as f64 {
            Regime::Hls
        } else {
            Regime::ReversedHls
        })
    }

    /// +1 when the quotient is maximized, -1 when minimized.
    pub fn sign(self) -> f64 {
        match self {
            Regime::Hls => 1.0,
            Regime::ReversedHls => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Regime::Hls => "HLS",
            Regime::ReversedHls => "reversed-HLS",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub(crate) fn validate_order(n: usize, alpha: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidDimension(n));
    }
    if alpha.is_finite() && (alpha - n as f64).abs() <= 1e-12 * n as f64 {
        return Err(Error::CriticalOrder(n));
    }
    if !alpha.is_finite() || alpha <= 1.0 {
        return Err(Error::InvalidAlpha(alpha));
    }
    Ok(())
}

/// 2n / (n + alpha)
pub fn critical_q(n: usize, alpha: f64) -> f64 {
    2.0 * n as f64 / (n as f64 + alpha)
}

/// 2n / (n - alpha), the conjugate of [`critical_q`].
pub fn critical_p(n: usize, alpha: f64) -> f64 {
    2.0 * n as f64 / (n as f64 - alpha)
}

/// Open interval of admissible subcritical q.
pub fn subcritical_range(n: usize, alpha: f64) -> Result<(f64, f64)> {
    Ok(match Regime::of(n, alpha)? {
        Regime::Hls => (critical_q(n, alpha), 2.0),
        Regime::ReversedHls => (0.0, critical_q(n, alpha)),
    })
}

/// The exponent bundle (n, alpha, q, p, q_crit, p_crit, regime).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponents {
    pub n: usize,
    pub alpha: f64,
    pub q: f64,
    pub p: f64,
    pub q_crit: f64,
    pub p_crit: f64,
    pub regime: Regime,
}

impl Exponents {
    pub fn derive(n: usize, alpha: f64, q: f64) -> Result<Self> {
        let regime = Regime::of(n, alpha)?;
        let (lo, hi) = subcritical_range(n, alpha)?;
        if !(q > lo && q < hi) {
            return Err(Error::QOutOfRange { q, regime, lo, hi });
        }
        Ok(Self {
            n,
            alpha,
            q,
            p: q / (q - 1.0),
            q_crit: critical_q(n, alpha),
            p_crit: critical_p(n, alpha),
            regime,
        })
    }

    /// Same (n, alpha) at a different q.
    pub fn with_q(&self, q: f64) -> Result<Self> {
        Self::derive(self.n, self.alpha, q)
    }

    /// (n - alpha) / 2, the decay exponent of the bubble.
    pub fn half_gap(&self) -> f64 {
        0.5 * (self.n as f64 - self.alpha)
    }

    /// |p - p_crit|, the exponent s in mu^s.
    pub fn s(&self) -> f64 {
        (self.p - self.p_crit).abs()
    }
}

/// `derive_exponents` in free-function form.
pub fn derive_exponents(n: usize, alpha: f64, q: f64) -> Result<Exponents> {
    Exponents::derive(n, alpha, q)
}
