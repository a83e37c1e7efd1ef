//! Pointwise diagnostics of the concentration asymptotics.

use crate::analytic::{Exponents, Regime};
use crate::discretization::{dist, DomainSpec, Grid, Point};
use crate::error::{Error, Result};
use crate::solver::ExtremalSolution;

use super::SweepRecord;

/// Index of the extremal node of `u`: argmax in the HLS regime, argmin in
/// the reversed one. Exact ties go to the smallest index, which is the
/// lexicographically smallest coordinate.
pub fn extremal_node(u: &[f64], regime: Regime) -> usize {
    let better = |a: f64, b: f64| match regime {
        Regime::Hls => a > b,
        Regime::ReversedHls => a < b,
    };
    let mut best = 0;
    for (i, &v) in u.iter().enumerate().skip(1) {
        if better(v, u[best]) {
            best = i;
        }
    }
    best
}

/// μ_q = u(x_q)^{-(p-2)/α}
pub fn concentration_scale(u_extreme: f64, e: &Exponents) -> f64 {
    u_extreme.powf(-(e.p - 2.0) / e.alpha)
}

/// μ^{|p - p_crit|}
pub fn mu_power(mu: f64, e: &Exponents) -> f64 {
    mu.powf(e.s())
}

/// Envelope ratio u(x) (μ/(μ² + |x - x_q|²))^{-(n-α)/2} at every node.
pub fn envelope_ratios(grid: &Grid, u: &[f64], xq: &Point, mu: f64, e: &Exponents) -> Vec<f64> {
    let g = e.half_gap();
    grid.nodes
        .iter()
        .zip(u)
        .map(|(x, val)| {
            let d = dist(x, xq);
            val * (mu / (mu * mu + d * d)).powf(-g)
        })
        .collect()
}

/// Smallest constant C in the envelope bound: the max ratio in the HLS
/// regime (upper bound), the min ratio in the reversed regime (lower bound).
pub fn envelope_check(grid: &Grid, u: &[f64], record: &SweepRecord, e: &Exponents) -> f64 {
    let r = envelope_ratios(grid, u, &record.x_q, record.mu, e);
    match e.regime {
        Regime::Hls => r.into_iter().fold(f64::NEG_INFINITY, f64::max),
        Regime::ReversedHls => r.into_iter().fold(f64::INFINITY, f64::min),
    }
}

/// μ^{|p - p_crit|} for each record of a sweep of at least three.
pub fn mu_power_check(records: &[SweepRecord]) -> Result<Vec<f64>> {
    if records.len() < 3 {
        return Err(Error::TooFewRecords {
            needed: 3,
            got: records.len(),
        });
    }
    Ok(records.iter().map(|r| r.mu_power).collect())
}

/// u(x_q) u(x) |x - x_q|^{n-α} / σ at each probe, with u(x) read at the
/// nearest node and the distance measured to that node.
pub fn product_limit_check(
    grid: &Grid,
    u: &[f64],
    record: &SweepRecord,
    e: &Exponents,
    sigma: f64,
    probes: &[Point],
    r_min: f64,
) -> Result<Vec<f64>> {
    probes
        .iter()
        .enumerate()
        .map(|(index, p)| {
            if !grid.domain.contains_closed(p) {
                return Err(Error::OutsideDomain(p[..grid.dim()].to_vec()));
            }
            let distance = dist(p, &record.x_q);
            if distance < r_min {
                return Err(Error::ProbeTooClose {
                    index,
                    distance,
                    r_min,
                });
            }
            let j = grid.nearest_node(p);
            let d = dist(&grid.nodes[j], &record.x_q);
            Ok(record.u_extreme * u[j] * d.powf(e.n as f64 - e.alpha) / sigma)
        })
        .collect()
}

/// Smooth compactly supported test function
/// φ(x) = A exp(1 - 1/(1 - |x - c|²/r²)) on |x - c| < r, so φ(c) = A.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub center: Point,
    pub radius: f64,
    pub amplitude: f64,
}

impl Bump {
    pub fn new(center: Point, radius: f64) -> Self {
        Self {
            center,
            radius,
            amplitude: 1.0,
        }
    }

    pub fn eval(&self, x: &Point) -> f64 {
        let t = dist(x, &self.center) / self.radius;
        if t >= 1.0 {
            0.0
        } else {
            self.amplitude * (1.0 - 1.0 / (1.0 - t * t)).exp()
        }
    }

    /// The closed support must sit inside the open domain.
    pub fn check_inside(&self, domain: &DomainSpec) -> Result<()> {
        if domain.signed_boundary_dist(&self.center) > self.radius && self.radius > 0.0 {
            Ok(())
        } else {
            Err(Error::BumpOutsideDomain {
                center: self.center[..domain.dim()].to_vec(),
                radius: self.radius,
            })
        }
    }
}

/// Σ_i w_i u_i^{p-1} u(x_q) φ(x_i) for one solution.
pub fn dirac_value(grid: &Grid, sol: &ExtremalSolution, u_extreme: f64, bump: &Bump) -> f64 {
    let pm1 = sol.exponents.p - 1.0;
    sol.u()
        .iter()
        .zip(&grid.nodes)
        .zip(&grid.weights)
        .map(|((u, x), w)| {
            let phi = bump.eval(x);
            if phi == 0.0 {
                0.0
            } else {
                w * u.powf(pm1) * u_extreme * phi
            }
        })
        .sum()
}

/// Dirac-limit sequence over a sweep; each entry should approach σ φ(x_0).
pub fn dirac_limit_check(
    grid: &Grid,
    sols: &[ExtremalSolution],
    records: &[SweepRecord],
    bump: &Bump,
) -> Result<Vec<f64>> {
    bump.check_inside(&grid.domain)?;
    Ok(sols
        .iter()
        .zip(records)
        .map(|(s, r)| dirac_value(grid, s, r.u_extreme, bump))
        .collect())
}
