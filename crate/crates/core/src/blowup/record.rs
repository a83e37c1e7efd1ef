use crate::analytic::Exponents;
use crate::discretization::{Grid, Point};
use crate::solver::ExtremalSolution;

use super::checks::{concentration_scale, extremal_node, mu_power};
use super::BubbleFit;

/// Per-q summary of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub q: f64,
    pub p: f64,
    pub x_q: Point,
    /// Grid index of x_q.
    pub node: usize,
    pub u_extreme: f64,
    pub mu: f64,
    pub boundary_dist: f64,
    pub xi_est: f64,
    pub residual: f64,
    pub iterations: usize,
    pub fit: Option<BubbleFit>,
    pub sigma_ratios: Vec<f64>,
    pub mu_power: f64,
    /// Envelope constant, see [`super::envelope_check`].
    pub envelope: f64,
}

impl SweepRecord {
    /// Locate the extremal node of `u` and fill the scale quantities.
    /// Solver metadata is NaN/0 and the derived checks are left empty.
    pub fn from_field(grid: &Grid, u: &[f64], node: usize, e: &Exponents) -> Self {
        let u_extreme = u[node];
        let mu = concentration_scale(u_extreme, e);
        Self {
            q: e.q,
            p: e.p,
            x_q: grid.nodes[node],
            node,
            u_extreme,
            mu,
            boundary_dist: grid.boundary_dist[node],
            xi_est: f64::NAN,
            residual: f64::NAN,
            iterations: 0,
            fit: None,
            sigma_ratios: Vec::new(),
            mu_power: mu_power(mu, e),
            envelope: f64::NAN,
        }
    }

    /// Record for a solver output, without fit or probe ratios.
    pub fn from_solution(grid: &Grid, sol: &ExtremalSolution) -> Self {
        let u = sol.u();
        let node = extremal_node(&u, sol.exponents.regime);
        Self {
            xi_est: sol.xi_est,
            residual: sol.residual,
            iterations: sol.iterations,
            ..Self::from_field(grid, &u, node, &sol.exponents)
        }
    }

    pub fn min_sigma_ratio(&self) -> Option<f64> {
        self.sigma_ratios.iter().copied().reduce(f64::min)
    }

    pub fn max_sigma_ratio(&self) -> Option<f64> {
        self.sigma_ratios.iter().copied().reduce(f64::max)
    }
}
