//! Sweep driver: solve along the schedule, stop once μ_q is unresolved,
//! and attach the per-record diagnostics.

use crate::analytic::sigma_const;
use crate::discretization::{KernelOperator, Point};
use crate::error::{Error, Result};
use crate::exec::{map_range, Execution};
use crate::solver::{solve, validate_schedule, ExtremalSolution, Init, SolverOptions};

use super::checks::{envelope_check, product_limit_check};
use super::{fit_bubble, rescale_profile, SweepRecord};

#[derive(Debug, Clone, PartialEq)]
pub struct LabSettings {
    /// Upper bound on the fit window in z-units.
    pub fit_window_max: f64,
    /// Probe points for the product limit, in domain coordinates.
    pub probes: Vec<Point>,
    /// Exclusion radius around x_q; `None` means 0.15 times the diameter.
    pub r_min: Option<f64>,
    /// Truncate once μ_q < guard_cells·h.
    pub guard_cells: f64,
    /// Warm-start each q from the previous one (sequential), or solve all
    /// q independently from `SolverOptions::init`.
    pub warm_start: bool,
    /// Execution for independent solves.
    pub exec: Execution,
}

impl Default for LabSettings {
    fn default() -> Self {
        Self {
            fit_window_max: 8.0,
            probes: Vec::new(),
            r_min: None,
            guard_cells: 4.0,
            warm_start: true,
            exec: Execution::default(),
        }
    }
}

/// The schedule entry where the sweep stopped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    pub q: f64,
    pub mu: f64,
    pub limit: f64,
    /// Schedule entries dropped, including `q`.
    pub dropped: usize,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub records: Vec<SweepRecord>,
    pub solutions: Vec<ExtremalSolution>,
    pub truncated: Option<Truncation>,
    pub sigma: f64,
}

impl SweepOutcome {
    /// Estimate of the concentration point: x_q at the last kept q.
    pub fn x0(&self) -> Option<Point> {
        self.records.last().map(|r| r.x_q)
    }
}

fn require_converged(sol: ExtremalSolution) -> Result<ExtremalSolution> {
    if sol.converged {
        Ok(sol)
    } else {
        Err(Error::NotConverged {
            q: sol.q(),
            residual: sol.residual,
            iterations: sol.iterations,
        })
    }
}

fn wrap(q: f64, e: Error) -> Error {
    match e {
        Error::NotConverged { .. } | Error::Oscillation { .. } => e,
        other => Error::AtQ {
            q,
            source: Box::new(other),
        },
    }
}

pub fn run_sweep(
    k: &KernelOperator,
    schedule: &[f64],
    opts: &SolverOptions,
    lab: &LabSettings,
) -> Result<SweepOutcome> {
    opts.validate()?;
    let exps = validate_schedule(k.n, k.alpha, schedule)?;
    let grid = k.grid();
    let limit = lab.guard_cells * grid.h;
    let sigma = sigma_const(k.n, k.alpha)?;
    let r_min = lab.r_min.unwrap_or(0.15 * grid.domain.diameter());

    let mut solutions = Vec::with_capacity(exps.len());
    let mut records = Vec::with_capacity(exps.len());
    let mut truncated = None;

    let solved: Vec<Result<ExtremalSolution>> = if lab.warm_start {
        Vec::new()
    } else {
        map_range(lab.exec, exps.len(), |i| {
            solve(k, &exps[i], opts).and_then(require_converged)
        })
    };
    let mut solved = solved.into_iter();

    for (i, e) in exps.iter().enumerate() {
        let sol = if lab.warm_start {
            let mut o = opts.clone();
            if let Some(prev) = solutions.last() {
                let prev: &ExtremalSolution = prev;
                o.init = Init::WarmStart(prev.normalized.clone());
            }
            solve(k, e, &o).and_then(require_converged)
        } else {
            solved.next().expect("one result per schedule entry")
        }
        .map_err(|err| wrap(e.q, err))?;

        let mut rec = SweepRecord::from_solution(grid, &sol);
        if rec.mu < limit {
            truncated = Some(Truncation {
                q: e.q,
                mu: rec.mu,
                limit,
                dropped: exps.len() - i,
            });
            break;
        }
        let u = sol.u();
        let window = lab
            .fit_window_max
            .min(0.5 * grid.domain.diameter() / rec.mu);
        let profile = rescale_profile(grid, &u, rec.node, rec.mu);
        rec.fit = match fit_bubble(&profile, k.n, k.alpha, window) {
            Ok(f) => Some(f),
            Err(Error::InsufficientPoints { .. }) => None,
            Err(other) => return Err(wrap(e.q, other)),
        };
        rec.sigma_ratios = product_limit_check(grid, &u, &rec, e, sigma, &lab.probes, r_min)
            .map_err(|err| wrap(e.q, err))?;
        rec.envelope = envelope_check(grid, &u, &rec, e);
        records.push(rec);
        solutions.push(sol);
    }
    Ok(SweepOutcome {
        records,
        solutions,
        truncated,
        sigma,
    })
}
