//! Extremals of the energy quotient via the Euler–Lagrange fixed point
//! f^{q-1} = Kf.
//!
//! The iterate is kept at ‖f‖_q = 1 and updated by the damped power map
//!
//! ```text
//! f' ∝ f^{1-θ} · (Kf)^{θ/(q-1)}
//! ```
//!
//! which preserves positivity in both regimes. In log variables the step
//! is θ/(q-1) · (log Kf - (q-1) log f), an ascent direction for the
//! quotient when q > 1 and a descent direction when q < 1. A step that
//! moves the quotient the wrong way is rejected and θ halved.
//!
//! At convergence the normalized iterate f̂ satisfies ξ f̂^{q-1} = K f̂ and
//! is rescaled to f = ξ^{1/(q-2)} f̂, which solves f^{q-1} = Kf and has
//! ‖f‖_q = ξ^{1/(q-2)}.

use crate::analytic::{Exponents, Regime};
use crate::discretization::{lq_norm, KernelOperator};
use crate::error::{Error, Result};
use crate::exec::{map_range, Execution};

const MIN_DAMPING: f64 = 1.0 / 64.0;

#[derive(Debug, Clone, PartialEq)]
pub enum Init {
    Constant,
    WarmStart(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    /// Relative sup-norm tolerance on ξ f̂^{q-1} - K f̂.
    pub tol_residual: f64,
    pub max_iter: usize,
    /// Initial damping θ in (0, 1].
    pub damping: f64,
    pub init: Init,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol_residual: 1e-9,
            max_iter: 20_000,
            damping: 1.0,
            init: Init::Constant,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol_residual > 0.0) {
            return Err(Error::InvalidOptions(format!(
                "tol_residual must be positive, got {}",
                self.tol_residual
            )));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::InvalidOptions(format!(
                "damping must lie in (0, 1], got {}",
                self.damping
            )));
        }
        Ok(())
    }
}

/// Converged (or best-effort) extremal on a grid.
#[derive(Debug, Clone)]
pub struct ExtremalSolution {
    /// Euler–Lagrange normalized density: f^{q-1} = Kf.
    pub f: Vec<f64>,
    /// The same profile scaled to ‖·‖_q = 1; used for warm starts.
    pub normalized: Vec<f64>,
    pub xi_est: f64,
    /// ‖f^{q-1} - Kf‖_∞ / ‖Kf‖_∞ at the returned f.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub exponents: Exponents,
    /// Quotient after each accepted step, starting with the initial guess.
    pub quotient_history: Vec<f64>,
    /// Damping in force when the solve ended.
    pub final_damping: f64,
}

impl ExtremalSolution {
    pub fn q(&self) -> f64 {
        self.exponents.q
    }

    /// u = f^{q-1}, always derived from `f`.
    pub fn u(&self) -> Vec<f64> {
        let e = self.exponents.q - 1.0;
        self.f.iter().map(|v| v.powf(e)).collect()
    }
}

fn normalize(weights: &[f64], g: &mut [f64], q: f64) {
    let s = 1.0 / lq_norm(weights, g, q);
    g.iter_mut().for_each(|v| *v *= s);
}

fn step(k: &KernelOperator, f: &[f64], kf: &[f64], q: f64, theta: f64) -> Result<Vec<f64>> {
    let power = theta / (q - 1.0);
    // Log space throughout: negative powers of small Kf stay representable.
    let logs: Vec<f64> = f
        .iter()
        .zip(kf)
        .map(|(a, b)| (1.0 - theta) * a.ln() + power * b.ln())
        .collect();
    let shift = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut g: Vec<f64> = logs.iter().map(|l| (l - shift).exp()).collect();
    normalize(&k.grid().weights, &mut g, q);
    if g.iter().any(|v| !(v.is_finite() && *v > 0.0)) || !shift.is_finite() {
        let min_kf = kf.iter().cloned().fold(f64::INFINITY, f64::min);
        let max_kf = kf.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        return Err(Error::NonFinite { min_kf, max_kf });
    }
    Ok(g)
}

/// One damped power step, returning an iterate with ‖f'‖_q = 1.
pub fn iterate_once(k: &KernelOperator, f: &[f64], q: f64, theta: f64) -> Result<Vec<f64>> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::InvalidOptions(format!(
            "damping must lie in (0, 1], got {theta}"
        )));
    }
    if let Some((index, &value)) = f.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
        return Err(Error::InvalidEntry { index, value });
    }
    let kf = k.apply(f)?;
    step(k, f, &kf, q, theta)
}

fn el_residual(f_pow: impl Iterator<Item = f64>, kf: &[f64]) -> f64 {
    let scale = kf.iter().cloned().fold(0.0, f64::max);
    let worst = f_pow
        .zip(kf)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    worst / scale
}

/// Solve for the extremal at `exponents.q` on the kernel's grid.
///
/// Hitting `max_iter` is not an error: the best iterate comes back with
/// `converged == false`.
pub fn solve(
    k: &KernelOperator,
    exponents: &Exponents,
    opts: &SolverOptions,
) -> Result<ExtremalSolution> {
    opts.validate()?;
    if exponents.n != k.n || exponents.alpha != k.alpha {
        return Err(Error::InvalidOptions(format!(
            "exponents (n = {}, alpha = {}) do not match the kernel (n = {}, alpha = {})",
            exponents.n, exponents.alpha, k.n, k.alpha
        )));
    }
    let q = exponents.q;
    let m = k.len();
    let weights = &k.grid().weights;
    let sign = exponents.regime.sign();
    let tol = opts.tol_residual;

    let mut f = match &opts.init {
        Init::Constant => vec![1.0; m],
        Init::WarmStart(v) => {
            if v.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    got: v.len(),
                });
            }
            if let Some((index, &value)) = v
                .iter()
                .enumerate()
                .find(|(_, x)| !(x.is_finite() && **x > 0.0))
            {
                return Err(Error::InvalidEntry { index, value });
            }
            v.clone()
        }
    };
    normalize(weights, &mut f, q);
    let mut kf = k.apply_unchecked(&f);
    let mut xi = k.pair(&f, &kf);
    let mut history = vec![xi];
    let mut theta = opts.damping;

    let residual_of =
        |f: &[f64], kf: &[f64], xi: f64| el_residual(f.iter().map(|v| xi * v.powf(q - 1.0)), kf);
    let mut residual = residual_of(&f, &kf, xi);
    let mut best = (residual, f.clone());
    let mut iterations = 0;

    while residual > tol && iterations < opts.max_iter {
        iterations += 1;
        let g = step(k, &f, &kf, q, theta)?;
        let kg = k.apply_unchecked(&g);
        let xg = k.pair(&g, &kg);
        if sign * (xg - xi) < -10.0 * tol * xi.abs() {
            theta *= 0.5;
            if theta < MIN_DAMPING {
                return Err(Error::Oscillation { q });
            }
            continue;
        }
        f = g;
        kf = kg;
        xi = xg;
        history.push(xi);
        residual = residual_of(&f, &kf, xi);
        if residual < best.0 {
            best = (residual, f.clone());
        }
    }

    let converged = residual <= tol;
    if !converged {
        f = best.1;
        kf = k.apply_unchecked(&f);
    }
    let norm = lq_norm(weights, &f, q);
    let xi_est = k.pair(&f, &kf) / (norm * norm);
    let scale = xi_est.powf(1.0 / (q - 2.0));
    let el: Vec<f64> = f.iter().map(|v| v * scale).collect();
    let k_el: Vec<f64> = kf.iter().map(|v| v * scale).collect();
    let residual = el_residual(el.iter().map(|v| v.powf(q - 1.0)), &k_el);

    Ok(ExtremalSolution {
        f: el,
        normalized: f,
        xi_est,
        residual,
        iterations,
        converged,
        exponents: *exponents,
        quotient_history: history,
        final_damping: theta,
    })
}

/// Check that `schedule` is non-empty, subcritical, and strictly monotone
/// toward q_crit.
pub fn validate_schedule(n: usize, alpha: f64, schedule: &[f64]) -> Result<Vec<Exponents>> {
    if schedule.is_empty() {
        return Err(Error::InvalidSchedule("q schedule is empty".into()));
    }
    let exps = schedule
        .iter()
        .map(|&q| Exponents::derive(n, alpha, q))
        .collect::<Result<Vec<_>>>()?;
    let toward = |a: f64, b: f64| match exps[0].regime {
        Regime::Hls => b < a,
        Regime::ReversedHls => b > a,
    };
    if let Some(w) = schedule.windows(2).find(|w| !toward(w[0], w[1])) {
        return Err(Error::InvalidSchedule(format!(
            "schedule must move strictly toward q_crit = {}: {} -> {}",
            exps[0].q_crit, w[0], w[1]
        )));
    }
    Ok(exps)
}

fn annotate(q: f64, e: Error) -> Error {
    match e {
        Error::NotConverged { .. } | Error::Oscillation { .. } => e,
        other => Error::AtQ {
            q,
            source: Box::new(other),
        },
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

/// Solve along `schedule`, warm-starting each q from the previous
/// normalized solution. The first entry uses `opts.init`.
pub fn continuation_sweep(
    k: &KernelOperator,
    schedule: &[f64],
    opts: &SolverOptions,
) -> Result<Vec<ExtremalSolution>> {
    let exps = validate_schedule(k.n, k.alpha, schedule)?;
    let mut out: Vec<ExtremalSolution> = Vec::with_capacity(exps.len());
    for e in &exps {
        let mut o = opts.clone();
        if let Some(prev) = out.last() {
            o.init = Init::WarmStart(prev.normalized.clone());
        }
        let sol = solve(k, e, &o)
            .and_then(require_converged)
            .map_err(|err| annotate(e.q, err))?;
        out.push(sol);
    }
    Ok(out)
}

/// Solve every q of `schedule` independently from `opts.init`. Runs the
/// solves concurrently under [`Execution::Parallel`]; output order follows
/// the schedule.
pub fn independent_sweep(
    k: &KernelOperator,
    schedule: &[f64],
    opts: &SolverOptions,
    exec: Execution,
) -> Result<Vec<ExtremalSolution>> {
    let exps = validate_schedule(k.n, k.alpha, schedule)?;
    map_range(exec, exps.len(), |i| {
        solve(k, &exps[i], opts)
            .and_then(require_converged)
            .map_err(|err| annotate(exps[i].q, err))
    })
    .into_iter()
    .collect()
}
