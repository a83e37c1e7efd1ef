//! Verdicts for a finished sweep.

use std::fmt;

use crate::analytic::Regime;
use crate::blowup::{
    boundary_monotonicity_check, dirac_value, Bump, MonotoneOptions, SweepOutcome,
};
use crate::discretization::Grid;
use crate::error::{Error, Result};

use super::config::ExperimentConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckLine {
    pub name: &'static str,
    pub measured: f64,
    /// Human-readable bound, e.g. `>= 0.2`.
    pub bound: String,
    /// Config key that set the bound, if any.
    pub key: Option<&'static str>,
    pub pass: bool,
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<22} measured={:<14.6e} bound={}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.bound
        )?;
        if let Some(k) = self.key {
            write!(f, " ({k})")?;
        }
        Ok(())
    }
}

fn line(
    name: &'static str,
    measured: f64,
    bound: String,
    key: Option<&'static str>,
    pass: bool,
) -> CheckLine {
    CheckLine {
        name,
        measured,
        bound,
        key,
        pass: pass && measured.is_finite(),
    }
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let m = s.len();
    if m % 2 == 1 {
        s[m / 2]
    } else {
        0.5 * (s[m / 2 - 1] + s[m / 2])
    }
}

/// Largest ratio of consecutive entries, or the smallest when `increasing`.
fn worst_step(v: &[f64], increasing: bool) -> f64 {
    let ratios = v.windows(2).map(|w| w[1] / w[0]);
    if increasing {
        ratios.fold(f64::INFINITY, f64::min)
    } else {
        ratios.fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Evaluate every configured check against `outcome`.
pub fn evaluate(
    cfg: &ExperimentConfig,
    grid: &Grid,
    outcome: &SweepOutcome,
) -> Result<Vec<CheckLine>> {
    let recs = &outcome.records;
    let tol = &cfg.tolerances;
    let mut out = Vec::new();

    let worst_res = recs.iter().map(|r| r.residual).fold(0.0, f64::max);
    out.push(line(
        "residual",
        worst_res,
        format!("<= {:e}", cfg.solver.tol_residual),
        Some("tol_residual"),
        worst_res <= cfg.solver.tol_residual,
    ));
    out.push(line(
        "resolvable_records",
        recs.len() as f64,
        ">= 3".into(),
        None,
        recs.len() >= 3,
    ));
    if recs.len() < 2 {
        return Ok(out);
    }
    let regime = Regime::of(cfg.n, cfg.alpha)?;
    let hls = regime == Regime::Hls;
    let ext: Vec<f64> = recs.iter().map(|r| r.u_extreme).collect();
    let step = worst_step(&ext, hls);
    out.push(line(
        "extreme_monotone",
        step,
        if hls {
            "> 1 (step ratio)"
        } else {
            "< 1 (step ratio)"
        }
        .into(),
        None,
        if hls { step > 1.0 } else { step < 1.0 },
    ));
    if let Some(g) = tol.growth_min {
        let first = ext[0];
        let last = ext[ext.len() - 1];
        let growth = if hls { last / first } else { first / last };
        out.push(line(
            "extreme_growth",
            growth,
            format!(">= {g}"),
            Some("growth_min"),
            growth >= g,
        ));
    }
    let mus: Vec<f64> = recs.iter().map(|r| r.mu).collect();
    let mu_step = worst_step(&mus, false);
    out.push(line(
        "mu_decreasing",
        mu_step,
        "< 1 (step ratio)".into(),
        None,
        mu_step < 1.0,
    ));
    if let Some(d) = tol.interior_delta {
        let m = recs
            .iter()
            .map(|r| r.boundary_dist)
            .fold(f64::INFINITY, f64::min);
        out.push(line(
            "interior_localization",
            m,
            format!(">= {d}"),
            Some("interior_delta"),
            m >= d,
        ));
    }
    if let Some(lo) = tol.mu_power_min {
        let mp: Vec<f64> = recs.iter().map(|r| r.mu_power).collect();
        let s = worst_step(&mp, true);
        out.push(line(
            "mu_power_increasing",
            s,
            "> 1 (step ratio)".into(),
            None,
            s > 1.0,
        ));
        let last = mp[mp.len() - 1];
        out.push(line(
            "mu_power_final",
            last,
            format!("in [{lo}, 1]"),
            Some("mu_power_min"),
            last >= lo && last <= 1.0 + 1e-12,
        ));
    }

    let finest = &recs[recs.len() - 1];
    if let Some(m) = tol.constraint_dev_max {
        let v = finest.fit.map_or(f64::NAN, |f| f.constraint_dev);
        out.push(line(
            "fit_constraint_dev",
            v,
            format!("<= {m}"),
            Some("constraint_dev_max"),
            v <= m,
        ));
    }
    if let Some(m) = tol.fit_rms_max {
        let v = finest.fit.map_or(f64::NAN, |f| f.rms_residual);
        out.push(line(
            "fit_rms",
            v,
            format!("<= {m}"),
            Some("fit_rms_max"),
            v <= m,
        ));
    }
    if let Some(b) = tol.sigma_ratio_band {
        let dev = if finest.sigma_ratios.is_empty() {
            f64::NAN
        } else {
            finest
                .sigma_ratios
                .iter()
                .map(|r| (r - 1.0).abs())
                .fold(0.0, f64::max)
        };
        out.push(line(
            "sigma_ratio",
            dev,
            format!("max |ratio - 1| <= {b}"),
            Some("sigma_ratio_band"),
            dev <= b,
        ));
    }
    if let (Some(t), Some(radius)) = (tol.dirac_tol, cfg.bump_radius) {
        let bump = Bump::new(finest.x_q, radius);
        bump.check_inside(&grid.domain)?;
        let sol = &outcome.solutions[outcome.solutions.len() - 1];
        let v = dirac_value(grid, sol, finest.u_extreme, &bump);
        let dev = (v / outcome.sigma - 1.0).abs();
        out.push(line(
            "dirac_limit",
            dev,
            format!("|value/sigma - 1| <= {t}"),
            Some("dirac_tol"),
            dev <= t,
        ));
    }
    let env: Vec<f64> = recs.iter().map(|r| r.envelope).collect();
    let med = median(&env);
    if let Some(f) = tol.envelope_spread_max {
        let spread = env
            .iter()
            .map(|c| (c / med).max(med / c))
            .fold(0.0, f64::max);
        out.push(line(
            "envelope_spread",
            spread,
            format!("<= {f} (factor about median)"),
            Some("envelope_spread_max"),
            spread <= f,
        ));
    }
    if let Some(fl) = tol.envelope_floor {
        let m = env.iter().copied().fold(f64::INFINITY, f64::min) / med;
        out.push(line(
            "envelope_floor",
            m,
            format!(">= {fl} (min/median)"),
            Some("envelope_floor"),
            m >= fl,
        ));
    }
    if let Some(fm) = tol.monotone_fraction_min {
        let t0 = cfg.monotone_t0.unwrap_or(0.25 * grid.domain.inradius());
        let opts = MonotoneOptions {
            aperture: cfg.monotone_aperture,
            tol: cfg.monotone_tol,
            ..MonotoneOptions::new(t0)
        };
        let sol = &outcome.solutions[outcome.solutions.len() - 1];
        let rep = boundary_monotonicity_check(grid, &sol.u(), regime, &opts)?;
        out.push(line(
            "boundary_monotone",
            rep.fraction_monotone,
            format!(">= {fm}"),
            Some("monotone_fraction_min"),
            rep.fraction_monotone >= fm,
        ));
    }
    Ok(out)
}

/// Whether an error during checking is a configuration problem.
pub(crate) fn is_config_error(e: &Error) -> bool {
    matches!(
        e,
        Error::BumpOutsideDomain { .. }
            | Error::ProbeTooClose { .. }
            | Error::OutsideDomain(_)
            | Error::RayTooLong { .. }
    )
}
