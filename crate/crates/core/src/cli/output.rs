//! CSV and sidecar writers. Numbers use the shortest round-trip form, so
//! identical inputs give identical bytes.

use std::io::{self, Write};

use crate::blowup::SweepRecord;
use crate::discretization::{write_coords, Grid};
use crate::solver::ExtremalSolution;

/// `index,x1[,x2],f,u`
pub fn write_solution_csv<W: Write>(
    w: &mut W,
    grid: &Grid,
    sol: &ExtremalSolution,
) -> io::Result<()> {
    let dim = grid.dim();
    write!(w, "index,x1")?;
    if dim == 2 {
        write!(w, ",x2")?;
    }
    writeln!(w, ",f,u")?;
    for (i, (x, (f, u))) in grid.nodes.iter().zip(sol.f.iter().zip(sol.u())).enumerate() {
        write!(w, "{i},")?;
        write_coords(w, x, dim)?;
        writeln!(w, ",{f},{u}")?;
    }
    Ok(())
}

pub fn write_solution_meta<W: Write>(w: &mut W, sol: &ExtremalSolution) -> io::Result<()> {
    let e = &sol.exponents;
    writeln!(w, "q={}", e.q)?;
    writeln!(w, "alpha={}", e.alpha)?;
    writeln!(w, "n={}", e.n)?;
    writeln!(w, "xi_est={}", sol.xi_est)?;
    writeln!(w, "residual={}", sol.residual)?;
    writeln!(w, "iterations={}", sol.iterations)?;
    writeln!(w, "converged={}", sol.converged)
}

pub fn write_sweep_csv<W: Write>(w: &mut W, n: usize, records: &[SweepRecord]) -> io::Result<()> {
    write!(w, "q,p,xq_1")?;
    if n == 2 {
        write!(w, ",xq_2")?;
    }
    writeln!(
        w,
        ",u_extreme,mu,boundary_dist,xi_est,c1,c2,fit_rms,constraint_dev,mu_power,min_sigma_ratio,max_sigma_ratio"
    )?;
    let opt = |v: Option<f64>| v.unwrap_or(f64::NAN);
    for r in records {
        write!(w, "{},{},", r.q, r.p)?;
        write_coords(w, &r.x_q, n)?;
        writeln!(
            w,
            ",{},{},{},{},{},{},{},{},{},{},{}",
            r.u_extreme,
            r.mu,
            r.boundary_dist,
            r.xi_est,
            opt(r.fit.map(|f| f.c1)),
            opt(r.fit.map(|f| f.c2)),
            opt(r.fit.map(|f| f.rms_residual)),
            opt(r.fit.map(|f| f.constraint_dev)),
            r.mu_power,
            opt(r.min_sigma_ratio()),
            opt(r.max_sigma_ratio()),
        )?;
    }
    Ok(())
}
