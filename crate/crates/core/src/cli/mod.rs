//! The `rbl` command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration error,
//! 3 solver non-convergence, 4 I/O error.

mod config;
mod output;
mod report;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::analytic::{bubble_integrals, critical_p, critical_q, pin_bubble, SharpConstants};
use crate::blowup::{run_sweep, LabSettings, SweepOutcome};
use crate::discretization::{build_grid, KernelOperator, KernelOptions};
use crate::error::Error;
use crate::exec::Execution;
use crate::solver::{solve, ExtremalSolution, Init};

pub use config::{ConfigError, ExperimentConfig, RawConfig, Tolerances, KNOWN_KEYS};
pub use output::{write_solution_csv, write_solution_meta, write_sweep_csv};
pub use report::{evaluate, CheckLine};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_NOT_CONVERGED: u8 = 3;
pub const EXIT_IO: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "rbl",
    version,
    about = "Extremals and blowup diagnostics for Riesz-kernel integral equations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Experiment config file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Dimension; overrides the config.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Kernel order; overrides the config.
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Output directory; overrides `out_dir`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for the parallel kernel.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the closed-form constants for (n, alpha).
    Constants,
    /// Solve for the extremal at the configured q and write it out.
    Solve,
    /// Run the q-sweep and write one CSV row per resolvable q.
    Sweep,
    /// Run the sweep and check it against the configured tolerances.
    Verify,
}

/// A failed command with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn config(msg: impl ToString) -> Self {
        Self {
            code: EXIT_CONFIG,
            message: msg.to_string(),
        }
    }

    fn io(path: &Path, e: io::Error) -> Self {
        Self {
            code: EXIT_IO,
            message: format!("{}: {e}", path.display()),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let root = match &e {
            Error::AtQ { source, .. } => source.as_ref(),
            other => other,
        };
        let code = match root {
            Error::NotConverged { .. } | Error::Oscillation { .. } | Error::NonFinite { .. } => {
                EXIT_NOT_CONVERGED
            }
            _ => EXIT_CONFIG,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Self::config(e)
    }
}

type CmdResult = std::result::Result<u8, Failure>;

/// Load a config file, apply `RBL_*` environment overrides, then flags.
pub fn load_config(cli: &Cli) -> std::result::Result<ExperimentConfig, Failure> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Failure::config("this command needs --config <path>"))?;
    let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    let mut raw = RawConfig::parse(&text)?;
    raw.apply_env(|k| std::env::var(k).ok());
    if let Some(n) = cli.n {
        raw.set("n", n.to_string());
    }
    if let Some(a) = cli.alpha {
        raw.set("alpha", a.to_string());
    }
    if let Some(o) = &cli.out {
        raw.set("out_dir", o.display().to_string());
    }
    Ok(ExperimentConfig::from_raw(&raw)?)
}

/// Build the grid and assemble the kernel for `cfg`.
pub fn build_operator(cfg: &ExperimentConfig) -> crate::Result<KernelOperator> {
    let grid = build_grid(&cfg.domain, cfg.resolution)?;
    KernelOperator::assemble(
        grid,
        cfg.alpha,
        KernelOptions {
            mode: cfg.kernel,
            dense_cap: cfg.dense_cap,
            exec: Execution::default(),
        },
    )
}

pub fn lab_settings(cfg: &ExperimentConfig) -> LabSettings {
    LabSettings {
        fit_window_max: cfg.fit_window,
        probes: cfg.probes.clone(),
        r_min: cfg.r_min,
        guard_cells: cfg.guard_cells,
        warm_start: cfg.warm_start,
        exec: Execution::default(),
    }
}

/// Sweep for `cfg` on a prebuilt operator.
pub fn sweep_config(cfg: &ExperimentConfig, k: &KernelOperator) -> crate::Result<SweepOutcome> {
    run_sweep(k, &cfg.q_schedule, &cfg.solver, &lab_settings(cfg))
}

/// The table printed by `constants`, as (key, value) pairs.
pub fn constants_table(n: usize, alpha: f64) -> crate::Result<Vec<(&'static str, f64)>> {
    let c = SharpConstants::new(n, alpha)?;
    let b = pin_bubble(n, alpha)?;
    let (i1, i2) = bubble_integrals(&b)?;
    Ok(vec![
        ("q_crit", critical_q(n, alpha)),
        ("p_crit", critical_p(n, alpha)),
        ("sigma", c.sigma),
        ("xi", c.xi_sharp),
        ("c1", b.c1),
        ("c2", b.c2),
        ("bubble_mass", i1),
        ("bubble_dual_mass", i2),
    ])
}

fn cmd_constants(cli: &Cli, out: &mut dyn Write) -> CmdResult {
    let (n, alpha) = match (cli.n, cli.alpha) {
        (Some(n), Some(a)) => (n, a),
        _ => {
            let cfg = load_config(cli).map_err(|f| {
                if cli.config.is_none() {
                    Failure::config("constants needs --n and --alpha (or --config)")
                } else {
                    f
                }
            })?;
            (cfg.n, cfg.alpha)
        }
    };
    let table = constants_table(n, alpha)?;
    for (k, v) in table {
        writeln!(out, "{k}={v:.6}").map_err(|e| Failure::io(Path::new("<stdout>"), e))?;
    }
    Ok(EXIT_OK)
}

fn create_dir(dir: &Path) -> std::result::Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::io(dir, e))
}

fn write_file(
    path: &Path,
    f: impl FnOnce(&mut io::BufWriter<fs::File>) -> io::Result<()>,
) -> std::result::Result<(), Failure> {
    let file = fs::File::create(path).map_err(|e| Failure::io(path, e))?;
    let mut w = io::BufWriter::new(file);
    f(&mut w)
        .and_then(|_| w.flush())
        .map_err(|e| Failure::io(path, e))
}

fn cmd_solve(cli: &Cli, out: &mut dyn Write) -> CmdResult {
    let cfg = load_config(cli)?;
    let k = build_operator(&cfg)?;
    create_dir(&cfg.out_dir)?;
    let mut last: Option<ExtremalSolution> = None;
    for &q in &cfg.q_schedule {
        let e = crate::analytic::Exponents::derive(cfg.n, cfg.alpha, q)?;
        let mut opts = cfg.solver.clone();
        if let Some(prev) = &last {
            opts.init = Init::WarmStart(prev.normalized.clone());
        }
        let sol = solve(&k, &e, &opts)?;
        let done = sol.converged;
        last = Some(sol);
        if !done {
            break;
        }
    }
    let sol = last.expect("schedule is non-empty");
    let grid = k.grid();
    write_file(&cfg.out_dir.join("grid.csv"), |w| grid.write_csv(w))?;
    write_file(&cfg.out_dir.join("solution.csv"), |w| {
        write_solution_csv(w, grid, &sol)
    })?;
    write_file(&cfg.out_dir.join("solution.meta"), |w| {
        write_solution_meta(w, &sol)
    })?;
    let _ = writeln!(
        out,
        "wrote {} (q={}, residual={:e}, iterations={})",
        cfg.out_dir.join("solution.csv").display(),
        sol.q(),
        sol.residual,
        sol.iterations
    );
    if sol.converged {
        Ok(EXIT_OK)
    } else {
        Err(Failure {
            code: EXIT_NOT_CONVERGED,
            message: Error::NotConverged {
                q: sol.q(),
                residual: sol.residual,
                iterations: sol.iterations,
            }
            .to_string(),
        })
    }
}

fn report_truncation(outcome: &SweepOutcome, err: &mut dyn Write) {
    if let Some(t) = outcome.truncated {
        let _ = writeln!(
            err,
            "note: sweep truncated at q = {}: mu = {:e} < {:e}; {} schedule entr{} dropped",
            t.q,
            t.mu,
            t.limit,
            t.dropped,
            if t.dropped == 1 { "y" } else { "ies" }
        );
    }
}

fn require_three(cfg: &ExperimentConfig) -> std::result::Result<(), Failure> {
    if cfg.q_schedule.len() < 3 {
        Err(Failure::config(format!(
            "`q_schedule` needs at least 3 entries for a sweep, got {}",
            cfg.q_schedule.len()
        )))
    } else {
        Ok(())
    }
}

fn cmd_sweep(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let cfg = load_config(cli)?;
    require_three(&cfg)?;
    let k = build_operator(&cfg)?;
    let outcome = sweep_config(&cfg, &k)?;
    report_truncation(&outcome, err);
    create_dir(&cfg.out_dir)?;
    let path = cfg.out_dir.join("sweep.csv");
    write_file(&path, |w| write_sweep_csv(w, cfg.n, &outcome.records))?;
    let _ = writeln!(
        out,
        "wrote {} ({} rows)",
        path.display(),
        outcome.records.len()
    );
    Ok(EXIT_OK)
}

fn cmd_verify(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let cfg = load_config(cli)?;
    require_three(&cfg)?;
    let k = build_operator(&cfg)?;
    let outcome = sweep_config(&cfg, &k)?;
    report_truncation(&outcome, err);
    let lines = evaluate(&cfg, k.grid(), &outcome).map_err(|e| {
        if report::is_config_error(&e) {
            Failure::config(e)
        } else {
            Failure::from(e)
        }
    })?;
    let mut all = true;
    for l in &lines {
        let _ = writeln!(out, "{l}");
        all &= l.pass;
    }
    let _ = writeln!(
        out,
        "{}",
        if all {
            "ALL PASS"
        } else {
            "SOME CHECKS FAILED"
        }
    );
    Ok(if all { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

/// Dispatch a parsed command, writing to the given streams.
pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    if let Some(t) = cli.threads {
        if t == 0 {
            let _ = writeln!(err, "error: --threads must be at least 1");
            return EXIT_CONFIG;
        }
        if let Err(e) = crate::exec::configure_threads(t) {
            let _ = writeln!(err, "warning: could not set thread count: {e}");
        }
    }
    let result = match cli.command {
        Command::Constants => cmd_constants(cli, out),
        Command::Solve => cmd_solve(cli, out),
        Command::Sweep => cmd_sweep(cli, out, err),
        Command::Verify => cmd_verify(cli, out, err),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Entry point for the binary.
pub fn run() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = execute(&cli, &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(code)
}
