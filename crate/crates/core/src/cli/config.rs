//! Flat `key = value` experiment configuration.
//!
//! ```text
//! # comment
//! domain = interval -1 1        # or: rectangle a1 b1 a2 b2 | disk cx cy r
//! n = 1
//! alpha = 2
//! q_schedule = 0.60, 0.62, 0.64
//! probes = 0.3; -0.5; 0.7       # points separated by ';', coordinates by ','
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use crate::discretization::{DomainSpec, KernelMode, Point, DEFAULT_DENSE_CAP};
use crate::solver::{validate_schedule, Init, SolverOptions};

pub const KNOWN_KEYS: &[&str] = &[
    "domain",
    "n",
    "alpha",
    "q_schedule",
    "resolution",
    "tol_residual",
    "max_iter",
    "damping",
    "warm_start",
    "kernel",
    "dense_cap",
    "fit_window",
    "guard_cells",
    "probes",
    "r_min",
    "bump_radius",
    "monotone_t0",
    "monotone_aperture",
    "monotone_tol",
    "interior_delta",
    "constraint_dev_max",
    "fit_rms_max",
    "sigma_ratio_band",
    "envelope_spread_max",
    "envelope_floor",
    "monotone_fraction_min",
    "mu_power_min",
    "dirac_tol",
    "growth_min",
    "out_dir",
];

const REQUIRED_KEYS: &[&str] = &["domain", "n", "alpha", "q_schedule", "resolution"];

/// One or more problems, each naming the offending key where possible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub problems: Vec<String>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid configuration: {}", self.problems.join("; "))
    }
}

impl std::error::Error for ConfigError {}

/// Key/value pairs in file order of precedence (later wins).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawConfig {
    pub entries: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        let mut problems = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            match line.split_once('=') {
                Some((k, v)) if !k.trim().is_empty() => {
                    let key = k.trim().to_ascii_lowercase();
                    if KNOWN_KEYS.contains(&key.as_str()) {
                        entries.insert(key, v.trim().to_string());
                    } else {
                        problems.push(format!("unknown key `{key}` (line {})", lineno + 1));
                    }
                }
                _ => problems.push(format!("line {}: expected `key = value`", lineno + 1)),
            }
        }
        if problems.is_empty() {
            Ok(Self { entries })
        } else {
            Err(ConfigError { problems })
        }
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.entries.insert(key.to_string(), value.into());
    }

    /// Apply `RBL_<KEY>` overrides for every known key.
    pub fn apply_env<F: Fn(&str) -> Option<String>>(&mut self, lookup: F) {
        for key in KNOWN_KEYS {
            if let Some(v) = lookup(&format!("RBL_{}", key.to_ascii_uppercase())) {
                self.set(key, v);
            }
        }
    }
}

/// Bounds checked by `verify`; a missing entry skips its check.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Tolerances {
    pub interior_delta: Option<f64>,
    pub constraint_dev_max: Option<f64>,
    pub fit_rms_max: Option<f64>,
    pub sigma_ratio_band: Option<f64>,
    pub envelope_spread_max: Option<f64>,
    pub envelope_floor: Option<f64>,
    pub monotone_fraction_min: Option<f64>,
    pub mu_power_min: Option<f64>,
    pub dirac_tol: Option<f64>,
    pub growth_min: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub domain: DomainSpec,
    pub n: usize,
    pub alpha: f64,
    pub q_schedule: Vec<f64>,
    pub resolution: usize,
    pub solver: SolverOptions,
    pub warm_start: bool,
    pub kernel: KernelMode,
    pub dense_cap: usize,
    pub fit_window: f64,
    pub guard_cells: f64,
    pub probes: Vec<Point>,
    pub r_min: Option<f64>,
    pub bump_radius: Option<f64>,
    pub monotone_t0: Option<f64>,
    pub monotone_aperture: f64,
    pub monotone_tol: f64,
    pub tolerances: Tolerances,
    pub out_dir: PathBuf,
}

struct Reader<'a> {
    raw: &'a RawConfig,
    problems: Vec<String>,
}

impl Reader<'_> {
    fn get(&self, key: &str) -> Option<&str> {
        self.raw.entries.get(key).map(String::as_str)
    }

    fn parse<T: std::str::FromStr>(&mut self, key: &str) -> Option<T> {
        let v = self.get(key)?;
        match v.parse::<T>() {
            Ok(x) => Some(x),
            Err(_) => {
                self.problems.push(format!("`{key}`: cannot parse `{v}`"));
                None
            }
        }
    }

    fn required<T: std::str::FromStr>(&mut self, key: &str) -> Option<T> {
        self.get(key)?;
        self.parse(key)
    }

    fn positive(&mut self, key: &str) -> Option<f64> {
        let v: f64 = self.parse(key)?;
        if v > 0.0 && v.is_finite() {
            Some(v)
        } else {
            self.problems
                .push(format!("`{key}` must be positive, got {v}"));
            None
        }
    }

    fn non_negative(&mut self, key: &str) -> Option<f64> {
        let v: f64 = self.parse(key)?;
        if v >= 0.0 && v.is_finite() {
            Some(v)
        } else {
            self.problems
                .push(format!("`{key}` must be non-negative, got {v}"));
            None
        }
    }

    fn list(&mut self, key: &str) -> Option<Vec<f64>> {
        let v = self.get(key)?.to_string();
        let mut out = Vec::new();
        for item in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item.parse::<f64>() {
                Ok(x) => out.push(x),
                Err(_) => {
                    self.problems
                        .push(format!("`{key}`: cannot parse list entry `{item}`"));
                    return None;
                }
            }
        }
        Some(out)
    }
}

fn parse_domain(v: &str) -> Result<DomainSpec, String> {
    let mut parts = v.split_whitespace();
    let kind = parts.next().unwrap_or("").to_ascii_lowercase();
    let nums: Vec<f64> = parts
        .map(|s| s.trim_matches(',').parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| format!("`domain`: cannot parse `{v}`"))?;
    let spec = match (kind.as_str(), nums.as_slice()) {
        ("interval", &[a, b]) => DomainSpec::Interval { a, b },
        ("rectangle", &[a1, b1, a2, b2]) => DomainSpec::Rectangle { a1, b1, a2, b2 },
        ("disk", &[cx, cy, radius]) => DomainSpec::Disk {
            center: [cx, cy],
            radius,
        },
        _ => {
            return Err(format!(
                "`domain`: expected `interval a b`, `rectangle a1 b1 a2 b2` or `disk cx cy r`, got `{v}`"
            ))
        }
    };
    spec.validate().map_err(|e| format!("`domain`: {e}"))?;
    Ok(spec)
}

fn parse_points(v: &str, dim: usize) -> Result<Vec<Point>, String> {
    v.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|p| {
            let c: Vec<f64> = p
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| format!("`probes`: cannot parse point `{p}`"))?;
            if c.len() != dim {
                return Err(format!("`probes`: point `{p}` needs {dim} coordinate(s)"));
            }
            Ok([c[0], if dim == 2 { c[1] } else { 0.0 }])
        })
        .collect()
}

impl ExperimentConfig {
    pub fn from_raw(raw: &RawConfig) -> Result<Self, ConfigError> {
        let mut r = Reader {
            raw,
            problems: Vec::new(),
        };
        for key in REQUIRED_KEYS {
            if r.get(key).is_none() {
                r.problems.push(format!("missing required key `{key}`"));
            }
        }
        let domain = match r.get("domain").map(parse_domain) {
            Some(Ok(d)) => Some(d),
            Some(Err(e)) => {
                r.problems.push(e);
                None
            }
            None => None,
        };
        let n: Option<usize> = r.required("n");
        let alpha: Option<f64> = r.required("alpha");
        let q_schedule = r.list("q_schedule");
        let resolution: Option<usize> = r.required("resolution");

        let defaults = SolverOptions::default();
        let solver = SolverOptions {
            tol_residual: r.positive("tol_residual").unwrap_or(defaults.tol_residual),
            max_iter: r.parse("max_iter").unwrap_or(defaults.max_iter),
            damping: r.positive("damping").unwrap_or(defaults.damping),
            init: Init::Constant,
        };
        if let Err(e) = solver.validate() {
            r.problems.push(e.to_string());
        }
        let warm_start = r.parse("warm_start").unwrap_or(true);
        let kernel = match r.get("kernel").map(str::to_ascii_lowercase).as_deref() {
            None | Some("dense") => KernelMode::Dense,
            Some("matrix_free") | Some("matrix-free") => KernelMode::MatrixFree,
            Some("auto") => KernelMode::Auto,
            Some(other) => {
                r.problems.push(format!(
                    "`kernel`: expected dense, matrix_free or auto, got `{other}`"
                ));
                KernelMode::Dense
            }
        };
        let dense_cap = r.parse("dense_cap").unwrap_or(DEFAULT_DENSE_CAP);
        let fit_window = r.positive("fit_window").unwrap_or(8.0);
        let guard_cells = r.positive("guard_cells").unwrap_or(4.0);
        let r_min = r.non_negative("r_min");
        let bump_radius = r.positive("bump_radius");
        let monotone_t0 = r.positive("monotone_t0");
        let monotone_aperture = r.parse("monotone_aperture").unwrap_or(0.8);
        let monotone_tol = r.non_negative("monotone_tol").unwrap_or(0.02);
        let tolerances = Tolerances {
            interior_delta: r.positive("interior_delta"),
            constraint_dev_max: r.positive("constraint_dev_max"),
            fit_rms_max: r.positive("fit_rms_max"),
            sigma_ratio_band: r.non_negative("sigma_ratio_band"),
            envelope_spread_max: r.positive("envelope_spread_max"),
            envelope_floor: r.positive("envelope_floor"),
            monotone_fraction_min: r.positive("monotone_fraction_min"),
            mu_power_min: r.positive("mu_power_min"),
            dirac_tol: r.positive("dirac_tol"),
            growth_min: r.positive("growth_min"),
        };
        let out_dir = PathBuf::from(r.get("out_dir").unwrap_or("out"));

        let mut probes = Vec::new();
        if let (Some(d), Some(text)) = (&domain, r.get("probes")) {
            match parse_points(text, d.dim()) {
                Ok(p) => probes = p,
                Err(e) => r.problems.push(e),
            }
        }
        if let Some(d) = &domain {
            for p in &probes {
                if !d.contains_closed(p) {
                    r.problems.push(format!(
                        "`probes`: point {:?} lies outside the domain",
                        &p[..d.dim()]
                    ));
                }
            }
            if let Some(n) = n {
                if n != d.dim() {
                    r.problems.push(format!(
                        "`n` = {n} does not match the {}-dimensional domain",
                        d.dim()
                    ));
                }
            }
        }
        if let Some(res) = resolution {
            if res < 8 {
                r.problems
                    .push(format!("`resolution` must be at least 8, got {res}"));
            }
        }
        if let (Some(n), Some(alpha), Some(s)) = (n, alpha, &q_schedule) {
            if let Err(e) = validate_schedule(n, alpha, s) {
                r.problems.push(format!("`q_schedule`: {e}"));
            }
        }

        let problems = r.problems;
        match (domain, n, alpha, q_schedule, resolution) {
            (Some(domain), Some(n), Some(alpha), Some(q_schedule), Some(resolution))
                if problems.is_empty() =>
            {
                Ok(Self {
                    domain,
                    n,
                    alpha,
                    q_schedule,
                    resolution,
                    solver,
                    warm_start,
                    kernel,
                    dense_cap,
                    fit_window,
                    guard_cells,
                    probes,
                    r_min,
                    bump_radius,
                    monotone_t0,
                    monotone_aperture,
                    monotone_tol,
                    tolerances,
                    out_dir,
                })
            }
            _ => Err(ConfigError { problems }),
        }
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        Self::from_raw(&RawConfig::parse(text)?)
    }
}
