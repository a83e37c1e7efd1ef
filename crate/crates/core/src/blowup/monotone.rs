//! Monotonicity of u along inward rays near the boundary.

use crate::analytic::Regime;
use crate::discretization::{Grid, Point};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotoneOptions {
    /// Ray length.
    pub t0: f64,
    /// Minimum cosine between the ray and the inward normal.
    pub aperture: f64,
    /// Allowed relative step in the wrong direction.
    pub tol: f64,
    /// Boundary sample count (ignored in 1D, which has two endpoints).
    pub boundary_points: usize,
    /// Directions per boundary point, spread over the aperture cone.
    pub directions: usize,
}

impl MonotoneOptions {
    pub fn new(t0: f64) -> Self {
        Self {
            t0,
            aperture: 0.8,
            tol: 0.02,
            boundary_points: 64,
            directions: 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotoneReport {
    pub fraction_monotone: f64,
    /// Largest relative step against the expected direction, 0 if none.
    pub worst_violation: f64,
    pub rays: usize,
}

fn ray_directions(inward: Point, dim: usize, aperture: f64, count: usize) -> Vec<Point> {
    if dim == 1 || count <= 1 {
        return vec![inward];
    }
    let half = aperture.clamp(-1.0, 1.0).acos();
    (0..count)
        .map(|k| {
            let t = -half + 2.0 * half * k as f64 / (count - 1) as f64;
            let (s, c) = t.sin_cos();
            [c * inward[0] - s * inward[1], s * inward[0] + c * inward[1]]
        })
        .collect()
}

/// Walk each ray x + t d, t = 0, h/2, ..., t0, reading u at the nearest
/// node. In the HLS regime u must increase inward, in the reversed regime
/// it must decrease; a ray passes when every step against that direction
/// is within `tol` relative.
pub fn boundary_monotonicity_check(
    grid: &Grid,
    u: &[f64],
    regime: Regime,
    opts: &MonotoneOptions,
) -> Result<MonotoneReport> {
    if u.len() != grid.len() {
        return Err(Error::DimensionMismatch {
            expected: grid.len(),
            got: u.len(),
        });
    }
    let inradius = grid.domain.inradius();
    if !(opts.t0 > 0.0 && opts.t0 < 0.5 * inradius) {
        return Err(Error::RayTooLong {
            t0: opts.t0,
            inradius,
        });
    }
    let dt = 0.5 * grid.h;
    let steps = (opts.t0 / dt).floor() as usize;
    let mut rays = 0usize;
    let mut monotone = 0usize;
    let mut worst = 0.0f64;
    for (x, normal) in grid.domain.boundary_samples(opts.boundary_points) {
        let inward = [-normal[0], -normal[1]];
        for d in ray_directions(inward, grid.dim(), opts.aperture, opts.directions) {
            let mut prev: Option<f64> = None;
            let mut ray_worst = 0.0f64;
            for k in 0..=steps {
                let t = k as f64 * dt;
                let y = [x[0] + t * d[0], x[1] + t * d[1]];
                if k > 0 && !grid.domain.contains_closed(&y) {
                    break;
                }
                let val = u[grid.nearest_node(&y)];
                if let Some(pv) = prev {
                    let against = match regime {
                        Regime::Hls => pv - val,
                        Regime::ReversedHls => val - pv,
                    };
                    let scale = pv.abs().max(f64::MIN_POSITIVE);
                    ray_worst = ray_worst.max(against / scale);
                }
                prev = Some(val);
            }
            rays += 1;
            if ray_worst <= opts.tol {
                monotone += 1;
            }
            worst = worst.max(ray_worst);
        }
    }
    Ok(MonotoneReport {
        fraction_monotone: monotone as f64 / rays.max(1) as f64,
        worst_violation: worst,
        rays,
    })
}
