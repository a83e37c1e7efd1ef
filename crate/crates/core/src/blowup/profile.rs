//! Rescaled profiles v_q(z) and least-squares bubble fits.

use crate::analytic::constraint_dev;
use crate::discretization::{Grid, Point};
use crate::error::{Error, Result};

pub const MIN_FIT_POINTS: usize = 20;

/// Samples of v_q(z) = μ^{α/(p-2)} u(μ z + x_q) at the grid nodes.
#[derive(Debug, Clone)]
pub struct RescaledProfile {
    pub z: Vec<Point>,
    pub v: Vec<f64>,
    /// Index of the node mapped to z = 0.
    pub origin: usize,
}

/// Map the solution `u` to bubble coordinates around node `extremal`.
///
/// Since μ^{α/(p-2)} = 1/u(x_q), values are formed as u/u(x_q), which makes
/// v(0) = 1 exactly and keeps v on the correct side of 1.
pub fn rescale_profile(grid: &Grid, u: &[f64], extremal: usize, mu: f64) -> RescaledProfile {
    let xq = grid.nodes[extremal];
    let peak = u[extremal];
    let z = grid
        .nodes
        .iter()
        .map(|x| [(x[0] - xq[0]) / mu, (x[1] - xq[1]) / mu])
        .collect();
    let v = u.iter().map(|val| val / peak).collect();
    RescaledProfile {
        z,
        v,
        origin: extremal,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BubbleFit {
    pub c1: f64,
    pub c2: f64,
    /// Root-mean-square residual of log v over the window.
    pub rms_residual: f64,
    /// |c1 c2^{(α-n)/2} - 1|
    pub constraint_dev: f64,
    pub window_radius: f64,
    pub points: usize,
}

/// Least-squares fit of log v ≈ log c1 - ((n-α)/2) log(c2 + |z|²) over
/// |z| <= `window_radius`.
pub fn fit_bubble(
    profile: &RescaledProfile,
    n: usize,
    alpha: f64,
    window_radius: f64,
) -> Result<BubbleFit> {
    let r2_max = window_radius * window_radius;
    let (r2, y): (Vec<f64>, Vec<f64>) = profile
        .z
        .iter()
        .zip(&profile.v)
        .filter_map(|(z, v)| {
            let r2 = z[0] * z[0] + z[1] * z[1];
            (r2 <= r2_max && *v > 0.0).then(|| (r2, v.ln()))
        })
        .unzip();
    if r2.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientPoints {
            found: r2.len(),
            needed: MIN_FIT_POINTS,
            radius: window_radius,
        });
    }
    let gamma = 0.5 * (n as f64 - alpha);
    let (log_c1, log_c2, sse) = LogBubbleLsq {
        r2: &r2,
        y: &y,
        gamma,
    }
    .solve();
    let (c1, c2) = (log_c1.exp(), log_c2.exp());
    Ok(BubbleFit {
        c1,
        c2,
        rms_residual: (sse / r2.len() as f64).sqrt(),
        constraint_dev: constraint_dev(c1, c2, n, alpha),
        window_radius,
        points: r2.len(),
    })
}

/// Residuals r_k = y_k - a + γ log(e^s + r2_k) in the unknowns (a, s).
struct LogBubbleLsq<'a> {
    r2: &'a [f64],
    y: &'a [f64],
    gamma: f64,
}

impl LogBubbleLsq<'_> {
    /// Optimal a for fixed s, and the resulting sum of squares.
    fn profile_out(&self, s: f64) -> (f64, f64) {
        let c2 = s.exp();
        let m = self.y.len() as f64;
        let a = self
            .y
            .iter()
            .zip(self.r2)
            .map(|(y, r2)| y + self.gamma * (c2 + r2).ln())
            .sum::<f64>()
            / m;
        (a, self.sse(a, s))
    }

    fn sse(&self, a: f64, s: f64) -> f64 {
        let c2 = s.exp();
        self.y
            .iter()
            .zip(self.r2)
            .map(|(y, r2)| {
                let r = y - a + self.gamma * (c2 + r2).ln();
                r * r
            })
            .sum()
    }

    fn solve(&self) -> (f64, f64, f64) {
        // Coarse scan in s = log c2 to land in the right basin.
        let mut best = (0.0, 0.0, f64::INFINITY);
        let mut s = -20.0;
        while s <= 20.0 {
            let (a, e) = self.profile_out(s);
            if e < best.2 {
                best = (a, s, e);
            }
            s += 0.25;
        }
        let (mut a, mut s, mut e) = best;

        // Levenberg–Marquardt on (a, s).
        let mut lambda = 1e-3;
        for _ in 0..200 {
            let c2 = s.exp();
            let (mut jaa, mut jas, mut jss, mut ga, mut gs) = (0.0, 0.0, 0.0, 0.0, 0.0);
            for (y, r2) in self.y.iter().zip(self.r2) {
                let r = y - a + self.gamma * (c2 + r2).ln();
                let da = -1.0;
                let ds = self.gamma * c2 / (c2 + r2);
                jaa += da * da;
                jas += da * ds;
                jss += ds * ds;
                ga += da * r;
                gs += ds * r;
            }
            let mut improved = false;
            for _ in 0..30 {
                let m00 = jaa * (1.0 + lambda);
                let m11 = jss * (1.0 + lambda);
                let det = m00 * m11 - jas * jas;
                if det.abs() < f64::MIN_POSITIVE {
                    lambda *= 10.0;
                    continue;
                }
                let step_a = -(m11 * ga - jas * gs) / det;
                let step_s = -(m00 * gs - jas * ga) / det;
                let e_new = self.sse(a + step_a, s + step_s);
                if e_new <= e {
                    let small = step_a.abs() < 1e-15 * (1.0 + a.abs())
                        && step_s.abs() < 1e-15 * (1.0 + s.abs());
                    a += step_a;
                    s += step_s;
                    e = e_new;
                    lambda = (lambda * 0.3).max(1e-12);
                    improved = !small;
                    break;
                }
                lambda *= 10.0;
            }
            if !improved {
                break;
            }
        }
        (a, s, e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::pin_bubble;
    use crate::discretization::{build_grid, DomainSpec};

    fn line_profile(n_pts: usize, half: f64, f: impl Fn(f64) -> f64) -> RescaledProfile {
        let z: Vec<Point> = (0..n_pts)
            .map(|k| [-half + 2.0 * half * k as f64 / (n_pts - 1) as f64, 0.0])
            .collect();
        let v = z.iter().map(|p| f(p[0])).collect();
        RescaledProfile {
            z,
            v,
            origin: n_pts / 2,
        }
    }

    #[test]
    fn recovers_exact_pinned_bubble() {
        let b = pin_bubble(1, 2.0).unwrap();
        let prof = line_profile(321, 8.0, |z| b.eval(&[z]));
        let fit = fit_bubble(&prof, 1, 2.0, 8.0).unwrap();
        assert!((fit.c1 - b.c1).abs() < 1e-8);
        assert!((fit.c2 - b.c2).abs() < 1e-8);
        assert!(fit.rms_residual < 1e-10);
        assert!(fit.constraint_dev < 1e-8);
    }

    #[test]
    fn recovers_hls_bubble() {
        let (c1, c2) = (0.7, 0.3);
        let prof = line_profile(201, 4.0, |z| c1 * (c2 + z * z).powf(-0.25));
        let fit = fit_bubble(&prof, 2, 1.5, 4.0).unwrap();
        assert!((fit.c1 - c1).abs() < 1e-8 && (fit.c2 - c2).abs() < 1e-8);
    }

    #[test]
    fn too_few_points() {
        let prof = line_profile(10, 1.0, |_| 1.0);
        assert!(matches!(
            fit_bubble(&prof, 1, 2.0, 8.0),
            Err(Error::InsufficientPoints { found: 10, .. })
        ));
    }

    #[test]
    fn rescale_sets_origin_to_one() {
        let g = build_grid(&DomainSpec::Interval { a: -1.0, b: 1.0 }, 50).unwrap();
        let u: Vec<f64> = g.nodes.iter().map(|p| 3.0 - p[0] * p[0]).collect();
        let prof = rescale_profile(&g, &u, 25, 0.1);
        assert_eq!(prof.v[25], 1.0);
        assert_eq!(prof.z[25], [0.0, 0.0]);
        assert!(prof.v.iter().all(|&v| v > 0.0 && v <= 1.0 + 0.01));
    }
}
