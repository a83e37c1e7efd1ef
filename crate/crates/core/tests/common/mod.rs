#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;

/// ∫_0^∞ g(r) dr by the exp-sinh rule r = exp(π/2 sinh t), halving the
/// step until two successive sums agree to `tol` relative.
pub fn exp_sinh<F: Fn(f64) -> f64>(g: F, tol: f64) -> f64 {
    let term = |t: f64| {
        let r = (FRAC_PI_2 * t.sinh()).exp();
        let w = FRAC_PI_2 * t.cosh() * r;
        if r == 0.0 || !r.is_finite() || !w.is_finite() {
            0.0
        } else {
            g(r) * w
        }
    };
    let t_max = 4.5;
    let mut h = 0.5;
    let mut sum = term(0.0);
    let mut k = 1;
    while k as f64 * h <= t_max {
        sum += term(k as f64 * h) + term(-(k as f64) * h);
        k += 1;
    }
    let mut prev = sum * h;
    for _ in 0..12 {
        h *= 0.5;
        // Add the new odd-indexed midpoints.
        let mut k = 1;
        while k as f64 * h <= t_max {
            sum += term(k as f64 * h) + term(-(k as f64) * h);
            k += 2;
        }
        let est = sum * h;
        if (est - prev).abs() <= tol * est.abs() {
            return est;
        }
        prev = est;
    }
    prev
}

/// ∫_0^∞ r^{n-1} (1 + r²)^{-s} dr by quadrature.
pub fn radial_oracle(n: usize, s: f64) -> f64 {
    exp_sinh(|r| r.powi(n as i32 - 1) * (1.0 + r * r).powf(-s), 1e-14)
}

/// Surface area of S^{n-1} for n = 1, 2, 3 as literals.
pub fn sphere_area(n: usize) -> f64 {
    match n {
        1 => 2.0,
        2 => 2.0 * std::f64::consts::PI,
        3 => 4.0 * std::f64::consts::PI,
        _ => panic!("no literal for n = {n}"),
    }
}

/// ∫_{R^n} g(|z|) dz for radial g.
pub fn radial_volume_integral<F: Fn(f64) -> f64>(n: usize, g: F) -> f64 {
    sphere_area(n) * exp_sinh(|r| r.powi(n as i32 - 1) * g(r), 1e-14)
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

pub fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("configs")
        .join(format!("{name}.conf"))
}
