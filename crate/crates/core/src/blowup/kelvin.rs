//! Inversion in a sphere exterior to the domain.

use crate::discretization::{dist, Grid, Point};
use crate::error::{Error, Result};

/// Kelvin inversion in the sphere |x - c| = ρ. In the scaled coordinates
/// y = (x - c)/ρ a sample u(y) maps to w(y*) = |y|^{n-α} u(y) at
/// y* = y/|y|², which is w(x) = |x|^{α-n} u(x/|x|²) written at the image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KelvinTransform {
    pub center: Point,
    pub radius: f64,
    pub n: usize,
    pub alpha: f64,
}

impl KelvinTransform {
    pub fn new(center: Point, radius: f64, n: usize, alpha: f64) -> Self {
        Self {
            center,
            radius,
            n,
            alpha,
        }
    }

    /// Image of one point and the factor multiplying its value.
    pub fn map_point(&self, x: &Point) -> Result<(Point, f64)> {
        let r = dist(x, &self.center) / self.radius;
        if r == 0.0 {
            return Err(Error::SampleAtCenter);
        }
        let s = 1.0 / (r * r);
        let image = [
            self.center[0] + (x[0] - self.center[0]) * s,
            self.center[1] + (x[1] - self.center[1]) * s,
        ];
        Ok((image, r.powf(self.n as f64 - self.alpha)))
    }

    /// Transform arbitrary samples; returns image points and values.
    pub fn apply(&self, points: &[Point], values: &[f64]) -> Result<(Vec<Point>, Vec<f64>)> {
        if points.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: points.len(),
                got: values.len(),
            });
        }
        points
            .iter()
            .zip(values)
            .map(|(x, v)| self.map_point(x).map(|(y, g)| (y, g * v)))
            .collect::<Result<Vec<_>>>()
            .map(|pairs| pairs.into_iter().unzip())
    }
}

/// Kelvin transform of a grid function; the inversion center must lie
/// outside the closed domain.
pub fn kelvin_transform(
    grid: &Grid,
    u: &[f64],
    center: Point,
    radius: f64,
    n: usize,
    alpha: f64,
) -> Result<(Vec<Point>, Vec<f64>)> {
    if grid.domain.contains_closed(&center) {
        return Err(Error::CenterInsideDomain(center[..grid.dim()].to_vec()));
    }
    KelvinTransform::new(center, radius, n, alpha).apply(&grid.nodes, u)
}
