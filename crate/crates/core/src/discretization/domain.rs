use crate::error::{Error, Result};

/// Points carry two coordinates; the second is 0 for one-dimensional domains.
pub type Point = [f64; 2];

pub fn dist(a: &Point, b: &Point) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    (dx * dx + dy * dy).sqrt()
}

/// Bounded computational domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainSpec {
    Interval { a: f64, b: f64 },
    Rectangle { a1: f64, b1: f64, a2: f64, b2: f64 },
    Disk { center: Point, radius: f64 },
}

impl DomainSpec {
    pub fn dim(&self) -> usize {
        match self {
            DomainSpec::Interval { .. } => 1,
            _ => 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        match *self {
            DomainSpec::Interval { a, b } => {
                if !finite(&[a, b]) || !(a < b) {
                    return Err(Error::DegenerateDomain(format!("interval [{a}, {b}]")));
                }
            }
            DomainSpec::Rectangle { a1, b1, a2, b2 } => {
                if !finite(&[a1, b1, a2, b2]) || !(a1 < b1) || !(a2 < b2) {
                    return Err(Error::DegenerateDomain(format!(
                        "rectangle [{a1}, {b1}] x [{a2}, {b2}]"
                    )));
                }
            }
            DomainSpec::Disk { center, radius } => {
                if !finite(&[center[0], center[1], radius]) || !(radius > 0.0) {
                    return Err(Error::DegenerateDomain(format!(
                        "disk center {center:?} radius {radius}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Lower corner and side lengths of the bounding box.
    pub fn bounding_box(&self) -> (Point, Point) {
        match *self {
            DomainSpec::Interval { a, b } => ([a, 0.0], [b - a, 0.0]),
            DomainSpec::Rectangle { a1, b1, a2, b2 } => ([a1, a2], [b1 - a1, b2 - a2]),
            DomainSpec::Disk { center, radius } => (
                [center[0] - radius, center[1] - radius],
                [2.0 * radius, 2.0 * radius],
            ),
        }
    }

    /// Signed distance to the boundary, positive inside.
    pub fn signed_boundary_dist(&self, x: &Point) -> f64 {
        match *self {
            DomainSpec::Interval { a, b } => (x[0] - a).min(b - x[0]),
            DomainSpec::Rectangle { a1, b1, a2, b2 } => {
                (x[0] - a1).min(b1 - x[0]).min(x[1] - a2).min(b2 - x[1])
            }
            DomainSpec::Disk { center, radius } => radius - dist(x, &center),
        }
    }

    pub fn boundary_dist(&self, x: &Point) -> f64 {
        self.signed_boundary_dist(x).max(0.0)
    }

    /// Open-set membership.
    pub fn contains(&self, x: &Point) -> bool {
        self.signed_boundary_dist(x) > 0.0
    }

    pub fn contains_closed(&self, x: &Point) -> bool {
        self.signed_boundary_dist(x) >= 0.0
    }

    pub fn diameter(&self) -> f64 {
        match *self {
            DomainSpec::Interval { a, b } => b - a,
            DomainSpec::Rectangle { a1, b1, a2, b2 } => (b1 - a1).hypot(b2 - a2),
            DomainSpec::Disk { radius, .. } => 2.0 * radius,
        }
    }

    pub fn inradius(&self) -> f64 {
        match *self {
            DomainSpec::Interval { a, b } => 0.5 * (b - a),
            DomainSpec::Rectangle { a1, b1, a2, b2 } => 0.5 * (b1 - a1).min(b2 - a2),
            DomainSpec::Disk { radius, .. } => radius,
        }
    }

    /// Lebesgue measure |Ω|.
    pub fn measure(&self) -> f64 {
        match *self {
            DomainSpec::Interval { a, b } => b - a,
            DomainSpec::Rectangle { a1, b1, a2, b2 } => (b1 - a1) * (b2 - a2),
            DomainSpec::Disk { radius, .. } => std::f64::consts::PI * radius * radius,
        }
    }

    /// Boundary points paired with unit outer normals. Rectangle corners
    /// are skipped since the normal is undefined there.
    pub fn boundary_samples(&self, count: usize) -> Vec<(Point, Point)> {
        match *self {
            DomainSpec::Interval { a, b } => vec![([a, 0.0], [-1.0, 0.0]), ([b, 0.0], [1.0, 0.0])],
            DomainSpec::Disk { center, radius } => (0..count.max(1))
                .map(|k| {
                    let t = 2.0 * std::f64::consts::PI * k as f64 / count.max(1) as f64;
                    let nrm = [t.cos(), t.sin()];
                    (
                        [center[0] + radius * nrm[0], center[1] + radius * nrm[1]],
                        nrm,
                    )
                })
                .collect(),
            DomainSpec::Rectangle { a1, b1, a2, b2 } => {
                let per_side = (count / 4).max(1);
                let mut out = Vec::with_capacity(4 * per_side);
                for k in 0..per_side {
                    let s = (k as f64 + 0.5) / per_side as f64;
                    let x = a1 + s * (b1 - a1);
                    let y = a2 + s * (b2 - a2);
                    out.push(([x, a2], [0.0, -1.0]));
                    out.push(([b1, y], [1.0, 0.0]));
                    out.push(([x, b2], [0.0, 1.0]));
                    out.push(([a1, y], [-1.0, 0.0]));
                }
                out
            }
        }
    }
}
