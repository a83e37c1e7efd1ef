use std::io::{self, Write};

use super::domain::{dist, DomainSpec, Point};
use crate::error::{Error, Result};

const INACTIVE: u32 = u32::MAX;

/// Cell-centered quadrature grid over a [`DomainSpec`].
///
/// Nodes are stored in lexicographic order of their coordinates, so the
/// smallest index among tied nodes is also the lexicographically smallest.
#[derive(Debug, Clone)]
pub struct Grid {
    pub domain: DomainSpec,
    pub nodes: Vec<Point>,
    pub weights: Vec<f64>,
    /// Largest cell side length.
    pub h: f64,
    /// Cell side lengths per axis.
    pub spacing: Point,
    pub boundary_dist: Vec<f64>,
    origin: Point,
    cells: [usize; 2],
    cell_to_node: Vec<u32>,
}

/// Uniform cell-centered grid over the bounding box of `spec`, with
/// `resolution` cells along each axis. Disk cells are kept iff their
/// center lies strictly inside.
pub fn build_grid(spec: &DomainSpec, resolution: usize) -> Result<Grid> {
    spec.validate()?;
    if resolution < 8 {
        return Err(Error::ResolutionTooSmall(resolution));
    }
    let dim = spec.dim();
    let (origin, sides) = spec.bounding_box();
    let cells = if dim == 1 {
        [resolution, 1]
    } else {
        [resolution, resolution]
    };
    let spacing = [
        sides[0] / resolution as f64,
        if dim == 1 {
            0.0
        } else {
            sides[1] / resolution as f64
        },
    ];
    let cell_volume = if dim == 1 {
        spacing[0]
    } else {
        spacing[0] * spacing[1]
    };

    let mut nodes = Vec::new();
    let mut cell_to_node = vec![INACTIVE; cells[0] * cells[1]];
    for i in 0..cells[0] {
        let x = origin[0] + (i as f64 + 0.5) * spacing[0];
        for j in 0..cells[1] {
            let y = if dim == 1 {
                0.0
            } else {
                origin[1] + (j as f64 + 0.5) * spacing[1]
            };
            let p = [x, y];
            if spec.contains(&p) {
                cell_to_node[i * cells[1] + j] = nodes.len() as u32;
                nodes.push(p);
            }
        }
    }
    if nodes.is_empty() {
        return Err(Error::DegenerateDomain(
            "no cell centers inside the domain".into(),
        ));
    }
    let boundary_dist = nodes.iter().map(|p| spec.boundary_dist(p)).collect();
    Ok(Grid {
        domain: *spec,
        weights: vec![cell_volume; nodes.len()],
        nodes,
        h: spacing[0].max(spacing[1]),
        spacing,
        boundary_dist,
        origin,
        cells,
        cell_to_node,
    })
}

impl Grid {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    /// Volume of one cell (all cells are equal).
    pub fn cell_volume(&self) -> f64 {
        self.weights[0]
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Index of the node nearest to `x`; ties go to the smaller index.
    pub fn nearest_node(&self, x: &Point) -> usize {
        let locate = |axis: usize| -> usize {
            if self.spacing[axis] == 0.0 {
                return 0;
            }
            let t = ((x[axis] - self.origin[axis]) / self.spacing[axis]).floor();
            t.clamp(0.0, (self.cells[axis] - 1) as f64) as usize
        };
        let (i, j) = (locate(0), locate(1));
        let inside_box = (0..self.dim()).all(|a| {
            x[a] >= self.origin[a]
                && x[a] <= self.origin[a] + self.spacing[a] * self.cells[a] as f64
        });
        let idx = self.cell_to_node[i * self.cells[1] + j];
        if inside_box && idx != INACTIVE {
            return idx as usize;
        }
        self.nearest_brute(x)
    }

    fn nearest_brute(&self, x: &Point) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (k, p) in self.nodes.iter().enumerate() {
            let d = dist(p, x);
            if d < best_d {
                best_d = d;
                best = k;
            }
        }
        best
    }

    /// CSV with header `index,x1[,x2],weight,boundary_dist`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        if self.dim() == 1 {
            writeln!(w, "index,x1,weight,boundary_dist")?;
        } else {
            writeln!(w, "index,x1,x2,weight,boundary_dist")?;
        }
        for (k, p) in self.nodes.iter().enumerate() {
            write!(w, "{k},")?;
            write_coords(&mut w, p, self.dim())?;
            writeln!(w, ",{},{}", self.weights[k], self.boundary_dist[k])?;
        }
        Ok(())
    }
}

pub(crate) fn write_coords<W: Write>(w: &mut W, p: &Point, dim: usize) -> io::Result<()> {
    if dim == 1 {
        write!(w, "{}", p[0])
    } else {
        write!(w, "{},{}", p[0], p[1])
    }
}
