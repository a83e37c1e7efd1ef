//! Quadrature grids, the discrete Riesz operator, energy and quotient.

mod domain;
mod grid;
mod kernel;

pub use domain::dist;
pub use domain::{DomainSpec, Point};
pub(crate) use grid::write_coords;
pub use grid::{build_grid, Grid};
pub(crate) use kernel::lq_norm;
pub use kernel::{
    assemble_kernel, self_cell_average, KernelMode, KernelOperator, KernelOptions,
    DEFAULT_DENSE_CAP,
};
