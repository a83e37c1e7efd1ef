use std::f64::consts::PI;

use super::domain::dist;
use super::grid::Grid;
use crate::analytic::{validate_order, Exponents};
use crate::error::{Error, Result};
use crate::exec::{fill_rows, map_range, Execution};

pub const DEFAULT_DENSE_CAP: usize = 4096;

/// Storage strategy for the kernel matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KernelMode {
    /// Dense m×m array; fails beyond the cap.
    #[default]
    Dense,
    /// Entries recomputed on every application.
    MatrixFree,
    /// Dense up to the cap, matrix-free beyond it.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelOptions {
    pub mode: KernelMode,
    pub dense_cap: usize,
    pub exec: Execution,
}

impl Default for KernelOptions {
    fn default() -> Self {
        Self {
            mode: KernelMode::Dense,
            dense_cap: DEFAULT_DENSE_CAP,
            exec: Execution::default(),
        }
    }
}

#[derive(Debug, Clone)]
enum Storage {
    Dense(Vec<f64>),
    MatrixFree,
}

/// Discrete Riesz operator (Kf)_i = Σ_j k(x_i, x_j) w_j f_j with
/// k(x, y) = |x - y|^{α-n} off the diagonal and a self-cell average on it.
///
/// The kernel does not depend on q, so one operator serves a whole sweep.
#[derive(Debug, Clone)]
pub struct KernelOperator {
    pub n: usize,
    pub alpha: f64,
    grid: Grid,
    diagonal: f64,
    storage: Storage,
    exec: Execution,
}

/// Cell average of |x_i - y|^{α-n} over the node's own cell.
///
/// 1D: exact average over [-h/2, h/2], (h/2)^{α-1}/α.
/// 2D: the cell is replaced by the disk of equal area, radius r_e, whose
/// exact average is 2 r_e^{α-2}/α.
pub fn self_cell_average(grid: &Grid, alpha: f64) -> f64 {
    match grid.dim() {
        1 => (0.5 * grid.spacing[0]).powf(alpha - 1.0) / alpha,
        _ => {
            let r_e = (grid.cell_volume() / PI).sqrt();
            2.0 * r_e.powf(alpha - 2.0) / alpha
        }
    }
}

/// Dense assembly with the default cap.
pub fn assemble_kernel(grid: &Grid, exponents: &Exponents) -> Result<KernelOperator> {
    KernelOperator::assemble(grid.clone(), exponents.alpha, KernelOptions::default())
}

impl KernelOperator {
    pub fn assemble(grid: Grid, alpha: f64, opts: KernelOptions) -> Result<Self> {
        let n = grid.dim();
        validate_order(n, alpha)?;
        let m = grid.len();
        let dense = match opts.mode {
            KernelMode::Dense => {
                if m > opts.dense_cap {
                    return Err(Error::KernelTooLarge {
                        m,
                        cap: opts.dense_cap,
                        required: (m as u128) * (m as u128),
                    });
                }
                true
            }
            KernelMode::MatrixFree => false,
            KernelMode::Auto => m <= opts.dense_cap,
        };
        let diagonal = self_cell_average(&grid, alpha);
        let mut op = Self {
            n,
            alpha,
            grid,
            diagonal,
            storage: Storage::MatrixFree,
            exec: opts.exec,
        };
        if dense {
            let mut entries = vec![0.0; m * m];
            let op_ref = &op;
            fill_rows(opts.exec, &mut entries, m, |i, row| {
                for (j, e) in row.iter_mut().enumerate() {
                    *e = op_ref.entry(i, j);
                }
            });
            op.storage = Storage::Dense(entries);
        }
        Ok(op)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.storage, Storage::Dense(_))
    }

    pub fn execution(&self) -> Execution {
        self.exec
    }

    pub fn set_execution(&mut self, exec: Execution) {
        self.exec = exec;
    }

    pub fn diagonal(&self) -> f64 {
        self.diagonal
    }

    /// k(x_i, x_j), computed from coordinates (symmetric bit-for-bit since
    /// |x_i - x_j| and |x_j - x_i| round identically).
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.diagonal
        } else {
            dist(&self.grid.nodes[i], &self.grid.nodes[j]).powf(self.alpha - self.n as f64)
        }
    }

    /// Stored entry (dense) or recomputed entry (matrix-free).
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match &self.storage {
            Storage::Dense(e) => e[i * self.len() + j],
            Storage::MatrixFree => self.entry(i, j),
        }
    }

    fn check_input(&self, f: &[f64]) -> Result<()> {
        if f.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: f.len(),
            });
        }
        if let Some((index, &value)) = f
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::InvalidEntry { index, value });
        }
        if f.iter().all(|&v| v == 0.0) {
            return Err(Error::ZeroVector);
        }
        Ok(())
    }

    /// (Kf)_i = Σ_j k_ij w_j f_j.
    pub fn apply(&self, f: &[f64]) -> Result<Vec<f64>> {
        self.check_input(f)?;
        Ok(self.apply_unchecked(f))
    }

    pub(crate) fn apply_unchecked(&self, f: &[f64]) -> Vec<f64> {
        let m = self.len();
        let wf: Vec<f64> = f
            .iter()
            .zip(&self.grid.weights)
            .map(|(a, w)| a * w)
            .collect();
        match &self.storage {
            Storage::Dense(e) => map_range(self.exec, m, |i| {
                let row = &e[i * m..(i + 1) * m];
                row.iter().zip(&wf).map(|(k, v)| k * v).sum()
            }),
            Storage::MatrixFree => map_range(self.exec, m, |i| {
                (0..m).map(|j| self.entry(i, j) * wf[j]).sum()
            }),
        }
    }

    /// E[f] = Σ_i w_i f_i (Kf)_i.
    pub fn energy(&self, f: &[f64]) -> Result<f64> {
        self.check_input(f)?;
        let kf = self.apply_unchecked(f);
        Ok(self.pair(f, &kf))
    }

    pub(crate) fn pair(&self, f: &[f64], kf: &[f64]) -> f64 {
        f.iter()
            .zip(kf)
            .zip(&self.grid.weights)
            .map(|((a, b), w)| w * a * b)
            .sum()
    }

    /// (Σ_i w_i f_i^q)^{1/q}; not a norm for q < 1 but used the same way.
    pub fn lq_norm(&self, f: &[f64], q: f64) -> f64 {
        lq_norm(&self.grid.weights, f, q)
    }

    /// E[f] / ‖f‖_q².
    pub fn quotient(&self, f: &[f64], q: f64) -> Result<f64> {
        if !(q > 0.0) {
            return Err(Error::InvalidOptions(format!(
                "quotient needs q > 0, got {q}"
            )));
        }
        let e = self.energy(f)?;
        let norm = self.lq_norm(f, q);
        Ok(e / (norm * norm))
    }
}

pub(crate) fn lq_norm(weights: &[f64], f: &[f64], q: f64) -> f64 {
    let s: f64 = weights.iter().zip(f).map(|(w, v)| w * v.powf(q)).sum();
    s.powf(1.0 / q)
}
