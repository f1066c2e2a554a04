//! Dense transition matrices of the single-flip chains and their spectra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use super::tables::{normalize_log, EnsembleSpace};
use crate::anneal::{log_cosh_stable, Kernel};
use crate::energy::TableEnergy;
use crate::error::{Error, Result};

pub const MAX_MATRIX_BITS: usize = 12;

/// Row-stochastic kernel on the `2^{Ny}` ensembles, row-major.
#[derive(Debug, Clone)]
pub struct KernelMatrix {
    pub n: usize,
    pub y: usize,
    pub size: usize,
    pub entries: Vec<f64>,
}

impl KernelMatrix {
    pub fn at(&self, from: usize, to: usize) -> f64 {
        self.entries[from * self.size + to]
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.entries[x * self.size..(x + 1) * self.size]
    }

    pub fn max_row_sum_error(&self) -> f64 {
        (0..self.size).map(|x| (self.row(x).iter().sum::<f64>() - 1.0).abs()).fold(0.0, f64::max)
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.size, self.size, &self.entries)
    }
}

/// Acceptance rule used when filling the matrix. Anything other than the two
/// shipped kernels is only useful for fault-injection tests.
pub type AcceptanceFn<'a> = &'a dyn Fn(f64, f64, f64) -> f64;

pub fn build_kernel_matrix(table: &TableEnergy, y: usize, beta: f64, gamma: f64, kernel: Kernel) -> Result<KernelMatrix> {
    let rule = move |de, dh, b| kernel.acceptance(de, dh, b);
    build_kernel_matrix_with(table, y, beta, gamma, &rule)
}

pub fn build_kernel_matrix_with(
    table: &TableEnergy,
    y: usize,
    beta: f64,
    gamma: f64,
    accept: AcceptanceFn<'_>,
) -> Result<KernelMatrix> {
    let space = EnsembleSpace::new(table, y)?;
    let bits = space.n * y;
    if bits > MAX_MATRIX_BITS {
        return Err(Error::SizeLimit { what: "N*y (matrix)", value: bits, limit: MAX_MATRIX_BITS });
    }
    Ok(kernel_from_space(&space, beta, gamma, accept))
}

pub(crate) fn kernel_from_space(space: &EnsembleSpace, beta: f64, gamma: f64, accept: AcceptanceFn<'_>) -> KernelMatrix {
    let n = space.n;
    let bits = n * space.y;
    let size = space.states();
    let proposal = 1.0 / bits as f64;
    let mut entries = vec![0.0; size * size];
    for x in 0..size {
        let mut stay = 1.0;
        for b in 0..bits {
            let z = x ^ 1 << b;
            let i = b % n;
            let before = space.field_row(x)[i];
            let after = space.field_row(z)[i];
            let dh = log_cosh_stable(gamma * after as f64) - log_cosh_stable(gamma * before as f64);
            let de = space.total_energy[z] - space.total_energy[x];
            let p = proposal * accept(de, dh, beta);
            entries[x * size + z] = p;
            stay -= p;
        }
        entries[x * size + x] = stay;
    }
    KernelMatrix { n, y: space.y, size, entries }
}

/// Largest `|π(x)K(x,z) - π(z)K(z,x)|` over all pairs.
pub fn detailed_balance_violation(k: &KernelMatrix, pi: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    for x in 0..k.size {
        for z in x + 1..k.size {
            worst = worst.max((pi[x] * k.at(x, z) - pi[z] * k.at(z, x)).abs());
        }
    }
    worst
}

pub const REVERSIBILITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct Spectrum {
    /// Solution of `πK = π`, normalised, obtained without using the reference law.
    pub stationary: Vec<f64>,
    /// Eigenvalues in decreasing order.
    pub eigenvalues: Vec<f64>,
    /// Second-largest eigenvalue.
    pub lambda1: f64,
    /// `1 - λ₁`.
    pub psi: f64,
}

/// Stationary vector and spectral gap of a kernel reversible w.r.t. `qbar`.
pub fn stationary_and_gap(k: &KernelMatrix, qbar: &[f64]) -> Result<Spectrum> {
    if qbar.len() != k.size {
        return Err(Error::LengthMismatch { expected: k.size, actual: qbar.len() });
    }
    let violation = detailed_balance_violation(k, qbar);
    if violation > REVERSIBILITY_TOL {
        return Err(Error::NotReversible { violation });
    }
    let stationary = solve_stationary(k)?;
    let eigenvalues = symmetric_spectrum(k, qbar);
    let lambda1 = eigenvalues.get(1).copied().unwrap_or(1.0);
    Ok(Spectrum { stationary, psi: 1.0 - lambda1, lambda1, eigenvalues })
}

/// `(K^T - I) π = 0` with the last equation replaced by `Σ π = 1`.
fn solve_stationary(k: &KernelMatrix) -> Result<Vec<f64>> {
    let size = k.size;
    let mut a = k.to_dmatrix().transpose();
    for i in 0..size {
        a[(i, i)] -= 1.0;
    }
    for j in 0..size {
        a[(size - 1, j)] = 1.0;
    }
    let mut rhs = DVector::zeros(size);
    rhs[size - 1] = 1.0;
    let pi = a
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::InvalidArgument("kernel has no unique stationary law".into()))?;
    Ok(pi.iter().copied().collect())
}

/// Eigenvalues of `D^{1/2} K D^{-1/2}`, `D = diag(π)`, sorted decreasing.
fn symmetric_spectrum(k: &KernelMatrix, pi: &[f64]) -> Vec<f64> {
    let size = k.size;
    let root: Vec<f64> = pi.iter().map(|p| p.sqrt()).collect();
    let s = DMatrix::from_fn(size, size, |x, z| {
        let v = root[x] * k.at(x, z) / root[z];
        let w = root[z] * k.at(z, x) / root[x];
        0.5 * (v + w)
    });
    let mut ev: Vec<f64> = SymmetricEigen::new(s).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

/// Spectral gap `ψ(β)` over a grid at fixed `γ`.
pub fn gap_curve(table: &TableEnergy, y: usize, gamma: f64, betas: &[f64], kernel: Kernel) -> Result<Vec<f64>> {
    let space = EnsembleSpace::new(table, y)?;
    if space.n * y > MAX_MATRIX_BITS {
        return Err(Error::SizeLimit { what: "N*y (matrix)", value: space.n * y, limit: MAX_MATRIX_BITS });
    }
    let rule = move |de, dh, b| kernel.acceptance(de, dh, b);
    betas
        .iter()
        .map(|&beta| {
            let k = kernel_from_space(&space, beta, gamma, &rule);
            let (qbar, _) = normalize_log(&space.log_weights(beta, gamma));
            Ok(stationary_and_gap(&k, &qbar)?.psi)
        })
        .collect()
}
