//! Compressed sparse row matrices and a Jacobi-preconditioned CG solver.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Square sparse matrix in CSR layout with sorted column indices per row.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    pub n: usize,
    pub row_offsets: Vec<usize>,
    pub col_indices: Vec<usize>,
    pub values: Vec<f64>,
}

impl SparseMatrix {
    /// Builds an `n × n` matrix from `(row, col, value)` triplets, summing duplicates.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_unstable_by_key(|t| (t.0, t.1));
        let mut row_offsets = vec![0usize; n + 1];
        let mut col_indices = Vec::with_capacity(triplets.len());
        let mut values: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in triplets {
            debug_assert!(i < n && j < n);
            if last == Some((i, j)) {
                *values.last_mut().expect("duplicate follows an entry") += v;
                continue;
            }
            last = Some((i, j));
            row_offsets[i + 1] += 1;
            col_indices.push(j);
            values.push(v);
        }
        for i in 0..n {
            row_offsets[i + 1] += row_offsets[i];
        }
        Self {
            n,
            row_offsets,
            col_indices,
            values,
        }
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_offsets[i]..self.row_offsets[i + 1];
        self.col_indices[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let range = self.row_offsets[i]..self.row_offsets[i + 1];
        match self.col_indices[range.clone()].binary_search(&j) {
            Ok(pos) => self.values[range.start + pos],
            Err(_) => 0.0,
        }
    }

    pub fn mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate().take(self.n) {
            *yi = self.row(i).map(|(j, v)| v * x[j]).sum();
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.mul_vec_into(x, &mut y);
        y
    }

    /// `xᵀ A y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        (0..self.n)
            .map(|i| x[i] * self.row(i).map(|(j, v)| v * y[j]).sum::<f64>())
            .sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row(i).map(|(_, v)| v).sum())
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest `|A_ij − A_ji|` over stored entries.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                worst = worst.max((v - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// Principal submatrix on the sorted index set `keep` (row/column elimination).
    pub fn principal_submatrix(&self, keep: &[usize]) -> SparseMatrix {
        let mut map = vec![usize::MAX; self.n];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = new;
        }
        let mut triplets = Vec::new();
        for (new_i, &i) in keep.iter().enumerate() {
            for (j, v) in self.row(i) {
                if map[j] != usize::MAX {
                    triplets.push((new_i, map[j], v));
                }
            }
        }
        SparseMatrix::from_triplets(keep.len(), triplets)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Outcome of a CG solve.
#[derive(Debug, Clone, Copy)]
pub struct CgStats {
    pub iterations: usize,
    pub relative_residual: f64,
}

/// Jacobi-preconditioned conjugate gradients for `A x = b`, starting from the
/// contents of `x`. `A` must be symmetric positive semidefinite with `b` in its
/// range.
pub fn conjugate_gradient(
    a: &SparseMatrix,
    b: &[f64],
    x: &mut [f64],
    rel_tol: f64,
    max_iter: usize,
) -> Result<CgStats> {
    cg(a, b, x, rel_tol, max_iter, false)
}

/// CG for a singular system whose kernel is the constants (pure Neumann
/// stiffness). The right-hand side is projected onto the range, and the
/// residual and search directions are kept orthogonal to the kernel so that
/// roundoff cannot accumulate there.
pub(crate) fn conjugate_gradient_singular(
    a: &SparseMatrix,
    b: &[f64],
    x: &mut [f64],
    rel_tol: f64,
    max_iter: usize,
) -> Result<CgStats> {
    cg(a, b, x, rel_tol, max_iter, true)
}

fn remove_mean(v: &mut [f64]) {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter_mut().for_each(|x| *x -= mean);
}

fn cg(
    a: &SparseMatrix,
    b: &[f64],
    x: &mut [f64],
    rel_tol: f64,
    max_iter: usize,
    singular: bool,
) -> Result<CgStats> {
    let n = a.n;
    let mut b_owned;
    let b = if singular {
        b_owned = b.to_vec();
        remove_mean(&mut b_owned);
        &b_owned[..]
    } else {
        b
    };
    let inv_diag: Vec<f64> = a
        .diagonal()
        .into_iter()
        .map(|d| if d > 0.0 { 1.0 / d } else { 1.0 })
        .collect();
    let bnorm = norm2(b);
    if bnorm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return Ok(CgStats {
            iterations: 0,
            relative_residual: 0.0,
        });
    }
    let mut r = a.mul_vec(x);
    for i in 0..n {
        r[i] = b[i] - r[i];
    }
    if singular {
        remove_mean(&mut r);
    }
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
    if singular {
        remove_mean(&mut z);
    }
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; n];
    let mut rel = norm2(&r) / bnorm;
    for it in 0..max_iter {
        if rel <= rel_tol {
            return Ok(CgStats {
                iterations: it,
                relative_residual: rel,
            });
        }
        a.mul_vec_into(&p, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            return Err(Error::numeric("CG breakdown: non-positive curvature"));
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        if singular {
            remove_mean(&mut r);
        }
        rel = norm2(&r) / bnorm;
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        if singular {
            remove_mean(&mut z);
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    if rel <= rel_tol {
        Ok(CgStats {
            iterations: max_iter,
            relative_residual: rel,
        })
    } else {
        Err(Error::Convergence {
            what: "conjugate gradient",
            iterations: max_iter,
            residual: rel,
        })
    }
}
