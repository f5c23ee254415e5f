use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::sparse::{conjugate_gradient, conjugate_gradient_singular, dot, norm2, SparseMatrix};
use super::{assemble_mass, assemble_stiffness};
use crate::geometry::{EdgeTag, Mesh};
use crate::{Error, Result};

/// Boundary condition attached to an eigenpair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryCondition {
    Neumann,
    Dirichlet,
    /// Zero on the edges carrying the given tag, natural elsewhere.
    MixedDirichletNeumann(EdgeTag),
}

impl BoundaryCondition {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryCondition::Neumann => "neumann",
            BoundaryCondition::Dirichlet => "dirichlet",
            BoundaryCondition::MixedDirichletNeumann(_) => "mixed_dn",
        }
    }
}

/// First eigenpair of a discrete Laplacian problem.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub eigenvalue: f64,
    /// Nodal values on the full mesh (zero on constrained nodes), `vᵀMv = 1`.
    pub eigenvector: Vec<f64>,
    pub bc: BoundaryCondition,
    /// `‖Kv − λMv‖₂ / ‖Mv‖₂`.
    pub residual: f64,
    pub iterations: usize,
}

/// Inverse-iteration settings.
#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    /// Stop once the relative eigenvalue change drops below this...
    pub eig_rel_tol: f64,
    /// ...and the residual is below this.
    pub residual_tol: f64,
    pub max_iterations: usize,
    pub cg_rel_tol: f64,
    pub cg_max_iterations: usize,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            eig_rel_tol: 1e-10,
            residual_tol: 1e-9,
            max_iterations: 10_000,
            cg_rel_tol: 1e-13,
            cg_max_iterations: 20_000,
            seed: 42,
        }
    }
}

/// Order-`order` Richardson extrapolation from estimates at `h` and `h/2`.
pub fn richardson(coarse: f64, fine: f64, order: u32) -> f64 {
    let f = f64::from(1u32 << order);
    (f * fine - coarse) / (f - 1.0)
}

fn start_vector(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// Removes the M-weighted mean so that `1ᵀ M v = 0`.
fn deflate_constants(v: &mut [f64], mass_ones: &[f64], total_mass: f64) {
    let c = dot(mass_ones, v) / total_mass;
    v.iter_mut().for_each(|x| *x -= c);
}

/// Shift-free inverse iteration on `K v = λ M v`, optionally restricted to the
/// M-orthogonal complement of the constants.
fn inverse_iteration(
    k: &SparseMatrix,
    m: &SparseMatrix,
    deflate: bool,
    cfg: &SolverConfig,
) -> Result<(f64, Vec<f64>, f64, usize)> {
    let n = k.n;
    if n == 0 {
        return Err(Error::param("eigenproblem has no free nodes"));
    }
    let ones = vec![1.0; n];
    let mass_ones = m.mul_vec(&ones);
    let total_mass: f64 = mass_ones.iter().sum();

    let mut v = start_vector(n, cfg.seed);
    if deflate {
        deflate_constants(&mut v, &mass_ones, total_mass);
    }
    let mut mv = m.mul_vec(&v);
    let scale = dot(&v, &mv).sqrt();
    v.iter_mut().for_each(|x| *x /= scale);
    let mut lambda = k.bilinear(&v, &v);
    let mut kv = vec![0.0; n];
    let mut residual = f64::INFINITY;

    for it in 1..=cfg.max_iterations {
        m.mul_vec_into(&v, &mut mv);
        // Warm start: x ≈ v/λ leaves only the non-converged components for CG.
        let mut x: Vec<f64> = v
            .iter()
            .map(|vi| vi / lambda.max(f64::MIN_POSITIVE))
            .collect();
        if deflate {
            conjugate_gradient_singular(k, &mv, &mut x, cfg.cg_rel_tol, cfg.cg_max_iterations)?;
        } else {
            conjugate_gradient(k, &mv, &mut x, cfg.cg_rel_tol, cfg.cg_max_iterations)?;
        }
        if deflate {
            deflate_constants(&mut x, &mass_ones, total_mass);
        }
        m.mul_vec_into(&x, &mut mv);
        let xm = dot(&x, &mv).sqrt();
        if !(xm > 0.0) || !xm.is_finite() {
            return Err(Error::numeric("inverse iteration collapsed to zero"));
        }
        x.iter_mut().for_each(|xi| *xi /= xm);
        mv.iter_mut().for_each(|y| *y /= xm);
        k.mul_vec_into(&x, &mut kv);
        let new_lambda = dot(&x, &kv);
        let r: Vec<f64> = kv
            .iter()
            .zip(&mv)
            .map(|(a, b)| a - new_lambda * b)
            .collect();
        residual = norm2(&r) / norm2(&mv);
        let change = (new_lambda - lambda).abs() / new_lambda.abs();
        lambda = new_lambda;
        v = x;
        if change <= cfg.eig_rel_tol && residual <= cfg.residual_tol {
            return Ok((lambda, v, residual, it));
        }
    }
    Err(Error::Convergence {
        what: "inverse iteration",
        iterations: cfg.max_iterations,
        residual,
    })
}

/// Makes the entry of largest magnitude positive.
fn fix_sign(v: &mut [f64]) {
    let pivot = v.iter().copied().fold(
        0.0f64,
        |best, x| if x.abs() > best.abs() { x } else { best },
    );
    if pivot < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

fn solve_constrained(
    mesh: &Mesh,
    constrained: &[usize],
    bc: BoundaryCondition,
    cfg: &SolverConfig,
) -> Result<EigenPair> {
    let k = assemble_stiffness(mesh)?;
    let m = assemble_mass(mesh)?;
    let mut is_fixed = vec![false; mesh.num_nodes()];
    for &i in constrained {
        is_fixed[i] = true;
    }
    let free: Vec<usize> = (0..mesh.num_nodes()).filter(|&i| !is_fixed[i]).collect();
    let kf = k.principal_submatrix(&free);
    let mf = m.principal_submatrix(&free);
    let (eigenvalue, vf, residual, iterations) = inverse_iteration(&kf, &mf, false, cfg)?;
    let mut eigenvector = vec![0.0; mesh.num_nodes()];
    for (&i, &x) in free.iter().zip(&vf) {
        eigenvector[i] = x;
    }
    fix_sign(&mut eigenvector);
    Ok(EigenPair {
        eigenvalue,
        eigenvector,
        bc,
        residual,
        iterations,
    })
}

/// First nontrivial Neumann eigenvalue `μ₁` with a mean-zero eigenvector.
pub fn solve_neumann_mu1(mesh: &Mesh, cfg: &SolverConfig) -> Result<EigenPair> {
    let k = assemble_stiffness(mesh)?;
    let m = assemble_mass(mesh)?;
    let (eigenvalue, mut eigenvector, residual, iterations) = inverse_iteration(&k, &m, true, cfg)?;
    fix_sign(&mut eigenvector);
    Ok(EigenPair {
        eigenvalue,
        eigenvector,
        bc: BoundaryCondition::Neumann,
        residual,
        iterations,
    })
}

/// First Dirichlet eigenvalue: every node on an [`EdgeTag::Outer`] edge is fixed to zero.
pub fn solve_dirichlet_lambda1(mesh: &Mesh, cfg: &SolverConfig) -> Result<EigenPair> {
    let fixed = mesh.tagged_nodes(EdgeTag::Outer);
    solve_constrained(mesh, &fixed, BoundaryCondition::Dirichlet, cfg)
}

/// First eigenvalue with zero data on the edges tagged `dirichlet_tag` and
/// natural (Neumann) conditions on the rest of the boundary.
pub fn solve_mixed_dn(
    mesh: &Mesh,
    dirichlet_tag: EdgeTag,
    cfg: &SolverConfig,
) -> Result<EigenPair> {
    let fixed = mesh.tagged_nodes(dirichlet_tag);
    if fixed.is_empty() {
        return Err(Error::param(format!(
            "mesh has no edges tagged {:?}",
            dirichlet_tag.as_str()
        )));
    }
    solve_constrained(
        mesh,
        &fixed,
        BoundaryCondition::MixedDirichletNeumann(dirichlet_tag),
        cfg,
    )
}
