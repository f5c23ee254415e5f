//! First eigenvalue of the singular weighted problem
//! `−(|φ'|^{γ−2}φ')' = σ |φ|^{γ−2}φ s^{−β}` on `(0, A)`, `φ(0) = 0`, `φ'(A) = 0`,
//! i.e. `σ₁(0, A) = min ∫|φ'|^γ / ∫|φ|^γ s^{−β}`.
//!
//! The minimiser is approximated by continuous piecewise-linear functions on
//! the graded grid `s_i = A (i/N)³`. The discrete problem is solved by
//! nonlinear inverse iteration: given `φ`, the new iterate minimises
//! `∫|φ'|^γ/γ − ∫ s^{−β}|φ_old|^{γ−2}φ_old φ`, which on a 1D P1 space has the
//! closed-form solution `|φ'|^{γ−2}φ' = flux`. For `γ = 2` this is ordinary
//! inverse iteration.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::quadrature::gauss_legendre8;
use crate::special::RadialProfile;
use crate::{Error, Result};

pub const DEFAULT_CELLS: usize = 4096;
const REL_TOL: f64 = 1e-10;
const MAX_ITERATIONS: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SturmProblem {
    pub gamma: f64,
    pub beta: f64,
    /// Interval length `A`.
    pub length: f64,
    pub cells: usize,
}

/// Discrete first eigenpair.
#[derive(Debug, Clone, PartialEq)]
pub struct SturmSolution {
    pub sigma: f64,
    pub grid: Vec<f64>,
    /// Nodal values, `φ(0) = 0`, normalised to `∫|φ|^γ s^{−β} = 1`.
    pub phi: Vec<f64>,
    pub iterations: usize,
}

impl SturmProblem {
    /// The instance attached to the p-Laplacian in dimension `n`:
    /// `γ = p/(p−1)`, `β = γ(1 − 1/n)`.
    pub fn for_laplacian(p: f64, n: u32, length: f64) -> Self {
        let gamma = p / (p - 1.0);
        Self {
            gamma,
            beta: gamma * (1.0 - 1.0 / f64::from(n)),
            length,
            cells: DEFAULT_CELLS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 1.0) || !self.gamma.is_finite() {
            return Err(Error::param(format!(
                "gamma must exceed 1, got {}",
                self.gamma
            )));
        }
        if !(self.beta > 0.0 && self.beta < self.gamma) {
            return Err(Error::param(format!(
                "beta must lie in (0, gamma), got beta = {}, gamma = {}",
                self.beta, self.gamma
            )));
        }
        if !(self.length > 0.0) || !self.length.is_finite() {
            return Err(Error::param(format!(
                "interval length must be positive, got {}",
                self.length
            )));
        }
        if self.cells < 2 {
            return Err(Error::param("need at least two cells"));
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        let n = self.cells as f64;
        (0..=self.cells)
            .map(|i| self.length * (i as f64 / n).powi(3))
            .collect()
    }

    /// Lower bound `A^{β−γ}(γ−1)^γ/γ^γ` from the weighted Hardy inequality.
    pub fn hardy_bound(&self) -> f64 {
        let g = self.gamma;
        self.length.powf(self.beta - g) * (g - 1.0).powf(g) / g.powf(g)
    }
}

/// `∫ |φ'|^γ` for a piecewise-linear `φ` on `grid`.
pub fn gradient_power_integral(grid: &[f64], phi: &[f64], gamma: f64) -> f64 {
    grid.windows(2)
        .zip(phi.windows(2))
        .map(|(s, f)| {
            let h = s[1] - s[0];
            h * ((f[1] - f[0]) / h).abs().powf(gamma)
        })
        .sum()
}

/// `∫ |φ|^γ s^{−β}` for a piecewise-linear `φ` on `grid` with `grid[0] ≥ 0`.
pub fn weighted_power_integral(grid: &[f64], phi: &[f64], gamma: f64, beta: f64) -> f64 {
    grid.windows(2)
        .zip(phi.windows(2))
        .map(|(s, f)| cell_integral(s[0], s[1], f[0], f[1], |v| v.abs().powf(gamma), gamma, beta))
        .sum()
}

/// `∫_{a}^{b} g(φ(s)) s^{−β} ds` for linear `φ`, with `g` homogeneous of degree
/// `degree` (exact on a cell starting at zero where `φ(0) = 0`).
fn cell_integral(
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    g: impl Fn(f64) -> f64,
    degree: f64,
    beta: f64,
) -> f64 {
    let lin = |s: f64| fa + (fb - fa) * (s - a) / (b - a);
    if a == 0.0 && fa == 0.0 {
        // φ = fb·s/b, so g(φ) s^{−β} = g(fb) b^{−degree} s^{degree−β}.
        return g(fb) * b.powf(1.0 - beta) / (degree - beta + 1.0);
    }
    let integrand = |s: f64| g(lin(s)) * s.powf(-beta);
    if fa * fb < 0.0 {
        let root = a + (b - a) * fa / (fa - fb);
        gauss_legendre8(a, root, integrand) + gauss_legendre8(root, b, integrand)
    } else {
        gauss_legendre8(a, b, integrand)
    }
}

/// `b_j = ∫ s^{−β}|φ|^{γ−2}φ e_j` against the hat functions `e_j`, `j = 1..=N`.
fn load_vector(grid: &[f64], phi: &[f64], gamma: f64, beta: f64, out: &mut [f64]) {
    out.iter_mut().for_each(|x| *x = 0.0);
    let odd = |v: f64| v.abs().powf(gamma - 2.0) * v;
    for i in 1..grid.len() {
        let (a, b) = (grid[i - 1], grid[i]);
        let (fa, fb) = (phi[i - 1], phi[i]);
        if a == 0.0 {
            // Only the right hat is nonzero and φ ∝ hat there.
            out[i] += odd(fb) * b.powf(1.0 - beta) / (gamma - beta + 1.0);
            continue;
        }
        let h = b - a;
        let lin = |s: f64| fa + (fb - fa) * (s - a) / h;
        let w = |s: f64| odd(lin(s)) * s.powf(-beta);
        out[i - 1] += gauss_legendre8(a, b, |s| w(s) * (b - s) / h);
        out[i] += gauss_legendre8(a, b, |s| w(s) * (s - a) / h);
    }
}

/// Computes `σ₁(0, A)` and its eigenfunction.
pub fn solve(problem: &SturmProblem) -> Result<SturmSolution> {
    problem.validate()?;
    let SturmProblem { gamma, beta, .. } = *problem;
    let grid = problem.grid();
    let n = problem.cells;
    // Positive start φ(s) = s.
    let mut phi = grid.clone();
    normalise(&grid, &mut phi, gamma, beta);
    let mut sigma = gradient_power_integral(&grid, &phi, gamma);
    let mut load = vec![0.0; n + 1];
    for it in 1..=MAX_ITERATIONS {
        load_vector(&grid, &phi, gamma, beta, &mut load);
        let mut flux = 0.0;
        let mut slopes = vec![0.0; n + 1];
        for i in (1..=n).rev() {
            flux += load[i];
            slopes[i] = flux.signum() * flux.abs().powf(1.0 / (gamma - 1.0));
        }
        phi[0] = 0.0;
        for i in 1..=n {
            phi[i] = phi[i - 1] + slopes[i] * (grid[i] - grid[i - 1]);
        }
        let weight = normalise(&grid, &mut phi, gamma, beta);
        if !(weight > 0.0) || !weight.is_finite() {
            return Err(Error::numeric("Sturm iteration collapsed"));
        }
        let next = gradient_power_integral(&grid, &phi, gamma);
        let change = (next - sigma).abs() / next;
        sigma = next;
        if change <= REL_TOL {
            return Ok(SturmSolution {
                sigma,
                grid,
                phi,
                iterations: it,
            });
        }
    }
    Err(Error::Convergence {
        what: "Sturm inverse iteration",
        iterations: MAX_ITERATIONS,
        residual: sigma,
    })
}

/// Scales `φ` to unit weighted norm; returns the norm before scaling.
fn normalise(grid: &[f64], phi: &mut [f64], gamma: f64, beta: f64) -> f64 {
    let w = weighted_power_integral(grid, phi, gamma, beta);
    let scale = w.powf(-1.0 / gamma);
    phi.iter_mut().for_each(|v| *v *= scale);
    w
}

/// Convenience wrapper returning only `σ₁`.
pub fn sigma1(problem: &SturmProblem) -> Result<f64> {
    Ok(solve(problem)?.sigma)
}

/// `L = (K/n)ⁿ (λ₁(B₁)/μ₁)^{n/p}`, the measure of the comparison ball.
pub fn comparison_length(ball: &RadialProfile, k: f64, mu1: f64) -> f64 {
    let n = f64::from(ball.n);
    (k / n).powf(n) * (ball.lambda1_unit_ball() / mu1).powf(n / ball.p)
}

/// Result of matching `σ₁(0, L)` against the Neumann data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsistencyReport {
    pub length: f64,
    pub sigma_target: f64,
    pub sigma_computed: f64,
    pub rel_err: f64,
    pub hardy_bound: f64,
}

/// The eigenvalue of the transformed ball problem: `(μ₁/K^p)^{1/(p−1)}`,
/// which is `μ₁/K²` for `p = 2`.
pub fn sigma_target(p: f64, k: f64, mu1: f64) -> f64 {
    (mu1 / k.powf(p)).powf(1.0 / (p - 1.0))
}

/// Solves the Sturm problem on `(0, L)` and compares with [`sigma_target`].
pub fn sturm_consistency(ball: &RadialProfile, k: f64, mu1: f64) -> Result<ConsistencyReport> {
    if !(k > 0.0) || !(mu1 > 0.0) {
        return Err(Error::param(format!(
            "need K > 0 and mu1 > 0, got K = {k}, mu1 = {mu1}"
        )));
    }
    let length = comparison_length(ball, k, mu1);
    let problem = SturmProblem::for_laplacian(ball.p, ball.n, length);
    let sigma_computed = sigma1(&problem)?;
    let target = sigma_target(ball.p, k, mu1);
    Ok(ConsistencyReport {
        length,
        sigma_target: target,
        sigma_computed,
        rel_err: (sigma_computed - target).abs() / target,
        hardy_bound: problem.hardy_bound(),
    })
}

/// Margins of `L ≤ min{s̃, |Ω| − s̃, |Ω|/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LengthBoundReport {
    pub length: f64,
    pub margin_support: f64,
    pub margin_complement: f64,
    pub margin_half: f64,
}

/// Tolerance on the margins of [`LengthBoundReport`].
pub const LENGTH_MARGIN_TOL: f64 = 1e-3;

impl LengthBoundReport {
    pub fn min_margin(&self) -> f64 {
        self.margin_support
            .min(self.margin_complement)
            .min(self.margin_half)
    }

    pub fn ok(&self) -> bool {
        self.min_margin() >= -LENGTH_MARGIN_TOL
    }
}

pub fn check_length_bound(length: f64, s_tilde: f64, area: f64) -> LengthBoundReport {
    LengthBoundReport {
        length,
        margin_support: s_tilde - length,
        margin_complement: area - s_tilde - length,
        margin_half: 0.5 * area - length,
    }
}
