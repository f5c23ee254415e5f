//! Decreasing rearrangement of P1 mesh functions.
//!
//! On each element the linear interpolant has a superlevel area that is
//! quadratic in the level between consecutive vertex values, so the
//! distribution function `m(t) = |{u > t}|` is stored exactly: one quadratic per
//! interval between consecutive distinct nodal values (in the local variable
//! `τ = t − v_k`), plus jumps where elements are flat. Every integral of `u*`
//! is evaluated as a Stieltjes integral `∫ g(t) (−dm(t))`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::geometry::Mesh;
use crate::quadrature::gauss_legendre8;
use crate::special::RadialProfile;
use crate::{Error, Result};

/// Uniform measure samples kept for export and plotting.
pub const SAMPLE_POINTS: usize = 4096;

/// Tolerance for "≤" checks on FEM data after normalising to unit totals.
pub const FEM_CHECK_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Piece {
    c0: f64,
    c1: f64,
    c2: f64,
}

impl Piece {
    fn eval(&self, tau: f64) -> f64 {
        self.c0 + tau * (self.c1 + tau * self.c2)
    }

    /// `−m'(τ)`, the density of the level distribution.
    fn density(&self, tau: f64) -> f64 {
        -(self.c1 + 2.0 * self.c2 * tau)
    }
}

/// Exact decreasing rearrangement of a P1 function.
#[derive(Debug, Clone, PartialEq)]
pub struct RearrangedProfile {
    /// `|Ω|`.
    pub measure: f64,
    /// Distinct nodal values in increasing order.
    pub levels: Vec<f64>,
    pieces: Vec<Piece>,
    /// `m(v_k)`, right-continuous.
    at_level: Vec<f64>,
    /// `lim m(t)` as `t → v_k⁻` (`|Ω|` for the lowest level).
    below_level: Vec<f64>,
    /// `|{u > 0}|`.
    pub positive_measure: f64,
    /// `u*` on a uniform grid of `SAMPLE_POINTS` points in `[0, |Ω|]`.
    pub samples: Vec<f64>,
}

/// Builds the exact rearrangement of the P1 function with the given nodal values.
pub fn rearrange(mesh: &Mesh, nodal: &[f64]) -> Result<RearrangedProfile> {
    if mesh.num_elements() == 0 {
        return Err(Error::param("cannot rearrange on an empty mesh"));
    }
    if nodal.len() != mesh.num_nodes() {
        return Err(Error::param(format!(
            "expected {} nodal values, got {}",
            mesh.num_nodes(),
            nodal.len()
        )));
    }
    if nodal.iter().any(|v| !v.is_finite()) {
        return Err(Error::param("nodal values must be finite"));
    }
    let mut levels: Vec<f64> = nodal.to_vec();
    levels.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    levels.dedup();
    let index = |v: f64| {
        levels
            .binary_search_by(|x| x.partial_cmp(&v).expect("finite values"))
            .expect("nodal value is a level")
    };
    let n_int = levels.len() - 1;
    let mut pieces = vec![
        Piece {
            c0: 0.0,
            c1: 0.0,
            c2: 0.0
        };
        n_int
    ];
    // above[k]: area of elements lying entirely above interval k.
    let mut above_diff = vec![0.0; n_int + 1];
    let mut measure = 0.0;

    for (e, tri) in mesh.elements.iter().enumerate() {
        let area = mesh.element_area(e);
        measure += area;
        let mut v = [nodal[tri[0]], nodal[tri[1]], nodal[tri[2]]];
        v.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
        let [a, b, c] = v;
        let (ia, ib, ic) = (index(a), index(b), index(c));
        // Flat elements (ia == ic) only enter through the `above` sums, which
        // produces the jump of m at their level.
        // Fully above the intervals k < ia.
        above_diff[0] += area;
        above_diff[ia] -= area;
        for (k, piece) in pieces.iter_mut().enumerate().take(ic).skip(ia) {
            let base = levels[k];
            if k < ib {
                // Level between a and b: area·(1 − (t − a)²/((c − a)(b − a))).
                let d = (c - a) * (b - a);
                let delta = base - a;
                piece.c0 += area - area * delta * delta / d;
                piece.c1 -= 2.0 * area * delta / d;
                piece.c2 -= area / d;
            } else {
                // Level between b and c: area·(c − t)²/((c − a)(c − b)).
                let d = (c - a) * (c - b);
                let e = c - base;
                piece.c0 += area * e * e / d;
                piece.c1 -= 2.0 * area * e / d;
                piece.c2 += area / d;
            }
        }
    }
    let mut acc = 0.0;
    for (k, piece) in pieces.iter_mut().enumerate() {
        acc += above_diff[k];
        piece.c0 += acc;
    }

    let mut at_level = Vec::with_capacity(levels.len());
    let mut below_level = Vec::with_capacity(levels.len());
    for k in 0..levels.len() {
        below_level.push(if k == 0 {
            measure
        } else {
            pieces[k - 1].eval(levels[k] - levels[k - 1])
        });
        at_level.push(if k < n_int { pieces[k].c0 } else { 0.0 });
    }

    let mut profile = RearrangedProfile {
        measure,
        levels,
        pieces,
        at_level,
        below_level,
        positive_measure: 0.0,
        samples: Vec::new(),
    };
    profile.positive_measure = profile.distribution(0.0);
    let h = measure / (SAMPLE_POINTS - 1) as f64;
    profile.samples = (0..SAMPLE_POINTS)
        .map(|i| profile.value_at(i as f64 * h))
        .collect();
    Ok(profile)
}

/// Rearranges an eigenfunction after choosing its sign so that `|{u > 0}| ≤ |Ω|/2`.
/// Returns the profile and whether the sign was flipped.
pub fn rearrange_oriented(mesh: &Mesh, nodal: &[f64]) -> Result<(RearrangedProfile, bool)> {
    let prof = rearrange(mesh, nodal)?;
    if prof.positive_measure <= 0.5 * prof.measure {
        return Ok((prof, false));
    }
    let flipped: Vec<f64> = nodal.iter().map(|v| -v).collect();
    Ok((rearrange(mesh, &flipped)?, true))
}

impl RearrangedProfile {
    /// `m(t) = |{u > t}|`.
    pub fn distribution(&self, t: f64) -> f64 {
        let lv = &self.levels;
        if t < lv[0] {
            return self.measure;
        }
        if t >= lv[lv.len() - 1] {
            return 0.0;
        }
        let k = lv.partition_point(|&x| x <= t) - 1;
        self.pieces[k].eval(t - lv[k])
    }

    /// `u*(s) = sup{t : m(t) > s}` for `s ∈ [0, |Ω|]`.
    pub fn value_at(&self, s: f64) -> f64 {
        let lv = &self.levels;
        let top = lv.len() - 1;
        if s >= self.measure {
            return lv[0];
        }
        if s < 0.0 || s < self.below_level[top] {
            return lv[top];
        }
        // Largest level k with m just below v_k above s.
        let k = self.below_level.partition_point(|&m| m > s) - 1;
        if s >= self.at_level[k] || k == top {
            // Inside the jump at v_k.
            return lv[k];
        }
        // m(v_k) > s ≥ m(v_{k+1}⁻): invert the piece on (0, Δ].
        let piece = self.pieces[k];
        let width = lv[k + 1] - lv[k];
        let (mut lo, mut hi) = (0.0, width);
        let mut tau = 0.5 * width;
        for _ in 0..100 {
            let f = piece.eval(tau) - s;
            if f.abs() <= 1e-16 * self.measure {
                break;
            }
            if f > 0.0 {
                lo = tau;
            } else {
                hi = tau;
            }
            if hi - lo <= 1e-15 * width {
                break;
            }
            let slope = -piece.density(tau);
            let newton = if slope < 0.0 {
                tau - f / slope
            } else {
                f64::NAN
            };
            tau = if newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
        }
        lv[k] + tau
    }

    /// `∫_{t > t0} g(t) (−dm(t))`, including the jump at `t0` only if `inclusive`.
    fn stieltjes_above(&self, t0: f64, g: &impl Fn(f64) -> f64) -> f64 {
        let lv = &self.levels;
        let mut total = 0.0;
        for k in 0..lv.len() {
            // Jump at v_k: mass below_level[k] − at_level[k].
            if lv[k] > t0 {
                total += g(lv[k]) * (self.below_level[k] - self.at_level[k]);
            }
            if k + 1 < lv.len() && lv[k + 1] > t0 {
                total += self.piece_integral(k, t0.max(lv[k]), g);
            }
        }
        total
    }

    fn piece_integral(&self, k: usize, from: f64, g: &impl Fn(f64) -> f64) -> f64 {
        let base = self.levels[k];
        let piece = self.pieces[k];
        let to = self.levels[k + 1];
        let f = |t: f64| g(t) * piece.density(t - base);
        // g may have a kink at zero (|t|^q, t⁺^q), so split the panel there.
        if from < 0.0 && to > 0.0 {
            gauss_legendre8(from, 0.0, f) + gauss_legendre8(0.0, to, f)
        } else {
            gauss_legendre8(from, to, f)
        }
    }

    /// `∫₀^{|Ω|} u*(s) ds`.
    pub fn integral(&self) -> f64 {
        self.stieltjes_above(f64::NEG_INFINITY, &|t| t)
    }

    /// `∫₀^{|Ω|} |u*(s)|^q ds`.
    pub fn abs_power_integral(&self, q: f64) -> f64 {
        self.stieltjes_above(f64::NEG_INFINITY, &|t: f64| t.abs().powf(q))
    }

    /// `‖u⁺‖_{L^q} = (∫₀^{s̃} (u*)^q)^{1/q}`.
    pub fn lq_norm_positive(&self, q: f64) -> Result<f64> {
        if !(q > 0.0) || !q.is_finite() {
            return Err(Error::param(format!(
                "norm exponent must be positive, got {q}"
            )));
        }
        Ok(self.stieltjes_above(0.0, &|t: f64| t.powf(q)).powf(1.0 / q))
    }

    /// `s ↦ ∫₀^s (u*)^q` on `[0, s̃]`.
    pub fn cumulative_power(&self, q: f64) -> Result<CumulativePower<'_>> {
        if !(q > 0.0) || !q.is_finite() {
            return Err(Error::param(format!(
                "cumulative exponent must be positive, got {q}"
            )));
        }
        let lv = &self.levels;
        let g = |t: f64| t.max(0.0).powf(q);
        // above[k] = ∫_{t > v_k} g (−dm).
        let mut above = vec![0.0; lv.len()];
        for k in (0..lv.len() - 1).rev() {
            above[k] = above[k + 1]
                + g(lv[k + 1]) * (self.below_level[k + 1] - self.at_level[k + 1])
                + self.piece_integral(k, lv[k], &g);
        }
        Ok(CumulativePower {
            profile: self,
            q,
            above,
        })
    }
}

/// `U_q(s) = ∫₀^s (u*(t))^q dt` for `s ∈ [0, s̃]`.
#[derive(Debug, Clone)]
pub struct CumulativePower<'a> {
    profile: &'a RearrangedProfile,
    pub q: f64,
    above: Vec<f64>,
}

impl CumulativePower<'_> {
    pub fn at(&self, s: f64) -> f64 {
        let pr = self.profile;
        let s = s.clamp(0.0, pr.positive_measure);
        if s == 0.0 {
            return 0.0;
        }
        let t = pr.value_at(s);
        let g = |x: f64| x.max(0.0).powf(self.q);
        let lv = &pr.levels;
        let k = lv.partition_point(|&x| x <= t) - 1;
        let mut total = self.above[k];
        if lv[k] < t {
            // Remove the part of interval k below t.
            total -= pr.piece_integral(k, lv[k], &g) - pr.piece_integral(k, t, &g);
        }
        // Part of the level set {u = t} needed to reach measure s.
        total + g(t) * (s - pr.distribution(t))
    }

    /// `U_q(s̃) = ‖u⁺‖_q^q`.
    pub fn total(&self) -> f64 {
        self.at(self.profile.positive_measure)
    }
}

/// `V_q(s) = ∫₀^s (v*)^q` for the rescaled ball eigenfunction
/// `v*(s) = c·Ψ_p(ψ_p (s/L)^{1/n})` on `[0, L]`.
fn ball_cumulative(
    ball: &crate::special::CumulativeMoment<'_>,
    profile: &RadialProfile,
    length: f64,
    scale_q: f64,
    s: f64,
) -> f64 {
    let rho = profile.first_zero
        * (s / length)
            .clamp(0.0, 1.0)
            .powf(1.0 / f64::from(profile.n));
    scale_q * length * ball.at(rho)
}

/// Outcome of the cumulative comparison `U_q ≤ V_q` on `[0, L]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChitiReport {
    pub q: f64,
    pub length: f64,
    pub s_tilde: f64,
    /// `max (U_q − V_q)/U_q(s̃)` over the grid.
    pub max_violation: f64,
    pub s_at_max: f64,
    /// `U_q/U_q(s̃)` and `V_q/U_q(s̃)` at `s_at_max`.
    pub u_at_max: f64,
    pub v_at_max: f64,
}

impl ChitiReport {
    pub fn ok(&self, tol: f64) -> bool {
        self.max_violation <= tol && self.length <= self.s_tilde + tol
    }
}

/// Compares `U_q` against the ball profile scaled to the same `L^q` total,
/// on `grid + 1` uniform points of `[0, L]`.
pub fn chiti_check(
    u: &RearrangedProfile,
    ball: &RadialProfile,
    length: f64,
    q: f64,
    grid: usize,
) -> Result<ChitiReport> {
    if !(length > 0.0) || !length.is_finite() {
        return Err(Error::param(format!(
            "comparison length must be positive, got {length}"
        )));
    }
    if grid == 0 {
        return Err(Error::param("comparison grid needs at least one interval"));
    }
    let big_u = u.cumulative_power(q)?;
    let total = big_u.total();
    if !(total > 0.0) {
        return Err(Error::numeric("function has no positive part"));
    }
    let moment = ball.cumulative_moment(q);
    let scale_q = total / (length * moment.total());
    let mut report = ChitiReport {
        q,
        length,
        s_tilde: u.positive_measure,
        max_violation: f64::NEG_INFINITY,
        s_at_max: 0.0,
        u_at_max: 0.0,
        v_at_max: 0.0,
    };
    for i in 0..=grid {
        let s = length * i as f64 / grid as f64;
        let us = big_u.at(s) / total;
        let vs = ball_cumulative(&moment, ball, length, scale_q, s) / total;
        if us - vs > report.max_violation {
            report.max_violation = us - vs;
            report.s_at_max = s;
            report.u_at_max = us;
            report.v_at_max = vs;
        }
    }
    Ok(report)
}

/// Outcome of `‖u⁺‖_q ≤ C ‖u⁺‖_r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReverseHolderReport {
    pub q: f64,
    pub r: f64,
    pub constant: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// `(lhs − rhs)/lhs`.
    pub relative_gap: f64,
}

impl ReverseHolderReport {
    pub fn ok(&self, tol: f64) -> bool {
        self.relative_gap <= tol
    }
}

/// `C = ‖v‖_{L^q(B_R̄)} / ‖v‖_{L^r(B_R̄)} = L^{1/q − 1/r} f(q)/f(r)`.
pub fn reverse_holder_constant(ball: &RadialProfile, length: f64, q: f64, r: f64) -> Result<f64> {
    if !(r > 0.0) || !(q > r) {
        return Err(Error::param(format!(
            "reverse Hölder needs 0 < r < q, got q = {q}, r = {r}"
        )));
    }
    let log_fq = ball.power_moment(q).ln() / q;
    let log_fr = ball.power_moment(r).ln() / r;
    Ok(((1.0 / q - 1.0 / r) * length.ln() + log_fq - log_fr).exp())
}

/// Checks `‖u⁺‖_q ≤ C ‖u⁺‖_r` with the ball constant for comparison length `L`.
pub fn reverse_holder_check(
    u: &RearrangedProfile,
    ball: &RadialProfile,
    length: f64,
    q: f64,
    r: f64,
) -> Result<ReverseHolderReport> {
    let constant = reverse_holder_constant(ball, length, q, r)?;
    let lhs = u.lq_norm_positive(q)?;
    let rhs = constant * u.lq_norm_positive(r)?;
    Ok(ReverseHolderReport {
        q,
        r,
        constant,
        lhs,
        rhs,
        relative_gap: (lhs - rhs) / lhs,
    })
}
