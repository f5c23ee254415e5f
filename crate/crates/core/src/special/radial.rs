//! The normalised radial Dirichlet eigenfunction `Ψ_p` of the p-Laplacian on
//! balls of `ℝⁿ`, obtained by shooting from the origin.
//!
//! `Ψ_p` solves `−Δ_p Ψ = Ψ^{p−1}` radially with `Ψ(0) = 1`, `Ψ'(0) = 0`; its
//! first zero is `ψ_p`. The integration runs on the flux form
//! `W = −r^{n−1}|Ψ'|^{p−2}Ψ'`, `W' = r^{n−1}|Ψ|^{p−2}Ψ`, which stays regular
//! where `Ψ'` vanishes.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::ode::{Integrator, State};
use super::unit_ball_volume;
use crate::quadrature::simpson;
use crate::{Error, Result};

/// Number of uniform grid intervals on `[0, ψ_p]`.
pub const PROFILE_INTERVALS: usize = 4096;
/// Radius where the series start hands over to the integrator.
pub const SERIES_RADIUS: f64 = 1e-4;
const ODE_TOL: f64 = 1e-12;
const SHOOTING_CAP: f64 = 100.0;
/// Cells next to the zero handled by product integration (even).
const TAIL_CELLS: usize = 64;

/// Sampled `Ψ_p` on a uniform grid of `[0, ψ_p]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub p: f64,
    pub n: u32,
    /// First positive zero `ψ_p`.
    pub first_zero: f64,
    /// Grid spacing `ψ_p / PROFILE_INTERVALS`.
    pub step: f64,
    pub values: Vec<f64>,
    pub slopes: Vec<f64>,
}

struct Shooter {
    p: f64,
    n: f64,
    exponent: f64,
    series_c: f64,
}

impl Shooter {
    fn new(p: f64, n: u32) -> Self {
        let n = f64::from(n);
        Self {
            p,
            n,
            exponent: p / (p - 1.0),
            series_c: (p - 1.0) / p * n.powf(-1.0 / (p - 1.0)),
        }
    }

    fn rhs(&self, r: f64, y: &State) -> State {
        let (psi, w) = (y[0], y[1]);
        let rn1 = r.powf(self.n - 1.0);
        let slope = -w.signum() * (w.abs() / rn1).powf(1.0 / (self.p - 1.0));
        let source = rn1 * psi.abs().powf(self.p - 2.0) * psi;
        [slope, source]
    }

    /// Two-term expansion at the origin.
    fn series(&self, r: f64) -> State {
        let (c, e, n, p) = (self.series_c, self.exponent, self.n, self.p);
        let psi = 1.0 - c * r.powf(e) + c * c * n / (2.0 * (n + e)) * r.powf(2.0 * e);
        let w = r.powf(n) / n - (p - 1.0) * c * r.powf(n + e) / (n + e);
        [psi, w]
    }

    fn slope(&self, r: f64, w: f64) -> f64 {
        if r == 0.0 {
            return 0.0;
        }
        -w.signum() * (w.abs() / r.powf(self.n - 1.0)).powf(1.0 / (self.p - 1.0))
    }
}

/// Shoots `Ψ_p` for `p ≥ 2`, `n ≥ 2` and samples it on `PROFILE_INTERVALS + 1` points.
pub fn psi_profile(p: f64, n: u32) -> Result<RadialProfile> {
    if !(p >= 2.0) || !p.is_finite() {
        return Err(Error::param(format!(
            "radial profile needs p >= 2, got {p}"
        )));
    }
    if n < 2 {
        return Err(Error::param(format!(
            "radial profile needs n >= 2, got {n}"
        )));
    }
    let sh = Shooter::new(p, n);
    let f = |r: f64, y: &State| sh.rhs(r, y);
    let ig = Integrator {
        tol: ODE_TOL,
        max_steps: 1_000_000,
    };

    // Bracket the first zero.
    let mut t = SERIES_RADIUS;
    let mut y = sh.series(t);
    let mut h = 1e-3;
    let (lo, y_lo, hi) = loop {
        let (t_new, y_new, h_next) = ig.advance(&f, t, &y, h)?;
        if y_new[0] <= 0.0 {
            break (t, y, t_new);
        }
        if t_new > SHOOTING_CAP {
            return Err(Error::numeric(format!(
                "no sign change of Psi_p before r = {SHOOTING_CAP} (p = {p}, n = {n})"
            )));
        }
        t = t_new;
        y = y_new;
        h = h_next;
    };

    // Bisection on restarted integrations from the last positive state.
    let (mut a, mut b) = (lo, hi);
    let (mut ya, mut yb) = (y_lo, y_lo);
    for _ in 0..100 {
        if b - a <= 1e-14 * b {
            break;
        }
        let mid = 0.5 * (a + b);
        let mut hh = mid - a;
        let ym = ig.integrate_to(&f, a, ya, mid, &mut hh)?;
        if ym[0] > 0.0 {
            a = mid;
            ya = ym;
        } else {
            b = mid;
            yb = ym;
        }
    }
    let _ = yb;
    let psi = 0.5 * (a + b);
    let mut hh = psi - a;
    let y_end = if psi > a {
        ig.integrate_to(&f, a, ya, psi, &mut hh)?
    } else {
        ya
    };

    // Sample on the uniform grid.
    let step = psi / PROFILE_INTERVALS as f64;
    let mut values = Vec::with_capacity(PROFILE_INTERVALS + 1);
    let mut slopes = Vec::with_capacity(PROFILE_INTERVALS + 1);
    let mut t = SERIES_RADIUS;
    let mut y = sh.series(t);
    let mut h = 1e-3;
    for i in 0..=PROFILE_INTERVALS {
        let r = i as f64 * step;
        if i == PROFILE_INTERVALS {
            values.push(0.0);
            slopes.push(sh.slope(psi, y_end[1]));
        } else if r <= SERIES_RADIUS {
            let s = sh.series(r);
            values.push(s[0]);
            slopes.push(sh.slope(r, s[1]));
        } else {
            y = ig.integrate_to(&f, t, y, r, &mut h)?;
            t = r;
            values.push(y[0]);
            slopes.push(sh.slope(r, y[1]));
        }
    }
    Ok(RadialProfile {
        p,
        n,
        first_zero: psi,
        step,
        values,
        slopes,
    })
}

impl RadialProfile {
    /// `λ₁(B₁) = ψ_p^p`.
    pub fn lambda1_unit_ball(&self) -> f64 {
        self.first_zero.powf(self.p)
    }

    /// `Ψ_p(r)` by cubic Hermite interpolation; zero beyond `ψ_p`.
    pub fn value_at(&self, r: f64) -> f64 {
        let r = r.abs();
        if r >= self.first_zero {
            return 0.0;
        }
        let x = r / self.step;
        let i = (x.floor() as usize).min(PROFILE_INTERVALS - 1);
        let t = x - i as f64;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (d0, d1) = (self.slopes[i] * self.step, self.slopes[i + 1] * self.step);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * d0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * d1
    }

    fn radial_weight(&self, r: f64) -> f64 {
        f64::from(self.n) * r.powi(self.n as i32 - 1) / self.first_zero.powi(self.n as i32)
    }

    /// `(n/ψ_p^n) ∫₀^{ψ_p} t^{n−1} Ψ_p(t)^s dt`, the mean of `Ψ_p^s` over the unit-measure ball.
    ///
    /// Composite Simpson away from the zero. On the last `TAIL_CELLS` cells
    /// `Ψ_p(t) = (ψ_p − t)·G(t)` with `G` smooth, so the smooth factor is
    /// interpolated quadratically per cell pair and integrated against
    /// `(ψ_p − t)^s` exactly.
    pub fn power_moment(&self, s: f64) -> f64 {
        let nn = PROFILE_INTERVALS;
        let h = self.step;
        let body: Vec<f64> = (0..=nn - TAIL_CELLS)
            .map(|i| self.radial_weight(i as f64 * h) * self.values[i].powf(s))
            .collect();
        let mut total = simpson(&body, h);
        // Smooth factor at distance j·h from the zero.
        let g = |j: usize| {
            let i = nn - j;
            let big_g = if j == 0 {
                -self.slopes[nn]
            } else {
                self.values[i] / (j as f64 * h)
            };
            self.radial_weight(i as f64 * h) * big_g.powf(s)
        };
        for pair in 0..TAIL_CELLS / 2 {
            let j0 = 2 * pair;
            let x0 = j0 as f64 * h;
            let (g0, g1, g2) = (g(j0), g(j0 + 1), g(j0 + 2));
            // g(x0 + u) ≈ g0 + a u + b u² on u ∈ [0, 2h].
            let a = (-3.0 * g0 + 4.0 * g1 - g2) / (2.0 * h);
            let b = (g0 - 2.0 * g1 + g2) / (2.0 * h * h);
            // Moments ∫ x^s (x − x0)^k dx over [x0, x0 + 2h].
            let x1 = x0 + 2.0 * h;
            let m = |k: f64| (x1.powf(s + k) - x0.powf(s + k)) / (s + k);
            let (m0, m1, m2) = (m(1.0), m(2.0), m(3.0));
            let u1 = m1 - x0 * m0;
            let u2 = m2 - 2.0 * x0 * m1 + x0 * x0 * m0;
            total += g0 * m0 + a * u1 + b * u2;
        }
        total
    }

    /// `∫₀^ρ (n/ψ_p^n) t^{n−1} Ψ_p(t)^q dt` for `0 ≤ ρ ≤ ψ_p`, by Simpson
    /// panels on the grid (Hermite midpoints) plus a partial last panel.
    pub fn cumulative_moment(&self, q: f64) -> CumulativeMoment<'_> {
        let mut table = Vec::with_capacity(PROFILE_INTERVALS + 1);
        table.push(0.0);
        let mut acc = 0.0;
        for i in 0..PROFILE_INTERVALS {
            let a = i as f64 * self.step;
            acc += self.panel(a, a + self.step, q);
            table.push(acc);
        }
        CumulativeMoment {
            profile: self,
            q,
            table,
        }
    }

    fn panel(&self, a: f64, b: f64, q: f64) -> f64 {
        let g = |t: f64| self.radial_weight(t) * self.value_at(t).max(0.0).powf(q);
        (b - a) / 6.0 * (g(a) + 4.0 * g(0.5 * (a + b)) + g(b))
    }

    /// `λ₁(B_R) = ψ_p^p R^{−p}`.
    pub fn lambda1_ball(&self, radius: f64) -> f64 {
        self.lambda1_unit_ball() * radius.powf(-self.p)
    }

    /// First Dirichlet eigenvalue of the ball with measure `area`.
    pub fn lambda1_sharp(&self, area: f64) -> f64 {
        let omega = unit_ball_volume(self.n);
        self.lambda1_unit_ball() * (omega / area).powf(self.p / f64::from(self.n))
    }

    /// Power mean `f(s) = (power_moment(s))^{1/s}` for `s > 0`.
    pub fn f_power_mean(&self, s: f64) -> Result<f64> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::param(format!("power mean needs s > 0, got {s}")));
        }
        Ok((self.power_moment(s).ln() / s).exp())
    }

    /// `(f(r)/f(q))^{pqr/(n(q−r))}` for `0 < r < q`, evaluated in log form.
    pub fn sup_ratio(&self, r: f64, q: f64) -> Result<f64> {
        if !(r > 0.0) || !(q > r) || !q.is_finite() {
            return Err(Error::param(format!(
                "sup ratio needs 0 < r < q, got r = {r}, q = {q}"
            )));
        }
        let log_fr = self.power_moment(r).ln() / r;
        let log_fq = self.power_moment(q).ln() / q;
        let exponent = self.p * q * r / (f64::from(self.n) * (q - r));
        Ok((exponent * (log_fr - log_fq)).exp())
    }
}

/// Cumulative radial moment table for a fixed exponent `q`.
#[derive(Debug, Clone)]
pub struct CumulativeMoment<'a> {
    profile: &'a RadialProfile,
    q: f64,
    table: Vec<f64>,
}

impl CumulativeMoment<'_> {
    pub fn total(&self) -> f64 {
        *self.table.last().expect("table is non-empty")
    }

    pub fn at(&self, rho: f64) -> f64 {
        let pr = self.profile;
        if rho <= 0.0 {
            return 0.0;
        }
        if rho >= pr.first_zero {
            return self.total();
        }
        let i = ((rho / pr.step).floor() as usize).min(PROFILE_INTERVALS - 1);
        let a = i as f64 * pr.step;
        self.table[i] + pr.panel(a, rho, self.q)
    }
}
