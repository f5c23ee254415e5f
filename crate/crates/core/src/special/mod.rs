//! Special functions: Bessel functions and zeros, the radial profile `Ψ_p`,
//! ball eigenvalues and the power-mean function `f`.

mod bessel;
mod ode;
mod radial;

use core::f64::consts::PI;

pub use bessel::{bessel_derivative_first_zero, bessel_first_zero, bessel_j, bessel_j_derivative};
pub use radial::{psi_profile, CumulativeMoment, RadialProfile, PROFILE_INTERVALS, SERIES_RADIUS};

/// Volume `ω_n = π^{n/2} / Γ(n/2 + 1)` of the unit ball in `ℝⁿ`.
#[allow(unused_imports)]
use num_traits::Float;

pub fn unit_ball_volume(n: u32) -> f64 {
    let half = 0.5 * f64::from(n);
    PI.powf(half) / libm::tgamma(half + 1.0)
}

/// Classical isoperimetric constant `K_n(ℝⁿ) = n ω_n^{1/n}`.
pub fn euclidean_isoperimetric_constant(n: u32) -> f64 {
    f64::from(n) * unit_ball_volume(n).powf(1.0 / f64::from(n))
}

/// `j_{0,1}`, the first zero of `J₀`.
pub fn j01() -> f64 {
    bessel_first_zero(0.0).expect("J0 has a first zero")
}
