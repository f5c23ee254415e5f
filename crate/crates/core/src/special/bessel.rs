//! Bessel functions of the first kind for real order `ν ≥ 0` and their zeros.
//!
//! Small arguments use the ascending series; larger ones use Miller's backward
//! recurrence normalised with `(x/2)^μ = Σ_k (μ+2k) Γ(μ+k)/k! · J_{μ+2k}(x)`.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::quadrature::bisect;
use crate::{Error, Result};

const SERIES_CUTOFF: f64 = 8.0;
const RESCALE: f64 = 1e200;

fn check(nu: f64, x: f64) -> Result<()> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(Error::param(format!("Bessel order must be >= 0, got {nu}")));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::param(format!(
            "Bessel argument must be >= 0, got {x}"
        )));
    }
    Ok(())
}

fn series(nu: f64, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = (nu * half.ln() - libm::lgamma(nu + 1.0)).exp();
    let mut sum = term;
    let q = -half * half;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * (k + nu));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && k > half {
            break;
        }
    }
    sum
}

fn miller(nu: f64, x: f64) -> f64 {
    let mu = nu - nu.floor();
    let target = nu.floor() as usize;
    let mut top = (x + nu).ceil() as usize + 60;
    top += top % 2;
    // Normalisation weights c_k for the even offsets 2k.
    let kmax = top / 2;
    let mut weights = Vec::with_capacity(kmax + 1);
    weights.push(libm::tgamma(mu + 1.0));
    let mut h = libm::tgamma(mu + 1.0);
    for k in 1..=kmax {
        if k > 1 {
            let kf = (k - 1) as f64;
            h *= (mu + kf) / (kf + 1.0);
        }
        weights.push((mu + 2.0 * k as f64) * h);
    }

    let mut above = 0.0; // J_{μ+j+1}
    let mut current = 1e-300; // J_{μ+j}
    let mut norm = 0.0;
    let mut at_target = 0.0;
    let mut j = top;
    loop {
        if j.is_multiple_of(2) {
            norm += weights[j / 2] * current;
        }
        if j == target {
            at_target = current;
        }
        if j == 0 {
            break;
        }
        let below = 2.0 * (mu + j as f64) / x * current - above;
        above = current;
        current = below;
        j -= 1;
        if current.abs() > RESCALE {
            current /= RESCALE;
            above /= RESCALE;
            norm /= RESCALE;
            at_target /= RESCALE;
        }
    }
    at_target * (0.5 * x).powf(mu) / norm
}

/// `J_ν(x)` for `ν ≥ 0`, `x ≥ 0`.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    check(nu, x)?;
    Ok(bessel_j_unchecked(nu, x))
}

pub(crate) fn bessel_j_unchecked(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    if x <= SERIES_CUTOFF {
        series(nu, x)
    } else {
        miller(nu, x)
    }
}

/// `J_ν'(x) = (ν/x) J_ν(x) − J_{ν+1}(x)`.
pub fn bessel_j_derivative(nu: f64, x: f64) -> Result<f64> {
    check(nu, x)?;
    if x == 0.0 {
        return Ok(match nu {
            1.0 => 0.5,
            n if n == 0.0 || n > 1.0 => 0.0,
            _ => f64::INFINITY,
        });
    }
    Ok(nu / x * bessel_j_unchecked(nu, x) - bessel_j_unchecked(nu + 1.0, x))
}

fn first_sign_change(
    start: f64,
    stop: f64,
    step: f64,
    f: impl Fn(f64) -> f64,
) -> Option<(f64, f64)> {
    let mut a = start;
    let fa = f(a);
    while a < stop {
        let b = a + step;
        if f(b).signum() != fa.signum() {
            return Some((a, b));
        }
        a = b;
    }
    None
}

/// First positive zero `j_{ν,1}` of `J_ν`.
pub fn bessel_first_zero(nu: f64) -> Result<f64> {
    check(nu, 0.0)?;
    // J_ν > 0 on (0, j_{ν,1}) and j_{ν,1} > ν.
    let start = nu.max(0.5);
    let f = |x: f64| bessel_j_unchecked(nu, x);
    let (a, b) = first_sign_change(start, start + 100.0, 0.1, f)
        .ok_or_else(|| Error::numeric(format!("no sign change of J_{nu} bracketed")))?;
    bisect(a, b, 1e-15, f).ok_or_else(|| Error::numeric("bisection bracket lost"))
}

/// First positive zero of `J_ν'` (for `ν = 0` this is `j_{1,1}`).
pub fn bessel_derivative_first_zero(nu: f64) -> Result<f64> {
    check(nu, 0.0)?;
    let f = |x: f64| nu / x * bessel_j_unchecked(nu, x) - bessel_j_unchecked(nu + 1.0, x);
    let start = if nu == 0.0 { 0.5 } else { (0.5 * nu).max(0.05) };
    let (a, b) = first_sign_change(start, start + 100.0, 0.05, f)
        .ok_or_else(|| Error::numeric(format!("no sign change of J'_{nu} bracketed")))?;
    bisect(a, b, 1e-15, f).ok_or_else(|| Error::numeric("bisection bracket lost"))
}
