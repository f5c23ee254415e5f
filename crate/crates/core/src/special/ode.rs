//! Dormand–Prince 5(4) integrator for small autonomous-in-form systems.

#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

pub(crate) type State = [f64; 2];

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Difference between the 5th- and 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy(y: &State, terms: &[(f64, &State)], h: f64) -> State {
    let mut out = *y;
    for (c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

/// One Dormand–Prince step; returns the 5th-order state and the error estimate.
fn step(f: &impl Fn(f64, &State) -> State, t: f64, y: &State, h: f64) -> (State, State) {
    let k1 = f(t, y);
    let k2 = f(t + C2 * h, &axpy(y, &[(A21, &k1)], h));
    let k3 = f(t + C3 * h, &axpy(y, &[(A31, &k1), (A32, &k2)], h));
    let k4 = f(
        t + C4 * h,
        &axpy(y, &[(A41, &k1), (A42, &k2), (A43, &k3)], h),
    );
    let k5 = f(
        t + C5 * h,
        &axpy(y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], h),
    );
    let k6 = f(
        t + h,
        &axpy(
            y,
            &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            h,
        ),
    );
    let y5 = axpy(
        y,
        &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
        h,
    );
    let k7 = f(t + h, &y5);
    let mut err = [0.0; 2];
    for i in 0..2 {
        err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
    }
    (y5, err)
}

/// Adaptive integrator with mixed absolute/relative tolerance.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Integrator {
    pub tol: f64,
    pub max_steps: usize,
}

impl Integrator {
    fn error_norm(&self, y: &State, y_new: &State, err: &State) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..2 {
            let scale = self.tol * (1.0 + y[i].abs().max(y_new[i].abs()));
            worst = worst.max(err[i].abs() / scale);
        }
        worst
    }

    /// Attempts one adaptive step of at most `h`; returns `(t_new, y_new, h_next)`.
    pub fn advance(
        &self,
        f: &impl Fn(f64, &State) -> State,
        t: f64,
        y: &State,
        mut h: f64,
    ) -> Result<(f64, State, f64)> {
        for _ in 0..100 {
            let (y_new, err) = step(f, t, y, h);
            let norm = self.error_norm(y, &y_new, &err);
            if !norm.is_finite() {
                h *= 0.25;
                continue;
            }
            if norm <= 1.0 {
                let grow = if norm == 0.0 {
                    5.0
                } else {
                    (0.9 * norm.powf(-0.2)).min(5.0)
                };
                return Ok((t + h, y_new, h * grow.max(0.2)));
            }
            h *= (0.9 * norm.powf(-0.2)).max(0.1);
            if h < 1e-14 * t.abs().max(1e-300) {
                break;
            }
        }
        Err(Error::numeric("ODE step size underflow"))
    }

    /// Integrates from `t0` to exactly `t1`; `h` carries the step-size suggestion.
    pub fn integrate_to(
        &self,
        f: &impl Fn(f64, &State) -> State,
        t0: f64,
        y0: State,
        t1: f64,
        h: &mut f64,
    ) -> Result<State> {
        let mut t = t0;
        let mut y = y0;
        let mut steps = 0;
        while t < t1 {
            let remaining = t1 - t;
            let last = *h >= remaining;
            let trial = if last { remaining } else { *h };
            let (t_new, y_new, h_next) = self.advance(f, t, &y, trial)?;
            let accepted_h = t_new - t;
            y = y_new;
            t = if last && accepted_h == remaining {
                t1
            } else {
                t_new
            };
            if !(last && accepted_h == remaining) {
                *h = h_next;
            } else {
                *h = h_next.max(*h);
            }
            steps += 1;
            if steps > self.max_steps {
                return Err(Error::numeric("ODE integration exceeded step budget"));
            }
        }
        Ok(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_period() {
        let f = |_t: f64, y: &State| [y[1], -y[0]];
        let ig = Integrator {
            tol: 1e-12,
            max_steps: 100_000,
        };
        let mut h = 0.01;
        let y = ig
            .integrate_to(&f, 0.0, [1.0, 0.0], 2.0 * core::f64::consts::PI, &mut h)
            .unwrap();
        assert!((y[0] - 1.0).abs() < 1e-10);
        assert!(y[1].abs() < 1e-10);
    }
}
