//! Small quadrature and scalar root/extremum helpers shared by the modules.

#[allow(unused_imports)]
use num_traits::Float;

#[allow(clippy::excessive_precision)]
const GL8_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329_0,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
#[allow(clippy::excessive_precision)]
const GL8_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362_0,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// 8-point Gauss–Legendre rule on `[a, b]`.
pub fn gauss_legendre8(a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in GL8_NODES.iter().zip(GL8_WEIGHTS.iter()) {
        acc += w * (f(mid - half * x) + f(mid + half * x));
    }
    acc * half
}

/// Composite Simpson rule on equally spaced samples. `values.len()` must be odd
/// and at least 3.
pub fn simpson(values: &[f64], h: f64) -> f64 {
    debug_assert!(values.len() >= 3 && values.len() % 2 == 1);
    let last = values.len() - 1;
    let mut acc = values[0] + values[last];
    for (i, v) in values.iter().enumerate().take(last).skip(1) {
        acc += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    acc * h / 3.0
}

/// Bisection on a bracket `[lo, hi]` with `f(lo)` and `f(hi)` of opposite sign.
/// Returns `None` when the bracket is invalid.
pub fn bisect(mut lo: f64, mut hi: f64, tol: f64, mut f: impl FnMut(f64) -> f64) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo) <= tol || mid == lo || mid == hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Golden-section search for a maximum of a unimodal function on `[a, b]`.
pub fn golden_max(mut a: f64, mut b: f64, tol: f64, mut f: impl FnMut(f64) -> f64) -> (f64, f64) {
    let inv_phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_is_exact_for_degree_15() {
        let got = gauss_legendre8(0.0, 2.0, |x| x.powi(15));
        let exact = 2.0f64.powi(16) / 16.0;
        assert!((got - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn simpson_integrates_cubics() {
        let n = 10;
        let h = 1.0 / n as f64;
        let v: alloc::vec::Vec<f64> = (0..=n).map(|i| (i as f64 * h).powi(3)).collect();
        assert!((simpson(&v, h) - 0.25).abs() < 1e-14);
    }

    #[test]
    fn bisect_finds_sqrt2_and_rejects_bad_bracket() {
        let r = bisect(0.0, 2.0, 1e-14, |x| x * x - 2.0).unwrap();
        assert!((r - core::f64::consts::SQRT_2).abs() < 1e-13);
        assert!(bisect(2.0, 3.0, 1e-12, |x| x * x - 2.0).is_none());
    }

    #[test]
    fn golden_finds_parabola_peak() {
        let (x, fx) = golden_max(-1.0, 3.0, 1e-10, |x| -(x - 1.2) * (x - 1.2) + 4.0);
        // Comparisons of a quadratic peak resolve x only to about sqrt(eps).
        assert!((x - 1.2).abs() < 1e-7);
        assert!((fx - 4.0).abs() < 1e-12);
    }
}
