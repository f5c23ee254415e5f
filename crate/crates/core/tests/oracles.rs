use std::f64::consts::PI;

use spectral_bounds_core::fem::{solve_dirichlet_lambda1, solve_neumann_mu1, SolverConfig};
use spectral_bounds_core::geometry::{make_regular_polygon, triangulate, DomainSpec};
use spectral_bounds_core::rearrangement::{chiti_check, rearrange, rearrange_oriented};
use spectral_bounds_core::special::{euclidean_isoperimetric_constant, j01, psi_profile};
use spectral_bounds_core::sturm::comparison_length;

/// On a near-disk with the Euclidean constant and the Dirichlet eigenpair the
/// cumulative comparison is an equality up to discretisation error.
#[test]
fn cumulative_comparison_is_tight_on_the_disk() {
    let ball = psi_profile(2.0, 2).unwrap();
    let gon = make_regular_polygon(64, 1.0).unwrap();
    let mesh = triangulate(&gon, 4);
    let pair = solve_dirichlet_lambda1(&mesh, &SolverConfig::default()).unwrap();
    let sign = if pair.eigenvector.iter().sum::<f64>() < 0.0 {
        -1.0
    } else {
        1.0
    };
    let u: Vec<f64> = pair.eigenvector.iter().map(|v| sign * v).collect();
    let r = rearrange(&mesh, &u).unwrap();
    let k = euclidean_isoperimetric_constant(2);
    assert!((k - 2.0 * PI.sqrt()).abs() < 1e-14);
    let length = comparison_length(&ball, k, pair.eigenvalue);
    // L = π j₀,₁²/λ₁ is close to the area.
    assert!((length - gon.area).abs() < 5e-3 * gon.area, "L = {length}");
    for q in [1.0, 2.0, 4.0] {
        let rep = chiti_check(&r, &ball, length, q, 400).unwrap();
        assert!(rep.max_violation.abs() < 5e-3, "q = {q}: {rep:?}");
        let big_u = r.cumulative_power(q).unwrap();
        let moment = ball.cumulative_moment(q);
        let total = big_u.total();
        let scale = total / (length * moment.total());
        for i in 1..=20 {
            let s = length * f64::from(i) / 20.0;
            let v = scale * length * moment.at(ball.first_zero * (s / length).sqrt());
            let gap = (big_u.at(s) - v).abs() / total;
            assert!(gap < 5e-3, "q = {q}, s = {s}: gap {gap}");
        }
    }
}

#[test]
fn square_neumann_eigenfunction_splits_in_half() {
    let mesh = triangulate(&DomainSpec::unit_square(), 4);
    let pair = solve_neumann_mu1(&mesh, &SolverConfig::default()).unwrap();
    let (r, _) = rearrange_oriented(&mesh, &pair.eigenvector).unwrap();
    assert!(r.positive_measure <= 0.5 + 1e-12);
    assert!((r.positive_measure - 0.5).abs() < 1e-6);
    // ‖u‖₂ = 1 from the mass normalisation.
    assert!((r.abs_power_integral(2.0) - 1.0).abs() < 1e-9);
    assert!(r.integral().abs() < 1e-9);
}

#[test]
fn disk_dirichlet_eigenvalue_converges() {
    let gon = make_regular_polygon(64, 1.0).unwrap();
    let cfg = SolverConfig::default();
    let j2 = j01() * j01();
    let errs: Vec<f64> = (2..=4)
        .map(|level| {
            let lam = solve_dirichlet_lambda1(&triangulate(&gon, level), &cfg)
                .unwrap()
                .eigenvalue;
            (lam - j2).abs() / j2
        })
        .collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    assert!(errs[2] < 1e-2);
}
