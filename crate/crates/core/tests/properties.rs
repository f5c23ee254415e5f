use std::sync::OnceLock;

use proptest::prelude::*;
use spectral_bounds_core::fem::assemble_mass;
use spectral_bounds_core::geometry::{
    make_rectangle, make_regular_polygon, make_rhombus, triangulate, DomainSpec, Mesh,
};
use spectral_bounds_core::rearrangement::rearrange;
use spectral_bounds_core::special::psi_profile;
use spectral_bounds_core::sturm::{
    gradient_power_integral, solve, weighted_power_integral, SturmProblem,
};

fn domain() -> impl Strategy<Value = DomainSpec> {
    prop_oneof![
        Just(DomainSpec::unit_square()),
        (1.0f64..4.0, 0.2f64..1.0).prop_map(|(a, t)| make_rectangle(a, a * t).unwrap()),
        (5u32..80).prop_map(|m| make_rhombus(m).unwrap()),
        (3u32..40, 0.2f64..3.0).prop_map(|(k, r)| make_regular_polygon(k, r).unwrap()),
    ]
}

fn mesh_and_values() -> impl Strategy<Value = (Mesh, Vec<f64>)> {
    (domain(), 0u32..3).prop_flat_map(|(spec, level)| {
        let mesh = triangulate(&spec, level);
        let n = mesh.num_nodes();
        (Just(mesh), prop::collection::vec(-1.0f64..1.0, n))
    })
}

/// `(∫u, ∫u⁻)` for the linear function with vertex values `v` on a triangle of area `t`.
fn p1_integrals(t: f64, mut v: [f64; 3]) -> (f64, f64) {
    v.sort_by(f64::total_cmp);
    let [a, b, c] = v;
    let int = t * (a + b + c) / 3.0;
    let neg = if a >= 0.0 {
        0.0
    } else if c <= 0.0 {
        -int
    } else if b >= 0.0 {
        t * (-a).powi(3) / (3.0 * (b - a) * (c - a))
    } else {
        t * c.powi(3) / (3.0 * (c - a) * (c - b)) - int
    };
    (int, neg)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn triangulations_are_valid((spec, level) in (domain(), 0u32..4)) {
        let mesh = triangulate(&spec, level);
        prop_assert!(mesh.validate().is_ok());
        prop_assert!((mesh.total_area() - spec.area).abs() <= 1e-12 * spec.area);
        prop_assert_eq!(mesh.euler_characteristic(), 1);
        let fine = mesh.refine();
        prop_assert_eq!(fine.num_elements(), 4 * mesh.num_elements());
        prop_assert_eq!(fine.boundary_edges.len(), 2 * mesh.boundary_edges.len());
        prop_assert!((fine.total_area() - mesh.total_area()).abs() <= 1e-12 * spec.area);
    }

    #[test]
    fn rearrangement_is_equimeasurable((mesh, u) in mesh_and_values()) {
        let r = rearrange(&mesh, &u).unwrap();
        let area = mesh.total_area();
        let (mut int, mut neg) = (0.0, 0.0);
        for (e, tri) in mesh.elements.iter().enumerate() {
            let (i, n) = p1_integrals(mesh.element_area(e), tri.map(|k| u[k]));
            int += i;
            neg += n;
        }
        let norm = int.abs() + 2.0 * neg;
        prop_assert!((r.measure - area).abs() <= 1e-12 * area);
        prop_assert!((r.integral() - int).abs() <= 1e-10 * norm);
        prop_assert!((r.abs_power_integral(1.0) - (int + 2.0 * neg)).abs() <= 1e-10 * norm, "abs {} oracle {} int {} neg {}", r.abs_power_integral(1.0), int + 2.0 * neg, int, neg);
        prop_assert!((r.lq_norm_positive(1.0).unwrap_or(0.0) - (int + neg)).abs() <= 1e-10 * norm);

        // ∫u agrees with the mass matrix, and the distribution is monotone.
        let ones = vec![1.0; u.len()];
        let via_mass = assemble_mass(&mesh).unwrap().bilinear(&ones, &u);
        prop_assert!((via_mass - int).abs() <= 1e-10 * norm);
        let (lo, hi) = u.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
        prop_assert!((r.distribution(lo - 1.0) - area).abs() <= 1e-12 * area);
        prop_assert_eq!(r.distribution(hi), 0.0);
        let mut last = area;
        for i in 0..=50 {
            let t = lo + (hi - lo) * f64::from(i) / 50.0;
            let m = r.distribution(t);
            prop_assert!(m <= last + 1e-12 * area);
            last = m;
        }
        prop_assert!((r.positive_measure - r.distribution(0.0)).abs() <= 1e-12 * area);
        prop_assert!(r.samples.windows(2).all(|w| w[1] <= w[0]));
    }
}

fn sturm_cases() -> &'static [(SturmProblem, f64)] {
    static CASES: OnceLock<Vec<(SturmProblem, f64)>> = OnceLock::new();
    CASES.get_or_init(|| {
        [(2.0, 1.0, 1.0), (1.5, 1.0, 0.7), (3.0, 2.0, 2.5)]
            .iter()
            .map(|&(gamma, beta, length)| {
                let problem = SturmProblem {
                    gamma,
                    beta,
                    length,
                    cells: 512,
                };
                let sigma = solve(&problem).unwrap().sigma;
                (problem, sigma)
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn rayleigh_quotient_dominates_sigma_and_hardy(
        case in 0usize..3,
        coeffs in prop::collection::vec(-1.0f64..1.0, 4),
        power in 0.3f64..3.0,
        weight in 0.0f64..1.0,
    ) {
        let (problem, sigma) = sturm_cases()[case];
        let grid = problem.grid();
        let a = problem.length;
        let phi: Vec<f64> = grid
            .iter()
            .map(|&s| {
                let modes: f64 = coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c * ((k as f64 + 0.5) * std::f64::consts::PI * s / a).sin())
                    .sum();
                modes + weight * (s / a).powf(power)
            })
            .collect();
        let den = weighted_power_integral(&grid, &phi, problem.gamma, problem.beta);
        prop_assume!(den > 1e-12);
        let quotient = gradient_power_integral(&grid, &phi, problem.gamma) / den;
        prop_assert!(quotient >= sigma * (1.0 - 1e-8), "R = {quotient}, σ₁ = {sigma}");
        prop_assert!(sigma >= problem.hardy_bound());
    }

    #[test]
    fn ball_eigenvalue_scales(p in prop::sample::select(vec![2.0, 2.5, 3.0, 4.0]), n in 2u32..5, radius in 0.1f64..10.0) {
        let ball = psi_profile(p, n).unwrap();
        let lam = ball.lambda1_ball(radius);
        let expected = ball.first_zero.powf(p) / radius.powf(p);
        prop_assert!((lam - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn power_mean_is_nondecreasing(s in 0.01f64..10.0, t in 0.01f64..10.0) {
        let ball = psi_profile(2.0, 2).unwrap();
        let (lo, hi) = if s <= t { (s, t) } else { (t, s) };
        prop_assert!(ball.f_power_mean(lo).unwrap() <= ball.f_power_mean(hi).unwrap() * (1.0 + 1e-12));
        prop_assert!(ball.f_power_mean(hi).unwrap() <= 1.0 + 1e-12);
    }
}
