//! Relative isoperimetric constants with known closed forms, every lower bound
//! on `μ₁` compared in the reports, and the rhombus sharpness study.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::fem::{richardson, solve_mixed_dn, solve_neumann_mu1, SolverConfig};
use crate::geometry::{triangulate, triangulate_half_rhombus, DomainKind, DomainSpec, EdgeTag};
use crate::quadrature::golden_max;
use crate::special::{euclidean_isoperimetric_constant, j01, RadialProfile};
use crate::{Error, Result};

/// A relative isoperimetric constant `K₂(Ω)` and the rule that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct KnEntry {
    pub domain: String,
    pub value: f64,
    pub provenance: &'static str,
}

/// Looks up `K₂(Ω)` for rhombi and for convex domains symmetric about a point.
pub fn kn_lookup(spec: &DomainSpec) -> Result<KnEntry> {
    let (value, provenance) = match spec.kind {
        DomainKind::Rhombus { .. } => {
            let beta = spec.rhombus_angle().expect("rhombus has an angle");
            ((2.0 * beta.sin()).sqrt(), "rhombus_sqrt_2_sin_beta")
        }
        _ if spec.convex && spec.centrally_symmetric => (
            (2.0 * spec.width * spec.width / spec.area).sqrt(),
            "centrally_symmetric_convex_width",
        ),
        _ => {
            return Err(Error::NoKnownConstant(format!(
                "{}: not a rhombus or centrally symmetric convex domain",
                spec.label()
            )))
        }
    };
    Ok(KnEntry {
        domain: spec.label(),
        value,
        provenance,
    })
}

/// `α = (K/(nω_n^{1/n}))^p`.
pub fn alpha(p: f64, n: u32, k: f64) -> f64 {
    (k / euclidean_isoperimetric_constant(n)).powf(p)
}

/// `2^{p/n} α λ₁(Ω♯)`.
pub fn main_bound(ball: &RadialProfile, k: f64, area: f64) -> f64 {
    let (p, n) = (ball.p, f64::from(ball.n));
    2f64.powf(p / n) * alpha(p, ball.n, k) * ball.lambda1_sharp(area)
}

/// `π²/d²`, valid for convex domains at `p = 2`.
pub fn payne_weinberger(diameter: f64) -> f64 {
    PI * PI / (diameter * diameter)
}

/// `2^{p/n}(n/(p(n−1)))^p K^p/|Ω|^{p/n}`.
pub fn ashbaugh_mercado(p: f64, n: u32, k: f64, area: f64) -> f64 {
    let nf = f64::from(n);
    2f64.powf(p / nf) * (nf / (p * (nf - 1.0))).powf(p) * k.powf(p) / area.powf(p / nf)
}

/// `sup_{q>1} (f(1)/f(q))^{2q/(n(q−1))}` over a 200-point log grid of
/// `(1 + 1e−6, 50]`, refined by golden section. Returns `(q, value)`.
pub fn power_mean_supremum(ball: &RadialProfile) -> Result<(f64, f64)> {
    if ball.p != 2.0 {
        return Err(Error::param(
            "the power-mean bound is stated for p = 2 only",
        ));
    }
    let (lo, hi) = ((1e-6f64).ln(), (49.0f64).ln());
    let term = |x: f64| {
        ball.sup_ratio(1.0, 1.0 + x.exp())
            .unwrap_or(f64::NEG_INFINITY)
    };
    let pts = 200;
    let xs: Vec<f64> = (0..pts)
        .map(|i| lo + (hi - lo) * i as f64 / (pts - 1) as f64)
        .collect();
    let vals: Vec<f64> = xs.iter().map(|&x| term(x)).collect();
    let best = (0..pts)
        .max_by(|&a, &b| vals[a].partial_cmp(&vals[b]).expect("finite terms"))
        .expect("grid is non-empty");
    let a = xs[best.saturating_sub(1)];
    let b = xs[(best + 1).min(pts - 1)];
    let (x, v) = golden_max(a, b, 1e-10, term);
    let (x, v) = if v >= vals[best] {
        (x, v)
    } else {
        (xs[best], vals[best])
    };
    Ok((1.0 + x.exp(), v))
}

/// `2^{2/n} α [sup] j²/(|Ω|/ω_n)^{2/n}`, i.e. the main bound
/// times the bracketed supremum (`p = 2`).
pub fn power_mean_bound(ball: &RadialProfile, k: f64, area: f64) -> Result<f64> {
    let (_, sup) = power_mean_supremum(ball)?;
    Ok(main_bound(ball, k, area) * sup)
}

/// `j₀,₁² w²/|Ω|²` for convex planar domains symmetric about a point.
pub fn symmetric_planar_bound(width: f64, area: f64) -> f64 {
    let j = j01();
    j * j * width * width / (area * area)
}

/// Outcome of the width–diameter improvement of Payne–Weinberger.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PwImprovement {
    pub c: f64,
    /// `|Ω| < C w d`.
    pub hypothesis: bool,
    /// `j₀,₁² w² d²/|Ω|²`.
    pub bound_times_d2: f64,
    /// `j₀,₁²/C²`.
    pub threshold: f64,
    /// `bound_times_d2 ≥ threshold > π²` (meaningful when the hypothesis holds).
    pub conclusion: bool,
}

pub fn pw_improvement_check(spec: &DomainSpec, c: f64) -> Result<PwImprovement> {
    let j = j01();
    if !(c > 0.0 && c < j / PI) {
        return Err(Error::param(format!(
            "C must lie in (0, j01/pi) = (0, {}), got {c}",
            j / PI
        )));
    }
    if !(spec.convex && spec.centrally_symmetric) {
        return Err(Error::param(format!(
            "{} is not convex and symmetric about a point",
            spec.label()
        )));
    }
    let d = spec.diameter;
    let bound_times_d2 = symmetric_planar_bound(spec.width, spec.area) * d * d;
    let threshold = j * j / (c * c);
    Ok(PwImprovement {
        c,
        hypothesis: spec.area < c * spec.width * d,
        bound_times_d2,
        threshold,
        conclusion: bound_times_d2 >= threshold && threshold > PI * PI,
    })
}

/// One row of a [`BoundReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct BoundEntry {
    pub name: &'static str,
    pub value: f64,
    /// The domain satisfies the hypotheses of this bound.
    pub applicable: bool,
    /// `value/μ₁` when `μ₁` is known.
    pub ratio: Option<f64>,
}

/// Every bound defined for the given `p`, with `μ₁` from FEM at `p = 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub domain: String,
    pub p: f64,
    pub n: u32,
    pub level: u32,
    pub k: f64,
    pub mu1: Option<f64>,
    /// Order-2 Richardson value from levels `level − 1` and `level`.
    pub mu1_richardson: Option<f64>,
    pub entries: Vec<BoundEntry>,
}

/// Relative FEM tolerance for validity checks at level ≥ 4.
pub const VALIDITY_TOL: f64 = 1e-2;
/// Relative tolerance after Richardson extrapolation.
pub const VALIDITY_TOL_RICHARDSON: f64 = 5e-3;

impl BoundReport {
    pub fn entry(&self, name: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// Every applicable bound is at most `μ₁ (1 + tol)`; true when `μ₁` is unknown.
    pub fn all_valid(&self, tol: f64) -> bool {
        let Some(mu) = self.mu1_richardson.or(self.mu1) else {
            return true;
        };
        self.entries
            .iter()
            .filter(|e| e.applicable)
            .all(|e| e.value <= mu * (1.0 + tol))
    }
}

/// Every bound defined for `ball.p` on `spec` (planar), without `μ₁`.
pub fn bound_entries(spec: &DomainSpec, ball: &RadialProfile) -> Result<Vec<BoundEntry>> {
    if ball.n != 2 {
        return Err(Error::param("planar domains need the n = 2 profile"));
    }
    let p = ball.p;
    let k = kn_lookup(spec)?.value;
    let mut entries = Vec::new();
    entries.push(BoundEntry {
        name: "main",
        value: main_bound(ball, k, spec.area),
        applicable: true,
        ratio: None,
    });
    if p == 2.0 {
        entries.push(BoundEntry {
            name: "payne_weinberger",
            value: payne_weinberger(spec.diameter),
            applicable: spec.convex,
            ratio: None,
        });
    }
    if p >= 2.0 {
        entries.push(BoundEntry {
            name: "ashbaugh_mercado",
            value: ashbaugh_mercado(p, 2, k, spec.area),
            applicable: true,
            ratio: None,
        });
    }
    if p == 2.0 {
        entries.push(BoundEntry {
            name: "power_mean",
            value: power_mean_bound(ball, k, spec.area)?,
            applicable: true,
            ratio: None,
        });
        entries.push(BoundEntry {
            name: "symmetric_planar",
            value: symmetric_planar_bound(spec.width, spec.area),
            applicable: spec.convex && spec.centrally_symmetric,
            ratio: None,
        });
    }
    Ok(entries)
}

/// Builds the comparison table. `ball` must match `p` and `n = 2`.
pub fn compare_report(
    spec: &DomainSpec,
    ball: &RadialProfile,
    level: u32,
    cfg: &SolverConfig,
) -> Result<BoundReport> {
    if ball.n != 2 {
        return Err(Error::param("planar domains need the n = 2 profile"));
    }
    let p = ball.p;
    let k = kn_lookup(spec)?.value;
    let (mu1, mu1_richardson) = if p == 2.0 {
        let fine = solve_neumann_mu1(&triangulate(spec, level), cfg)?.eigenvalue;
        let rich = if level > 0 {
            let coarse = solve_neumann_mu1(&triangulate(spec, level - 1), cfg)?.eigenvalue;
            Some(richardson(coarse, fine, 2))
        } else {
            None
        };
        (Some(fine), rich)
    } else {
        (None, None)
    };
    let mut entries = bound_entries(spec, ball)?;
    if let Some(mu) = mu1 {
        for e in &mut entries {
            e.ratio = Some(e.value / mu);
        }
    }
    Ok(BoundReport {
        domain: spec.label(),
        p,
        n: 2,
        level,
        k,
        mu1,
        mu1_richardson,
        entries,
    })
}

/// One rhombus of the sharpness study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhombusRow {
    pub m: u32,
    pub beta: f64,
    pub level: u32,
    pub mu1: f64,
    pub alpha: f64,
    pub lambda_sharp: f64,
    /// `μ₁/(α λ₁(Ω♯))`, tending to 2.
    pub ratio: f64,
    /// Mixed eigenvalue on the half rhombus `T_m`.
    pub lambda_dn: f64,
    /// `j₀,₁²`.
    pub sandwich_lo: f64,
    /// `j₀,₁²/cos²(β/2)`.
    pub sandwich_hi: f64,
}

impl RhombusRow {
    pub fn sandwich_ok(&self, rel_tol: f64) -> bool {
        self.lambda_dn >= self.sandwich_lo * (1.0 - rel_tol)
            && self.lambda_dn <= self.sandwich_hi * (1.0 + rel_tol)
    }
}

/// Sharpness table for the rhombi `Ω_m`; `ball` must be the `p = n = 2` profile.
pub fn verify_rhombus(
    ms: &[u32],
    level: u32,
    ball: &RadialProfile,
    cfg: &SolverConfig,
) -> Result<Vec<RhombusRow>> {
    if ball.p != 2.0 || ball.n != 2 {
        return Err(Error::param(
            "the rhombus study needs the p = n = 2 profile",
        ));
    }
    let j = j01();
    ms.iter()
        .map(|&m| {
            let spec = crate::geometry::make_rhombus(m)?;
            let beta = spec.rhombus_angle().expect("rhombus has an angle");
            let mu1 = solve_neumann_mu1(&triangulate(&spec, level), cfg)?.eigenvalue;
            let half = triangulate_half_rhombus(&spec, level)?;
            let lambda_dn = solve_mixed_dn(&half, EdgeTag::Diagonal, cfg)?.eigenvalue;
            let a = alpha(2.0, 2, kn_lookup(&spec)?.value);
            let lambda_sharp = ball.lambda1_sharp(spec.area);
            let c = (0.5 * beta).cos();
            Ok(RhombusRow {
                m,
                beta,
                level,
                mu1,
                alpha: a,
                lambda_sharp,
                ratio: mu1 / (a * lambda_sharp),
                lambda_dn,
                sandwich_lo: j * j,
                sandwich_hi: j * j / (c * c),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_rectangle, make_regular_polygon, make_rhombus};
    use crate::special::psi_profile;

    #[test]
    fn registry() {
        let r8 = make_rhombus(8).unwrap();
        let k = kn_lookup(&r8).unwrap();
        assert!((k.value - 2f64.sqrt().sqrt()).abs() < 1e-14);
        // Both closed forms agree on rhombi.
        let via_width = (2.0 * r8.width * r8.width / r8.area).sqrt();
        assert!((k.value - via_width).abs() < 1e-14);
        let sq = kn_lookup(&DomainSpec::unit_square()).unwrap();
        assert!((sq.value - 2f64.sqrt()).abs() < 1e-15);
        assert!(matches!(
            kn_lookup(&make_regular_polygon(5, 1.0).unwrap()),
            Err(Error::NoKnownConstant(_))
        ));
        for spec in [
            r8,
            DomainSpec::unit_square(),
            make_rectangle(10.0, 1.0).unwrap(),
        ] {
            let k = kn_lookup(&spec).unwrap().value;
            assert!(k > 0.0 && k <= euclidean_isoperimetric_constant(2));
        }
    }

    #[test]
    fn closed_form_values() {
        let ball = psi_profile(2.0, 2).unwrap();
        let j = j01();
        for m in [8, 16, 64] {
            let spec = make_rhombus(m).unwrap();
            let k = kn_lookup(&spec).unwrap().value;
            let beta = spec.rhombus_angle().unwrap();
            assert!((alpha(2.0, 2, k) - beta.sin() / (2.0 * PI)).abs() < 1e-14);
            assert!((main_bound(&ball, k, spec.area) - j * j).abs() < 1e-7);
            assert!((symmetric_planar_bound(spec.width, spec.area) - j * j).abs() < 1e-12);
        }
        let sq = DomainSpec::unit_square();
        assert!((main_bound(&ball, 2f64.sqrt(), 1.0) - j * j).abs() < 1e-7);
        assert!((payne_weinberger(sq.diameter) - PI * PI / 2.0).abs() < 1e-13);
        assert!((ashbaugh_mercado(2.0, 2, 2f64.sqrt(), 1.0) - 4.0).abs() < 1e-13);
        let ratio =
            main_bound(&ball, 2f64.sqrt(), 1.0) / ashbaugh_mercado(2.0, 2, 2f64.sqrt(), 1.0);
        assert!((ratio - j * j / 4.0).abs() < 1e-7);
        let rect = make_rectangle(2.0, 1.0).unwrap();
        assert!((symmetric_planar_bound(rect.width, rect.area) - j * j / 4.0).abs() < 1e-12);
        let r8 = make_rhombus(8).unwrap();
        let c = (PI / 8.0).cos();
        assert!((payne_weinberger(r8.diameter) - PI * PI / (4.0 * c * c)).abs() < 1e-12);
    }

    #[test]
    fn power_mean_bound_is_dominated_and_stable() {
        let ball = psi_profile(2.0, 2).unwrap();
        let (q, sup) = power_mean_supremum(&ball).unwrap();
        assert!(q > 1.0 && q <= 50.0);
        assert!(sup > 0.0 && sup <= 1.0 + 1e-6);
        let near_one = ball.sup_ratio(1.0, 1.0 + 1e-6).unwrap();
        assert!(near_one.is_finite() && near_one > 0.0);
        let j = j01();
        let pm = power_mean_bound(&ball, 2f64.sqrt(), 1.0).unwrap();
        assert!(pm <= j * j + 1e-9);
        assert!(power_mean_supremum(&psi_profile(3.0, 2).unwrap()).is_err());
    }

    #[test]
    fn pw_improvement() {
        let sq = DomainSpec::unit_square();
        let r = pw_improvement_check(&sq, 0.75).unwrap();
        assert!(r.hypothesis && r.conclusion);
        // j₀,₁/π ≈ 0.76548: 0.76 is admissible, the boundary itself is not.
        assert!(pw_improvement_check(&sq, 0.76).is_ok());
        assert!(pw_improvement_check(&sq, j01() / PI).is_err());
        assert!(pw_improvement_check(&sq, 0.766).is_err());
        assert!(pw_improvement_check(&sq, 0.0).is_err());
        for m in [8, 16, 64] {
            let spec = make_rhombus(m).unwrap();
            let c = 0.7;
            let predicate = (spec.rhombus_angle().unwrap() / 2.0).cos() > 1.0 / (2.0 * c);
            assert_eq!(
                pw_improvement_check(&spec, c).unwrap().hypothesis,
                predicate
            );
        }
    }

    #[test]
    fn report_without_fem() {
        let ball = psi_profile(3.0, 2).unwrap();
        let rep = compare_report(
            &make_rhombus(8).unwrap(),
            &ball,
            2,
            &SolverConfig::default(),
        )
        .unwrap();
        let names: Vec<&str> = rep.entries.iter().map(|e| e.name).collect();
        assert_eq!(names, ["main", "ashbaugh_mercado"]);
        assert!(rep.mu1.is_none());
        assert!(rep.entry("main").unwrap().value > rep.entry("ashbaugh_mercado").unwrap().value);
    }
}
