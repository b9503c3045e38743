//! Shared assembly for the exact solvers: the two 3x3 coefficient systems
//! and the arc profiles entering both closed-form solutions.
//!
//! The first system expresses the seam-closure constants `B` in terms of
//! the global strain measures `A`; the second determines `A` from the
//! prescribed end resultants once `B = L·A` is substituted. Both solvers
//! share the same matrices — the flexure problem only changes the
//! right-hand side.

use crate::algebra::{Mat3, Vec3};
use crate::curve::SectionCurve;
use crate::error::ShellError;
use crate::material::ShellMaterial;
use crate::series::ArcSeries;

/// Condition-number limit above which coefficient systems are rejected.
pub const COND_LIMIT: f64 = 1e12;

/// Relative threshold below which residual seam growth in a profile is
/// projected out (it is then provably at the closure solve's rounding
/// level, and keeping it would pollute spectral derivatives downstream).
pub const GROWTH_TOL: f64 = 1e-8;

/// Assembled coefficient systems of a (curve, material) pair.
#[derive(Debug, Clone)]
pub struct CoefficientSystems {
    /// `B = L·A` (seam-closure solve applied to unit `A` columns).
    pub l: Mat3,
    /// Matrix of the resultant system once `B = L·A` is substituted.
    pub g: Mat3,
    /// Condition numbers of the two solves, surfaced for diagnostics.
    pub cond_seam: f64,
    pub cond_resultant: f64,
}

/// Builds both systems by spectral quadrature over the section.
pub fn assemble_systems(
    curve: &SectionCurve,
    mat: &ShellMaterial,
) -> Result<CoefficientSystems, ShellError> {
    let (c, d, nu) = (mat.c, mat.d, mat.nu);

    let r_hat = |i: usize, j: usize| curve.r_hat(i).component(j);
    // Bending-compliance weight 1/D + 1/(C R²).
    let weight = |i: usize| 1.0 / d + curve.curvature(i).powi(2) / c;
    let normal3 = |i: usize, j: usize| match j {
        0 | 1 => curve.normal(i).component(j),
        _ => 0.0,
    };
    let tangent3 = |i: usize, j: usize| match j {
        0 | 1 => curve.tangent(i).component(j),
        _ => 0.0,
    };

    let integrate = |f: &dyn Fn(usize) -> f64| -> Result<f64, ShellError> {
        let samples = curve.sample_indexed(|i| f(i));
        curve.closed_integral(&samples)
    };

    // Seam system: mb·B = -ν ma·A, rows ordered (normal-slope closure,
    // in-plane closure α = 1, 2).
    let mut mb = Mat3::ZERO;
    let mut ma = Mat3::ZERO;
    for j in 0..3 {
        mb.rows[0][j] = integrate(&|i| weight(i) * r_hat(i, j))?;
        ma.rows[0][j] = integrate(&|i| curve.curvature(i) * r_hat(i, j))?;
        for alpha in 0..2 {
            let x_a = |i: usize| curve.position(i).component(alpha);
            mb.rows[alpha + 1][j] = integrate(&|i| {
                x_a(i) * weight(i) * r_hat(i, j)
                    + (1.0 / c)
                        * (if alpha == j { 1.0 } else { 0.0 }
                            + curve.tangent(i).component(alpha) * tangent3(i, j))
            })?;
            ma.rows[alpha + 1][j] =
                integrate(&|i| x_a(i) * curve.curvature(i) * r_hat(i, j))?;
        }
    }
    let cond_seam = mb.condition_inf();
    let mut l_cols = [Vec3::ZERO; 3];
    for (j, col) in l_cols.iter_mut().enumerate() {
        let a_unit = Vec3::new(
            if j == 0 { 1.0 } else { 0.0 },
            if j == 1 { 1.0 } else { 0.0 },
            if j == 2 { 1.0 } else { 0.0 },
        );
        let rhs = ma.mul_vec(a_unit) * (-nu);
        *col = mb.solve(rhs, COND_LIMIT)?;
    }
    let l = Mat3::from_cols(l_cols);

    // Resultant system rows: axial force, then the two moment equations.
    // With B = L·A the B-contraction ν B·v folds into the row as ν Lᵀv,
    // so each row is C(1-ν²) w - ν Lᵀ v.
    let stretch = c * (1.0 - nu * nu);
    let mut g = Mat3::ZERO;
    let mut w_rows = [[0.0; 3]; 3];
    let mut v_rows = [[0.0; 3]; 3];
    for j in 0..3 {
        w_rows[0][j] = integrate(&|i| r_hat(i, j))?;
        v_rows[0][j] = integrate(&|i| curve.curvature(i) * r_hat(i, j))?;
        for alpha in 0..2 {
            let x_a = |i: usize| curve.position(i).component(alpha);
            let n_a = |i: usize| curve.normal(i).component(alpha);
            w_rows[alpha + 1][j] = integrate(&|i| {
                x_a(i) * r_hat(i, j) + (d / c) * n_a(i) * normal3(i, j)
            })?;
            v_rows[alpha + 1][j] = integrate(&|i| {
                x_a(i) * (curve.curvature(i) * r_hat(i, j) + normal3(i, j))
                    - n_a(i) * r_hat(i, j)
            })?;
        }
    }
    let lt = l.transpose();
    for r in 0..3 {
        let v = Vec3::new(v_rows[r][0], v_rows[r][1], v_rows[r][2]);
        let ltv = lt.mul_vec(v);
        for j in 0..3 {
            g.rows[r][j] = stretch * w_rows[r][j] - nu * ltv.component(j);
        }
    }
    let cond_resultant = g.condition_inf();

    Ok(CoefficientSystems {
        l,
        g,
        cond_seam,
        cond_resultant,
    })
}

/// Arc profiles shared by the two exact solutions for a given coefficient
/// pair `(A, B)`.
#[derive(Debug, Clone)]
pub struct SolutionKernels {
    /// `∫₀ˢ [(ν/R) A + (1/D + 1/(C R²)) B] · r̂` — the nested-integral core.
    pub inner: ArcSeries,
    /// In-plane profile `w_α` (the complete z-free in-plane solution part).
    pub w: [ArcSeries; 2],
    /// `C(1-ν²) A·r̂ - ν B·(n + r̂/R)` sampled (axial stress density).
    pub h: Vec<f64>,
    /// `∫₀ˢ h`.
    pub inner2: ArcSeries,
}

/// Builds the kernels for coefficients `(a, b)` on `curve`.
pub fn solution_kernels(
    curve: &SectionCurve,
    mat: &ShellMaterial,
    a: Vec3,
    b: Vec3,
) -> SolutionKernels {
    let grid = curve.grid();
    let (c, d, nu) = (mat.c, mat.d, mat.nu);

    // g(s) = [(ν/R) A + (1/D + 1/(C R²)) B]·r̂
    let g_samples = curve.sample_indexed(|i| {
        let kappa = curve.curvature(i);
        let kvec = a * (nu * kappa) + b * (1.0 / d + kappa * kappa / c);
        kvec.dot(curve.r_hat(i))
    });
    let inner = ArcSeries::from_samples(grid, g_samples).integrate();

    // nested_α = ∫₀ˢ n_α · inner
    let nested = [
        inner
            .mul_samples(&curve.sample_indexed(|i| curve.normal(i).x))
            .integrate(),
        inner
            .mul_samples(&curve.sample_indexed(|i| curve.normal(i).y))
            .integrate(),
    ];

    // tcorr_α = ∫₀ˢ (1/R)(B·r̂) τ_α
    let b_r_over_r = curve.sample_indexed(|i| curve.curvature(i) * b.dot(curve.r_hat(i)));
    let tcorr = [
        ArcSeries::from_samples(
            grid,
            curve.sample_indexed(|i| b_r_over_r[i] * curve.tangent(i).x),
        )
        .integrate(),
        ArcSeries::from_samples(
            grid,
            curve.sample_indexed(|i| b_r_over_r[i] * curve.tangent(i).y),
        )
        .integrate(),
    ];

    // w_α = ν(x·x)A_α/2 - ν(A·r̂)x_α + (s (B×e3)_α - tcorr_α)/C - nested_α
    let b_cross_e3 = [b.y, -b.x];
    let mut w_parts = Vec::with_capacity(2);
    for alpha in 0..2 {
        let base = curve.sample_indexed(|i| {
            let x = curve.position(i);
            0.5 * nu * x.dot(x) * a.component(alpha) - nu * a.dot(curve.r_hat(i)) * x.component(alpha)
        });
        let mut w = ArcSeries::from_samples(grid, base);
        w.add_scaled(&ArcSeries::linear(grid, b_cross_e3[alpha]), 1.0 / c);
        w.add_scaled(&tcorr[alpha], -1.0 / c);
        w.add_scaled(&nested[alpha], -1.0);
        w_parts.push(w);
    }
    let w = [w_parts.remove(0), w_parts.remove(0)];

    // h = C(1-ν²) A·r̂ - ν B·(n + r̂/R)
    let h = curve.sample_indexed(|i| {
        let nrm3 = Vec3::from_plane(curve.normal(i));
        let kappa = curve.curvature(i);
        c * (1.0 - nu * nu) * a.dot(curve.r_hat(i))
            - nu * b.dot(nrm3 + curve.r_hat(i) * kappa)
    });
    let inner2 = ArcSeries::from_samples(grid, h.clone()).integrate();

    SolutionKernels {
        inner,
        w,
        h,
        inner2,
    }
}

/// Torsion warping profile `φ(s) = (2𝒜/s̄) s - ∫₀ˢ r·n`; vanishes
/// identically on circles and closes (`φ(0) = φ(s̄) = 0`) on every curve.
pub fn torsion_profile(curve: &SectionCurve) -> ArcSeries {
    let grid = curve.grid();
    let ramp = ArcSeries::linear(grid, 2.0 * curve.area() / curve.perimeter());
    let mut phi = ArcSeries::from_samples(grid, curve.r_dot_n()).integrate();
    phi = phi.scaled(-1.0);
    phi.add_scaled(&ramp, 1.0);
    phi
}

/// Twist per unit torque denominator: `2(1-ν)(C 𝒜²/s̄ + D s̄)`.
pub fn torsional_rigidity(curve: &SectionCurve, mat: &ShellMaterial) -> f64 {
    2.0 * (1.0 - mat.nu)
        * (mat.c * curve.area().powi(2) / curve.perimeter() + mat.d * curve.perimeter())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{build_section, FourierCurveSpec};
    use crate::material::stiffnesses;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn torsion_profile_vanishes_on_circle() {
        let curve = build_section(&FourierCurveSpec::circle(1.0), 256).unwrap();
        let phi = torsion_profile(&curve);
        for s in curve.grid().points() {
            assert!(phi.eval(s).abs() < 1e-12);
        }
    }

    #[test]
    fn torsion_profile_closes_on_ellipse() {
        let curve = build_section(&FourierCurveSpec::ellipse(2.0, 1.0), 512).unwrap();
        let phi = torsion_profile(&curve);
        assert!(phi.eval(0.0).abs() < 1e-12);
        assert!(phi.eval(curve.perimeter()).abs() < 1e-10);
    }

    #[test]
    fn seam_system_on_circle_matches_closed_form() {
        // On the circle the seam solve decouples:
        // B_α = -ν (D/R) A_α / (1 + 4 D/(C R²)), B₃ with factor (1 + D/(C R²)).
        let curve = build_section(&FourierCurveSpec::circle(1.0), 256).unwrap();
        let mat = stiffnesses(1.0, 0.3, 0.01).unwrap();
        let sys = assemble_systems(&curve, &mat).unwrap();
        let lam = mat.d / mat.c;
        let expect_alpha = -mat.nu * mat.d / (1.0 + 4.0 * lam);
        let expect_axial = -mat.nu * mat.d / (1.0 + lam);
        assert_relative_eq!(sys.l.rows[0][0], expect_alpha, max_relative = 1e-10);
        assert_relative_eq!(sys.l.rows[1][1], expect_alpha, max_relative = 1e-10);
        assert_relative_eq!(sys.l.rows[2][2], expect_axial, max_relative = 1e-10);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!(sys.l.rows[i][j].abs() < 1e-12 * mat.d);
                }
            }
        }
        assert!(sys.cond_seam < 1e12);
        assert!(sys.cond_resultant < 1e12);
    }

    #[test]
    fn resultant_system_on_circle_matches_closed_form() {
        let curve = build_section(&FourierCurveSpec::circle(1.0), 256).unwrap();
        let mat = stiffnesses(1.0, 0.3, 0.01).unwrap();
        let sys = assemble_systems(&curve, &mat).unwrap();
        let lam = mat.d / mat.c;
        let bend = PI
            * mat.c
            * ((1.0 - mat.nu * mat.nu) * (1.0 + lam)
                + mat.nu * mat.nu * lam / (1.0 + 4.0 * lam));
        assert_relative_eq!(sys.g.rows[1][0], bend, max_relative = 1e-10);
        assert_relative_eq!(sys.g.rows[2][1], bend, max_relative = 1e-10);
        let sbar = curve.perimeter();
        let axial = sbar * sbar * mat.c
            * ((1.0 - mat.nu * mat.nu) + mat.nu * mat.nu * lam / (1.0 + lam));
        assert_relative_eq!(sys.g.rows[0][2], axial, max_relative = 1e-10);
    }
}
