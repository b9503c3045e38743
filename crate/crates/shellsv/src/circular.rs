//! Closed-form solution for circular tubes, used as the primary correctness
//! oracle for the general pipeline.
//!
//! Two coefficient sets are exposed:
//!
//! * `thin` — the textbook reduced formulas
//!   `K = -M₃/(2πR₀³μh)`, `A_α = e_{αβ}M_β/(πR₀³Eh)`,
//!   `Ā₃ = -R₃/(2πR₀Eh)`, `Â_α = -R_α/(πR₀³Eh)`, `B_i = -(νD/R₀)A_i`,
//!   `K̃ = 0`, `K₀ = 2(1+ν)R₀²Â₂`.
//! * `exact` — the specialization of the full seam/resultant systems to the
//!   circle, where everything decouples analytically. With
//!   `λ = D/(CR₀²)`, `b₄ = 1/(1+4λ)`, `b₁ = 1/(1+λ)`:
//!   `B_α = -(νD/R₀) b₄ A_α`, `B₃ = -(νD/R₀) b₁ A₃`,
//!   `A_α = e_{αβ}M_β / {πR₀³C[(1-ν²)(1+λ) + ν²λb₄]}`, and so on.
//!   The two sets differ at relative order `h²/(12R₀²)`; the exact set is
//!   what the general spectral pipeline must reproduce to solver precision.
//!
//! The displacement shape carries a known ambiguity in its axial warping
//! coefficient: `2(1+ν)R₀²` (the corollary form) versus `(4+3ν)/2·R₀²`
//! (the reduced flexure function). The two differ by a non-rigid field, so
//! both are first-class here and the verification suite adjudicates.

use std::f64::consts::PI;

use crate::algebra::{Vec2, Vec3};
use crate::curve::SectionCurve;
use crate::error::ShellError;
use crate::field::{ShellField, StressField};
use crate::loads::ResultantLoads;
use crate::material::{MembraneGrids, ShellMaterial};

/// Selector for the axial warping coefficient in the circular displacement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PsiVariant {
    /// `u₃` warping term `2(1+ν) R₀² Â_α x_α`.
    #[default]
    Corollary,
    /// `u₃` warping term `(4+3ν)/2 · R₀² Â_α x_α`.
    FlexureFn,
}

impl PsiVariant {
    pub fn coefficient(self, nu: f64) -> f64 {
        match self {
            PsiVariant::Corollary => 2.0 * (1.0 + nu),
            PsiVariant::FlexureFn => 0.5 * (4.0 + 3.0 * nu),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PsiVariant::Corollary => "corollary",
            PsiVariant::FlexureFn => "flexure-fn",
        }
    }
}

/// One coefficient set (thin or exact) for a circular case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleCoefficients {
    pub k_twist: f64,
    /// `A₁, A₂, A₃` with `Ā₃ = A₃ s̄`.
    pub a: Vec3,
    pub b: Vec3,
    pub a_hat: Vec3,
    pub b_hat: Vec3,
    pub k_tilde: f64,
    pub k0: f64,
}

impl CircleCoefficients {
    pub fn a_bar3(&self, r0: f64) -> f64 {
        self.a.z * 2.0 * PI * r0
    }
}

/// Circular tube case with both coefficient sets populated.
#[derive(Debug, Clone, Copy)]
pub struct CircularCase {
    pub r0: f64,
    pub mat: ShellMaterial,
    pub loads: ResultantLoads,
    pub thin: CircleCoefficients,
    pub exact: CircleCoefficients,
}

/// Builds the circular closed-form coefficients.
pub fn circle_coefficients(
    r0: f64,
    mat: &ShellMaterial,
    loads: &ResultantLoads,
) -> Result<CircularCase, ShellError> {
    if !(r0 > 0.0) || !r0.is_finite() {
        return Err(ShellError::InvalidRadius { radius: r0 });
    }
    let sbar = 2.0 * PI * r0;
    let area = PI * r0 * r0;
    let (e, nu, h) = (mat.e, mat.nu, mat.h);
    let (c, d, mu) = (mat.c, mat.d, mat.mu);
    let (m0, f0) = (loads.moment, loads.force);

    // Thin (reduced) set.
    let thin = {
        let k_twist = -m0.z / (2.0 * PI * r0.powi(3) * mu * h);
        let a_plane = Vec2::new(m0.y, -m0.x) * (1.0 / (PI * r0.powi(3) * e * h));
        let a_bar3 = -f0.z / (2.0 * PI * r0 * e * h);
        let a = Vec3::new(a_plane.x, a_plane.y, a_bar3 / sbar);
        let a_hat = Vec3::new(f0.x, f0.y, 0.0) * (-1.0 / (PI * r0.powi(3) * e * h));
        let b = a * (-nu * d / r0);
        let b_hat = a_hat * (-nu * d / r0);
        CircleCoefficients {
            k_twist,
            a,
            b,
            a_hat,
            b_hat,
            k_tilde: 0.0,
            k0: 2.0 * (1.0 + nu) * r0 * r0 * a_hat.y,
        }
    };

    // Exact specialization of the seam and resultant systems.
    let exact = {
        let lam = d / (c * r0 * r0);
        let b4 = 1.0 / (1.0 + 4.0 * lam);
        let b1 = 1.0 / (1.0 + lam);
        let k_twist = -m0.z / (2.0 * (1.0 - nu) * (c * area * area / sbar + d * sbar));
        let denom_bend =
            PI * r0.powi(3) * c * ((1.0 - nu * nu) * (1.0 + lam) + nu * nu * lam * b4);
        let denom_axial = sbar * ((1.0 - nu * nu) + nu * nu * lam * b1) * c;
        let a_plane = Vec2::new(m0.y, -m0.x) * (1.0 / denom_bend);
        let a_bar3 = -f0.z / denom_axial;
        let a = Vec3::new(a_plane.x, a_plane.y, a_bar3 / sbar);
        let a_hat = Vec3::new(f0.x, f0.y, 0.0) * (-1.0 / denom_bend);
        let b = Vec3::new(
            -nu * d / r0 * b4 * a.x,
            -nu * d / r0 * b4 * a.y,
            -nu * d / r0 * b1 * a.z,
        );
        let b_hat = a_hat * (-nu * d / r0 * b4);
        let k_tilde = -3.0 * nu * lam * b4 * r0 * a_hat.y;
        let eta = c * ((1.0 - nu * nu) + 2.0 * nu * nu * lam * b4);
        let beta = 2.0 * eta / (c * (1.0 - nu));
        let k0 = (3.0 * nu * lam * b4 + beta) * r0 * r0 * a_hat.y;
        CircleCoefficients {
            k_twist,
            a,
            b,
            a_hat,
            b_hat,
            k_tilde,
            k0,
        }
    };

    Ok(CircularCase {
        r0,
        mat: *mat,
        loads: *loads,
        thin,
        exact,
    })
}

/// Circle geometry at arc position s: `x`, `x'`, `x''`.
fn circle_point(r0: f64, s: f64) -> [Vec2; 3] {
    let (sn, cs) = (s / r0).sin_cos();
    let x = Vec2::new(r0 * cs, r0 * sn);
    [x, Vec2::new(-sn, cs), x * (-1.0 / (r0 * r0))]
}

/// Reduced circular displacement with the selected warping coefficient.
pub fn circle_displacement(case: &CircularCase, s: f64, z: f64, variant: PsiVariant) -> Vec3 {
    circle_displacement_derivative(case, 0, s, z, variant)
}

/// `∂^order/∂s^order` (order ≤ 2) of the reduced circular displacement.
pub fn circle_displacement_derivative(
    case: &CircularCase,
    order: usize,
    s: f64,
    z: f64,
    variant: PsiVariant,
) -> Vec3 {
    let c = &case.thin;
    let r0 = case.r0;
    let nu = case.mat.nu;
    let a_bar3 = c.a_bar3(r0);
    let [x, xp, xpp] = circle_point(r0, s);
    let a = c.a.plane();
    let ah = c.a_hat.plane();
    let k = c.k_twist;
    let cpsi = variant.coefficient(nu) * r0 * r0;

    // P = Â·x, Q = A·x + Ā₃ and their s-derivatives.
    let p = [ah.dot(x), ah.dot(xp), ah.dot(xpp)];
    let q = [a.dot(x) + a_bar3, a.dot(xp), a.dot(xpp)];
    let xs = [x, xp, xpp];
    match order {
        0 => {
            let inplane_scale = -z * z * z / 6.0;
            let u1 = inplane_scale * c.a_hat.x - 0.5 * z * z * c.a.x
                - nu * (z * p[0] + q[0]) * x.x
                - k * z * x.y;
            let u2 = inplane_scale * c.a_hat.y - 0.5 * z * z * c.a.y
                - nu * (z * p[0] + q[0]) * x.y
                + k * z * x.x;
            let u3 = (0.5 * z * z + cpsi) * p[0] + z * q[0];
            Vec3::new(u1, u2, u3)
        }
        1 => {
            let u1 = -nu * ((z * p[1] + q[1]) * x.x + (z * p[0] + q[0]) * xp.x) - k * z * xp.y;
            let u2 = -nu * ((z * p[1] + q[1]) * x.y + (z * p[0] + q[0]) * xp.y) + k * z * xp.x;
            let u3 = (0.5 * z * z + cpsi) * p[1] + z * q[1];
            Vec3::new(u1, u2, u3)
        }
        2 => {
            let dd = |comp: fn(Vec2) -> f64| {
                -nu * ((z * p[2] + q[2]) * comp(xs[0])
                    + 2.0 * (z * p[1] + q[1]) * comp(xs[1])
                    + (z * p[0] + q[0]) * comp(xs[2]))
            };
            let u1 = dd(|v| v.x) - k * z * xpp.y;
            let u2 = dd(|v| v.y) + k * z * xpp.x;
            let u3 = (0.5 * z * z + cpsi) * p[2] + z * q[2];
            Vec3::new(u1, u2, u3)
        }
        _ => panic!("s-derivative order {order} not supported"),
    }
}

/// Exact circular displacement (all seam-closure corrections retained).
/// Shares the gauge of the general pipeline: in-plane profiles and warping
/// vanish at `s = 0`-adjacent constants exactly as the cumulative
/// construction fixes them.
pub fn circle_exact_displacement(case: &CircularCase, s: f64, z: f64) -> Vec3 {
    let cf = &case.exact;
    let r0 = case.r0;
    let (c, d, nu) = (case.mat.c, case.mat.d, case.mat.nu);
    let lam = d / (c * r0 * r0);
    let b4 = 1.0 / (1.0 + 4.0 * lam);
    let b1 = 1.0 / (1.0 + lam);
    let [x, _, _] = circle_point(r0, s);
    let a_bar3 = cf.a_bar3(r0);

    // In-plane closure profile w_α for measures (g1, g2, gbar3).
    let w_profile = |g1: f64, g2: f64, gbar3: f64| -> Vec2 {
        let g_r = g1 * x.x + g2 * x.y + gbar3;
        let w1 = 0.5 * nu * r0 * r0 * g1 - nu * g_r * x.x
            - 2.0 * nu * lam * b4 * (g1 * x.y * x.y - g2 * x.x * x.y)
            - nu * lam * b1 * gbar3 * (r0 - x.x)
            - 3.0 * nu * lam * b4 * r0 * g2 * x.y;
        let w2 = 0.5 * nu * r0 * r0 * g2 - nu * g_r * x.y
            + 2.0 * nu * lam * b4 * (g1 * x.x * x.y + g2 * x.y * x.y)
            + nu * lam * b1 * gbar3 * x.y
            + 3.0 * nu * lam * b4 * r0 * g2 * x.x
            - 3.0 * nu * lam * b4 * r0 * r0 * g2;
        Vec2::new(w1, w2)
    };

    let w = w_profile(cf.a.x, cf.a.y, a_bar3);
    let w_hat = w_profile(cf.a_hat.x, cf.a_hat.y, 0.0);

    // Exact warping ψ̂ = q R₀² Â₁ x₁ - p R₀² Â₂ x₂ - q R₀³ Â₁.
    let eta = c * ((1.0 - nu * nu) + 2.0 * nu * nu * lam * b4);
    let beta = 2.0 * eta / (c * (1.0 - nu));
    let p_coef = 0.5 * nu - 3.0 * nu * lam * b4 - beta;
    let q_coef = -0.5 * nu + 2.0 * nu * lam * b4 + beta;
    let psi = q_coef * r0 * r0 * cf.a_hat.x * x.x - p_coef * r0 * r0 * cf.a_hat.y * x.y
        - q_coef * r0.powi(3) * cf.a_hat.x;

    let k = cf.k_twist;
    let kt = cf.k_tilde;
    let u1 = -0.5 * cf.a.x * z * z - k * z * x.y + w.x
        + z * (w_hat.x - kt * x.y)
        - cf.a_hat.x * z * z * z / 6.0;
    let u2 = -0.5 * cf.a.y * z * z + k * z * x.x + w.y
        + z * (w_hat.y + kt * x.x)
        - cf.a_hat.y * z * z * z / 6.0;
    let a_r = cf.a.x * x.x + cf.a.y * x.y + a_bar3;
    let ah_x = cf.a_hat.x * x.x + cf.a_hat.y * x.y;
    let u3 = z * a_r + 0.5 * z * z * ah_x + psi;
    Vec3::new(u1, u2, u3)
}

/// Reduced circular solution as a verifiable field.
#[derive(Debug, Clone)]
pub struct CircularSolution {
    pub case: CircularCase,
    pub variant: PsiVariant,
}

impl CircularSolution {
    pub fn new(case: CircularCase, variant: PsiVariant) -> Self {
        CircularSolution { case, variant }
    }

    /// Closed-form stresses sampled on a section grid (thin level, hoop
    /// membrane stress identically zero).
    pub fn stress_field(&self, curve: &SectionCurve) -> Result<StressField, ShellError> {
        let case = &self.case;
        let cf = &case.thin;
        let (c, d, nu) = (case.mat.c, case.mat.d, case.mat.nu);
        let r0 = case.r0;
        let area = PI * r0 * r0;
        let sbar = 2.0 * PI * r0;
        let a_bar3 = cf.a_bar3(r0);
        let n = curve.len();
        let mut nm0 = MembraneGrids::zeros(n);
        let mut nm1 = MembraneGrids::zeros(n);
        for i in 0..n {
            let x = curve.position(i);
            let a_r = cf.a.x * x.x + cf.a.y * x.y + a_bar3;
            let ah_r = cf.a_hat.x * x.x + cf.a_hat.y * x.y;
            let b_r = cf.b.x * x.x + cf.b.y * x.y + cf.b.z * sbar;
            let bh_r = cf.b_hat.x * x.x + cf.b_hat.y * x.y;
            nm0.n_sz[i] = c * (1.0 - nu) * cf.k_twist * area / sbar
                - c * (1.0 - nu * nu) * r0 * (cf.a_hat.x * x.y - cf.a_hat.y * x.x);
            nm0.n_zz[i] = c * (1.0 - nu * nu) * a_r;
            nm0.m_ss[i] = -b_r;
            nm0.m_zz[i] =
                -d * (1.0 - nu * nu) * (cf.a.x * x.x + cf.a.y * x.y) / r0 - nu * b_r;
            nm0.m_sz[i] = -d
                * (1.0 - nu)
                * (cf.k_twist - nu * (cf.a_hat.x * x.y - cf.a_hat.y * x.x));
            nm1.n_zz[i] = c * (1.0 - nu * nu) * ah_r;
            nm1.m_ss[i] = -bh_r;
            nm1.m_zz[i] = -d * (1.0 - nu * nu) * ah_r / r0 - nu * bh_r;
        }
        StressField::from_membrane(curve, vec![nm0, nm1])
    }
}

impl ShellField for CircularSolution {
    fn z_degree(&self) -> usize {
        3
    }

    fn displacement(&self, s: f64, z: f64) -> Vec3 {
        circle_displacement(&self.case, s, z, self.variant)
    }

    fn displacement_s_derivative(&self, order: usize, s: f64, z: f64) -> Vec3 {
        circle_displacement_derivative(&self.case, order, s, z, self.variant)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::stiffnesses;
    use approx::assert_relative_eq;

    fn mat() -> ShellMaterial {
        stiffnesses(1.0, 0.3, 0.01).unwrap()
    }

    fn case(force: Vec3, moment: Vec3) -> CircularCase {
        circle_coefficients(1.0, &mat(), &ResultantLoads::new(force, moment)).unwrap()
    }

    #[test]
    fn thin_coefficients_for_unit_loads() {
        let torsion = case(Vec3::ZERO, Vec3::new(0.0, 0.0, 1.0));
        assert_relative_eq!(torsion.thin.k_twist, -130.0 / PI, max_relative = 1e-14);
        assert_relative_eq!(torsion.thin.k_twist, -41.3805, max_relative = 1e-5);

        let flex = case(Vec3::new(1.0, 0.0, 0.0), Vec3::ZERO);
        assert_relative_eq!(flex.thin.a_hat.x, -100.0 / PI, max_relative = 1e-14);
        assert_relative_eq!(flex.thin.a_hat.x, -31.8310, max_relative = 1e-5);
        assert_eq!(flex.thin.k_tilde, 0.0);
    }

    #[test]
    fn zero_poisson_kills_seam_constants() {
        let m = stiffnesses(1.0, 0.0, 0.01).unwrap();
        let case = circle_coefficients(
            1.0,
            &m,
            &ResultantLoads::new(Vec3::ZERO, Vec3::new(1.0, 2.0, 0.0)),
        )
        .unwrap();
        assert_eq!(case.thin.b, Vec3::ZERO);
        assert_eq!(case.exact.b, Vec3::ZERO);
    }

    #[test]
    fn zero_loads_zero_coefficients() {
        let c = case(Vec3::ZERO, Vec3::ZERO);
        assert_eq!(c.thin.a, Vec3::ZERO);
        assert_eq!(c.thin.k_twist, 0.0);
        assert_eq!(c.exact.a_hat, Vec3::ZERO);
    }

    #[test]
    fn invalid_radius_rejected() {
        assert!(matches!(
            circle_coefficients(0.0, &mat(), &ResultantLoads::zero()),
            Err(ShellError::InvalidRadius { .. })
        ));
        assert!(matches!(
            circle_coefficients(-2.0, &mat(), &ResultantLoads::zero()),
            Err(ShellError::InvalidRadius { .. })
        ));
    }

    #[test]
    fn exact_and_thin_differ_at_plate_order() {
        let c = case(Vec3::ZERO, Vec3::new(0.0, 1.0, 0.0));
        let gap = (c.exact.a.x - c.thin.a.x).abs() / c.thin.a.x.abs();
        let lam = mat().d / mat().c;
        assert!(gap > 0.1 * lam && gap < 100.0 * lam, "gap {gap}, λ {lam}");
        let kc = case(Vec3::ZERO, Vec3::new(0.0, 0.0, 1.0));
        let kgap = (kc.exact.k_twist - kc.thin.k_twist).abs() / kc.thin.k_twist.abs();
        assert!(kgap > 1e-6 && kgap < 1e-4);
    }

    #[test]
    fn pure_torsion_displacement() {
        let c = case(Vec3::ZERO, Vec3::new(0.0, 0.0, 1.0));
        let k = c.thin.k_twist;
        for &(s, z) in &[(0.5, 1.0), (3.0, 2.0)] {
            let u = circle_displacement(&c, s, z, PsiVariant::Corollary);
            let x = Vec2::new(s.cos(), s.sin());
            assert_relative_eq!(u.x, -k * z * x.y, epsilon = 1e-13 * k.abs());
            assert_relative_eq!(u.y, k * z * x.x, epsilon = 1e-13 * k.abs());
            assert_eq!(u.z, 0.0);
        }
    }

    #[test]
    fn pure_extension_displacement() {
        let c = case(Vec3::new(0.0, 0.0, 1.0), Vec3::ZERO);
        let a_bar3 = c.thin.a_bar3(1.0);
        for &(s, z) in &[(1.0, 0.5), (4.0, 3.0)] {
            let u = circle_displacement(&c, s, z, PsiVariant::Corollary);
            let x = Vec2::new(s.cos(), s.sin());
            assert_relative_eq!(u.z, z * a_bar3, max_relative = 1e-13);
            assert_relative_eq!(u.x, -0.3 * a_bar3 * x.x, max_relative = 1e-12);
            assert_relative_eq!(u.y, -0.3 * a_bar3 * x.y, max_relative = 1e-12);
        }
    }

    #[test]
    fn variants_agree_without_transverse_force() {
        let c = case(Vec3::new(0.0, 0.0, 2.0), Vec3::new(1.0, -0.5, 0.7));
        for &(s, z) in &[(0.0, 0.0), (2.0, 1.5), (5.0, 3.0)] {
            let a = circle_displacement(&c, s, z, PsiVariant::Corollary);
            let b = circle_displacement(&c, s, z, PsiVariant::FlexureFn);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn variants_differ_under_transverse_force() {
        let c = case(Vec3::new(1.0, 0.0, 0.0), Vec3::ZERO);
        let a = circle_displacement(&c, 1.0, 0.0, PsiVariant::Corollary);
        let b = circle_displacement(&c, 1.0, 0.0, PsiVariant::FlexureFn);
        let expect = 0.5 * mat().nu * c.thin.a_hat.x * 1.0f64.cos();
        assert_relative_eq!(a.z - b.z, expect, max_relative = 1e-12);
    }

    #[test]
    fn analytic_s_derivatives_match_differences() {
        let c = case(Vec3::new(1.0, -0.5, 0.5), Vec3::new(0.3, 0.2, 0.8));
        let ds = 1e-5;
        for &(s, z) in &[(0.7, 1.2), (4.4, 0.3)] {
            for variant in [PsiVariant::Corollary, PsiVariant::FlexureFn] {
                let d1 = circle_displacement_derivative(&c, 1, s, z, variant);
                let fd = (circle_displacement(&c, s + ds, z, variant)
                    - circle_displacement(&c, s - ds, z, variant))
                    * (0.5 / ds);
                assert!((d1 - fd).norm() < 1e-6 * d1.norm().max(1.0));
                let d2 = circle_displacement_derivative(&c, 2, s, z, variant);
                let fd2 = (circle_displacement(&c, s + ds, z, variant)
                    + circle_displacement(&c, s - ds, z, variant)
                    - circle_displacement(&c, s, z, variant) * 2.0)
                    * (1.0 / (ds * ds));
                assert!((d2 - fd2).norm() < 1e-4 * d2.norm().max(1.0));
            }
        }
    }
}
