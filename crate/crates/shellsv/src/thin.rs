//! Simplified solution for very thin walls: the coefficient systems
//! decouple through the line inertia, the twist-torque relation reduces to
//! `K = -M₃ s̄ / (4 μ h 𝒜²)`, and the seam constants follow explicitly from
//! the curvature integrals. Terms of relative size `(h/s̄)²` are dropped
//! throughout, so fields differ from the exact solution at that order.
//!
//! Mixed load sets are accepted here: the solution is the superposition of
//! the reduced extension-bending-torsion and flexure parts.

use std::sync::Arc;

use crate::algebra::{solve2, Mat3, Vec3};
use crate::curve::SectionCurve;
use crate::error::ShellError;
use crate::field::{DisplacementProfiles, ShellField, StressField};
use crate::loads::ResultantLoads;
use crate::material::{MembraneGrids, ShellMaterial, StressState};
use crate::profiles::{torsion_profile, COND_LIMIT, GROWTH_TOL};
use crate::series::ArcSeries;

/// Thin-limit solution for a (possibly mixed) load set.
#[derive(Debug, Clone)]
pub struct ThinSolution {
    curve: Arc<SectionCurve>,
    mat: ShellMaterial,
    loads: ResultantLoads,
    /// Curvature measures and axial measure (`Ā₃ = A₃ s̄`).
    pub a: Vec3,
    pub b: Vec3,
    pub k_twist: f64,
    /// Flexure measures (third component identically zero).
    pub a_hat: Vec3,
    pub b_hat: Vec3,
    pub k_tilde: f64,
    pub k0: f64,
    psi: ArcSeries,
    phi: ArcSeries,
    displacement: DisplacementProfiles,
    stress: StressField,
}

fn inertia_solve(curve: &SectionCurve, rhs: [f64; 2]) -> Result<[f64; 2], ShellError> {
    let i = curve.inertia();
    solve2([[i[0][0], i[0][1]], [i[1][0], i[1][1]]], rhs, COND_LIMIT).ok_or_else(|| {
        ShellError::SingularSystem {
            condition: f64::INFINITY,
            matrix: Box::new(Mat3::from_rows([
                [i[0][0], i[0][1], 0.0],
                [i[1][0], i[1][1], 0.0],
                [0.0, 0.0, 1.0],
            ])),
        }
    })
}

/// Seam constants from the reduced closure relations.
fn thin_b(curve: &SectionCurve, mat: &ShellMaterial, a: Vec3) -> Result<Vec3, ShellError> {
    let sbar = curve.perimeter();
    let a_bar3 = a.z * sbar;
    let kx = |alpha: usize| {
        curve.sample_indexed(|i| curve.position(i).component(alpha) * curve.curvature(i))
    };
    let j1 = curve.closed_integral(&kx(0))?;
    let j2 = curve.closed_integral(&kx(1))?;
    let mut rhs = [0.0; 2];
    for alpha in 0..2 {
        let mut acc = 0.0;
        for beta in 0..2 {
            let prod = curve.sample_indexed(|i| {
                curve.position(i).component(alpha)
                    * curve.position(i).component(beta)
                    * curve.curvature(i)
            });
            acc += a.component(beta) * curve.closed_integral(&prod)?;
        }
        acc += a_bar3 * if alpha == 0 { j1 } else { j2 };
        rhs[alpha] = -mat.nu * mat.d * acc;
    }
    let b_plane = inertia_solve(curve, rhs)?;
    let b3 = -(mat.nu * mat.d / (sbar * sbar))
        * (a.x * j1 + a.y * j2 + 2.0 * std::f64::consts::PI * a_bar3);
    Ok(Vec3::new(b_plane[0], b_plane[1], b3))
}

/// Double integral `∫₀ˢ n_α ∫₀ˢ [(ν/R) A + (1/D) B]·r̂` with the thin
/// kernel (the `1/(C R²)` term dropped).
fn thin_nested(
    curve: &SectionCurve,
    mat: &ShellMaterial,
    a: Vec3,
    b: Vec3,
) -> (ArcSeries, [ArcSeries; 2]) {
    let grid = curve.grid();
    let g = curve.sample_indexed(|i| {
        (a * (mat.nu * curve.curvature(i)) + b * (1.0 / mat.d)).dot(curve.r_hat(i))
    });
    let inner = ArcSeries::from_samples(grid, g).integrate();
    let nested = [
        inner
            .mul_samples(&curve.sample_indexed(|i| curve.normal(i).x))
            .integrate(),
        inner
            .mul_samples(&curve.sample_indexed(|i| curve.normal(i).y))
            .integrate(),
    ];
    (inner, nested)
}

/// Reduced flexure function and its gauge constants.
///
/// Returns `(ψ, K₀, K̃)` with `ψ(0) = ψ(s̄) = 0`.
pub fn thin_flexure_function(
    a_hat: Vec3,
    b_hat: Vec3,
    curve: &SectionCurve,
    mat: &ShellMaterial,
) -> Result<(ArcSeries, f64, f64), ShellError> {
    let grid = curve.grid();
    let nu = mat.nu;
    let area = curve.area();
    let sbar = curve.perimeter();
    let (_, nested) = thin_nested(curve, mat, a_hat, b_hat);
    let tau1 = curve.sample_indexed(|i| curve.tangent(i).x);
    let tau2 = curve.sample_indexed(|i| curve.tangent(i).y);
    let mut tau_dot_nested = nested[0].mul_samples(&tau1);
    tau_dot_nested.add_scaled(&nested[1].mul_samples(&tau2), 1.0);

    // Shared polynomial part of the ψ and K̃ integrands.
    let poly_part = curve.sample_indexed(|i| {
        let x = curve.position(i);
        let xp = curve.tangent(i);
        let xx = x.dot(x);
        let xxp = x.dot(xp);
        a_hat.x * (0.5 * nu * xp.x * xx - nu * x.x * xxp)
            + a_hat.y * (0.5 * nu * xp.y * xx - nu * x.y * xxp)
    });

    // K̃ integrand: poly_part - ((1+ν) s̄ / 𝒜) Â_α x_α φ - τ·nested
    let phi = torsion_profile(curve);
    let mut ktilde_integrand = ArcSeries::from_samples(grid, poly_part.clone());
    let x1 = curve.positions(0).to_vec();
    let x2 = curve.positions(1).to_vec();
    let mut phi_xa = phi.mul_samples(&x1).scaled(a_hat.x);
    phi_xa.add_scaled(&phi.mul_samples(&x2), a_hat.y);
    ktilde_integrand.add_scaled(&phi_xa, -(1.0 + nu) * sbar / area);
    ktilde_integrand.add_scaled(&tau_dot_nested, -1.0);
    let k_tilde = -ktilde_integrand.closed_integral() / (2.0 * area);

    // K₀ = -K̃ 2𝒜/s̄ - ((1+ν)/𝒜) Â_α ∮ x_α Φ, Φ = ∫₀ˢ r·n.
    let big_phi = ArcSeries::from_samples(grid, curve.r_dot_n()).integrate();
    let mut xa_phi = big_phi.mul_samples(&x1).scaled(a_hat.x);
    xa_phi.add_scaled(&big_phi.mul_samples(&x2), a_hat.y);
    let k0 =
        -k_tilde * 2.0 * area / sbar - (1.0 + nu) / area * xa_phi.closed_integral();

    // ψ = K₀ s - ∫₀ˢ { poly_part + 2(1+ν) Â_α ∫₀ˢ x_α - τ·nested }.
    let xint = [
        ArcSeries::from_samples(grid, x1.clone()).integrate(),
        ArcSeries::from_samples(grid, x2.clone()).integrate(),
    ];
    let mut psi_integrand = ArcSeries::from_samples(grid, poly_part);
    psi_integrand.add_scaled(&xint[0], 2.0 * (1.0 + nu) * a_hat.x);
    psi_integrand.add_scaled(&xint[1], 2.0 * (1.0 + nu) * a_hat.y);
    psi_integrand.add_scaled(&tau_dot_nested, -1.0);
    let mut psi = psi_integrand.integrate().scaled(-1.0);
    psi.add_scaled(&ArcSeries::linear(grid, k0), 1.0);
    Ok((psi, k0, k_tilde))
}

/// Solves the thin-limit problem for the full load set.
pub fn solve_thin(
    curve: &Arc<SectionCurve>,
    mat: &ShellMaterial,
    loads: &ResultantLoads,
) -> Result<ThinSolution, ShellError> {
    let sbar = curve.perimeter();
    let area = curve.area();
    let eh = mat.e * mat.h;

    // Reduced extension-bending-torsion measures.
    let a_plane = inertia_solve(
        curve,
        [loads.moment.y / eh, -loads.moment.x / eh],
    )?;
    let a_bar3 = -loads.force.z / (sbar * eh);
    let a = Vec3::new(a_plane[0], a_plane[1], a_bar3 / sbar);
    let k_twist = -loads.moment.z * sbar / (4.0 * mat.mu * mat.h * area * area);
    let b = thin_b(curve, mat, a)?;

    // Reduced flexure measures.
    let a_hat_plane = inertia_solve(curve, [-loads.force.x / eh, -loads.force.y / eh])?;
    let a_hat = Vec3::new(a_hat_plane[0], a_hat_plane[1], 0.0);
    let b_hat = thin_b(curve, mat, a_hat)?;
    let (psi, k0, k_tilde) = thin_flexure_function(a_hat, b_hat, curve, mat)?;

    let phi = torsion_profile(curve);
    let grid = curve.grid();
    let x1 = curve.positions(0).to_vec();
    let x2 = curve.positions(1).to_vec();

    let (_, nested_ebt) = thin_nested(curve, mat, a, b);
    let (inner_hat, nested_hat) = thin_nested(curve, mat, a_hat, b_hat);

    // In-plane displacement polynomials.
    let k_total = k_twist + k_tilde;
    let mut comp_u = Vec::with_capacity(2);
    for alpha in 0..2 {
        let base0 = curve.sample_indexed(|i| {
            let x = curve.position(i);
            0.5 * mat.nu * x.dot(x) * a.component(alpha)
                - mat.nu * x.component(alpha) * (a.x * x.x + a.y * x.y + a_bar3)
        });
        let mut u0 = ArcSeries::from_samples(grid, base0);
        u0.add_scaled(&nested_ebt[alpha], -1.0);
        let base1 = curve.sample_indexed(|i| {
            let x = curve.position(i);
            let twist = if alpha == 0 { -k_total * x.y } else { k_total * x.x };
            0.5 * mat.nu * x.dot(x) * a_hat.component(alpha)
                - mat.nu * x.component(alpha) * (a_hat.x * x.x + a_hat.y * x.y)
                + twist
        });
        let mut u1 = ArcSeries::from_samples(grid, base1);
        u1.add_scaled(&nested_hat[alpha], -1.0);
        comp_u.push(vec![
            u0.periodic_projection(GROWTH_TOL),
            u1.periodic_projection(GROWTH_TOL),
            ArcSeries::constant(grid, -0.5 * a.component(alpha)),
            ArcSeries::constant(grid, -a_hat.component(alpha) / 6.0),
        ]);
    }
    let mut u3_0 = psi.clone();
    u3_0.add_scaled(&phi, k_total);
    let u3 = vec![
        u3_0.periodic_projection(GROWTH_TOL),
        ArcSeries::from_samples(
            grid,
            curve.sample_indexed(|i| {
                let x = curve.position(i);
                a.x * x.x + a.y * x.y + a_bar3
            }),
        ),
        ArcSeries::from_samples(
            grid,
            curve.sample_indexed(|i| {
                let x = curve.position(i);
                0.5 * (a_hat.x * x.x + a_hat.y * x.y)
            }),
        ),
    ];
    let u2 = comp_u.remove(1);
    let u1_profiles = comp_u.remove(0);
    let displacement = DisplacementProfiles::new(grid, [u1_profiles, u2, u3]);

    // Stress polynomials: membrane hoop stress vanishes identically.
    let n = curve.len();
    let (c, d, nu) = (mat.c, mat.d, mat.nu);
    let mut nm0 = MembraneGrids::zeros(n);
    let mut nm1 = MembraneGrids::zeros(n);
    let xint = [
        ArcSeries::from_samples(grid, x1.clone()).integrate(),
        ArcSeries::from_samples(grid, x2.clone()).integrate(),
    ];
    let big_phi = ArcSeries::from_samples(grid, curve.r_dot_n()).integrate();
    let mut xi = [0.0; 2];
    for alpha in 0..2 {
        xi[alpha] = big_phi
            .mul_samples(if alpha == 0 { &x1 } else { &x2 })
            .closed_integral();
    }
    let xint0 = xint[0].eval_grid();
    let xint1 = xint[1].eval_grid();
    let inner_hat_grid = inner_hat.eval_grid();
    for i in 0..n {
        let x = curve.position(i);
        let nrm = curve.normal(i);
        let a_r = a.x * x.x + a.y * x.y + a_bar3;
        let ah_r = a_hat.x * x.x + a_hat.y * x.y;
        let b_r = b.dot(curve.r_hat(i));
        let bh_r = b_hat.dot(curve.r_hat(i));
        nm0.n_sz[i] = c * (1.0 - nu) * k_twist * area / sbar
            - c * (1.0 - nu * nu)
                * (a_hat.x * (xint0[i] + xi[0] / (2.0 * area))
                    + a_hat.y * (xint1[i] + xi[1] / (2.0 * area)));
        nm0.n_zz[i] = c * (1.0 - nu * nu) * a_r;
        nm0.m_ss[i] = -b_r;
        nm0.m_zz[i] = -d * (1.0 - nu * nu) * (a.x * nrm.x + a.y * nrm.y) - nu * b_r;
        nm0.m_sz[i] = -d
            * (1.0 - nu)
            * (k_twist + k_tilde - nu * (a_hat.x * x.y - a_hat.y * x.x) + inner_hat_grid[i]);
        nm1.n_zz[i] = c * (1.0 - nu * nu) * ah_r;
        nm1.m_ss[i] = -bh_r;
        nm1.m_zz[i] = -d * (1.0 - nu * nu) * (a_hat.x * nrm.x + a_hat.y * nrm.y) - nu * bh_r;
    }
    let stress = StressField::from_membrane(curve, vec![nm0, nm1])?;

    Ok(ThinSolution {
        curve: Arc::clone(curve),
        mat: *mat,
        loads: *loads,
        a,
        b,
        k_twist,
        a_hat,
        b_hat,
        k_tilde,
        k0,
        psi,
        phi,
        displacement,
        stress,
    })
}

impl ThinSolution {
    pub fn curve(&self) -> &Arc<SectionCurve> {
        &self.curve
    }

    pub fn material(&self) -> &ShellMaterial {
        &self.mat
    }

    pub fn loads(&self) -> &ResultantLoads {
        &self.loads
    }

    pub fn a_bar3(&self) -> f64 {
        self.a.z * self.curve.perimeter()
    }

    pub fn flexure_fn(&self) -> &ArcSeries {
        &self.psi
    }

    pub fn torsion_fn(&self) -> &ArcSeries {
        &self.phi
    }

    pub fn displacement_profiles(&self) -> &DisplacementProfiles {
        &self.displacement
    }

    pub fn stress_field(&self) -> &StressField {
        &self.stress
    }

    pub fn displacement(&self, s: f64, z: f64) -> Vec3 {
        self.displacement.eval(s, z)
    }

    pub fn stress(&self, s: f64, z: f64) -> StressState {
        self.stress.interpolate(s, z)
    }
}

impl ShellField for ThinSolution {
    fn z_degree(&self) -> usize {
        3
    }

    fn displacement(&self, s: f64, z: f64) -> Vec3 {
        self.displacement.eval(s, z)
    }

    fn displacement_s_derivative(&self, order: usize, s: f64, z: f64) -> Vec3 {
        self.displacement.eval_s_derivative(order, s, z)
    }

    fn sample_displacement(&self, _curve: &SectionCurve, z: f64) -> [Vec<f64>; 3] {
        self.displacement.sample(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{build_section, FourierCurveSpec};
    use crate::ebt::solve_ebt;
    use crate::flexure::solve_flexure;
    use crate::material::stiffnesses;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn circle(n: usize) -> Arc<SectionCurve> {
        Arc::new(build_section(&FourierCurveSpec::circle(1.0), n).unwrap())
    }

    fn mat() -> ShellMaterial {
        stiffnesses(1.0, 0.3, 0.01).unwrap()
    }

    #[test]
    fn reduced_measures_on_unit_circle() {
        let curve = circle(256);
        let m = mat();
        // Bending about e2.
        let bend = solve_thin(
            &curve,
            &m,
            &ResultantLoads::new(Vec3::ZERO, Vec3::new(0.0, 1.0, 0.0)),
        )
        .unwrap();
        assert_relative_eq!(bend.a.x, 1.0 / (PI * 0.01), max_relative = 1e-11);
        assert_relative_eq!(bend.a.x, 31.8310, max_relative = 1e-5);
        assert!(bend.a.y.abs() < 1e-10);

        // Axial force.
        let axial = solve_thin(
            &curve,
            &m,
            &ResultantLoads::new(Vec3::new(0.0, 0.0, 1.0), Vec3::ZERO),
        )
        .unwrap();
        assert_relative_eq!(axial.a_bar3(), -1.0 / (2.0 * PI * 0.01), max_relative = 1e-11);
        assert_relative_eq!(axial.a_bar3(), -15.9155, max_relative = 1e-5);

        // Torsion: the reduced twist-torque relation.
        let torsion = solve_thin(
            &curve,
            &m,
            &ResultantLoads::new(Vec3::ZERO, Vec3::new(0.0, 0.0, 1.0)),
        )
        .unwrap();
        assert_relative_eq!(torsion.k_twist, -130.0 / PI, max_relative = 1e-11);
        assert_relative_eq!(torsion.k_twist, -41.3805, max_relative = 1e-5);
    }

    #[test]
    fn thin_twist_sits_close_to_exact() {
        let curve = circle(256);
        let m = mat();
        let loads = ResultantLoads::new(Vec3::ZERO, Vec3::new(0.0, 0.0, 1.0));
        let thin = solve_thin(&curve, &m, &loads).unwrap();
        let exact = solve_ebt(&curve, &m, &loads).unwrap();
        let gap = (thin.k_twist - exact.k_twist).abs() / exact.k_twist.abs();
        assert!(gap < 1e-3, "thin-exact twist gap {gap}");
        assert!(gap > 1e-6, "gap should be the dropped D s̄ correction");
    }

    #[test]
    fn inertia_relation_is_satisfied() {
        let curve = Arc::new(build_section(&FourierCurveSpec::ellipse(2.0, 1.0), 256).unwrap());
        let m = mat();
        let loads = ResultantLoads::new(Vec3::new(0.5, -0.7, 0.3), Vec3::new(1.0, 2.0, -0.5));
        let sol = solve_thin(&curve, &m, &loads).unwrap();
        let inertia = curve.inertia();
        let eh = m.e * m.h;
        let lhs1 = inertia[0][0] * sol.a.x + inertia[0][1] * sol.a.y;
        let lhs2 = inertia[1][0] * sol.a.x + inertia[1][1] * sol.a.y;
        assert_relative_eq!(lhs1, loads.moment.y / eh, max_relative = 1e-12);
        assert_relative_eq!(lhs2, -loads.moment.x / eh, max_relative = 1e-12);
        let lh1 = inertia[0][0] * sol.a_hat.x + inertia[0][1] * sol.a_hat.y;
        assert_relative_eq!(lh1, -loads.force.x / eh, max_relative = 1e-12);
        assert_eq!(sol.a_hat.z, 0.0);
    }

    #[test]
    fn circle_kills_nested_term_and_twist_correction() {
        let curve = circle(256);
        let m = mat();
        let loads = ResultantLoads::new(Vec3::new(1.0, 0.0, 0.0), Vec3::ZERO);
        let sol = solve_thin(&curve, &m, &loads).unwrap();
        // B̂ = -ν D A ⟹ the nested kernel (ν/R) Â + (1/D) B̂ vanishes.
        let kernel = sol.a_hat * (m.nu / 1.0) + sol.b_hat * (1.0 / m.d);
        assert!(kernel.norm() < 1e-9 * sol.a_hat.norm());
        assert!(sol.k_tilde.abs() < 1e-10 * sol.a_hat.norm());
        // K₀ on the circle: 2(1+ν) R₀² Â₂ (zero for a load along e1).
        assert!(sol.k0.abs() < 1e-10 * sol.a_hat.norm());
        let sol2 = solve_thin(
            &curve,
            &m,
            &ResultantLoads::new(Vec3::new(0.0, 1.0, 0.0), Vec3::ZERO),
        )
        .unwrap();
        assert_relative_eq!(
            sol2.k0,
            2.0 * (1.0 + m.nu) * sol2.a_hat.y,
            max_relative = 1e-9
        );
    }

    #[test]
    fn circle_flexure_fn_matches_closed_form() {
        // ψ = (4+3ν)/2 R₀² Â_α x_α up to the gauge constant fixing ψ(0)=0.
        let curve = circle(256);
        let m = mat();
        let loads = ResultantLoads::new(Vec3::new(1.0, -0.5, 0.0), Vec3::ZERO);
        let sol = solve_thin(&curve, &m, &loads).unwrap();
        let coeff = 0.5 * (4.0 + 3.0 * m.nu);
        let scale = sol.a_hat.norm() * coeff;
        for (i, s) in curve.grid().points().enumerate() {
            let x = curve.position(i);
            let expect =
                coeff * (sol.a_hat.x * x.x + sol.a_hat.y * x.y) - coeff * sol.a_hat.x;
            assert_relative_eq!(sol.psi.eval(s), expect, epsilon = 1e-9 * scale);
        }
    }

    #[test]
    fn hoop_membrane_stress_vanishes_identically() {
        let curve = Arc::new(build_section(&FourierCurveSpec::ellipse(2.0, 1.0), 256).unwrap());
        let m = mat();
        let loads = ResultantLoads::new(Vec3::new(1.0, 0.5, 0.25), Vec3::new(0.4, -1.0, 0.8));
        let sol = solve_thin(&curve, &m, &loads).unwrap();
        for i in 0..curve.len() {
            for z in [0.0, 1.3, 2.9] {
                assert_eq!(sol.stress_field().at_node(i, z).n_ss, 0.0);
            }
        }
    }

    #[test]
    fn stresses_at_most_linear_in_z() {
        let curve = Arc::new(build_section(&FourierCurveSpec::ellipse(2.0, 1.0), 128).unwrap());
        let m = mat();
        let loads = ResultantLoads::new(Vec3::new(1.0, 0.0, 2.0), Vec3::new(0.0, 1.0, 0.5));
        let sol = solve_thin(&curve, &m, &loads).unwrap();
        for i in [3, 40, 100] {
            let s0 = sol.stress_field().at_node(i, 0.0);
            let s1 = sol.stress_field().at_node(i, 1.0);
            let s2 = sol.stress_field().at_node(i, 2.0);
            assert_relative_eq!(s1.n_zz, 0.5 * (s0.n_zz + s2.n_zz), max_relative = 1e-12);
            assert_relative_eq!(s1.m_sz, 0.5 * (s0.m_sz + s2.m_sz), max_relative = 1e-12);
        }
    }

    #[test]
    fn seam_constants_stay_at_plate_scale() {
        let curve = Arc::new(build_section(&FourierCurveSpec::ellipse(2.0, 1.0), 256).unwrap());
        let m = mat();
        let loads = ResultantLoads::new(Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0));
        let sol = solve_thin(&curve, &m, &loads).unwrap();
        let bound = 20.0 * m.d / curve.perimeter();
        assert!(sol.b.norm() <= bound * sol.a.norm());
        assert!(sol.b_hat.norm() <= bound * sol.a_hat.norm());
    }

    #[test]
    fn thin_flexure_fn_tracks_exact_on_ellipse() {
        let curve = Arc::new(build_section(&FourierCurveSpec::ellipse(2.0, 1.0), 256).unwrap());
        let m = mat();
        let loads = ResultantLoads::new(Vec3::new(1.0, 0.0, 0.0), Vec3::ZERO);
        let thin = solve_thin(&curve, &m, &loads).unwrap();
        let exact = solve_flexure(&curve, &m, &loads).unwrap();
        let scale = exact.flexure_fn().scale();
        let mut worst = 0.0f64;
        for s in curve.grid().points() {
            worst = worst.max((thin.psi.eval(s) - exact.flexure_fn().eval(s)).abs());
        }
        // The dropped terms are of relative size (h/R)²/12 with R down to
        // b²/a = 1/2 on this ellipse.
        assert!(worst < 1e-3 * scale, "ψ gap {worst} vs scale {scale}");
        assert!(worst > 1e-9 * scale, "gap unexpectedly tiny");
    }
}
