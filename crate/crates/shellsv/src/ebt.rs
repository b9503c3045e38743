//! Extension-bending-torsion solver: axial force plus arbitrary end
//! moments.
//!
//! The displacement is, up to the seam-closure profile terms,
//!
//! ```text
//! u_α = -A_α(z² - ν x·x)/2 - ν(A·r̂) x_α - K z e_{αβ} x_β + w_α(s)
//! u₃  = z (A·r̂) + K φ(s)
//! ```
//!
//! with the curvature/stretch measures `A` solved from the end resultants,
//! the closure constants `B = L·A`, and the twist `K` from the twist-torque
//! relation `K = -M₃ / [2(1-ν)(C 𝒜²/s̄ + D s̄)]`. All stresses are
//! independent of z.

use std::sync::Arc;

use crate::algebra::Vec3;
use crate::curve::SectionCurve;
use crate::error::ShellError;
use crate::field::{DisplacementProfiles, ShellField, StressField};
use crate::loads::ResultantLoads;
use crate::material::{MembraneGrids, ShellMaterial, StressState};
use crate::profiles::{
    assemble_systems, solution_kernels, torsion_profile, torsional_rigidity, COND_LIMIT,
    GROWTH_TOL,
};
use crate::series::ArcSeries;

/// Torsion warping function φ on the section grid.
pub fn torsion_function(curve: &SectionCurve) -> ArcSeries {
    torsion_profile(curve)
}

/// Solved extension-bending-torsion state.
#[derive(Debug, Clone)]
pub struct EbtSolution {
    curve: Arc<SectionCurve>,
    mat: ShellMaterial,
    loads: ResultantLoads,
    /// Curvature measures `A₁, A₂` and axial measure `A₃` (so `Ā₃ = A₃ s̄`).
    pub a: Vec3,
    /// Seam-closure constants.
    pub b: Vec3,
    /// Twist measure.
    pub k_twist: f64,
    phi: ArcSeries,
    displacement: DisplacementProfiles,
    stress: StressField,
    /// Condition numbers of the (seam, resultant) solves.
    pub condition: (f64, f64),
}

/// Solves the extension-bending-torsion problem for loads with a purely
/// axial force (`R⁰ = R₃ e₃`) and arbitrary moment about the centroid.
pub fn solve_ebt(
    curve: &Arc<SectionCurve>,
    mat: &ShellMaterial,
    loads: &ResultantLoads,
) -> Result<EbtSolution, ShellError> {
    if loads.force.x != 0.0 || loads.force.y != 0.0 {
        return Err(ShellError::NonAxialForce {
            r1: loads.force.x,
            r2: loads.force.y,
        });
    }
    let sys = assemble_systems(curve, mat)?;
    let rhs = Vec3::new(-loads.force.z, loads.moment.y, -loads.moment.x);
    let a = sys.g.solve(rhs, COND_LIMIT)?;
    let b = sys.l.mul_vec(a);
    let k_twist = -loads.moment.z / torsional_rigidity(curve, mat);

    let phi = torsion_profile(curve);
    let kernels = solution_kernels(curve, mat, a, b);

    let grid = curve.grid();
    let x1 = curve.positions(0);
    let x2 = curve.positions(1);

    // Displacement z-polynomials per the closed form.
    let u1 = vec![
        kernels.w[0].periodic_projection(GROWTH_TOL),
        ArcSeries::from_samples(grid, x2.iter().map(|v| -k_twist * v).collect()),
        ArcSeries::constant(grid, -0.5 * a.x),
    ];
    let u2 = vec![
        kernels.w[1].periodic_projection(GROWTH_TOL),
        ArcSeries::from_samples(grid, x1.iter().map(|v| k_twist * v).collect()),
        ArcSeries::constant(grid, -0.5 * a.y),
    ];
    let axial = curve.sample_indexed(|i| a.dot(curve.r_hat(i)));
    let u3 = vec![
        phi.scaled(k_twist).periodic_projection(GROWTH_TOL),
        ArcSeries::from_samples(grid, axial),
    ];
    let displacement = DisplacementProfiles::new(grid, [u1, u2, u3]);

    // Stresses are z-independent.
    let n = curve.len();
    let mut nm = MembraneGrids::zeros(n);
    let shear = mat.c * (1.0 - mat.nu) * k_twist * curve.area() / curve.perimeter();
    let couple_shear = -mat.d * (1.0 - mat.nu) * k_twist;
    for i in 0..n {
        let nrm3 = Vec3::from_plane(curve.normal(i));
        let kappa = curve.curvature(i);
        let b_edge = b.dot(nrm3 + curve.r_hat(i) * kappa);
        let b_rhat = b.dot(curve.r_hat(i));
        nm.n_ss[i] = -b_edge;
        nm.n_sz[i] = shear;
        nm.n_zz[i] = mat.c * (1.0 - mat.nu * mat.nu) * a.dot(curve.r_hat(i)) - mat.nu * b_edge;
        nm.m_ss[i] = -b_rhat;
        nm.m_sz[i] = couple_shear;
        nm.m_zz[i] =
            -mat.d * (1.0 - mat.nu * mat.nu) * a.dot(nrm3) - mat.nu * b_rhat;
    }
    let stress = StressField::from_membrane(curve, vec![nm])?;

    Ok(EbtSolution {
        curve: Arc::clone(curve),
        mat: *mat,
        loads: *loads,
        a,
        b,
        k_twist,
        phi,
        displacement,
        stress,
        condition: (sys.cond_seam, sys.cond_resultant),
    })
}

impl EbtSolution {
    pub fn curve(&self) -> &Arc<SectionCurve> {
        &self.curve
    }

    pub fn material(&self) -> &ShellMaterial {
        &self.mat
    }

    pub fn loads(&self) -> &ResultantLoads {
        &self.loads
    }

    /// Stretch measure `Ā₃ = A₃ s̄`.
    pub fn a_bar3(&self) -> f64 {
        self.a.z * self.curve.perimeter()
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

    /// Displacement at `(s, z)`.
    pub fn displacement(&self, s: f64, z: f64) -> Vec3 {
        self.displacement.eval(s, z)
    }

    /// Full stress state at arc position s (any z; the field is constant).
    pub fn stress(&self, s: f64) -> StressState {
        self.stress.interpolate(s, 0.0)
    }
}

impl ShellField for EbtSolution {
    fn z_degree(&self) -> usize {
        2
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

/// Builds an EBT solution with the seam-closure constants forced to zero.
/// Only useful as a negative control: on non-circular sections the seam
/// conditions then fail and the continuity check must flag the defect.
pub fn solve_ebt_without_closure(
    curve: &Arc<SectionCurve>,
    mat: &ShellMaterial,
    loads: &ResultantLoads,
) -> Result<EbtSolution, ShellError> {
    let mut sol = solve_ebt(curve, mat, loads)?;
    let a = sol.a;
    let zero_b = Vec3::ZERO;
    let kernels = solution_kernels(curve, mat, a, zero_b);
    let grid = curve.grid();
    let x1 = curve.positions(0);
    let x2 = curve.positions(1);
    let k_twist = sol.k_twist;
    let u1 = vec![
        kernels.w[0].clone(),
        ArcSeries::from_samples(grid, x2.iter().map(|v| -k_twist * v).collect()),
        ArcSeries::constant(grid, -0.5 * a.x),
    ];
    let u2 = vec![
        kernels.w[1].clone(),
        ArcSeries::from_samples(grid, x1.iter().map(|v| k_twist * v).collect()),
        ArcSeries::constant(grid, -0.5 * a.y),
    ];
    let axial = curve.sample_indexed(|i| a.dot(curve.r_hat(i)));
    let u3 = vec![sol.phi.scaled(k_twist), ArcSeries::from_samples(grid, axial)];
    sol.b = zero_b;
    sol.displacement = DisplacementProfiles::new(grid, [u1, u2, u3]);
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Vec2;
    use crate::curve::{build_section, FourierCurveSpec};
    use crate::material::stiffnesses;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn circle(n: usize) -> Arc<SectionCurve> {
        Arc::new(build_section(&FourierCurveSpec::circle(1.0), n).unwrap())
    }

    fn torsion_loads(m3: f64) -> ResultantLoads {
        ResultantLoads::new(Vec3::ZERO, Vec3::new(0.0, 0.0, m3))
    }

    #[test]
    fn twist_per_torque_on_unit_circle() {
        let curve = circle(256);
        let mat = stiffnesses(1.0, 0.3, 0.01).unwrap();
        let sol = solve_ebt(&curve, &mat, &torsion_loads(1.0)).unwrap();
        // Direct evaluation of the twist-torque relation with analytic
        // section constants (𝒜 = π, s̄ = 2π).
        let expected = -1.0 / (2.0 * (1.0 - 0.3) * (mat.c * PI / 2.0 + mat.d * 2.0 * PI));
        assert_relative_eq!(sol.k_twist, expected, max_relative = 1e-12);
        assert_relative_eq!(sol.k_twist, -41.378_906, max_relative = 1e-6);
        // Pure torsion produces no curvature or closure constants.
        assert!(sol.a.norm() < 1e-12);
        assert!(sol.b.norm() < 1e-14);
    }

    #[test]
    fn zero_loads_give_zero_solution() {
        let curve = circle(128);
        let mat = stiffnesses(1.0, 0.3, 0.01).unwrap();
        let sol = solve_ebt(&curve, &mat, &ResultantLoads::zero()).unwrap();
        assert_eq!(sol.a, Vec3::ZERO);
        assert_eq!(sol.b, Vec3::ZERO);
        assert_eq!(sol.k_twist, 0.0);
        let u = sol.displacement(1.0, 2.0);
        assert!(u.norm() < 1e-15);
        let st = sol.stress(0.5);
        assert!(st.n_zz.abs() < 1e-15 && st.m_ss.abs() < 1e-15);
    }

    #[test]
    fn transverse_force_is_rejected() {
        let curve = circle(128);
        let mat = stiffnesses(1.0, 0.3, 0.01).unwrap();
        let loads = ResultantLoads::new(Vec3::new(1.0, 0.0, 0.0), Vec3::ZERO);
        assert!(matches!(
            solve_ebt(&curve, &mat, &loads),
            Err(ShellError::NonAxialForce { .. })
        ));
    }

    #[test]
    fn pure_torsion_displacement_on_circle() {
        let curve = circle(256);
        let mat = stiffnesses(1.0, 0.3, 0.01).unwrap();
        let sol = solve_ebt(&curve, &mat, &torsion_loads(1.0)).unwrap();
        let k = sol.k_twist;
        for &(s, z) in &[(0.3, 0.0), (2.0, 1.5), (5.5, -2.0)] {
            let u = sol.displacement(s, z);
            let x = Vec2::new(s.cos(), s.sin());
            assert_relative_eq!(u.x, -k * z * x.y, epsilon = 1e-12 * k.abs());
            assert_relative_eq!(u.y, k * z * x.x, epsilon = 1e-12 * k.abs());
            assert!(u.z.abs() < 1e-12 * k.abs());
        }
    }

    #[test]
    fn shear_resultant_is_constant_and_z_independent() {
        let curve = Arc::new(build_section(&FourierCurveSpec::ellipse(2.0, 1.0), 256).unwrap());
        let mat = stiffnesses(1.0, 0.3, 0.01).unwrap();
        let sol = solve_ebt(&curve, &mat, &torsion_loads(1.0)).unwrap();
        let expect = mat.c * (1.0 - mat.nu) * sol.k_twist * curve.area() / curve.perimeter();
        for &s in &[0.0, 1.0, 4.0, 8.0] {
            let st = sol.stress(s);
            assert_relative_eq!(st.n_sz, expect, max_relative = 1e-12);
        }
        // Stresses at two distinct heights agree exactly.
        let a = sol.stress_field().at_node(7, 0.0);
        let b = sol.stress_field().at_node(7, 3.25);
        assert_eq!(a, b);
    }

    #[test]
    fn solution_is_linear_in_loads() {
        let curve = Arc::new(build_section(&FourierCurveSpec::ellipse(2.0, 1.0), 128).unwrap());
        let mat = stiffnesses(2.0, 0.25, 0.02).unwrap();
        let l1 = ResultantLoads::new(Vec3::new(0.0, 0.0, 1.0), Vec3::new(0.5, -0.25, 2.0));
        let l2 = ResultantLoads::new(Vec3::new(0.0, 0.0, -0.5), Vec3::new(1.0, 3.0, -1.0));
        let (alpha, beta) = (1.3, -0.7);
        let combo = ResultantLoads::new(
            l1.force * alpha + l2.force * beta,
            l1.moment * alpha + l2.moment * beta,
        );
        let s1 = solve_ebt(&curve, &mat, &l1).unwrap();
        let s2 = solve_ebt(&curve, &mat, &l2).unwrap();
        let sc = solve_ebt(&curve, &mat, &combo).unwrap();
        let expect_a = s1.a * alpha + s2.a * beta;
        let expect_b = s1.b * alpha + s2.b * beta;
        assert_relative_eq!(sc.a.x, expect_a.x, max_relative = 1e-11, epsilon = 1e-14);
        assert_relative_eq!(sc.a.y, expect_a.y, max_relative = 1e-11, epsilon = 1e-14);
        assert_relative_eq!(sc.a.z, expect_a.z, max_relative = 1e-11, epsilon = 1e-14);
        assert_relative_eq!(
            sc.k_twist,
            alpha * s1.k_twist + beta * s2.k_twist,
            max_relative = 1e-12
        );
        assert_relative_eq!(sc.b.x, expect_b.x, max_relative = 1e-10, epsilon = 1e-18);
    }

    #[test]
    fn seam_closes_for_solved_b_but_not_without() {
        let curve = Arc::new(build_section(&FourierCurveSpec::ellipse(2.0, 1.0), 256).unwrap());
        let mat = stiffnesses(1.0, 0.3, 0.01).unwrap();
        let loads = ResultantLoads::new(Vec3::ZERO, Vec3::new(0.0, 1.0, 0.0));
        let good = solve_ebt(&curve, &mat, &loads).unwrap();
        let broken = solve_ebt_without_closure(&curve, &mat, &loads).unwrap();
        let sbar = curve.perimeter();
        let scale = good.displacement_profiles().scale();
        let jump = |sol: &EbtSolution| {
            let a = sol.displacement(0.0, 0.0);
            let b = sol.displacement(sbar, 0.0);
            (a - b).norm()
        };
        assert!(jump(&good) < 1e-10 * scale, "closed seam expected");
        assert!(
            jump(&broken) > 1e4 * jump(&good).max(1e-300),
            "dropping the closure solve must open the seam"
        );
    }
}
