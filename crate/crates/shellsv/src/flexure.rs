//! Flexure solver: transverse end forces with zero end moments.
//!
//! The axial derivative of the flexure field is the bending solution with
//! moments `e_{αβ} R_β⁰`, so the in-plane machinery of the
//! extension-bending-torsion problem is reused with hatted coefficients.
//! What is new here is the flexure warping `ψ(s)` (a triple-nested arc
//! quadrature closed by the gauge constant `K₀`) and the twist correction
//! `K̃` from the zero-moment end condition. All stresses are at most linear
//! in z.

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

/// Solved flexure state.
#[derive(Debug, Clone)]
pub struct FlexureSolution {
    curve: Arc<SectionCurve>,
    mat: ShellMaterial,
    loads: ResultantLoads,
    /// Flexure strain measures (third component solved, zero on symmetric
    /// sections).
    pub a_hat: Vec3,
    /// Seam-closure constants for the hatted problem.
    pub b_hat: Vec3,
    /// Twist correction from the zero-moment end condition.
    pub k_tilde: f64,
    /// Gauge constant closing `ψ(0) = ψ(s̄)`.
    pub k0: f64,
    psi: ArcSeries,
    phi: ArcSeries,
    displacement: DisplacementProfiles,
    stress: StressField,
    /// Condition numbers of the (seam, resultant) solves.
    pub condition: (f64, f64),
}

/// Flexure warping function and its gauge constant for given coefficients.
///
/// Returns `(ψ, K₀)` with `ψ(0) = 0` and `ψ(s̄) = 0`.
pub fn flexure_function(
    a_hat: Vec3,
    b_hat: Vec3,
    curve: &SectionCurve,
    mat: &ShellMaterial,
) -> (ArcSeries, f64) {
    let kernels = solution_kernels(curve, mat, a_hat, b_hat);
    flexure_function_from_kernels(&kernels, curve, mat)
}

fn flexure_function_from_kernels(
    kernels: &crate::profiles::SolutionKernels,
    curve: &SectionCurve,
    mat: &ShellMaterial,
) -> (ArcSeries, f64) {
    let grid = curve.grid();
    let tau1 = curve.sample_indexed(|i| curve.tangent(i).x);
    let tau2 = curve.sample_indexed(|i| curve.tangent(i).y);
    let mut integrand = kernels.w[0].mul_samples(&tau1);
    integrand.add_scaled(&kernels.w[1].mul_samples(&tau2), 1.0);
    integrand.add_scaled(&kernels.inner2, 2.0 / (mat.c * (1.0 - mat.nu)));
    let cumulative = integrand.integrate();
    let k0 = cumulative.eval(curve.perimeter()) / curve.perimeter();
    let mut psi = cumulative.scaled(-1.0);
    psi.add_scaled(&ArcSeries::linear(grid, k0), 1.0);
    (psi, k0)
}

/// Solves the flexure problem for a pure transverse end force.
pub fn solve_flexure(
    curve: &Arc<SectionCurve>,
    mat: &ShellMaterial,
    loads: &ResultantLoads,
) -> Result<FlexureSolution, ShellError> {
    if loads.force.z != 0.0 || loads.moment != Vec3::ZERO {
        return Err(ShellError::NonTransverseLoad {
            r3: loads.force.z,
            m: loads.moment.norm(),
        });
    }
    let sys = assemble_systems(curve, mat)?;
    let rhs = Vec3::new(0.0, -loads.force.x, -loads.force.y);
    let a_hat = sys.g.solve(rhs, COND_LIMIT)?;
    let b_hat = sys.l.mul_vec(a_hat);

    let kernels = solution_kernels(curve, mat, a_hat, b_hat);
    let (psi, k0) = flexure_function_from_kernels(&kernels, curve, mat);
    let phi = torsion_profile(curve);

    // Twist correction from the zero-moment end condition.
    let (c, d, nu) = (mat.c, mat.d, mat.nu);
    let r_cross = curve.sample_indexed(|i| {
        let x = curve.position(i);
        nu * (a_hat.x * x.y - a_hat.y * x.x)
    });
    let t1 = curve.closed_integral(&r_cross)? - kernels.inner.closed_integral();
    let couple_density = curve.sample_indexed(|i| {
        let x = curve.position(i);
        let tau = curve.tangent(i);
        let nrm3 = Vec3::from_plane(curve.normal(i));
        x.dot(tau) * (d * (1.0 - nu * nu) * a_hat.dot(nrm3) + nu * b_hat.dot(curve.r_hat(i)))
    });
    let t2a = curve.closed_integral(&couple_density)?;
    let t2b = kernels
        .inner2
        .mul_samples(&curve.r_dot_n())
        .closed_integral();
    let k_tilde = (-c * (1.0 - nu) * curve.area() * k0 + 2.0 * d * (1.0 - nu) * t1 + t2a + t2b)
        / torsional_rigidity(curve, mat);

    // Displacement z-polynomials.
    let grid = curve.grid();
    let x1 = curve.positions(0);
    let x2 = curve.positions(1);
    let mut u1_lin = kernels.w[0].clone();
    u1_lin.add_scaled(
        &ArcSeries::from_samples(grid, x2.to_vec()),
        -k_tilde,
    );
    let mut u2_lin = kernels.w[1].clone();
    u2_lin.add_scaled(&ArcSeries::from_samples(grid, x1.to_vec()), k_tilde);
    let u1 = vec![
        ArcSeries::zero(grid),
        u1_lin.periodic_projection(GROWTH_TOL),
        ArcSeries::zero(grid),
        ArcSeries::constant(grid, -a_hat.x / 6.0),
    ];
    let u2 = vec![
        ArcSeries::zero(grid),
        u2_lin.periodic_projection(GROWTH_TOL),
        ArcSeries::zero(grid),
        ArcSeries::constant(grid, -a_hat.y / 6.0),
    ];
    let mut u3_0 = psi.clone();
    u3_0.add_scaled(&phi, k_tilde);
    let u3_0 = u3_0.periodic_projection(GROWTH_TOL);
    let axial = curve.sample_indexed(|i| 0.5 * a_hat.dot(curve.r_hat(i)));
    let u3 = vec![u3_0, ArcSeries::zero(grid), ArcSeries::from_samples(grid, axial)];
    let displacement = DisplacementProfiles::new(grid, [u1, u2, u3]);

    // Stress polynomials: constant-in-z shears plus linear membrane/bending.
    let n = curve.len();
    let mut nm0 = MembraneGrids::zeros(n);
    let mut nm1 = MembraneGrids::zeros(n);
    let inner_grid = kernels.inner.eval_grid();
    let inner2_grid = kernels.inner2.eval_grid();
    let shear0 = c * (1.0 - nu) * (k_tilde * curve.area() / curve.perimeter() + 0.5 * k0);
    for i in 0..n {
        let x = curve.position(i);
        let tau = curve.tangent(i);
        let nrm3 = Vec3::from_plane(curve.normal(i));
        let kappa = curve.curvature(i);
        let b_edge = b_hat.dot(nrm3 + curve.r_hat(i) * kappa);
        let b_rhat = b_hat.dot(curve.r_hat(i));
        nm0.n_sz[i] = shear0 - inner2_grid[i];
        nm0.m_sz[i] = d
            * (1.0 - nu)
            * (-k_tilde + nu * (a_hat.x * x.y - a_hat.y * x.x)
                + b_hat.dot(Vec3::from_plane(tau)) / c
                - inner_grid[i]);
        nm1.n_ss[i] = -b_edge;
        nm1.n_zz[i] = kernels.h[i];
        nm1.m_ss[i] = -b_rhat;
        nm1.m_zz[i] = -(d * (1.0 - nu * nu) * a_hat.dot(nrm3) + nu * b_rhat);
    }
    let stress = StressField::from_membrane(curve, vec![nm0, nm1])?;

    Ok(FlexureSolution {
        curve: Arc::clone(curve),
        mat: *mat,
        loads: *loads,
        a_hat,
        b_hat,
        k_tilde,
        k0,
        psi,
        phi,
        displacement,
        stress,
        condition: (sys.cond_seam, sys.cond_resultant),
    })
}

impl FlexureSolution {
    pub fn curve(&self) -> &Arc<SectionCurve> {
        &self.curve
    }

    pub fn material(&self) -> &ShellMaterial {
        &self.mat
    }

    pub fn loads(&self) -> &ResultantLoads {
        &self.loads
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

impl ShellField for FlexureSolution {
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
