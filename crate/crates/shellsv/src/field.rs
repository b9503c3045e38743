//! Field evaluators: the interface the verification module checks, plus the
//! z-polynomial displacement and stress containers the solvers produce.
//!
//! Every closed-form solution here is an exact polynomial in the axial
//! coordinate with smooth profiles of arc length as coefficients, so fields
//! carry their z-degree and verification can take exact z-derivatives.

use std::sync::OnceLock;

use crate::algebra::Vec3;
use crate::curve::SectionCurve;
use crate::grid::ArcGrid;
use crate::material::{MembraneGrids, StressState, TractionGrids};
use crate::series::ArcSeries;

/// A displacement field on the cylinder, polynomial in z.
pub trait ShellField {
    /// Exact polynomial degree of `u` in z.
    fn z_degree(&self) -> usize;

    /// Displacement at `(s, z)`; one-sided at `s = 0` and `s = s̄` (the two
    /// ends differ when the construction fails to close).
    fn displacement(&self, s: f64, z: f64) -> Vec3;

    /// `∂u/∂s` or `∂²u/∂s²` at `(s, z)` for `order` 1 or 2.
    fn displacement_s_derivative(&self, order: usize, s: f64, z: f64) -> Vec3;

    /// Displacement components sampled on the arc grid at height z.
    fn sample_displacement(&self, curve: &SectionCurve, z: f64) -> [Vec<f64>; 3] {
        let mut out = [
            Vec::with_capacity(curve.len()),
            Vec::with_capacity(curve.len()),
            Vec::with_capacity(curve.len()),
        ];
        for s in curve.grid().points() {
            let u = self.displacement(s, z);
            out[0].push(u.x);
            out[1].push(u.y);
            out[2].push(u.z);
        }
        out
    }
}

/// Displacement as `u_c(s, z) = Σ_k z^k · profile_c_k(s)` with arc-series
/// profiles; the common representation for both exact solvers and the thin
/// limit.
#[derive(Debug, Clone)]
pub struct DisplacementProfiles {
    grid: ArcGrid,
    comp: [Vec<ArcSeries>; 3],
    deriv1: OnceLock<Box<DisplacementProfiles>>,
    deriv2: OnceLock<Box<DisplacementProfiles>>,
}

impl DisplacementProfiles {
    pub fn new(grid: ArcGrid, comp: [Vec<ArcSeries>; 3]) -> Self {
        DisplacementProfiles {
            grid,
            comp,
            deriv1: OnceLock::new(),
            deriv2: OnceLock::new(),
        }
    }

    pub fn grid(&self) -> ArcGrid {
        self.grid
    }

    pub fn z_degree(&self) -> usize {
        self.comp.iter().map(|c| c.len().saturating_sub(1)).max().unwrap_or(0)
    }

    pub fn component_profiles(&self, c: usize) -> &[ArcSeries] {
        &self.comp[c]
    }

    pub fn eval(&self, s: f64, z: f64) -> Vec3 {
        let mut out = [0.0; 3];
        for (c, profiles) in self.comp.iter().enumerate() {
            let mut zp = 1.0;
            for series in profiles {
                out[c] += zp * series.eval(s);
                zp *= z;
            }
        }
        Vec3::new(out[0], out[1], out[2])
    }

    fn s_derivative(&self) -> &DisplacementProfiles {
        self.deriv1.get_or_init(|| {
            let comp = [
                self.comp[0].iter().map(ArcSeries::derivative).collect(),
                self.comp[1].iter().map(ArcSeries::derivative).collect(),
                self.comp[2].iter().map(ArcSeries::derivative).collect(),
            ];
            Box::new(DisplacementProfiles::new(self.grid, comp))
        })
    }

    fn s_derivative2(&self) -> &DisplacementProfiles {
        self.deriv2
            .get_or_init(|| Box::new(self.s_derivative().s_derivative().clone()))
    }

    pub fn eval_s_derivative(&self, order: usize, s: f64, z: f64) -> Vec3 {
        match order {
            0 => self.eval(s, z),
            1 => self.s_derivative().eval(s, z),
            2 => self.s_derivative2().eval(s, z),
            _ => panic!("s-derivative order {order} not supported"),
        }
    }

    pub fn sample(&self, z: f64) -> [Vec<f64>; 3] {
        let n = self.grid.len();
        let mut out = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
        for (c, profiles) in self.comp.iter().enumerate() {
            let mut zp = 1.0;
            for series in profiles {
                let vals = series.eval_grid();
                for (o, v) in out[c].iter_mut().zip(&vals) {
                    *o += zp * v;
                }
                zp *= z;
            }
        }
        out
    }

    /// Largest profile magnitude; a displacement scale for relative checks.
    pub fn scale(&self) -> f64 {
        self.comp
            .iter()
            .flatten()
            .map(ArcSeries::scale)
            .fold(0.0, f64::max)
    }
}

impl ShellField for DisplacementProfiles {
    fn z_degree(&self) -> usize {
        self.z_degree()
    }

    fn displacement(&self, s: f64, z: f64) -> Vec3 {
        self.eval(s, z)
    }

    fn displacement_s_derivative(&self, order: usize, s: f64, z: f64) -> Vec3 {
        self.eval_s_derivative(order, s, z)
    }

    fn sample_displacement(&self, _curve: &SectionCurve, z: f64) -> [Vec<f64>; 3] {
        self.sample(z)
    }
}

/// Stress resultants as z-polynomials of grid samples, with the effective
/// tractions derived once from the couple resultants.
#[derive(Debug, Clone)]
pub struct StressField {
    grid: ArcGrid,
    nm: Vec<MembraneGrids>,
    tractions: Vec<TractionGrids>,
}

impl StressField {
    /// Builds the traction polynomials from resultant polynomials:
    /// `S_s = -M_ss,s - M_zs,z` and `S_z = -M_sz,s - M_zz,z`, with the
    /// z-derivatives taken exactly on the polynomial coefficients.
    pub fn from_membrane(
        curve: &SectionCurve,
        nm: Vec<MembraneGrids>,
    ) -> Result<StressField, crate::error::ShellError> {
        let grid = curve.grid();
        let n = grid.len();
        let mut tractions = Vec::with_capacity(nm.len());
        for k in 0..nm.len() {
            let m_ss_s = grid.derivative(&nm[k].m_ss)?;
            let m_sz_s = grid.derivative(&nm[k].m_sz)?;
            let mut tr = TractionGrids {
                p_ss: vec![0.0; n],
                p_sz: vec![0.0; n],
                p_zs: vec![0.0; n],
                p_zz: vec![0.0; n],
                s_s: vec![0.0; n],
                s_z: vec![0.0; n],
            };
            let kf = (k + 1) as f64;
            for i in 0..n {
                let kappa = curve.curvature(i);
                tr.p_ss[i] = nm[k].n_ss[i] - kappa * nm[k].m_ss[i];
                tr.p_sz[i] = nm[k].n_sz[i] - kappa * nm[k].m_sz[i];
                tr.p_zs[i] = nm[k].n_sz[i];
                tr.p_zz[i] = nm[k].n_zz[i];
                tr.s_s[i] = -m_ss_s[i];
                tr.s_z[i] = -m_sz_s[i];
                if k + 1 < nm.len() {
                    tr.s_s[i] -= kf * nm[k + 1].m_sz[i];
                    tr.s_z[i] -= kf * nm[k + 1].m_zz[i];
                }
            }
            tractions.push(tr);
        }
        Ok(StressField {
            grid,
            nm,
            tractions,
        })
    }

    pub fn grid(&self) -> ArcGrid {
        self.grid
    }

    pub fn z_degree(&self) -> usize {
        self.nm.len().saturating_sub(1)
    }

    pub fn membrane_coefficients(&self) -> &[MembraneGrids] {
        &self.nm
    }

    /// Full stress state at grid node `i`, height z.
    pub fn at_node(&self, i: usize, z: f64) -> StressState {
        let mut st = StressState::default();
        let mut zp = 1.0;
        for k in 0..self.nm.len() {
            let nm = &self.nm[k];
            let tr = &self.tractions[k];
            st.n_ss += zp * nm.n_ss[i];
            st.n_sz += zp * nm.n_sz[i];
            st.n_zz += zp * nm.n_zz[i];
            st.m_ss += zp * nm.m_ss[i];
            st.m_sz += zp * nm.m_sz[i];
            st.m_zz += zp * nm.m_zz[i];
            st.p_ss += zp * tr.p_ss[i];
            st.p_sz += zp * tr.p_sz[i];
            st.p_zs += zp * tr.p_zs[i];
            st.p_zz += zp * tr.p_zz[i];
            st.s_s += zp * tr.s_s[i];
            st.s_z += zp * tr.s_z[i];
            zp *= z;
        }
        st
    }

    /// Trigonometric interpolation of every component at `(s, z)`.
    pub fn interpolate(&self, s: f64, z: f64) -> StressState {
        let interp = |samples: &[f64]| {
            crate::grid::Spectrum::from_samples(self.grid, samples).eval(s)
        };
        let mut st = StressState::default();
        let mut zp = 1.0;
        for k in 0..self.nm.len() {
            let nm = &self.nm[k];
            let tr = &self.tractions[k];
            st.n_ss += zp * interp(&nm.n_ss);
            st.n_sz += zp * interp(&nm.n_sz);
            st.n_zz += zp * interp(&nm.n_zz);
            st.m_ss += zp * interp(&nm.m_ss);
            st.m_sz += zp * interp(&nm.m_sz);
            st.m_zz += zp * interp(&nm.m_zz);
            st.p_ss += zp * interp(&tr.p_ss);
            st.p_sz += zp * interp(&tr.p_sz);
            st.p_zs += zp * interp(&tr.p_zs);
            st.p_zz += zp * interp(&tr.p_zz);
            st.s_s += zp * interp(&tr.s_s);
            st.s_z += zp * interp(&tr.s_z);
            zp *= z;
        }
        st
    }

    /// Largest membrane/couple magnitude; a stress scale for relative checks.
    pub fn scale(&self) -> f64 {
        let mut m = 0.0f64;
        for nm in &self.nm {
            for grid in [&nm.n_ss, &nm.n_sz, &nm.n_zz, &nm.m_ss, &nm.m_sz, &nm.m_zz] {
                for v in grid {
                    m = m.max(v.abs());
                }
            }
        }
        m
    }
}

/// Numerical `∂u/∂z` of another field by the 5-point central stencil,
/// exact for the cubic-in-z solution fields up to rounding.
pub struct ZDerivativeField<'a, F: ShellField + ?Sized> {
    inner: &'a F,
    step: f64,
}

impl<'a, F: ShellField + ?Sized> ZDerivativeField<'a, F> {
    pub fn new(inner: &'a F, step: f64) -> Self {
        assert!(step > 0.0);
        ZDerivativeField { inner, step }
    }

    fn stencil(&self, z: f64) -> [(f64, f64); 4] {
        let d = self.step;
        let w = 1.0 / (12.0 * d);
        [
            (z - 2.0 * d, w),
            (z - d, -8.0 * w),
            (z + d, 8.0 * w),
            (z + 2.0 * d, -w),
        ]
    }
}

impl<F: ShellField + ?Sized> ShellField for ZDerivativeField<'_, F> {
    fn z_degree(&self) -> usize {
        self.inner.z_degree().saturating_sub(1)
    }

    fn displacement(&self, s: f64, z: f64) -> Vec3 {
        self.stencil(z)
            .iter()
            .fold(Vec3::ZERO, |acc, &(zz, w)| acc + self.inner.displacement(s, zz) * w)
    }

    fn displacement_s_derivative(&self, order: usize, s: f64, z: f64) -> Vec3 {
        self.stencil(z).iter().fold(Vec3::ZERO, |acc, &(zz, w)| {
            acc + self.inner.displacement_s_derivative(order, s, zz) * w
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn profiles() -> DisplacementProfiles {
        let grid = ArcGrid::new(64, 2.0 * PI);
        let base = ArcSeries::from_samples(grid, grid.sample(f64::cos));
        let lin = ArcSeries::from_samples(grid, grid.sample(f64::sin));
        DisplacementProfiles::new(
            grid,
            [
                vec![base.clone(), lin.clone()],
                vec![ArcSeries::zero(grid)],
                vec![ArcSeries::zero(grid), ArcSeries::zero(grid), base],
            ],
        )
    }

    #[test]
    fn eval_matches_structure() {
        let p = profiles();
        assert_eq!(p.z_degree(), 2);
        let u = p.eval(1.0, 2.0);
        assert_relative_eq!(u.x, 1.0f64.cos() + 2.0 * 1.0f64.sin(), epsilon = 1e-12);
        assert_relative_eq!(u.z, 4.0 * 1.0f64.cos(), epsilon = 1e-12);
    }

    #[test]
    fn s_derivative_is_spectral() {
        let p = profiles();
        let d = p.eval_s_derivative(1, 0.7, 1.5);
        assert_relative_eq!(d.x, -(0.7f64.sin()) + 1.5 * 0.7f64.cos(), epsilon = 1e-11);
    }

    #[test]
    fn z_derivative_field_matches_analytic() {
        let p = profiles();
        let dz = ZDerivativeField::new(&p, 0.05);
        assert_eq!(dz.z_degree(), 1);
        let d = dz.displacement(0.3, 1.2);
        assert_relative_eq!(d.x, 0.3f64.sin(), epsilon = 1e-10);
        assert_relative_eq!(d.z, 2.0 * 1.2 * 0.3f64.cos(), epsilon = 1e-10);
    }
}
