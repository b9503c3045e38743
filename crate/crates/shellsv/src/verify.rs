//! Independent numerical certification of a candidate field.
//!
//! The checks deliberately share nothing with the solvers' closed-form
//! stress expressions beyond the constitutive map: displacements are
//! sampled through the [`ShellField`] interface, strains are rebuilt from
//! spectral s-derivatives and exact polynomial z-derivatives, stresses from
//! the constitutive relations, and only then are the three equilibrium
//! equations, the end-edge resultants, the seam conditions and the global
//! balance evaluated.

use crate::algebra::Vec3;
use crate::curve::SectionCurve;
use crate::error::ShellError;
use crate::field::ShellField;
use crate::material::ShellMaterial;

/// Equilibrium residuals of the three equations on the cylinder.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumReport {
    /// Max absolute residual per equation over grid and stations.
    pub max_abs: [f64; 3],
    /// Root-mean-square residual per equation.
    pub rms: [f64; 3],
    /// Largest single term entering each equation.
    pub term_scale: [f64; 3],
    /// Characteristic stress-gradient scale of the field: the largest
    /// equation term, floored by `ω·max|N|, ω·max|S|, ω²·max|M|` with
    /// `ω = 2π/s̄`, so that fields whose equation terms cancel to nothing
    /// (pure torsion, pure bending) are still measured against their own
    /// stress level.
    pub char_scale: f64,
    /// `max_abs / char_scale` per equation.
    pub relative: [f64; 3],
    pub grid_n: usize,
    pub z_stations: Vec<f64>,
}

impl EquilibriumReport {
    pub fn worst_relative(&self) -> f64 {
        self.relative.iter().fold(0.0f64, |a, &b| a.max(b))
    }
}

/// End-edge resultants of a field at one cross-section.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResultantReport {
    /// Resultant force functional.
    pub force: Vec3,
    /// Moment functional about the global origin.
    pub moment: Vec3,
    /// Moment functional about the section's own axis point `(0,0,z)`.
    pub moment_local: Vec3,
    pub z: f64,
}

/// Seam (single-valuedness) defects at `s = 0 ≡ s̄`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeamReport {
    /// Max over stations of `|u(0,z) - u(s̄,z)|`.
    pub value: f64,
    /// Same for the first and second s-derivatives.
    pub slope: f64,
    pub curvature_defect: f64,
    /// Field scales for forming relative defects (same three orders).
    pub scales: [f64; 3],
}

impl SeamReport {
    pub fn worst_relative(&self) -> f64 {
        let rel = |v: f64, s: f64| if s > 0.0 { v / s } else { 0.0 };
        rel(self.value, self.scales[0])
            .max(rel(self.slope, self.scales[1]))
            .max(rel(self.curvature_defect, self.scales[2]))
    }
}

/// Defect of the end-to-end balance: resultants transported to a common
/// origin must be constant along the tube.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BalanceReport {
    pub force_defect: f64,
    pub moment_defect: f64,
    pub scale: f64,
}

impl BalanceReport {
    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            (self.force_defect + self.moment_defect) / self.scale
        } else {
            0.0
        }
    }
}

/// Strain-magnitude diagnostic: compares membrane strain against thickness
/// times bending strain. Reported only; large ratios flag displacement
/// accuracy loss in first-order shell models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrainDiagnostic {
    pub max_membrane: f64,
    pub max_bending_scaled: f64,
    /// `max ‖ε‖ / (h max ‖ρ‖)`; infinite when bending strain vanishes.
    pub ratio: f64,
}

/// Displacement components as polynomials in the scaled axial variable.
struct PolyDisplacement {
    z0: f64,
    w: f64,
    /// `comp[c][k][i]`: component c, power k, grid node i.
    comp: [Vec<Vec<f64>>; 3],
}

fn fit_z_polynomial(
    field: &dyn ShellField,
    curve: &SectionCurve,
    z_lo: f64,
    z_hi: f64,
) -> PolyDisplacement {
    let degree = field.z_degree();
    let z0 = 0.5 * (z_lo + z_hi);
    let w = (0.5 * (z_hi - z_lo)).abs().max(1.0);
    let m = degree + 1;
    let zetas: Vec<f64> = if degree == 0 {
        vec![0.0]
    } else {
        (0..m)
            .map(|j| -1.0 + 2.0 * j as f64 / degree as f64)
            .collect()
    };
    let vinv = invert_vandermonde(&zetas);

    let n = curve.len();
    let samples: Vec<[Vec<f64>; 3]> = zetas
        .iter()
        .map(|&zeta| field.sample_displacement(curve, z0 + w * zeta))
        .collect();
    let mut comp = [
        vec![vec![0.0; n]; m],
        vec![vec![0.0; n]; m],
        vec![vec![0.0; n]; m],
    ];
    for c in 0..3 {
        for k in 0..m {
            for i in 0..n {
                let mut acc = 0.0;
                for (j, sample) in samples.iter().enumerate() {
                    acc += vinv[k][j] * sample[c][i];
                }
                comp[c][k][i] = acc;
            }
        }
    }
    PolyDisplacement { z0, w, comp }
}

/// Inverse of the Vandermonde matrix `V[j][k] = ζ_j^k` by Gauss-Jordan.
fn invert_vandermonde(zetas: &[f64]) -> Vec<Vec<f64>> {
    let m = zetas.len();
    let mut a: Vec<Vec<f64>> = (0..m)
        .map(|j| (0..m).map(|k| zetas[j].powi(k as i32)).collect())
        .collect();
    let mut inv: Vec<Vec<f64>> = (0..m)
        .map(|i| (0..m).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for col in 0..m {
        let piv = (col..m)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        a.swap(col, piv);
        inv.swap(col, piv);
        let d = a[col][col];
        for j in 0..m {
            a[col][j] /= d;
            inv[col][j] /= d;
        }
        for i in 0..m {
            if i != col {
                let f = a[i][col];
                for j in 0..m {
                    a[i][j] -= f * a[col][j];
                    inv[i][j] -= f * inv[col][j];
                }
            }
        }
    }
    inv
}

/// Scalar z-polynomial of grid samples in the scaled variable.
#[derive(Clone)]
struct PolyGrid {
    w: f64,
    coef: Vec<Vec<f64>>,
}

impl PolyGrid {
    fn zeros(n: usize, m: usize, w: f64) -> Self {
        PolyGrid {
            w,
            coef: vec![vec![0.0; n]; m],
        }
    }

    /// Exact derivative in the physical axial variable.
    fn dz(&self) -> PolyGrid {
        let m = self.coef.len();
        let n = self.coef.first().map_or(0, Vec::len);
        let mut out = PolyGrid::zeros(n, m.max(2) - 1, self.w);
        for k in 1..m {
            for i in 0..n {
                out.coef[k - 1][i] = k as f64 * self.coef[k][i] / self.w;
            }
        }
        out
    }

    /// Spectral derivative in arc length, coefficient by coefficient.
    fn ds(&self, curve: &SectionCurve) -> Result<PolyGrid, ShellError> {
        let mut out = self.clone();
        for coef in &mut out.coef {
            *coef = curve.grid().derivative(coef)?;
        }
        Ok(out)
    }

    fn eval(&self, zeta: f64) -> Vec<f64> {
        let n = self.coef.first().map_or(0, Vec::len);
        let mut out = vec![0.0; n];
        let mut zp = 1.0;
        for coef in &self.coef {
            for (o, v) in out.iter_mut().zip(coef) {
                *o += zp * v;
            }
            zp *= zeta;
        }
        out
    }

    fn map2<F: Fn(f64, f64) -> f64>(&self, other: &PolyGrid, f: F) -> PolyGrid {
        let m = self.coef.len().max(other.coef.len());
        let n = self.coef.first().map_or(0, Vec::len);
        let mut out = PolyGrid::zeros(n, m, self.w);
        for k in 0..m {
            for i in 0..n {
                let a = self.coef.get(k).map_or(0.0, |c| c[i]);
                let b = other.coef.get(k).map_or(0.0, |c| c[i]);
                out.coef[k][i] = f(a, b);
            }
        }
        out
    }

    fn add(&self, other: &PolyGrid) -> PolyGrid {
        self.map2(other, |a, b| a + b)
    }

    fn sub(&self, other: &PolyGrid) -> PolyGrid {
        self.map2(other, |a, b| a - b)
    }

    fn scale_samples(&self, weights: &[f64]) -> PolyGrid {
        let mut out = self.clone();
        for coef in &mut out.coef {
            for (c, w) in coef.iter_mut().zip(weights) {
                *c *= *w;
            }
        }
        out
    }

    fn scaled(&self, f: f64) -> PolyGrid {
        let mut out = self.clone();
        for coef in &mut out.coef {
            for c in coef.iter_mut() {
                *c *= f;
            }
        }
        out
    }
}

/// Strains, stresses and tractions rebuilt from a displacement polynomial.
struct RebuiltField {
    z0: f64,
    w: f64,
    n_ss: PolyGrid,
    n_sz: PolyGrid,
    n_zz: PolyGrid,
    m_ss: PolyGrid,
    m_sz: PolyGrid,
    m_zz: PolyGrid,
    p_ss: PolyGrid,
    p_sz: PolyGrid,
    p_zs: PolyGrid,
    p_zz: PolyGrid,
    s_s: PolyGrid,
    s_z: PolyGrid,
    eps_norm_sq: PolyGrid,
    rho_norm_sq: PolyGrid,
}

fn rebuild_stresses(
    poly: &PolyDisplacement,
    curve: &SectionCurve,
    mat: &ShellMaterial,
) -> Result<RebuiltField, ShellError> {
    let n = curve.len();
    let m = poly.comp[0].len();
    let w = poly.w;
    let grid_fn = |c: usize| PolyGrid {
        w,
        coef: poly.comp[c].clone(),
    };
    let u = [grid_fn(0), grid_fn(1), grid_fn(2)];
    let u_s: Vec<PolyGrid> = u
        .iter()
        .map(|g| g.ds(curve))
        .collect::<Result<_, _>>()?;
    let u_ss: Vec<PolyGrid> = u_s
        .iter()
        .map(|g| g.ds(curve))
        .collect::<Result<_, _>>()?;
    let u_z: Vec<PolyGrid> = u.iter().map(PolyGrid::dz).collect();
    let u_zz: Vec<PolyGrid> = u_z.iter().map(PolyGrid::dz).collect();
    let u_sz: Vec<PolyGrid> = u_z
        .iter()
        .map(|g| g.ds(curve))
        .collect::<Result<_, _>>()?;

    let tau1 = curve.sample_indexed(|i| curve.tangent(i).x);
    let tau2 = curve.sample_indexed(|i| curve.tangent(i).y);
    let nrm1 = curve.sample_indexed(|i| curve.normal(i).x);
    let nrm2 = curve.sample_indexed(|i| curve.normal(i).y);

    let dot_plane = |a: &[PolyGrid], w1: &[f64], w2: &[f64]| -> PolyGrid {
        a[0].scale_samples(w1).add(&a[1].scale_samples(w2))
    };

    let eps_ss = dot_plane(&u_s, &tau1, &tau2);
    let eps_zz = u_z[2].clone();
    let eps_sz = dot_plane(&u_z, &tau1, &tau2).add(&u_s[2]).scaled(0.5);
    let rho_ss = dot_plane(&u_ss, &nrm1, &nrm2);
    let rho_sz = dot_plane(&u_sz, &nrm1, &nrm2);
    let rho_zz = dot_plane(&u_zz, &nrm1, &nrm2);

    let (c, d, nu) = (mat.c, mat.d, mat.nu);
    let n_ss = eps_ss.add(&eps_zz.scaled(nu)).scaled(c);
    let n_sz = eps_sz.scaled(c * (1.0 - nu));
    let n_zz = eps_zz.add(&eps_ss.scaled(nu)).scaled(c);
    let m_ss = rho_ss.add(&rho_zz.scaled(nu)).scaled(d);
    let m_sz = rho_sz.scaled(d * (1.0 - nu));
    let m_zz = rho_zz.add(&rho_ss.scaled(nu)).scaled(d);

    let kappa = curve.curvatures().to_vec();
    let p_ss = n_ss.sub(&m_ss.scale_samples(&kappa));
    let p_sz = n_sz.sub(&m_sz.scale_samples(&kappa));
    let p_zs = n_sz.clone();
    let p_zz = n_zz.clone();
    let s_s = m_ss.ds(curve)?.add(&m_sz.dz()).scaled(-1.0);
    let s_z = m_sz.ds(curve)?.add(&m_zz.dz()).scaled(-1.0);

    let eps_norm_sq = eps_ss.clone().into_norm_sq(&eps_sz, &eps_zz);
    let rho_norm_sq = rho_ss.clone().into_norm_sq(&rho_sz, &rho_zz);
    let _ = (n, m);

    Ok(RebuiltField {
        z0: poly.z0,
        w,
        n_ss,
        n_sz,
        n_zz,
        m_ss,
        m_sz,
        m_zz,
        p_ss,
        p_sz,
        p_zs,
        p_zz,
        s_s,
        s_z,
        eps_norm_sq,
        rho_norm_sq,
    })
}

impl PolyGrid {
    /// `a² + 2b² + c²` as a polynomial (for the strain-norm diagnostic).
    fn into_norm_sq(self, b: &PolyGrid, c: &PolyGrid) -> PolyGrid {
        let m = self
            .coef
            .len()
            .max(b.coef.len())
            .max(c.coef.len());
        let n = self.coef.first().map_or(0, Vec::len);
        let mut out = PolyGrid::zeros(n, 2 * m - 1, self.w);
        let term = |g: &PolyGrid, k: usize, i: usize| g.coef.get(k).map_or(0.0, |v| v[i]);
        for k1 in 0..m {
            for k2 in 0..m {
                for i in 0..n {
                    out.coef[k1 + k2][i] += term(&self, k1, i) * term(&self, k2, i)
                        + 2.0 * term(b, k1, i) * term(b, k2, i)
                        + term(c, k1, i) * term(c, k2, i);
                }
            }
        }
        out
    }
}

/// Equilibrium residual of the three balance equations, rebuilt entirely
/// from the sampled displacement.
pub fn equilibrium_residual(
    field: &dyn ShellField,
    curve: &SectionCurve,
    mat: &ShellMaterial,
    z_stations: &[f64],
) -> Result<EquilibriumReport, ShellError> {
    assert!(!z_stations.is_empty(), "need at least one z station");
    let z_lo = z_stations.iter().cloned().fold(f64::INFINITY, f64::min);
    let z_hi = z_stations.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let poly = fit_z_polynomial(field, curve, z_lo, z_hi);
    let rf = rebuild_stresses(&poly, curve, mat)?;
    let kappa = curve.curvatures().to_vec();

    // Residual terms per equation.
    let t11 = rf.p_ss.ds(curve)?;
    let t12 = rf.p_sz.dz();
    let t13 = rf.s_s.scale_samples(&kappa);
    let t21 = rf.p_zs.ds(curve)?;
    let t22 = rf.p_zz.dz();
    let t31 = rf.s_s.ds(curve)?;
    let t32 = rf.s_z.dz();
    let t33 = rf.p_ss.scale_samples(&kappa).scaled(-1.0);

    let omega = 2.0 * std::f64::consts::PI / curve.perimeter();
    let kappa_max = kappa.iter().fold(0.0f64, |a, &b| a.max(b.abs()));

    let mut max_abs = [0.0f64; 3];
    let mut sum_sq = [0.0f64; 3];
    let mut term_scale = [0.0f64; 3];
    let mut stress_floor = 0.0f64;
    let mut count = 0usize;
    for &z in z_stations {
        let zeta = (z - rf.z0) / rf.w;
        let eqs = [
            (t11.eval(zeta), t12.eval(zeta), Some(t13.eval(zeta))),
            (t21.eval(zeta), t22.eval(zeta), None),
            (t31.eval(zeta), t32.eval(zeta), Some(t33.eval(zeta))),
        ];
        for (e, (a, b, c)) in eqs.iter().enumerate() {
            for i in 0..curve.len() {
                let cv = c.as_ref().map_or(0.0, |v| v[i]);
                let r = a[i] + b[i] + cv;
                max_abs[e] = max_abs[e].max(r.abs());
                sum_sq[e] += r * r;
                term_scale[e] = term_scale[e]
                    .max(a[i].abs())
                    .max(b[i].abs())
                    .max(cv.abs());
            }
        }
        // Stress-magnitude floor for the characteristic scale.
        for g in [&rf.n_sz, &rf.n_zz, &rf.p_ss, &rf.p_sz] {
            for v in g.eval(zeta) {
                stress_floor = stress_floor.max(omega * v.abs());
            }
        }
        for g in [&rf.s_s, &rf.s_z] {
            for v in g.eval(zeta) {
                stress_floor = stress_floor.max(omega * v.abs());
            }
        }
        for g in [&rf.m_sz, &rf.m_zz] {
            for v in g.eval(zeta) {
                stress_floor = stress_floor
                    .max(omega * omega * v.abs())
                    .max(omega * kappa_max * v.abs());
            }
        }
        count += curve.len();
    }
    let char_scale = term_scale
        .iter()
        .fold(stress_floor, |a, &b| a.max(b));
    let mut rms = [0.0; 3];
    let mut relative = [0.0; 3];
    for e in 0..3 {
        rms[e] = (sum_sq[e] / count as f64).sqrt();
        relative[e] = if char_scale > 0.0 {
            max_abs[e] / char_scale
        } else {
            0.0
        };
    }
    Ok(EquilibriumReport {
        max_abs,
        rms,
        term_scale,
        char_scale,
        relative,
        grid_n: curve.len(),
        z_stations: z_stations.to_vec(),
    })
}

/// End-edge resultant functionals at the section `z = z0`, computed from
/// the couple-resultant form (one fewer s-derivative than the traction
/// form).
pub fn end_resultants(
    field: &dyn ShellField,
    curve: &SectionCurve,
    mat: &ShellMaterial,
    z0: f64,
) -> Result<ResultantReport, ShellError> {
    let poly = fit_z_polynomial(field, curve, z0, z0 + 1.0);
    let rf = rebuild_stresses(&poly, curve, mat)?;
    let zeta = (z0 - rf.z0) / rf.w;
    let n_sz = rf.n_sz.eval(zeta);
    let n_zz = rf.n_zz.eval(zeta);
    let m_sz = rf.m_sz.eval(zeta);
    let m_zz = rf.m_zz.eval(zeta);
    let m_zz_z = rf.m_zz.dz().eval(zeta);
    resultants_from_grids(curve, &n_sz, &n_zz, &m_sz, &m_zz, &m_zz_z, z0)
}

fn resultants_from_grids(
    curve: &SectionCurve,
    n_sz: &[f64],
    n_zz: &[f64],
    m_sz: &[f64],
    m_zz: &[f64],
    m_zz_z: &[f64],
    z0: f64,
) -> Result<ResultantReport, ShellError> {
    let n = curve.len();
    let mut f1 = vec![0.0; n];
    let mut f2 = vec![0.0; n];
    let mut f3 = vec![0.0; n];
    let mut m1 = vec![0.0; n];
    let mut m2 = vec![0.0; n];
    let mut m3 = vec![0.0; n];
    for i in 0..n {
        let tau = curve.tangent(i);
        let nrm = curve.normal(i);
        let x = curve.position(i);
        f1[i] = n_sz[i] * tau.x - m_zz_z[i] * nrm.x;
        f2[i] = n_sz[i] * tau.y - m_zz_z[i] * nrm.y;
        f3[i] = n_zz[i];
        // r × e3 = (x2, -x1, 0)
        m1[i] = n_zz[i] * x.y + m_zz[i] * tau.x;
        m2[i] = -n_zz[i] * x.x + m_zz[i] * tau.y;
        m3[i] = n_sz[i] * x.dot(nrm) - 2.0 * m_sz[i] + m_zz_z[i] * x.dot(tau);
    }
    let force = -Vec3::new(
        curve.closed_integral(&f1)?,
        curve.closed_integral(&f2)?,
        curve.closed_integral(&f3)?,
    );
    let moment_local = -Vec3::new(
        curve.closed_integral(&m1)?,
        curve.closed_integral(&m2)?,
        curve.closed_integral(&m3)?,
    );
    let moment = moment_local + Vec3::new(0.0, 0.0, z0).cross(force);
    Ok(ResultantReport {
        force,
        moment,
        moment_local,
        z: z0,
    })
}

/// Same functionals through the effective-traction form (a cross-check
/// route; needs one more spectral derivative).
pub fn end_resultants_via_tractions(
    field: &dyn ShellField,
    curve: &SectionCurve,
    mat: &ShellMaterial,
    z0: f64,
) -> Result<ResultantReport, ShellError> {
    let poly = fit_z_polynomial(field, curve, z0, z0 + 1.0);
    let rf = rebuild_stresses(&poly, curve, mat)?;
    let zeta = (z0 - rf.z0) / rf.w;
    let p_sz = rf.p_sz.eval(zeta);
    let p_zz = rf.p_zz.eval(zeta);
    let s_z = rf.s_z.eval(zeta);
    let m_sz = rf.m_sz.eval(zeta);
    let m_zz = rf.m_zz.eval(zeta);
    let n = curve.len();
    let mut f = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    let mut m = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    for i in 0..n {
        let tau = curve.tangent(i);
        let nrm = curve.normal(i);
        let x = curve.position(i);
        let traction = Vec3::new(
            p_sz[i] * tau.x + s_z[i] * nrm.x,
            p_sz[i] * tau.y + s_z[i] * nrm.y,
            p_zz[i],
        );
        f[0][i] = traction.x;
        f[1][i] = traction.y;
        f[2][i] = traction.z;
        let rxt = Vec3::from_plane(x).cross(traction);
        m[0][i] = rxt.x + m_zz[i] * tau.x;
        m[1][i] = rxt.y + m_zz[i] * tau.y;
        m[2][i] = rxt.z - m_sz[i];
    }
    let force = -Vec3::new(
        curve.closed_integral(&f[0])?,
        curve.closed_integral(&f[1])?,
        curve.closed_integral(&f[2])?,
    );
    let moment_local = -Vec3::new(
        curve.closed_integral(&m[0])?,
        curve.closed_integral(&m[1])?,
        curve.closed_integral(&m[2])?,
    );
    let moment = moment_local + Vec3::new(0.0, 0.0, z0).cross(force);
    Ok(ResultantReport {
        force,
        moment,
        moment_local,
        z: z0,
    })
}

/// Seam defects `|u(0,z) - u(s̄,z)|` and likewise for the first two
/// s-derivatives, maximized over the given stations.
pub fn continuity_check(
    field: &dyn ShellField,
    curve: &SectionCurve,
    z_stations: &[f64],
) -> SeamReport {
    let sbar = curve.perimeter();
    let mut defect = [0.0f64; 3];
    let mut scales = [0.0f64; 3];
    for &z in z_stations {
        for order in 0..3 {
            let a = field.displacement_s_derivative(order, 0.0, z);
            let b = field.displacement_s_derivative(order, sbar, z);
            defect[order] = defect[order].max((a - b).norm());
            scales[order] = scales[order].max(a.norm()).max(b.norm());
        }
        // Include a few interior points in the scale estimate.
        for frac in [0.25, 0.5, 0.75] {
            for order in 0..3 {
                let v = field.displacement_s_derivative(order, frac * sbar, z);
                scales[order] = scales[order].max(v.norm());
            }
        }
    }
    SeamReport {
        value: defect[0],
        slope: defect[1],
        curvature_defect: defect[2],
        scales,
    }
}

/// Verifies that the resultants carried across the sections at `z = 0` and
/// `z = ℓ` agree once transported to the common origin (equivalently, that
/// the loads applied at the two end edges cancel).
pub fn global_balance(
    field: &dyn ShellField,
    curve: &SectionCurve,
    mat: &ShellMaterial,
    length: f64,
) -> Result<BalanceReport, ShellError> {
    assert!(length > 0.0, "tube length must be positive");
    let at0 = end_resultants(field, curve, mat, 0.0)?;
    let at_l = end_resultants(field, curve, mat, length)?;
    let force_defect = (at_l.force - at0.force).norm();
    let moment_defect = (at_l.moment - at0.moment).norm();
    let scale = at0
        .force
        .norm()
        .max(at0.moment.norm())
        .max(at_l.force.norm())
        .max(at_l.moment.norm());
    Ok(BalanceReport {
        force_defect,
        moment_defect,
        scale,
    })
}

/// Rebuilds the membrane/couple resultants and effective tractions of a
/// field at one station, from displacements alone. Used by the table
/// re-checker to compare stored stress columns with an independent route.
pub fn rebuild_stress_station(
    field: &dyn ShellField,
    curve: &SectionCurve,
    mat: &ShellMaterial,
    z_span: (f64, f64),
    z: f64,
) -> Result<(crate::material::MembraneGrids, crate::material::TractionGrids), ShellError> {
    let poly = fit_z_polynomial(field, curve, z_span.0, z_span.1);
    let rf = rebuild_stresses(&poly, curve, mat)?;
    let zeta = (z - rf.z0) / rf.w;
    let nm = crate::material::MembraneGrids {
        n_ss: rf.n_ss.eval(zeta),
        n_sz: rf.n_sz.eval(zeta),
        n_zz: rf.n_zz.eval(zeta),
        m_ss: rf.m_ss.eval(zeta),
        m_sz: rf.m_sz.eval(zeta),
        m_zz: rf.m_zz.eval(zeta),
    };
    let tr = crate::material::TractionGrids {
        p_ss: rf.p_ss.eval(zeta),
        p_sz: rf.p_sz.eval(zeta),
        p_zs: rf.p_zs.eval(zeta),
        p_zz: rf.p_zz.eval(zeta),
        s_s: rf.s_s.eval(zeta),
        s_z: rf.s_z.eval(zeta),
    };
    Ok((nm, tr))
}

/// Membrane-vs-bending strain diagnostic over the given stations.
pub fn strain_diagnostic(
    field: &dyn ShellField,
    curve: &SectionCurve,
    mat: &ShellMaterial,
    z_stations: &[f64],
) -> Result<StrainDiagnostic, ShellError> {
    let z_lo = z_stations.iter().cloned().fold(f64::INFINITY, f64::min);
    let z_hi = z_stations.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let poly = fit_z_polynomial(field, curve, z_lo, z_hi);
    let rf = rebuild_stresses(&poly, curve, mat)?;
    let mut max_eps = 0.0f64;
    let mut max_rho = 0.0f64;
    for &z in z_stations {
        let zeta = (z - rf.z0) / rf.w;
        for v in rf.eps_norm_sq.eval(zeta) {
            max_eps = max_eps.max(v.max(0.0).sqrt());
        }
        for v in rf.rho_norm_sq.eval(zeta) {
            max_rho = max_rho.max(v.max(0.0).sqrt());
        }
    }
    let scaled = mat.h * max_rho;
    Ok(StrainDiagnostic {
        max_membrane: max_eps,
        max_bending_scaled: scaled,
        ratio: if scaled > 0.0 {
            max_eps / scaled
        } else {
            f64::INFINITY
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Vec3;
    use crate::curve::{build_section, FourierCurveSpec};
    use crate::ebt::solve_ebt;
    use crate::field::ShellField;
    use crate::flexure::solve_flexure;
    use crate::loads::ResultantLoads;
    use crate::material::stiffnesses;
    use std::sync::Arc;

    struct RigidField;

    impl ShellField for RigidField {
        fn z_degree(&self) -> usize {
            1
        }
        // Pointwise eval is unused here (equilibrium samples the grid
        // through sample_displacement, overridden below).
        fn displacement(&self, s: f64, z: f64) -> Vec3 {
            let c = Vec3::new(0.1, -0.2, 0.3);
            let d = Vec3::new(0.5, 0.4, -0.3);
            c + d.cross(Vec3::new(s.cos(), s.sin(), z))
        }
        fn displacement_s_derivative(&self, _order: usize, _s: f64, _z: f64) -> Vec3 {
            Vec3::ZERO
        }
        fn sample_displacement(
            &self,
            curve: &crate::curve::SectionCurve,
            z: f64,
        ) -> [Vec<f64>; 3] {
            let c = Vec3::new(0.1, -0.2, 0.3);
            let d = Vec3::new(0.5, 0.4, -0.3);
            let n = curve.len();
            let mut out = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
            for i in 0..n {
                let r = Vec3::new(curve.position(i).x, curve.position(i).y, z);
                let u = c + d.cross(r);
                out[0][i] = u.x;
                out[1][i] = u.y;
                out[2][i] = u.z;
            }
            out
        }
    }

    #[test]
    fn rigid_motion_is_in_equilibrium() {
        let curve = build_section(&FourierCurveSpec::ellipse(2.0, 1.0), 256).unwrap();
        let mat = stiffnesses(1.0, 0.3, 0.01).unwrap();
        let rep = equilibrium_residual(&RigidField, &curve, &mat, &[0.0, 0.5, 1.0]).unwrap();
        for e in 0..3 {
            assert!(
                rep.max_abs[e] < 1e-9,
                "rigid residual too large: {:?}",
                rep.max_abs
            );
        }
    }

    #[test]
    fn ebt_field_satisfies_equilibrium_spectrally() {
        let curve = Arc::new(build_section(&FourierCurveSpec::ellipse(2.0, 1.0), 512).unwrap());
        let mat = stiffnesses(1.0, 0.3, 0.01).unwrap();
        let loads = ResultantLoads::new(
            Vec3::new(0.0, 0.0, 0.5),
            Vec3::new(0.3, 1.0, 0.7),
        );
        let sol = solve_ebt(&curve, &mat, &loads).unwrap();
        let rep = equilibrium_residual(&sol, &curve, &mat, &[0.0, 1.0]).unwrap();
        assert!(
            rep.worst_relative() < 1e-6,
            "relative residual {:?}",
            rep.relative
        );
    }

    #[test]
    fn perturbed_field_is_detected() {
        let curve = Arc::new(build_section(&FourierCurveSpec::ellipse(2.0, 1.0), 256).unwrap());
        let mat = stiffnesses(1.0, 0.3, 0.01).unwrap();
        let loads = ResultantLoads::new(Vec3::ZERO, Vec3::new(0.0, 1.0, 0.0));
        let sol = solve_ebt(&curve, &mat, &loads).unwrap();
        let clean = equilibrium_residual(&sol, &curve, &mat, &[0.5]).unwrap();

        struct Bumped<'a>(&'a crate::ebt::EbtSolution, f64);
        impl ShellField for Bumped<'_> {
            fn z_degree(&self) -> usize {
                self.0.z_degree()
            }
            fn displacement(&self, s: f64, z: f64) -> Vec3 {
                let sbar = self.1;
                let bump = 0.01 * (2.0 * std::f64::consts::PI * s / sbar).sin();
                self.0.displacement(s, z) + Vec3::new(0.0, 0.0, bump)
            }
            fn displacement_s_derivative(&self, order: usize, s: f64, z: f64) -> Vec3 {
                self.0.displacement_s_derivative(order, s, z)
            }
        }
        let bumped = Bumped(&sol, curve.perimeter());
        let noisy = equilibrium_residual(&bumped, &curve, &mat, &[0.5]).unwrap();
        assert!(
            noisy.worst_relative() > 1e3 * clean.worst_relative(),
            "perturbation not detected: {:?} vs {:?}",
            noisy.relative,
            clean.relative
        );
    }

    #[test]
    fn ebt_resultants_round_trip() {
        let curve = Arc::new(build_section(&FourierCurveSpec::ellipse(2.0, 1.0), 512).unwrap());
        let mat = stiffnesses(1.0, 0.3, 0.01).unwrap();
        let loads = ResultantLoads::new(
            Vec3::new(0.0, 0.0, 2.0),
            Vec3::new(1.0, -0.5, 0.25),
        );
        let sol = solve_ebt(&curve, &mat, &loads).unwrap();
        let rep = end_resultants(&sol, &curve, &mat, 0.0).unwrap();
        let scale = loads.scale();
        assert!((rep.force - loads.force).norm() < 1e-8 * scale);
        assert!((rep.moment - loads.moment).norm() < 1e-8 * scale);
    }

    #[test]
    fn flexure_resultants_and_zero_moment() {
        let curve = Arc::new(build_section(&FourierCurveSpec::ellipse(2.0, 1.0), 512).unwrap());
        let mat = stiffnesses(1.0, 0.3, 0.01).unwrap();
        let loads = ResultantLoads::new(Vec3::new(1.0, -0.5, 0.0), Vec3::ZERO);
        let sol = solve_flexure(&curve, &mat, &loads).unwrap();
        let rep = end_resultants(&sol, &curve, &mat, 0.0).unwrap();
        let scale = loads.scale();
        assert!((rep.force - loads.force).norm() < 1e-8 * scale);
        assert!(rep.moment.norm() < 1e-8 * scale * curve.perimeter());
    }

    #[test]
    fn both_resultant_routes_agree() {
        let curve = Arc::new(build_section(&FourierCurveSpec::ellipse(2.0, 1.0), 512).unwrap());
        let mat = stiffnesses(1.0, 0.3, 0.01).unwrap();
        let loads = ResultantLoads::new(Vec3::new(0.7, 0.0, 0.0), Vec3::ZERO);
        let sol = solve_flexure(&curve, &mat, &loads).unwrap();
        let a = end_resultants(&sol, &curve, &mat, 1.5).unwrap();
        let b = end_resultants_via_tractions(&sol, &curve, &mat, 1.5).unwrap();
        assert!((a.force - b.force).norm() < 1e-9 * loads.scale());
        assert!((a.moment - b.moment).norm() < 1e-8 * loads.scale());
    }

    #[test]
    fn theorem_style_z_derivative_functionals() {
        // The z-derivative of a solution transmits zero force, and its
        // moment equals the rotated transverse force.
        let curve = Arc::new(build_section(&FourierCurveSpec::ellipse(2.0, 1.0), 512).unwrap());
        let mat = stiffnesses(1.0, 0.3, 0.01).unwrap();
        let loads = ResultantLoads::new(Vec3::new(1.0, 0.5, 0.0), Vec3::ZERO);
        let sol = solve_flexure(&curve, &mat, &loads).unwrap();
        let dz_field = crate::field::ZDerivativeField::new(&sol, 0.05);
        let rep = end_resultants(&dz_field, &curve, &mat, 0.0).unwrap();
        let expect_m = Vec3::new(loads.force.y, -loads.force.x, 0.0);
        assert!(rep.force.norm() < 1e-5 * loads.scale());
        assert!((rep.moment - expect_m).norm() < 1e-5 * loads.scale());
    }

    #[test]
    fn continuity_of_solutions_and_negative_control() {
        let curve = Arc::new(build_section(&FourierCurveSpec::ellipse(2.0, 1.0), 512).unwrap());
        let mat = stiffnesses(1.0, 0.3, 0.01).unwrap();
        let loads = ResultantLoads::new(Vec3::ZERO, Vec3::new(0.0, 1.0, 0.0));
        let sol = solve_ebt(&curve, &mat, &loads).unwrap();
        let rep = continuity_check(&sol, &curve, &[0.0, 1.0]);
        assert!(rep.worst_relative() < 1e-9, "seam defect {:?}", rep);

        let broken = crate::ebt::solve_ebt_without_closure(&curve, &mat, &loads).unwrap();
        let bad = continuity_check(&broken, &curve, &[0.0, 1.0]);
        assert!(
            bad.worst_relative() > 1e4 * rep.worst_relative().max(1e-16),
            "negative control failed: {:?} vs {:?}",
            bad,
            rep
        );
    }

    #[test]
    fn constant_field_has_zero_defects() {
        struct Constant;
        impl ShellField for Constant {
            fn z_degree(&self) -> usize {
                0
            }
            fn displacement(&self, _s: f64, _z: f64) -> Vec3 {
                Vec3::new(1.0, 2.0, 3.0)
            }
            fn displacement_s_derivative(&self, order: usize, _s: f64, _z: f64) -> Vec3 {
                if order == 0 {
                    Vec3::new(1.0, 2.0, 3.0)
                } else {
                    Vec3::ZERO
                }
            }
        }
        let curve = build_section(&FourierCurveSpec::circle(1.0), 64).unwrap();
        let rep = continuity_check(&Constant, &curve, &[0.0]);
        assert_eq!(rep.value, 0.0);
        assert_eq!(rep.slope, 0.0);
        assert_eq!(rep.curvature_defect, 0.0);
    }

    #[test]
    fn global_balance_of_solutions() {
        let curve = Arc::new(build_section(&FourierCurveSpec::ellipse(2.0, 1.0), 512).unwrap());
        let mat = stiffnesses(1.0, 0.3, 0.01).unwrap();
        let ebt = solve_ebt(
            &curve,
            &mat,
            &ResultantLoads::new(Vec3::new(0.0, 0.0, 1.0), Vec3::new(0.5, 0.0, 1.0)),
        )
        .unwrap();
        let rep = global_balance(&ebt, &curve, &mat, 2.0).unwrap();
        assert!(rep.relative() < 1e-8, "balance defect {:?}", rep);

        let flex = solve_flexure(
            &curve,
            &mat,
            &ResultantLoads::new(Vec3::new(1.0, 0.0, 0.0), Vec3::ZERO),
        )
        .unwrap();
        let rep = global_balance(&flex, &curve, &mat, 2.0).unwrap();
        assert!(rep.relative() < 1e-8, "flexure balance {:?}", rep);
        // The local moment at z = ℓ is the transported end force.
        let at_l = end_resultants(&flex, &curve, &mat, 2.0).unwrap();
        let arm = Vec3::new(0.0, 0.0, -2.0).cross(at_l.force);
        assert!((at_l.moment_local - arm).norm() < 1e-8);
    }

    #[test]
    fn zero_field_zero_balance() {
        struct Zero;
        impl ShellField for Zero {
            fn z_degree(&self) -> usize {
                0
            }
            fn displacement(&self, _s: f64, _z: f64) -> Vec3 {
                Vec3::ZERO
            }
            fn displacement_s_derivative(&self, _o: usize, _s: f64, _z: f64) -> Vec3 {
                Vec3::ZERO
            }
        }
        let curve = build_section(&FourierCurveSpec::circle(1.0), 64).unwrap();
        let mat = stiffnesses(1.0, 0.3, 0.01).unwrap();
        let rep = global_balance(&Zero, &curve, &mat, 1.0).unwrap();
        assert_eq!(rep.force_defect, 0.0);
        assert_eq!(rep.moment_defect, 0.0);
    }
}
