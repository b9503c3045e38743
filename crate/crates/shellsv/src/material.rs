//! Material constants and the strain → stress → effective-traction maps of
//! the first-order shell model on the cylinder.
//!
//! Conventions on the cylinder (orthonormal coordinates `s`, `z`):
//!
//! ```text
//! ε_ss = u,s·τ     ε_sz = (u,z·τ + u,s·e3)/2     ε_zz = u,z·e3
//! ρ_ss = u,ss·n     ρ_sz = u,sz·n                 ρ_zz = u,zz·n
//!
//! N_ss = C(ε_ss + ν ε_zz)    N_sz = C(1-ν)ε_sz    N_zz = C(ν ε_ss + ε_zz)
//! M    likewise with D and ρ
//!
//! P_ss = N_ss - M_ss/R   P_sz = N_sz - M_sz/R   P_zs = N_zs   P_zz = N_zz
//! S_s  = -M_ss,s - M_zs,z                       S_z = -M_sz,s - M_zz,z
//! ```

use crate::algebra::Vec3;
use crate::curve::SectionCurve;
use crate::error::ShellError;

/// Isotropic shell material with derived stiffnesses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShellMaterial {
    /// Young modulus.
    pub e: f64,
    /// Poisson ratio, in (-1, 0.5).
    pub nu: f64,
    /// Thickness.
    pub h: f64,
    /// Stretching stiffness `C = Eh / (1 - ν²)`.
    pub c: f64,
    /// Bending stiffness `D = Eh³ / (12(1 - ν²))`.
    pub d: f64,
    /// Shear modulus `μ = E / (2(1 + ν))`.
    pub mu: f64,
}

/// Builds a [`ShellMaterial`], validating the physical bounds.
pub fn stiffnesses(e: f64, nu: f64, h: f64) -> Result<ShellMaterial, ShellError> {
    if !(e > 0.0) {
        return Err(ShellError::InvalidMaterial {
            field: "e",
            value: e,
            reason: "Young modulus must be positive",
        });
    }
    if !(nu > -1.0 && nu < 0.5) {
        return Err(ShellError::InvalidMaterial {
            field: "nu",
            value: nu,
            reason: "Poisson ratio must lie in (-1, 0.5)",
        });
    }
    if !(h > 0.0) {
        return Err(ShellError::InvalidMaterial {
            field: "h",
            value: h,
            reason: "thickness must be positive",
        });
    }
    let c = e * h / (1.0 - nu * nu);
    let d = e * h.powi(3) / (12.0 * (1.0 - nu * nu));
    let mu = e / (2.0 * (1.0 + nu));
    Ok(ShellMaterial { e, nu, h, c, d, mu })
}

/// Strain measures at one point (change of metric ε, change of curvature ρ).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StrainState {
    pub eps_ss: f64,
    pub eps_sz: f64,
    pub eps_zz: f64,
    pub rho_ss: f64,
    pub rho_sz: f64,
    pub rho_zz: f64,
}

/// Symmetric membrane and couple resultants at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MembraneCouple {
    pub n_ss: f64,
    pub n_sz: f64,
    pub n_zz: f64,
    pub m_ss: f64,
    pub m_sz: f64,
    pub m_zz: f64,
}

/// Full stress state: resultants plus effective tractions and shears.
/// `P_sz ≠ P_zs` in general; `P_zs = N_zs` always.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StressState {
    pub n_ss: f64,
    pub n_sz: f64,
    pub n_zz: f64,
    pub m_ss: f64,
    pub m_sz: f64,
    pub m_zz: f64,
    pub p_ss: f64,
    pub p_sz: f64,
    pub p_zs: f64,
    pub p_zz: f64,
    pub s_s: f64,
    pub s_z: f64,
}

impl std::ops::Add for StressState {
    type Output = StressState;
    fn add(self, o: StressState) -> StressState {
        StressState {
            n_ss: self.n_ss + o.n_ss,
            n_sz: self.n_sz + o.n_sz,
            n_zz: self.n_zz + o.n_zz,
            m_ss: self.m_ss + o.m_ss,
            m_sz: self.m_sz + o.m_sz,
            m_zz: self.m_zz + o.m_zz,
            p_ss: self.p_ss + o.p_ss,
            p_sz: self.p_sz + o.p_sz,
            p_zs: self.p_zs + o.p_zs,
            p_zz: self.p_zz + o.p_zz,
            s_s: self.s_s + o.s_s,
            s_z: self.s_z + o.s_z,
        }
    }
}

impl StressState {
    /// Completes a point stress state from resultants, the local curvature
    /// and the locally known derivative data.
    pub fn from_resultants(
        nm: MembraneCouple,
        kappa: f64,
        m_ss_s: f64,
        m_sz_s: f64,
        m_zs_z: f64,
        m_zz_z: f64,
    ) -> StressState {
        StressState {
            n_ss: nm.n_ss,
            n_sz: nm.n_sz,
            n_zz: nm.n_zz,
            m_ss: nm.m_ss,
            m_sz: nm.m_sz,
            m_zz: nm.m_zz,
            p_ss: nm.n_ss - kappa * nm.m_ss,
            p_sz: nm.n_sz - kappa * nm.m_sz,
            p_zs: nm.n_sz,
            p_zz: nm.n_zz,
            s_s: -m_ss_s - m_zs_z,
            s_z: -m_sz_s - m_zz_z,
        }
    }
}

/// Pointwise constitutive map.
pub fn constitutive(strain: &StrainState, mat: &ShellMaterial) -> MembraneCouple {
    let (c, d, nu) = (mat.c, mat.d, mat.nu);
    MembraneCouple {
        n_ss: c * (strain.eps_ss + nu * strain.eps_zz),
        n_sz: c * (1.0 - nu) * strain.eps_sz,
        n_zz: c * (nu * strain.eps_ss + strain.eps_zz),
        m_ss: d * (strain.rho_ss + nu * strain.rho_zz),
        m_sz: d * (1.0 - nu) * strain.rho_sz,
        m_zz: d * (nu * strain.rho_ss + strain.rho_zz),
    }
}

/// Membrane/couple resultants sampled on the arc grid at one z-station.
#[derive(Debug, Clone, Default)]
pub struct MembraneGrids {
    pub n_ss: Vec<f64>,
    pub n_sz: Vec<f64>,
    pub n_zz: Vec<f64>,
    pub m_ss: Vec<f64>,
    pub m_sz: Vec<f64>,
    pub m_zz: Vec<f64>,
}

impl MembraneGrids {
    pub fn zeros(n: usize) -> Self {
        MembraneGrids {
            n_ss: vec![0.0; n],
            n_sz: vec![0.0; n],
            n_zz: vec![0.0; n],
            m_ss: vec![0.0; n],
            m_sz: vec![0.0; n],
            m_zz: vec![0.0; n],
        }
    }
}

/// Effective tractions and transverse shears sampled on the arc grid.
#[derive(Debug, Clone, Default)]
pub struct TractionGrids {
    pub p_ss: Vec<f64>,
    pub p_sz: Vec<f64>,
    pub p_zs: Vec<f64>,
    pub p_zz: Vec<f64>,
    pub s_s: Vec<f64>,
    pub s_z: Vec<f64>,
}

/// Completes resultants to effective tractions on the grid.
///
/// `nm` holds the resultants at the evaluation station; `nm_zslope` their
/// exact z-derivatives there (the solution fields are polynomial in z, so
/// callers supply the slope analytically). The s-derivatives of the couple
/// resultants are spectral.
pub fn effective_tractions(
    nm: &MembraneGrids,
    nm_zslope: &MembraneGrids,
    curve: &SectionCurve,
) -> Result<TractionGrids, ShellError> {
    let grid = curve.grid();
    let m_ss_s = grid.derivative(&nm.m_ss)?;
    let m_sz_s = grid.derivative(&nm.m_sz)?;
    grid.check_len(&nm.n_ss)?;
    grid.check_len(&nm_zslope.m_sz)?;
    let n = grid.len();
    let mut out = TractionGrids {
        p_ss: vec![0.0; n],
        p_sz: vec![0.0; n],
        p_zs: vec![0.0; n],
        p_zz: vec![0.0; n],
        s_s: vec![0.0; n],
        s_z: vec![0.0; n],
    };
    for i in 0..n {
        let kappa = curve.curvature(i);
        out.p_ss[i] = nm.n_ss[i] - kappa * nm.m_ss[i];
        out.p_sz[i] = nm.n_sz[i] - kappa * nm.m_sz[i];
        out.p_zs[i] = nm.n_sz[i];
        out.p_zz[i] = nm.n_zz[i];
        out.s_s[i] = -m_ss_s[i] - nm_zslope.m_sz[i];
        out.s_z[i] = -m_sz_s[i] - nm_zslope.m_zz[i];
    }
    Ok(out)
}

/// Strain grids at one z-station.
#[derive(Debug, Clone, Default)]
pub struct StrainGrids {
    pub eps_ss: Vec<f64>,
    pub eps_sz: Vec<f64>,
    pub eps_zz: Vec<f64>,
    pub rho_ss: Vec<f64>,
    pub rho_sz: Vec<f64>,
    pub rho_zz: Vec<f64>,
}

impl StrainGrids {
    pub fn zeros(n: usize) -> Self {
        StrainGrids {
            eps_ss: vec![0.0; n],
            eps_sz: vec![0.0; n],
            eps_zz: vec![0.0; n],
            rho_ss: vec![0.0; n],
            rho_sz: vec![0.0; n],
            rho_zz: vec![0.0; n],
        }
    }

    pub fn constitutive(&self, mat: &ShellMaterial) -> MembraneGrids {
        let n = self.eps_ss.len();
        let mut out = MembraneGrids::zeros(n);
        for i in 0..n {
            let strain = StrainState {
                eps_ss: self.eps_ss[i],
                eps_sz: self.eps_sz[i],
                eps_zz: self.eps_zz[i],
                rho_ss: self.rho_ss[i],
                rho_sz: self.rho_sz[i],
                rho_zz: self.rho_zz[i],
            };
            let nm = constitutive(&strain, mat);
            out.n_ss[i] = nm.n_ss;
            out.n_sz[i] = nm.n_sz;
            out.n_zz[i] = nm.n_zz;
            out.m_ss[i] = nm.m_ss;
            out.m_sz[i] = nm.m_sz;
            out.m_zz[i] = nm.m_zz;
        }
        out
    }
}

/// Strains from displacement grids at interior z-stations by central
/// differences (needs at least five uniformly spaced stations); spectral in
/// `s`. Returns `(station index, strains)` for each interior station.
///
/// This is the generic path for fields whose z-structure is unknown (saved
/// tables); solver fields go through the exact polynomial route instead.
pub fn strains_from_displacement(
    u_stations: &[[Vec<f64>; 3]],
    dz: f64,
    curve: &SectionCurve,
) -> Result<Vec<(usize, StrainGrids)>, ShellError> {
    if u_stations.len() < 5 {
        return Err(ShellError::TooFewZStations {
            got: u_stations.len(),
            need: 5,
        });
    }
    let grid = curve.grid();
    for comp in u_stations.iter().flatten() {
        grid.check_len(comp)?;
    }
    let n = grid.len();
    let mut out = Vec::new();
    for j in 1..u_stations.len() - 1 {
        let mut u_z = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
        let mut u_zz = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
        for c in 0..3 {
            for i in 0..n {
                u_z[c][i] = (u_stations[j + 1][c][i] - u_stations[j - 1][c][i]) / (2.0 * dz);
                u_zz[c][i] = (u_stations[j + 1][c][i] - 2.0 * u_stations[j][c][i]
                    + u_stations[j - 1][c][i])
                    / (dz * dz);
            }
        }
        let u_s: Vec<Vec<f64>> = (0..3)
            .map(|c| grid.derivative(&u_stations[j][c]))
            .collect::<Result<_, _>>()?;
        let u_ss: Vec<Vec<f64>> = u_s
            .iter()
            .map(|g| grid.derivative(g))
            .collect::<Result<_, _>>()?;
        let u_sz: Vec<Vec<f64>> = (0..3)
            .map(|c| grid.derivative(&u_z[c]))
            .collect::<Result<_, _>>()?;
        let mut strains = StrainGrids::zeros(n);
        for i in 0..n {
            let tau = curve.tangent(i);
            let nrm = curve.normal(i);
            let us = Vec3::new(u_s[0][i], u_s[1][i], u_s[2][i]);
            let uz = Vec3::new(u_z[0][i], u_z[1][i], u_z[2][i]);
            strains.eps_ss[i] = us.x * tau.x + us.y * tau.y;
            strains.eps_sz[i] = 0.5 * (uz.x * tau.x + uz.y * tau.y + us.z);
            strains.eps_zz[i] = uz.z;
            strains.rho_ss[i] = u_ss[0][i] * nrm.x + u_ss[1][i] * nrm.y;
            strains.rho_sz[i] = u_sz[0][i] * nrm.x + u_sz[1][i] * nrm.y;
            strains.rho_zz[i] = u_zz[0][i] * nrm.x + u_zz[1][i] * nrm.y;
        }
        out.push((j, strains));
    }
    Ok(out)
}
