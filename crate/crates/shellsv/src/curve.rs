//! Cross-section curves: truncated Fourier parametrizations, arc-length
//! reparametrization and the geometric quantities the solvers consume.
//!
//! A section curve is always handled in arc-length form: `N` uniform samples
//! of position, unit tangent `τ`, outward in-plane normal `n = (x₂', -x₁')`
//! and signed curvature `1/R = x₁' x₂'' - x₂' x₁''`, together with the
//! perimeter, enclosed area, line centroid and line inertia. The curve is
//! translated so the line centroid sits at the origin; the original centroid
//! is kept for moment transport.

use std::f64::consts::PI;

use crate::algebra::{Vec2, Vec3};
use crate::error::ShellError;
use crate::grid::{ArcGrid, Spectrum};
use crate::series::ArcSeries;

/// One coordinate of the curve as a truncated trigonometric series:
/// `constant + Σ_k (cos_k cos(kt) + sin_k sin(kt))`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CoordinateSeries {
    pub constant: f64,
    /// `(cos, sin)` coefficient pairs for harmonics `k = 1, 2, …`.
    pub harmonics: Vec<(f64, f64)>,
}

impl CoordinateSeries {
    fn eval(&self, t: f64) -> (f64, f64, f64) {
        let mut x = self.constant;
        let mut dx = 0.0;
        let mut ddx = 0.0;
        for (i, &(a, b)) in self.harmonics.iter().enumerate() {
            let k = (i + 1) as f64;
            let (skt, ckt) = (k * t).sin_cos();
            x += a * ckt + b * skt;
            dx += k * (-a * skt + b * ckt);
            ddx += k * k * (-a * ckt - b * skt);
        }
        (x, dx, ddx)
    }
}

/// Closed planar curve given by finite Fourier series for both coordinates,
/// `t ∈ [0, 2π)`. Finite sums are smooth and closed by construction; the
/// builder still checks regularity, simplicity and orientation.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCurveSpec {
    pub x1: CoordinateSeries,
    pub x2: CoordinateSeries,
}

impl FourierCurveSpec {
    pub fn new(x1: CoordinateSeries, x2: CoordinateSeries) -> Self {
        FourierCurveSpec { x1, x2 }
    }

    /// Circle of radius `r0` traversed counterclockwise.
    pub fn circle(r0: f64) -> Self {
        FourierCurveSpec {
            x1: CoordinateSeries {
                constant: 0.0,
                harmonics: vec![(r0, 0.0)],
            },
            x2: CoordinateSeries {
                constant: 0.0,
                harmonics: vec![(0.0, r0)],
            },
        }
    }

    /// Axis-aligned ellipse with semi-axes `a`, `b`.
    pub fn ellipse(a: f64, b: f64) -> Self {
        FourierCurveSpec {
            x1: CoordinateSeries {
                constant: 0.0,
                harmonics: vec![(a, 0.0)],
            },
            x2: CoordinateSeries {
                constant: 0.0,
                harmonics: vec![(0.0, b)],
            },
        }
    }

    /// Number of harmonics kept (the larger of the two coordinates).
    pub fn truncation_order(&self) -> usize {
        self.x1.harmonics.len().max(self.x2.harmonics.len())
    }

    /// Translated copy (rigidly shifted curve).
    pub fn translated(&self, shift: Vec2) -> Self {
        let mut out = self.clone();
        out.x1.constant += shift.x;
        out.x2.constant += shift.y;
        out
    }

    /// Copy rotated by `angle` about the origin. Harmonic pairs rotate as
    /// plane vectors, so the parametrization follows the material points.
    pub fn rotated(&self, angle: f64) -> Self {
        let (sn, cs) = angle.sin_cos();
        let rot = |p: f64, q: f64| (cs * p - sn * q, sn * p + cs * q);
        let mut x1 = CoordinateSeries {
            constant: rot(self.x1.constant, self.x2.constant).0,
            harmonics: Vec::new(),
        };
        let mut x2 = CoordinateSeries {
            constant: rot(self.x1.constant, self.x2.constant).1,
            harmonics: Vec::new(),
        };
        let order = self.truncation_order();
        for k in 0..order {
            let (a1, b1) = self.x1.harmonics.get(k).copied().unwrap_or((0.0, 0.0));
            let (a2, b2) = self.x2.harmonics.get(k).copied().unwrap_or((0.0, 0.0));
            let (ra, rb) = (rot(a1, a2), rot(b1, b2));
            x1.harmonics.push((ra.0, rb.0));
            x2.harmonics.push((ra.1, rb.1));
        }
        FourierCurveSpec { x1, x2 }
    }

    /// Position and first two `t`-derivatives at parameter `t`.
    pub fn eval(&self, t: f64) -> [Vec2; 3] {
        let (x1, dx1, ddx1) = self.x1.eval(t);
        let (x2, dx2, ddx2) = self.x2.eval(t);
        [
            Vec2::new(x1, x2),
            Vec2::new(dx1, dx2),
            Vec2::new(ddx1, ddx2),
        ]
    }
}

/// Scalar global properties of a built section.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectionProperties {
    pub perimeter: f64,
    pub area: f64,
    /// Line centroid of the curve as originally specified.
    pub centroid: Vec2,
    /// Line inertia `∮ x_α x_β ds` about the centroid.
    pub inertia: [[f64; 2]; 2],
    /// `∮ ds / R`; `2π` for a simple counterclockwise curve.
    pub total_turning: f64,
}

/// Closed cross-section curve resampled uniformly in arc length, centred on
/// its line centroid, with all per-sample geometry populated.
#[derive(Debug, Clone)]
pub struct SectionCurve {
    grid: ArcGrid,
    x: [Vec<f64>; 2],
    tau: [Vec<f64>; 2],
    normal: [Vec<f64>; 2],
    curvature: Vec<f64>,
    area: f64,
    centroid: Vec2,
    inertia: [[f64; 2]; 2],
    total_turning: f64,
}

/// Minimum admissible arc sample count.
pub const MIN_GRID: usize = 64;

/// Builds a [`SectionCurve`] from a Fourier spec with `grid_n` uniform
/// arc-length samples.
pub fn build_section(spec: &FourierCurveSpec, grid_n: usize) -> Result<SectionCurve, ShellError> {
    if grid_n < MIN_GRID || grid_n % 2 != 0 {
        return Err(ShellError::GridTooCoarse { grid_n });
    }

    // Resolve the speed on a t-grid fine enough that its spectrum bottoms
    // out; everything downstream inherits that resolution.
    let mut m = 256usize.max(16 * spec.truncation_order().max(1)).next_power_of_two();
    let (tgrid, speed, speed_spec) = loop {
        let tg = ArcGrid::new(m, 2.0 * PI);
        let v = tg.sample(|t| spec.eval(t)[1].norm());
        let sp = Spectrum::from_samples(tg, &v);
        let vmax = v.iter().fold(0.0f64, |a, &b| a.max(b));
        if sp.nyquist_magnitude() <= 1e-13 * vmax.max(1e-300) || m >= 65536 {
            break (tg, v, sp);
        }
        m *= 2;
    };

    let vmax = speed.iter().fold(0.0f64, |a, &b| a.max(b));
    let (imin, vmin) = speed
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |(ia, va), (i, &v)| {
            if v < va {
                (i, v)
            } else {
                (ia, va)
            }
        });
    if !(vmin > 1e-9 * vmax) || vmax == 0.0 {
        return Err(ShellError::DegenerateCurve {
            t: tgrid.point(imin),
            min_speed: vmin,
        });
    }

    // Arc length as a function of t: mean speed ramp plus periodic part.
    let mean_speed = speed_spec.mean();
    let perimeter = mean_speed * 2.0 * PI;
    let anti = speed_spec.antiderivative_zero_mean();
    let anti0 = anti.eval(0.0);
    let arc_of_t = |t: f64| mean_speed * t + (anti.eval(t) - anti0);
    let arc_table: Vec<f64> = tgrid.points().map(arc_of_t).collect();

    // Invert s(t) at the uniform arc targets by bracketed Newton.
    let ds = perimeter / grid_n as f64;
    let mut t_of_s = Vec::with_capacity(grid_n);
    for i in 0..grid_n {
        let target = ds * i as f64;
        t_of_s.push(invert_arc_length(
            &arc_table, &tgrid, &arc_of_t, spec, target, perimeter,
        ));
    }

    // Per-sample geometry from analytic t-derivatives.
    let n = grid_n;
    let mut x = [vec![0.0; n], vec![0.0; n]];
    let mut tau = [vec![0.0; n], vec![0.0; n]];
    let mut normal = [vec![0.0; n], vec![0.0; n]];
    let mut curvature = vec![0.0; n];
    for (i, &t) in t_of_s.iter().enumerate() {
        let [p, dp, ddp] = spec.eval(t);
        let v = dp.norm();
        let vdot = dp.dot(ddp) / v;
        let xp = dp * (1.0 / v);
        let xpp = (ddp * v - dp * vdot) * (1.0 / (v * v * v));
        x[0][i] = p.x;
        x[1][i] = p.y;
        tau[0][i] = xp.x;
        tau[1][i] = xp.y;
        normal[0][i] = xp.y;
        normal[1][i] = -xp.x;
        curvature[i] = xp.x * xpp.y - xp.y * xpp.x;
    }

    if let Some((a, b)) = polyline_self_intersection(&x[0], &x[1]) {
        return Err(ShellError::SelfIntersection { seg_a: a, seg_b: b });
    }

    let grid = ArcGrid::new(grid_n, perimeter);
    let r_dot_n: Vec<f64> = (0..n)
        .map(|i| x[0][i] * normal[0][i] + x[1][i] * normal[1][i])
        .collect();
    let area = 0.5 * grid.closed_integral(&r_dot_n)?;
    if area <= 0.0 {
        return Err(ShellError::OrientationError { area });
    }

    // Recentre on the line centroid; area and curvature are unaffected.
    let centroid = Vec2::new(grid.mean(&x[0])?, grid.mean(&x[1])?);
    for i in 0..n {
        x[0][i] -= centroid.x;
        x[1][i] -= centroid.y;
    }

    let mut inertia = [[0.0; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            let prod: Vec<f64> = (0..n).map(|i| x[a][i] * x[b][i]).collect();
            inertia[a][b] = grid.closed_integral(&prod)?;
        }
    }
    let total_turning = grid.closed_integral(&curvature)?;

    Ok(SectionCurve {
        grid,
        x,
        tau,
        normal,
        curvature,
        area,
        centroid,
        inertia,
        total_turning,
    })
}

fn invert_arc_length(
    arc_table: &[f64],
    tgrid: &ArcGrid,
    arc_of_t: &dyn Fn(f64) -> f64,
    spec: &FourierCurveSpec,
    target: f64,
    perimeter: f64,
) -> f64 {
    if target == 0.0 {
        return 0.0;
    }
    // Bracket from the monotone fine table.
    let m = arc_table.len();
    let mut lo_idx = 0;
    let mut hi_idx = m;
    while hi_idx - lo_idx > 1 {
        let mid = (lo_idx + hi_idx) / 2;
        if arc_table[mid] <= target {
            lo_idx = mid;
        } else {
            hi_idx = mid;
        }
    }
    let mut lo = tgrid.point(lo_idx);
    let mut hi = if hi_idx == m {
        2.0 * PI
    } else {
        tgrid.point(hi_idx)
    };
    let f_lo = arc_table[lo_idx] - target;
    let f_hi = if hi_idx == m {
        perimeter - target
    } else {
        arc_table[hi_idx] - target
    };
    let mut t = lo + (hi - lo) * (-f_lo) / (f_hi - f_lo).max(1e-300);

    // Newton with a bisection safeguard, driven to the rounding floor of
    // the arc-length evaluation (the sample noise this leaves behind is
    // what the spectral derivatives downstream amplify).
    let tol = 4.0 * f64::EPSILON * perimeter;
    let mut best_t = t;
    let mut best_f = f64::INFINITY;
    for _ in 0..80 {
        let f = arc_of_t(t) - target;
        if f.abs() < best_f {
            best_f = f.abs();
            best_t = t;
        }
        if f.abs() <= tol {
            return t;
        }
        if f > 0.0 {
            hi = t;
        } else {
            lo = t;
        }
        if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
            break;
        }
        let v = spec.eval(t)[1].norm();
        let mut next = t - f / v;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        t = next;
    }
    best_t
}

/// Proper-crossing test between all non-adjacent segments of the closed
/// polyline; returns the first offending pair.
fn polyline_self_intersection(x1: &[f64], x2: &[f64]) -> Option<(usize, usize)> {
    let n = x1.len();
    let p = |i: usize| Vec2::new(x1[i % n], x2[i % n]);
    let orient = |a: Vec2, b: Vec2, c: Vec2| (b - a).perp().dot(c - a) * -1.0;
    for i in 0..n {
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue; // closing segment is adjacent to the first
            }
            let (a, b) = (p(i), p(i + 1));
            let (c, d) = (p(j), p(j + 1));
            let o1 = orient(a, b, c);
            let o2 = orient(a, b, d);
            let o3 = orient(c, d, a);
            let o4 = orient(c, d, b);
            if ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0))
                && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0))
            {
                return Some((i, j));
            }
        }
    }
    None
}

impl SectionCurve {
    pub fn grid(&self) -> ArcGrid {
        self.grid
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn perimeter(&self) -> f64 {
        self.grid.period()
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    /// Line centroid of the curve as originally specified (the stored
    /// samples are already recentred).
    pub fn centroid(&self) -> Vec2 {
        self.centroid
    }

    pub fn inertia(&self) -> [[f64; 2]; 2] {
        self.inertia
    }

    pub fn total_turning(&self) -> f64 {
        self.total_turning
    }

    pub fn position(&self, i: usize) -> Vec2 {
        Vec2::new(self.x[0][i], self.x[1][i])
    }

    pub fn tangent(&self, i: usize) -> Vec2 {
        Vec2::new(self.tau[0][i], self.tau[1][i])
    }

    pub fn normal(&self, i: usize) -> Vec2 {
        Vec2::new(self.normal[0][i], self.normal[1][i])
    }

    pub fn curvature(&self, i: usize) -> f64 {
        self.curvature[i]
    }

    pub fn positions(&self, alpha: usize) -> &[f64] {
        &self.x[alpha]
    }

    pub fn tangents(&self, alpha: usize) -> &[f64] {
        &self.tau[alpha]
    }

    pub fn normals(&self, alpha: usize) -> &[f64] {
        &self.normal[alpha]
    }

    pub fn curvatures(&self) -> &[f64] {
        &self.curvature
    }

    /// Auxiliary position `r̂ = x_α e_α + s̄ e₃`.
    pub fn r_hat(&self, i: usize) -> Vec3 {
        Vec3::new(self.x[0][i], self.x[1][i], self.perimeter())
    }

    /// Samples of `r · n` (twice the area density).
    pub fn r_dot_n(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| self.position(i).dot(self.normal(i)))
            .collect()
    }

    /// Samples of a pointwise function of the sample index.
    pub fn sample_indexed<F: FnMut(usize) -> f64>(&self, mut f: F) -> Vec<f64> {
        (0..self.len()).map(&mut f).collect()
    }

    pub fn properties(&self) -> SectionProperties {
        SectionProperties {
            perimeter: self.perimeter(),
            area: self.area,
            centroid: self.centroid,
            inertia: self.inertia,
            total_turning: self.total_turning,
        }
    }

    /// Periodic trapezoid rule on the arc grid.
    pub fn closed_integral(&self, samples: &[f64]) -> Result<f64, ShellError> {
        self.grid.closed_integral(samples)
    }

    /// Cumulative integral `F(s) = ∫₀ˢ f`, as mean ramp plus periodic part.
    pub fn cumulative_integral(&self, samples: &[f64]) -> Result<ArcSeries, ShellError> {
        self.grid.check_len(samples)?;
        Ok(ArcSeries::from_samples(self.grid, samples.to_vec()).integrate())
    }
}

/// Convenience wrapper mirroring the free-standing operation shape.
pub fn section_properties(curve: &SectionCurve) -> SectionProperties {
    curve.properties()
}
