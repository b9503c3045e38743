//! Small fixed-size vectors and dense solves used throughout the solvers.
//!
//! The coefficient systems of the tube solvers are 3x3 (and 2x2 in the thin
//! limit), so the linear algebra here is deliberately minimal: direct
//! elimination with partial pivoting plus an infinity-norm condition number
//! computed from the explicit inverse.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::ShellError;

/// In-plane vector (components along `e1`, `e2`).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Left rotation by 90 degrees: `e_{αβ} v_β e_α = (v2, -v1)`.
    pub fn perp(self) -> Vec2 {
        Vec2::new(self.y, -self.x)
    }

    pub fn component(self, i: usize) -> f64 {
        match i {
            0 => self.x,
            1 => self.y,
            _ => panic!("Vec2 component index out of range: {i}"),
        }
    }
}

/// Spatial vector with axis `e3` along the tube.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn from_plane(v: Vec2) -> Self {
        Vec3::new(v.x, v.y, 0.0)
    }

    pub fn plane(self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm_inf(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    pub fn component(self, i: usize) -> f64 {
        match i {
            0 => self.x,
            1 => self.y,
            2 => self.z,
            _ => panic!("Vec3 component index out of range: {i}"),
        }
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, f: f64) -> Vec2 {
        Vec2::new(self.x * f, self.y * f)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, f: f64) -> Vec3 {
        Vec3::new(self.x * f, self.y * f, self.z * f)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Dense 3x3 matrix in row-major order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3 {
    pub rows: [[f64; 3]; 3],
}

impl Mat3 {
    pub const ZERO: Mat3 = Mat3 {
        rows: [[0.0; 3]; 3],
    };

    pub fn from_rows(rows: [[f64; 3]; 3]) -> Self {
        Mat3 { rows }
    }

    /// Columns assembled from vectors: `M e_j = cols[j]`.
    pub fn from_cols(cols: [Vec3; 3]) -> Self {
        let mut rows = [[0.0; 3]; 3];
        for (j, c) in cols.iter().enumerate() {
            rows[0][j] = c.x;
            rows[1][j] = c.y;
            rows[2][j] = c.z;
        }
        Mat3 { rows }
    }

    pub fn mul_vec(&self, v: Vec3) -> Vec3 {
        let r = &self.rows;
        Vec3::new(
            r[0][0] * v.x + r[0][1] * v.y + r[0][2] * v.z,
            r[1][0] * v.x + r[1][1] * v.y + r[1][2] * v.z,
            r[2][0] * v.x + r[2][1] * v.y + r[2][2] * v.z,
        )
    }

    pub fn transpose(&self) -> Mat3 {
        let r = &self.rows;
        Mat3::from_rows([
            [r[0][0], r[1][0], r[2][0]],
            [r[0][1], r[1][1], r[2][1]],
            [r[0][2], r[1][2], r[2][2]],
        ])
    }

    pub fn norm_inf(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Solves `M x = rhs` by Gaussian elimination with partial pivoting.
    ///
    /// Fails with `SingularSystem` when the infinity-norm condition number
    /// exceeds `cond_limit` (coefficients would be unreliable) or a pivot
    /// vanishes outright.
    pub fn solve(&self, rhs: Vec3, cond_limit: f64) -> Result<Vec3, ShellError> {
        let cond = self.condition_inf();
        if !cond.is_finite() || cond > cond_limit {
            return Err(ShellError::SingularSystem {
                condition: cond,
                matrix: Box::new(*self),
            });
        }
        Ok(self.solve_unchecked(rhs))
    }

    fn solve_unchecked(&self, rhs: Vec3) -> Vec3 {
        let mut a = self.rows;
        let mut b = [rhs.x, rhs.y, rhs.z];
        let n = 3;
        for k in 0..n {
            let mut piv = k;
            for i in (k + 1)..n {
                if a[i][k].abs() > a[piv][k].abs() {
                    piv = i;
                }
            }
            if piv != k {
                a.swap(piv, k);
                b.swap(piv, k);
            }
            let d = a[k][k];
            for i in (k + 1)..n {
                let f = a[i][k] / d;
                for j in k..n {
                    a[i][j] -= f * a[k][j];
                }
                b[i] -= f * b[k];
            }
        }
        let mut x = [0.0; 3];
        for k in (0..n).rev() {
            let mut s = b[k];
            for j in (k + 1)..n {
                s -= a[k][j] * x[j];
            }
            x[k] = s / a[k][k];
        }
        Vec3::new(x[0], x[1], x[2])
    }

    pub fn inverse(&self) -> Option<Mat3> {
        let r = &self.rows;
        let det = r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
            - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
            + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]);
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let adj = [
            [
                r[1][1] * r[2][2] - r[1][2] * r[2][1],
                r[0][2] * r[2][1] - r[0][1] * r[2][2],
                r[0][1] * r[1][2] - r[0][2] * r[1][1],
            ],
            [
                r[1][2] * r[2][0] - r[1][0] * r[2][2],
                r[0][0] * r[2][2] - r[0][2] * r[2][0],
                r[0][2] * r[1][0] - r[0][0] * r[1][2],
            ],
            [
                r[1][0] * r[2][1] - r[1][1] * r[2][0],
                r[0][1] * r[2][0] - r[0][0] * r[2][1],
                r[0][0] * r[1][1] - r[0][1] * r[1][0],
            ],
        ];
        let mut rows = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                rows[i][j] = adj[i][j] / det;
            }
        }
        Some(Mat3::from_rows(rows))
    }

    /// Infinity-norm condition number `‖M‖ ‖M⁻¹‖`; infinite when singular.
    pub fn condition_inf(&self) -> f64 {
        match self.inverse() {
            Some(inv) => self.norm_inf() * inv.norm_inf(),
            None => f64::INFINITY,
        }
    }
}

/// Solves a 2x2 system with partial pivoting; `None` when singular
/// (condition number above `cond_limit`).
pub fn solve2(a: [[f64; 2]; 2], b: [f64; 2], cond_limit: f64) -> Option<[f64; 2]> {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    let norm = (a[0][0].abs() + a[0][1].abs()).max(a[1][0].abs() + a[1][1].abs());
    let inv_norm = ((a[1][1].abs() + a[0][1].abs()).max(a[1][0].abs() + a[0][0].abs())) / det.abs();
    if norm * inv_norm > cond_limit {
        return None;
    }
    let (r0, r1, b0, b1) = if a[1][0].abs() > a[0][0].abs() {
        (a[1], a[0], b[1], b[0])
    } else {
        (a[0], a[1], b[0], b[1])
    };
    let f = r1[0] / r0[0];
    let d = r1[1] - f * r0[1];
    let y = (b1 - f * b0) / d;
    let x = (b0 - r0[1] * y) / r0[0];
    Some([x, y])
}
