//! End-edge resultant loads and the moment transport between the user's
//! origin and the section centroid.

use crate::algebra::{Vec2, Vec3};

/// Resultant force and moment prescribed on the end edge at `z = 0`.
///
/// The solvers consume the centroid-origin form; loads specified about
/// another origin go through [`transform_loads_to_centroid`] first.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ResultantLoads {
    /// Resultant force `R⁰`.
    pub force: Vec3,
    /// Resultant moment `M⁰` about the working origin.
    pub moment: Vec3,
}

impl ResultantLoads {
    pub fn new(force: Vec3, moment: Vec3) -> Self {
        ResultantLoads { force, moment }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// Extension-bending-torsion part: axial force and full moment.
    pub fn ebt_part(&self) -> ResultantLoads {
        ResultantLoads {
            force: Vec3::new(0.0, 0.0, self.force.z),
            moment: self.moment,
        }
    }

    /// Flexure part: transverse force only.
    pub fn flexure_part(&self) -> ResultantLoads {
        ResultantLoads {
            force: Vec3::new(self.force.x, self.force.y, 0.0),
            moment: Vec3::ZERO,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.force == Vec3::ZERO && self.moment == Vec3::ZERO
    }

    /// Largest entry magnitude; a scale for relative checks.
    pub fn scale(&self) -> f64 {
        self.force.norm_inf().max(self.moment.norm_inf())
    }
}

/// Moves loads given about the user's origin to the centroid origin:
/// the force is unchanged and `M_centroid = M_user - c × R` with `c` the
/// in-plane centroid offset.
pub fn transform_loads_to_centroid(loads: &ResultantLoads, centroid: Vec2) -> ResultantLoads {
    let c = Vec3::from_plane(centroid);
    ResultantLoads {
        force: loads.force,
        moment: loads.moment - c.cross(loads.force),
    }
}

/// Inverse transport, for reporting resultants back in the user frame.
pub fn transform_loads_to_user(loads: &ResultantLoads, centroid: Vec2) -> ResultantLoads {
    let c = Vec3::from_plane(centroid);
    ResultantLoads {
        force: loads.force,
        moment: loads.moment + c.cross(loads.force),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn zero_centroid_is_identity() {
        let loads = ResultantLoads::new(Vec3::new(1.0, 2.0, 3.0), Vec3::new(-1.0, 0.5, 2.0));
        let out = transform_loads_to_centroid(&loads, Vec2::ZERO);
        assert_eq!(out, loads);
    }

    #[test]
    fn axial_force_off_centroid_gains_bending_moment() {
        // c = (1, 0), R = (0, 0, F): M_centroid = M_user + (0, F, 0).
        let f = 2.5;
        let loads = ResultantLoads::new(Vec3::new(0.0, 0.0, f), Vec3::ZERO);
        let out = transform_loads_to_centroid(&loads, Vec2::new(1.0, 0.0));
        assert_relative_eq!(out.moment.x, 0.0);
        assert_relative_eq!(out.moment.y, f);
        assert_relative_eq!(out.moment.z, 0.0);
        assert_eq!(out.force, loads.force);
    }

    #[test]
    fn pure_moment_is_unchanged() {
        let loads = ResultantLoads::new(Vec3::ZERO, Vec3::new(4.0, -1.0, 0.25));
        let out = transform_loads_to_centroid(&loads, Vec2::new(3.0, -2.0));
        assert_eq!(out, loads);
    }

    #[test]
    fn transport_roundtrip() {
        let loads = ResultantLoads::new(Vec3::new(1.0, -2.0, 0.5), Vec3::new(0.1, 0.2, 0.3));
        let c = Vec2::new(-0.4, 1.9);
        let back = transform_loads_to_user(&transform_loads_to_centroid(&loads, c), c);
        assert_relative_eq!(back.moment.x, loads.moment.x, epsilon = 1e-15);
        assert_relative_eq!(back.moment.y, loads.moment.y, epsilon = 1e-15);
        assert_relative_eq!(back.moment.z, loads.moment.z, epsilon = 1e-15);
    }

    #[test]
    fn load_split_covers_both_subproblems() {
        let loads = ResultantLoads::new(Vec3::new(1.0, 2.0, 3.0), Vec3::new(4.0, 5.0, 6.0));
        let ebt = loads.ebt_part();
        let flex = loads.flexure_part();
        assert_eq!(ebt.force, Vec3::new(0.0, 0.0, 3.0));
        assert_eq!(ebt.moment, loads.moment);
        assert_eq!(flex.force, Vec3::new(1.0, 2.0, 0.0));
        assert_eq!(flex.moment, Vec3::ZERO);
        let sum_force = ebt.force + flex.force;
        assert_eq!(sum_force, loads.force);
    }
}
