//! Error types shared across the geometry, solver and verification modules.

use thiserror::Error;

use crate::algebra::Mat3;

/// Errors raised by section construction, the solvers and the checkers.
#[derive(Debug, Error)]
pub enum ShellError {
    /// The parametrization speed `|dx/dt|` vanishes somewhere on the curve.
    #[error("degenerate curve: |dx/dt| vanishes near t = {t:.6} (min speed {min_speed:.3e})")]
    DegenerateCurve { t: f64, min_speed: f64 },

    /// The cross-section curve crosses itself.
    #[error("self-intersecting cross-section curve (segments {seg_a} and {seg_b} cross)")]
    SelfIntersection { seg_a: usize, seg_b: usize },

    /// The curve is traversed clockwise (enclosed area not positive).
    #[error("clockwise curve orientation: enclosed area {area:.6e} <= 0; \
             re-parametrize the section counterclockwise")]
    OrientationError { area: f64 },

    /// Fewer than 64 arc samples, or an odd count.
    #[error("grid too coarse: grid_n = {grid_n} (need an even count >= 64)")]
    GridTooCoarse { grid_n: usize },

    /// Sample vector length does not match the curve grid.
    #[error("grid mismatch: got {got} samples, expected {expected}")]
    GridMismatch { got: usize, expected: usize },

    /// A material constant is outside its physical range.
    #[error("invalid material: {field} = {value} ({reason})")]
    InvalidMaterial {
        field: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// Coefficient system too ill-conditioned to trust.
    #[error("singular coefficient system: condition number {condition:.3e} exceeds limit")]
    SingularSystem { condition: f64, matrix: Box<Mat3> },

    /// Extension-bending-torsion loads must have no transverse force.
    #[error("non-axial force: extension-bending-torsion requires R1 = R2 = 0, got ({r1}, {r2})")]
    NonAxialForce { r1: f64, r2: f64 },

    /// Flexure loads must be a pure transverse force.
    #[error("non-transverse load: flexure requires R3 = 0 and M = 0, got R3 = {r3}, |M| = {m}")]
    NonTransverseLoad { r3: f64, m: f64 },

    /// Finite differencing in z needs at least five stations.
    #[error("too few z stations: got {got}, need at least {need}")]
    TooFewZStations { got: usize, need: usize },

    /// Circular oracle needs a positive radius.
    #[error("invalid radius: {radius}")]
    InvalidRadius { radius: f64 },
}
