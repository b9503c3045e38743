//! Closed-form equilibrium solutions for thin cylindrical shell tubes —
//! extension, bending, torsion and flexure under end-edge resultants — with
//! independent numerical certification of every field.
//!
//! The pipeline: describe the cross-section curve as a truncated Fourier
//! series, resample it uniformly in arc length, assemble the two 3x3
//! coefficient systems by spectral quadrature, and evaluate the closed-form
//! displacement and stress fields. A separate verification path re-derives
//! stresses from displacements and checks the equilibrium equations, the
//! end-edge resultants, seam continuity and global balance.

pub mod algebra;
pub mod circular;
pub mod curve;
pub mod ebt;
pub mod error;
pub mod field;
pub mod flexure;
pub mod grid;
pub mod loads;
pub mod material;
pub mod profiles;
pub mod series;
pub mod thin;
pub mod verify;

pub mod config;
pub mod runner;
pub mod summary;
pub mod table;

pub use algebra::{Vec2, Vec3};
pub use curve::{build_section, section_properties, FourierCurveSpec, SectionCurve};
pub use ebt::{solve_ebt, torsion_function, EbtSolution};
pub use error::ShellError;
pub use field::{DisplacementProfiles, ShellField, StressField, ZDerivativeField};
pub use flexure::{flexure_function, solve_flexure, FlexureSolution};
pub use loads::{transform_loads_to_centroid, transform_loads_to_user, ResultantLoads};
pub use material::{constitutive, stiffnesses, ShellMaterial, StrainState, StressState};
