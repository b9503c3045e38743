//! Run configuration: a TOML document with strict keys (typos are errors),
//! validated before any compute.

use serde::Deserialize;
use thiserror::Error;

use crate::algebra::Vec3;
use crate::circular::PsiVariant;
use crate::curve::{CoordinateSeries, FourierCurveSpec, MIN_GRID};
use crate::loads::ResultantLoads;

#[derive(Debug, Error)]
pub enum ConfigError {
    /// Malformed document or unknown key; carries the parser's location.
    #[error("config parse error: {0}")]
    Parse(String),
    /// A well-formed value outside its admissible range.
    #[error("config validation error: field `{field}`: {reason}")]
    Validation { field: &'static str, reason: String },
}

fn validation(field: &'static str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Validation {
        field,
        reason: reason.into(),
    }
}

/// Cross-section description: a built-in shape or a Fourier table.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionConfig {
    /// "circle", "ellipse" or "fourier".
    pub kind: String,
    /// Circle radius.
    pub r0: Option<f64>,
    /// Ellipse semi-axes.
    pub a: Option<f64>,
    pub b: Option<f64>,
    /// Fourier table: constants and per-harmonic (cos, sin) pairs.
    pub x1_const: Option<f64>,
    pub x2_const: Option<f64>,
    pub x1_cos: Option<Vec<f64>>,
    pub x1_sin: Option<Vec<f64>>,
    pub x2_cos: Option<Vec<f64>>,
    pub x2_sin: Option<Vec<f64>>,
}

impl SectionConfig {
    pub fn to_spec(&self) -> Result<FourierCurveSpec, ConfigError> {
        match self.kind.as_str() {
            "circle" => {
                let r0 = self
                    .r0
                    .ok_or_else(|| validation("section.r0", "circle needs r0"))?;
                if !(r0 > 0.0) {
                    return Err(validation("section.r0", "radius must be positive"));
                }
                Ok(FourierCurveSpec::circle(r0))
            }
            "ellipse" => {
                let a = self
                    .a
                    .ok_or_else(|| validation("section.a", "ellipse needs a"))?;
                let b = self
                    .b
                    .ok_or_else(|| validation("section.b", "ellipse needs b"))?;
                if !(a > 0.0 && b > 0.0) {
                    return Err(validation("section.a", "semi-axes must be positive"));
                }
                Ok(FourierCurveSpec::ellipse(a, b))
            }
            "fourier" => {
                let series = |cos: &Option<Vec<f64>>,
                              sin: &Option<Vec<f64>>,
                              constant: Option<f64>|
                 -> CoordinateSeries {
                    let c = cos.clone().unwrap_or_default();
                    let s = sin.clone().unwrap_or_default();
                    let n = c.len().max(s.len());
                    let harmonics = (0..n)
                        .map(|k| {
                            (
                                c.get(k).copied().unwrap_or(0.0),
                                s.get(k).copied().unwrap_or(0.0),
                            )
                        })
                        .collect();
                    CoordinateSeries {
                        constant: constant.unwrap_or(0.0),
                        harmonics,
                    }
                };
                let spec = FourierCurveSpec::new(
                    series(&self.x1_cos, &self.x1_sin, self.x1_const),
                    series(&self.x2_cos, &self.x2_sin, self.x2_const),
                );
                if spec.truncation_order() == 0 {
                    return Err(validation(
                        "section",
                        "fourier section needs at least one harmonic",
                    ));
                }
                Ok(spec)
            }
            other => Err(validation(
                "section.kind",
                format!("unknown section kind `{other}` (circle | ellipse | fourier)"),
            )),
        }
    }

    /// Radius when the section is the circle built-in.
    pub fn circle_radius(&self) -> Option<f64> {
        if self.kind == "circle" {
            self.r0
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialConfig {
    pub e: f64,
    pub nu: f64,
    pub h: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoadsConfig {
    /// End-edge resultant force (R1, R2, R3).
    #[serde(default)]
    pub force: [f64; 3],
    /// End-edge resultant moment (M1, M2, M3).
    #[serde(default)]
    pub moment: [f64; 3],
    /// "centroid" (default) or "user": the origin the moment refers to.
    #[serde(default = "default_origin")]
    pub origin: String,
}

fn default_origin() -> String {
    "centroid".to_owned()
}

impl LoadsConfig {
    pub fn resultants(&self) -> ResultantLoads {
        ResultantLoads::new(
            Vec3::new(self.force[0], self.force[1], self.force[2]),
            Vec3::new(self.moment[0], self.moment[1], self.moment[2]),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunMode {
    Exact,
    Thin,
    Circular,
    All,
}

impl RunMode {
    pub fn parse(text: &str) -> Result<RunMode, ConfigError> {
        match text {
            "exact" => Ok(RunMode::Exact),
            "thin" => Ok(RunMode::Thin),
            "circular" => Ok(RunMode::Circular),
            "all" => Ok(RunMode::All),
            other => Err(validation(
                "run.mode",
                format!("unknown mode `{other}` (exact | thin | circular | all)"),
            )),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RunMode::Exact => "exact",
            RunMode::Thin => "thin",
            RunMode::Circular => "circular",
            RunMode::All => "all",
        }
    }

    pub fn wants_exact(self) -> bool {
        matches!(self, RunMode::Exact | RunMode::All)
    }

    pub fn wants_thin(self) -> bool {
        matches!(self, RunMode::Thin | RunMode::All)
    }

    pub fn wants_circular(self) -> bool {
        matches!(self, RunMode::Circular | RunMode::All)
    }
}

pub fn parse_psi_variant(text: &str) -> Result<PsiVariant, ConfigError> {
    match text {
        "corollary" => Ok(PsiVariant::Corollary),
        "flexure-fn" => Ok(PsiVariant::FlexureFn),
        other => Err(validation(
            "run.psi_variant",
            format!("unknown psi variant `{other}` (corollary | flexure-fn)"),
        )),
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    #[serde(default = "default_mode")]
    pub mode: String,
    #[serde(default = "default_grid_s")]
    pub grid_s: usize,
    #[serde(default = "default_grid_z")]
    pub grid_z: usize,
    #[serde(default = "default_variant")]
    pub psi_variant: String,
}

fn default_mode() -> String {
    "exact".to_owned()
}
fn default_grid_s() -> usize {
    512
}
fn default_grid_z() -> usize {
    9
}
fn default_variant() -> String {
    "corollary".to_owned()
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            mode: default_mode(),
            grid_s: default_grid_s(),
            grid_z: default_grid_z(),
            psi_variant: default_variant(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_out_dir")]
    pub dir: String,
    /// Write per-mode field tables.
    #[serde(default = "default_true")]
    pub tables: bool,
    /// Write the run summary document.
    #[serde(default = "default_true")]
    pub summary: bool,
}

fn default_out_dir() -> String {
    "out".to_owned()
}
fn default_true() -> bool {
    true
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: default_out_dir(),
            tables: true,
            summary: true,
        }
    }
}

/// Residual gates; a run exits nonzero when a verified field exceeds one.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GatesConfig {
    #[serde(default = "default_gate_equilibrium")]
    pub equilibrium: f64,
    #[serde(default = "default_gate_resultants")]
    pub resultants: f64,
    #[serde(default = "default_gate_seams")]
    pub seams: f64,
}

fn default_gate_equilibrium() -> f64 {
    1e-6
}
fn default_gate_resultants() -> f64 {
    1e-7
}
fn default_gate_seams() -> f64 {
    1e-8
}

impl Default for GatesConfig {
    fn default() -> Self {
        GatesConfig {
            equilibrium: default_gate_equilibrium(),
            resultants: default_gate_resultants(),
            seams: default_gate_seams(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    section: SectionConfig,
    material: MaterialConfig,
    tube: TubeConfig,
    loads: Option<LoadsConfig>,
    run: Option<RunSection>,
    output: Option<OutputConfig>,
    gates: Option<GatesConfig>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TubeConfig {
    pub length: f64,
}

/// Validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub section: SectionConfig,
    pub material: MaterialConfig,
    pub length: f64,
    pub loads: LoadsConfig,
    pub mode: RunMode,
    pub grid_s: usize,
    pub grid_z: usize,
    pub psi_variant: PsiVariant,
    pub output: OutputConfig,
    pub gates: GatesConfig,
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;

    let material = raw.material;
    if !(material.e > 0.0) {
        return Err(validation("material.e", "Young modulus must be positive"));
    }
    if !(material.nu > -1.0 && material.nu < 0.5) {
        return Err(validation("material.nu", "Poisson ratio must lie in (-1, 0.5)"));
    }
    if !(material.h > 0.0) {
        return Err(validation("material.h", "thickness must be positive"));
    }
    if !(raw.tube.length > 0.0) {
        return Err(validation("tube.length", "tube length must be positive"));
    }

    let run = raw.run.unwrap_or_default();
    if run.grid_s < MIN_GRID || run.grid_s % 2 != 0 {
        return Err(validation(
            "run.grid_s",
            format!("grid_s = {} must be an even count >= {MIN_GRID}", run.grid_s),
        ));
    }
    if run.grid_z < 2 {
        return Err(validation("run.grid_z", "grid_z must be at least 2"));
    }
    let mode = RunMode::parse(&run.mode)?;
    let psi_variant = parse_psi_variant(&run.psi_variant)?;

    let loads = raw.loads.unwrap_or(LoadsConfig {
        force: [0.0; 3],
        moment: [0.0; 3],
        origin: default_origin(),
    });
    if loads.origin != "centroid" && loads.origin != "user" {
        return Err(validation(
            "loads.origin",
            format!("unknown origin `{}` (centroid | user)", loads.origin),
        ));
    }

    let section = raw.section;
    section.to_spec()?;
    if mode.wants_circular() && section.kind != "circle" {
        if mode == RunMode::Circular {
            return Err(validation(
                "run.mode",
                "circular mode requires a circle section",
            ));
        }
        // mode = all on a non-circle simply skips the circular branch.
    }

    Ok(RunConfig {
        section,
        material,
        length: raw.tube.length,
        loads,
        mode,
        grid_s: run.grid_s,
        grid_z: run.grid_z,
        psi_variant,
        output: raw.output.unwrap_or_default(),
        gates: raw.gates.unwrap_or_default(),
    })
}
