//! Scenario files: plate constants, the solution to build, an optional front
//! and region, global tolerances and the ordered list of checks.
//!
//! Scenarios are read from TOML, or from JSON when the file name ends in
//! `.json` (the form in which reports echo them back).

use std::path::Path;

use serde::{Deserialize, Serialize};

/// Failures while reading or validating a scenario.
#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot parse scenario: {0}")]
    Parse(String),

    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

impl ScenarioError {
    pub(crate) fn invalid(path: impl Into<String>, message: impl ToString) -> Self {
        ScenarioError::Invalid {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    /// Seeds every sampled point set; `--seed` overrides it.
    #[serde(default)]
    pub seed: u64,
    pub plate: PlateSpec,
    pub solution: SolutionSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub front: Option<FrontSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<RegionSpec>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub checks: Vec<CheckSpec>,
}

/// Material constants in any consistent unit system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlateSpec {
    pub youngs_modulus: f64,
    pub poisson_ratio: f64,
    pub thickness: f64,
    /// Mass per unit area.
    pub areal_density: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum SolutionSpec {
    /// `w = Φ = 0`.
    Zero {
        #[serde(default = "unit_speed")]
        speed: f64,
    },
    /// Smooth travelling wave in `ξ = x¹ − ct`.
    Invariant {
        #[serde(default)]
        u: [f64; 4],
        #[serde(default)]
        phi: [f64; 4],
        speed: f64,
    },
    /// Travelling wave with an acceleration front on `x¹ = ct`; `u`, `phi`
    /// describe the side ahead of it.
    AccelerationWave {
        #[serde(default)]
        u: [f64; 4],
        #[serde(default)]
        phi: [f64; 4],
        speed: f64,
        c1: f64,
        c2: f64,
    },
}

fn unit_speed() -> f64 {
    1.0
}

/// A front laid over a smooth solution. Both sides carry the same field, so
/// every jump vanishes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FrontSpec {
    /// `a₁x¹ + a₂x² + a₃t + a₀ = 0`
    Line {
        a1: f64,
        a2: f64,
        a3: f64,
        #[serde(default)]
        a0: f64,
    },
    /// `|x − center| = radius + radial_speed·t`
    Circle {
        center: [f64; 2],
        radius: f64,
        #[serde(default)]
        radial_speed: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionSpec {
    pub x1: [f64; 2],
    pub x2: [f64; 2],
    /// Gauss points per direction and cell.
    #[serde(default = "default_order")]
    pub order: usize,
    /// Cells per side.
    #[serde(default = "default_cells")]
    pub cells: usize,
}

fn default_order() -> usize {
    vkwave_core::balance::DEFAULT_ORDER
}

fn default_cells() -> usize {
    vkwave_core::balance::DEFAULT_CELLS
}

/// Default tolerances on relative residuals, by kind of computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Closed-form identities: `pde_residual`, the jump checks, `ej_oj`.
    pub analytic: f64,
    /// `conservation`
    pub finite_difference: f64,
    /// `balance`
    pub quadrature: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            analytic: 1e-9,
            finite_difference: 1e-6,
            quadrature: 1e-5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    PdeResidual,
    Conservation,
    DynamicJumps,
    BalanceJump,
    Table2,
    EjOj,
    Balance,
}

impl CheckKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckKind::PdeResidual => "pde_residual",
            CheckKind::Conservation => "conservation",
            CheckKind::DynamicJumps => "dynamic_jumps",
            CheckKind::BalanceJump => "balance_jump",
            CheckKind::Table2 => "table2",
            CheckKind::EjOj => "ej_oj",
            CheckKind::Balance => "balance",
        }
    }

    /// Evaluated at points of the front.
    pub fn on_front(self) -> bool {
        matches!(self, CheckKind::DynamicJumps | CheckKind::BalanceJump | CheckKind::Table2)
    }

    pub fn takes_laws(self) -> bool {
        matches!(
            self,
            CheckKind::Conservation | CheckKind::BalanceJump | CheckKind::Table2 | CheckKind::Balance
        )
    }

    pub fn takes_points(self) -> bool {
        !matches!(self, CheckKind::EjOj | CheckKind::Balance)
    }
}

/// What a passing residual looks like.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expect {
    /// Every relative residual is within tolerance.
    #[default]
    Zero,
    /// Every relative residual exceeds the tolerance.
    Nonzero,
    /// At least one relative residual exceeds the tolerance.
    AnyNonzero,
}

/// What the regional balance residual is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reference {
    #[default]
    Zero,
    /// The integral of the jump terms along the front inside the region.
    FrontLine,
}

/// A law by name (`"energy"`) or by number (1 to 14).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LawRef {
    Index(u8),
    Name(String),
}

/// Points drawn uniformly from a space-time box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sample {
    pub count: usize,
    #[serde(default = "unit_box")]
    pub x1: [f64; 2],
    #[serde(default = "unit_box")]
    pub x2: [f64; 2],
    #[serde(default = "unit_box")]
    pub t: [f64; 2],
}

fn unit_box() -> [f64; 2] {
    [-1.0, 1.0]
}

impl Default for Sample {
    fn default() -> Self {
        Sample {
            count: 8,
            x1: unit_box(),
            x2: unit_box(),
            t: unit_box(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSpec {
    pub kind: CheckKind,
    /// Label in the report; defaults to the kind.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Defaults to every law the kind applies to.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub laws: Option<Vec<LawRef>>,
    /// Explicit `[x¹, x², t]` points.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<[f64; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample: Option<Sample>,
    /// Instants of a `balance` check; defaults to `[0.0]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub times: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    /// Difference step: space-time step of `conservation`, time step of `balance`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(default)]
    pub expect: Expect,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<Reference>,
}

impl Scenario {
    pub fn from_toml_str(text: &str) -> Result<Self, ScenarioError> {
        toml::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))
    }

    pub fn from_json_str(text: &str) -> Result<Self, ScenarioError> {
        serde_json::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))
    }

    /// Reads a TOML scenario, or a JSON one if the extension is `.json`.
    pub fn from_path(path: &Path) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.display().to_string(),
            source,
        })?;
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => Self::from_json_str(&text),
            _ => Self::from_toml_str(&text),
        }
    }
}
