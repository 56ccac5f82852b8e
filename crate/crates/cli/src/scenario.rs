//! Scenario documents: one patch and a list of named wrench/twist cases.
//!
//! ```json
//! {
//!   "patch": { "polygon": [[-1, -1], [1, -1], [1, 1], [-1, 1]] },
//!   "tol": 1e-9,
//!   "cases": [
//!     { "name": "tipping",
//!       "wrench": [-2, 0, 0, 0, 0, 2],
//!       "twist":  [ 1, 0, 0, 0, 0, 1] }
//!   ]
//! }
//! ```
//!
//! `wrench` is `[m_t.x, m_t.y, m_n, f_t.x, f_t.y, f_n]` and `twist` is
//! `[omega_t.x, omega_t.y, omega_n, v_t.x, v_t.y, v_n]`. An ellipse patch is
//! written `{"ellipse": {"center": [x, y], "semi_axes": [a, b], "rotation": r}}`.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use signorini_core::{GeometryError, Patch, Twist, Vec2, Wrench};

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed document: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
}

impl ScenarioError {
    fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        ScenarioError::Invalid {
            field: field.into(),
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum PatchSpec {
    Polygon(Vec<[f64; 2]>),
    Ellipse {
        center: [f64; 2],
        semi_axes: [f64; 2],
        #[serde(default)]
        rotation: f64,
    },
}

impl PatchSpec {
    pub fn build(&self) -> Result<Patch, GeometryError> {
        match self {
            PatchSpec::Polygon(v) => Patch::polygon(v.iter().map(|&p| Vec2::from(p)).collect()),
            PatchSpec::Ellipse {
                center,
                semi_axes,
                rotation,
            } => Patch::ellipse(Vec2::from(*center), (semi_axes[0], semi_axes[1]), *rotation),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseSpec {
    pub name: String,
    pub wrench: [f64; 6],
    pub twist: [f64; 6],
}

impl CaseSpec {
    pub fn wrench(&self) -> Wrench {
        let w = self.wrench;
        Wrench::new(Vec2::new(w[0], w[1]), w[2], Vec2::new(w[3], w[4]), w[5])
    }

    pub fn twist(&self) -> Twist {
        let t = self.twist;
        Twist::new(Vec2::new(t[0], t[1]), t[2], Vec2::new(t[3], t[4]), t[5])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    pub patch: PatchSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    pub cases: Vec<CaseSpec>,
}

/// A validated scenario.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub doc: ScenarioDoc,
    pub patch: Patch,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        let doc: ScenarioDoc = serde_json::from_str(text)?;
        Self::validate(doc)
    }

    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        Self::parse(&read(path)?)
    }

    pub fn validate(doc: ScenarioDoc) -> Result<Self, ScenarioError> {
        let patch = doc
            .patch
            .build()
            .map_err(|e| ScenarioError::invalid("patch", e.to_string()))?;
        if let Some(tol) = doc.tol {
            if !(tol.is_finite() && tol >= 0.0) {
                return Err(ScenarioError::invalid("tol", "must be a finite nonnegative number"));
            }
        }
        if doc.cases.is_empty() {
            return Err(ScenarioError::invalid("cases", "at least one case is required"));
        }
        let mut names = HashSet::new();
        for (i, case) in doc.cases.iter().enumerate() {
            if !names.insert(case.name.as_str()) {
                return Err(ScenarioError::invalid(
                    format!("cases[{i}].name"),
                    format!("duplicate case name {:?}", case.name),
                ));
            }
            if let Some(k) = case.wrench.iter().position(|x| !x.is_finite()) {
                return Err(ScenarioError::invalid(
                    format!("cases[{i}].wrench[{k}]"),
                    "must be finite",
                ));
            }
            if let Some(k) = case.twist.iter().position(|x| !x.is_finite()) {
                return Err(ScenarioError::invalid(
                    format!("cases[{i}].twist[{k}]"),
                    "must be finite",
                ));
            }
        }
        Ok(Self { doc, patch })
    }

    /// `--tol` wins over the document, which wins over the default.
    pub fn tol(&self, flag: Option<f64>) -> f64 {
        flag.or(self.doc.tol).unwrap_or(signorini_core::DEFAULT_TOL)
    }
}

/// Patch from a patch file: either a bare patch descriptor or any document
/// with a `patch` field (a scenario file works).
pub fn load_patch(path: &Path) -> Result<Patch, ScenarioError> {
    parse_patch(&read(path)?)
}

pub fn parse_patch(text: &str) -> Result<Patch, ScenarioError> {
    let mut value: serde_json::Value = serde_json::from_str(text)?;
    let spec = match value.get_mut("patch") {
        Some(inner) => inner.take(),
        None => value,
    };
    let spec: PatchSpec = serde_json::from_value(spec)?;
    spec.build().map_err(|e| ScenarioError::invalid("patch", e.to_string()))
}

fn read(path: &Path) -> Result<String, ScenarioError> {
    std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.display().to_string(),
        source,
    })
}
