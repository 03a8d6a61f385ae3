//! JSON manifest format for manifolds.
//!
//! ```json
//! {
//!   "label": "hyperbolic",
//!   "dimension": 2,
//!   "coordinates": ["x1", "x2"],
//!   "metric": [["1/x2^2", "0"], ["0", "1/x2^2"]],
//!   "symmetry": "symmetric",
//!   "connection": {"1,1,2": "-1/x2", "2,1,1": "1/x2"},
//!   "domain": [[-1, 1], [1, 2]]
//! }
//! ```
//!
//! Connection keys are 1-based `"k,i,j"` for Γ^k_{ij}. Optional fields:
//! `samples` (50), `seed` (42), `tolerance` (1e-9), `fiber_domain` ([-1, 1]).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{parse, ExprError};
use crate::geometry::{GeometryError, ManifoldSpec, Symmetry};
use crate::sampling;

pub const DEFAULT_SAMPLES: usize = 50;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_FIBER: [f64; 2] = [-1.0, 1.0];

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed manifest at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{field}: {source}")]
    Expr {
        field: String,
        #[source]
        source: ExprError,
    },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("{0}")]
    Invalid(String),
}

fn default_samples() -> usize {
    DEFAULT_SAMPLES
}
fn default_seed() -> u64 {
    DEFAULT_SEED
}
fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}
fn default_fiber() -> [f64; 2] {
    DEFAULT_FIBER
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub dimension: usize,
    pub coordinates: Vec<String>,
    pub metric: Vec<Vec<String>>,
    pub symmetry: Symmetry,
    #[serde(default)]
    pub connection: BTreeMap<String, String>,
    pub domain: Vec<[f64; 2]>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_fiber")]
    pub fiber_domain: [f64; 2],
}

fn parse_key(key: &str, n: usize) -> Result<(usize, usize, usize), ManifestError> {
    let bad = || {
        ManifestError::Invalid(format!(
            "connection key `{key}` must be \"k,i,j\" with indices in 1..={n}"
        ))
    };
    let idx: Vec<usize> = key
        .split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    match idx[..] {
        [k, i, j] if (1..=n).contains(&k) && (1..=n).contains(&i) && (1..=n).contains(&j) => {
            Ok((k - 1, i - 1, j - 1))
        }
        _ => Err(bad()),
    }
}

impl Manifest {
    pub fn from_json(text: &str) -> Result<Self, ManifestError> {
        serde_json::from_str(text).map_err(|e| ManifestError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    /// Builds the spec without sampling the domain.
    pub fn to_spec(&self) -> Result<ManifoldSpec, ManifestError> {
        let n = self.dimension;
        if self.coordinates.len() != n {
            return Err(ManifestError::Invalid(format!(
                "dimension is {n} but {} coordinates are listed",
                self.coordinates.len()
            )));
        }
        if self.metric.len() != n || self.metric.iter().any(|r| r.len() != n) {
            return Err(ManifestError::Invalid(format!(
                "metric must be a {n}×{n} matrix"
            )));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(ManifestError::Invalid("tolerance must be positive".into()));
        }
        if self.fiber_domain[0] > self.fiber_domain[1] {
            return Err(ManifestError::Invalid(
                "fiber_domain must be [lo, hi] with lo ≤ hi".into(),
            ));
        }
        let coords = &self.coordinates;
        let expr = |field: String, text: &str| {
            parse(text, coords).map_err(|source| ManifestError::Expr { field, source })
        };
        let mut metric = Vec::with_capacity(n);
        for (i, row) in self.metric.iter().enumerate() {
            let mut out = Vec::with_capacity(n);
            for (j, text) in row.iter().enumerate() {
                out.push(expr(format!("metric[{}][{}]", i + 1, j + 1), text)?);
            }
            metric.push(out);
        }
        let mut gamma = BTreeMap::new();
        for (key, text) in &self.connection {
            let idx = parse_key(key, n)?;
            gamma.insert(idx, expr(format!("connection[\"{key}\"]"), text)?);
        }
        let domain = self.domain.iter().map(|&[lo, hi]| (lo, hi)).collect();
        let label = self.label.clone().unwrap_or_else(|| "manifest".to_string());
        Ok(ManifoldSpec::new(
            label,
            coords.clone(),
            metric,
            self.symmetry,
            gamma,
            domain,
        )?)
    }

    /// Builds the spec and checks symmetry and non-degeneracy at the
    /// manifest's sample points.
    pub fn to_validated_spec(&self) -> Result<ManifoldSpec, ManifestError> {
        let spec = self.to_spec()?;
        let points = sampling::sample_box(spec.domain(), self.samples.max(1), self.seed);
        spec.validate_at(&points)?;
        Ok(spec)
    }

    /// Manifest describing `spec` with default run settings.
    pub fn from_spec(spec: &ManifoldSpec) -> Self {
        let coords = spec.coords();
        let metric = spec
            .metric()
            .iter()
            .map(|row| row.iter().map(|e| e.display(coords).to_string()).collect())
            .collect();
        let connection = spec
            .gamma()
            .iter()
            .map(|(&(k, i, j), e)| {
                (
                    format!("{},{},{}", k + 1, i + 1, j + 1),
                    e.display(coords).to_string(),
                )
            })
            .collect();
        Self {
            label: Some(spec.label().to_string()),
            dimension: spec.dim(),
            coordinates: coords.to_vec(),
            metric,
            symmetry: spec.symmetry(),
            connection,
            domain: spec.domain().iter().map(|&(lo, hi)| [lo, hi]).collect(),
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            tolerance: DEFAULT_TOLERANCE,
            fiber_domain: DEFAULT_FIBER,
        }
    }
}

/// Reads and validates a manifest file.
pub fn load(path: &Path) -> Result<(Manifest, ManifoldSpec), ManifestError> {
    let text = std::fs::read_to_string(path).map_err(|source| ManifestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let manifest = Manifest::from_json(&text)?;
    let spec = manifest.to_validated_spec()?;
    Ok((manifest, spec))
}
