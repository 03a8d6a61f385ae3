//! Built-in example manifolds with known classification.

use thiserror::Error;

use crate::geometry::{classify, Classification, ManifoldSpec, Symmetry};
use crate::manifest::{
    Manifest, ManifestError, DEFAULT_FIBER, DEFAULT_SAMPLES, DEFAULT_SEED, DEFAULT_TOLERANCE,
};

pub const NAMES: [&str; 6] = [
    "euclidean2",
    "line-weighted",
    "torsion-hessian",
    "non-statistical",
    "symplectic2",
    "hyperbolic",
];

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown catalog entry `{0}` (known: {known})", known = NAMES.join(", "))]
    UnknownName(String),
    #[error("catalog entry `{name}` is malformed: {source}")]
    Malformed {
        name: String,
        #[source]
        source: ManifestError,
    },
    #[error("catalog entry `{name}`: expected {expected:?}, classify found {found:?}")]
    FlagMismatch {
        name: String,
        expected: ExpectedFlags,
        found: Classification,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpectedFlags {
    pub torsion_free: bool,
    pub metric_parallel: bool,
    pub quasi_statistical: bool,
    pub flat: bool,
}

impl ExpectedFlags {
    fn matches(&self, c: &Classification) -> bool {
        self.torsion_free == c.torsion_free
            && self.metric_parallel == c.metric_parallel
            && self.quasi_statistical == c.quasi_statistical
            && self.flat == c.flat
    }
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub spec: ManifoldSpec,
    pub expected: ExpectedFlags,
    pub note: &'static str,
}

struct Raw {
    dim: usize,
    metric: &'static [&'static [&'static str]],
    symmetry: Symmetry,
    connection: &'static [(&'static str, &'static str)],
    domain: &'static [[f64; 2]],
    flags: [bool; 4],
    note: &'static str,
}

fn raw(name: &str) -> Option<Raw> {
    let unit = &[[-1.0, 1.0], [-1.0, 1.0]];
    Some(match name {
        "euclidean2" => Raw {
            dim: 2,
            metric: &[&["1", "0"], &["0", "1"]],
            symmetry: Symmetry::Symmetric,
            connection: &[],
            domain: unit,
            flags: [true, true, true, true],
            note: "Euclidean plane with the trivial connection",
        },
        "line-weighted" => Raw {
            dim: 1,
            metric: &[&["2"]],
            symmetry: Symmetry::Symmetric,
            connection: &[("1,1,1", "1")],
            domain: &[[-1.0, 1.0]],
            flags: [true, false, true, true],
            note: "constant metric 2 on a line with Γ = 1; (∇h)_111 = −4",
        },
        "torsion-hessian" => Raw {
            dim: 2,
            metric: &[&["1", "0"], &["0", "1"]],
            symmetry: Symmetry::Symmetric,
            connection: &[("1,1,2", "1")],
            domain: unit,
            flags: [false, false, true, true],
            note:
                "flat connection with torsion T^1_12 = 1 whose torsion cancels the Codazzi defect",
        },
        "non-statistical" => Raw {
            dim: 2,
            metric: &[&["1", "0"], &["0", "1+x1^2"]],
            symmetry: Symmetry::Symmetric,
            connection: &[],
            domain: unit,
            flags: [true, false, false, true],
            note: "trivial connection with metric diag(1, 1+x1^2); d^∇h(∂1,∂2,∂2) = 2 x1",
        },
        "symplectic2" => Raw {
            dim: 2,
            metric: &[&["0", "1"], &["-1", "0"]],
            symmetry: Symmetry::Skew,
            connection: &[],
            domain: unit,
            flags: [true, true, true, true],
            note: "constant symplectic form with the trivial connection",
        },
        "hyperbolic" => Raw {
            dim: 2,
            metric: &[&["1/x2^2", "0"], &["0", "1/x2^2"]],
            symmetry: Symmetry::Symmetric,
            connection: &[
                ("1,1,2", "-1/x2"),
                ("1,2,1", "-1/x2"),
                ("2,1,1", "1/x2"),
                ("2,2,2", "-1/x2"),
            ],
            domain: &[[-1.0, 1.0], [1.0, 2.0]],
            flags: [true, true, true, false],
            note: "upper half-plane with its Levi-Civita connection; R^2_121 = 1 at (0,1)",
        },
        _ => return None,
    })
}

/// The manifest for a catalog entry, without verifying its flags.
pub fn manifest(name: &str) -> Result<Manifest, CatalogError> {
    let r = raw(name).ok_or_else(|| CatalogError::UnknownName(name.to_string()))?;
    let coordinates = (1..=r.dim).map(|i| format!("x{i}")).collect();
    Ok(Manifest {
        label: Some(name.to_string()),
        dimension: r.dim,
        coordinates,
        metric: r
            .metric
            .iter()
            .map(|row| row.iter().map(|s| s.to_string()).collect())
            .collect(),
        symmetry: r.symmetry,
        connection: r
            .connection
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect(),
        domain: r.domain.to_vec(),
        samples: DEFAULT_SAMPLES,
        seed: DEFAULT_SEED,
        tolerance: DEFAULT_TOLERANCE,
        fiber_domain: DEFAULT_FIBER,
    })
}

/// Loads a catalog entry and re-derives its classification flags.
pub fn builtin(name: &str) -> Result<CatalogEntry, CatalogError> {
    let (name, r) = NAMES
        .iter()
        .find(|n| **n == name)
        .and_then(|n| raw(n).map(|r| (*n, r)))
        .ok_or_else(|| CatalogError::UnknownName(name.to_string()))?;
    let malformed = |source| CatalogError::Malformed {
        name: name.to_string(),
        source,
    };
    let spec = manifest(name)?.to_validated_spec().map_err(malformed)?;
    let [torsion_free, metric_parallel, quasi_statistical, flat] = r.flags;
    let expected = ExpectedFlags {
        torsion_free,
        metric_parallel,
        quasi_statistical,
        flat,
    };
    let found = classify(&spec, 20, DEFAULT_SEED, DEFAULT_TOLERANCE)
        .map_err(|e| malformed(ManifestError::Geometry(e)))?;
    if !expected.matches(&found) {
        return Err(CatalogError::FlagMismatch {
            name: name.to_string(),
            expected,
            found,
        });
    }
    Ok(CatalogEntry {
        name,
        spec,
        expected,
        note: r.note,
    })
}
