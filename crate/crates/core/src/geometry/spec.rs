use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::connection::FramedConnection;
use super::frame::FrameField;
use super::GeometryError;
use crate::expr::{ExprAst, Jet2};
use crate::linalg;
use crate::sampling::Interval;

/// Largest base dimension; lifted charts double it and must fit in a jet.
pub const MAX_BASE_DIM: usize = crate::expr::MAX_DIM / 2;

const SYMMETRY_TOL: f64 = 1e-12;
const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    Symmetric,
    Skew,
    General,
}

impl Symmetry {
    /// +1 for symmetric, −1 for skew; `None` for general.
    pub fn sign(self) -> Option<f64> {
        match self {
            Symmetry::Symmetric => Some(1.0),
            Symmetry::Skew => Some(-1.0),
            Symmetry::General => None,
        }
    }
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symmetry::Symmetric => "symmetric",
            Symmetry::Skew => "skew",
            Symmetry::General => "general",
        })
    }
}

/// A chart with a non-degenerate (0,2)-tensor h and a connection given by
/// Christoffel symbols ∇_{∂i}∂j = Γ^k_{ij} ∂k.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldSpec {
    label: String,
    coords: Vec<String>,
    metric: Vec<Vec<ExprAst>>,
    symmetry: Symmetry,
    /// Keyed by (k, i, j), zero-based; absent entries are zero.
    gamma: BTreeMap<(usize, usize, usize), ExprAst>,
    domain: Vec<Interval>,
}

impl ManifoldSpec {
    pub fn new(
        label: impl Into<String>,
        coords: Vec<String>,
        metric: Vec<Vec<ExprAst>>,
        symmetry: Symmetry,
        gamma: BTreeMap<(usize, usize, usize), ExprAst>,
        domain: Vec<Interval>,
    ) -> Result<Self, GeometryError> {
        let n = coords.len();
        let invalid = |m: String| Err(GeometryError::Invalid(m));
        if n == 0 || n > MAX_BASE_DIM {
            return invalid(format!(
                "dimension must be between 1 and {MAX_BASE_DIM}, got {n}"
            ));
        }
        if metric.len() != n || metric.iter().any(|r| r.len() != n) {
            return invalid(format!("metric must be a {n}×{n} matrix"));
        }
        if domain.len() != n {
            return invalid(format!("domain needs {n} intervals, got {}", domain.len()));
        }
        for (i, &(lo, hi)) in domain.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return invalid(format!("domain interval {i} is not a finite [lo, hi]"));
            }
        }
        if symmetry == Symmetry::Skew && n % 2 == 1 {
            return invalid("a skew-symmetric non-degenerate form needs even dimension".into());
        }
        for &(k, i, j) in gamma.keys() {
            if k >= n || i >= n || j >= n {
                return invalid(format!(
                    "connection index ({},{},{}) out of range",
                    k + 1,
                    i + 1,
                    j + 1
                ));
            }
        }
        let out_of_range = metric
            .iter()
            .flatten()
            .chain(gamma.values())
            .any(|e| e.max_var().is_some_and(|v| v >= n));
        if out_of_range {
            return invalid("expression references a variable outside the chart".into());
        }
        Ok(Self {
            label: label.into(),
            coords,
            metric,
            symmetry,
            gamma,
            domain,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn metric(&self) -> &[Vec<ExprAst>] {
        &self.metric
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn gamma(&self) -> &BTreeMap<(usize, usize, usize), ExprAst> {
        &self.gamma
    }

    pub fn domain(&self) -> &[Interval] {
        &self.domain
    }

    /// The connection as a framed connection in the coordinate frame.
    pub fn connection(&self) -> FramedConnection {
        FramedConnection::new(FrameField::coordinate(self.dim()), self.gamma.clone())
            .expect("indices validated at construction")
    }

    pub fn metric_values(&self, p: &[f64]) -> Result<Vec<Vec<f64>>, GeometryError> {
        self.metric
            .iter()
            .map(|row| row.iter().map(|e| e.eval(p).map_err(Into::into)).collect())
            .collect()
    }

    pub fn metric_jets(&self, p: &[f64]) -> Result<Vec<Vec<Jet2>>, GeometryError> {
        super::connection::metric_jets(&self.metric, p)
    }

    /// Metric values at `p`, failing if h is degenerate there.
    pub fn metric_checked(&self, p: &[f64]) -> Result<Vec<Vec<f64>>, GeometryError> {
        let h = self.metric_values(p)?;
        let det = linalg::det(&h);
        if det.abs() < DEGENERACY_TOL || !det.is_finite() {
            return Err(GeometryError::Degenerate {
                point: p.to_vec(),
                det,
            });
        }
        Ok(h)
    }

    /// Checks the symmetry class and non-degeneracy of h, and that every
    /// component function evaluates (with derivatives), at each point.
    pub fn validate_at(&self, points: &[Vec<f64>]) -> Result<(), GeometryError> {
        for p in points {
            let h = self.metric_checked(p)?;
            if let Some(sign) = self.symmetry.sign() {
                for i in 0..self.dim() {
                    for j in 0..self.dim() {
                        let defect = (h[i][j] - sign * h[j][i]).abs();
                        if defect > SYMMETRY_TOL {
                            return Err(GeometryError::SymmetryViolation {
                                i: i + 1,
                                j: j + 1,
                                symmetry: self.symmetry,
                                point: p.clone(),
                                defect,
                            });
                        }
                    }
                }
            }
            self.metric_jets(p)?;
            for g in self.gamma.values() {
                g.eval_jet2(p)?;
            }
        }
        Ok(())
    }
}
