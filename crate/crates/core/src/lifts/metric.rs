use serde::{Deserialize, Serialize};

use super::chart::Morphism;
use super::Bundle;
use crate::expr::{ExprAst, Jet2};
use crate::geometry::{metric_jets, GeometryError, ManifoldSpec};
use crate::linalg;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    /// Patterson–Walker h̃_+ on T*M: h̃(α^V, X^H) = α(X), h̃(X^H, α^V) = α(X).
    PwPlus,
    /// h̃_− on T*M: h̃(α^V, X^H) = α(X), h̃(X^H, α^V) = −α(X).
    PwMinus,
    /// h^{S*} on T*M: h on horizontals, h(h⁻¹α, h⁻¹β) on verticals.
    SasakiCotangent,
    /// h^S on TM: h on horizontals and on verticals.
    SasakiTangent,
    /// h^H on TM: h^H(X^H, Y^V) = h(X, Y), zero on HH and VV.
    Horizontal,
}

impl MetricKind {
    pub const ALL: [MetricKind; 5] = [
        MetricKind::PwPlus,
        MetricKind::PwMinus,
        MetricKind::SasakiCotangent,
        MetricKind::SasakiTangent,
        MetricKind::Horizontal,
    ];

    pub fn bundle(self) -> Bundle {
        match self {
            MetricKind::PwPlus | MetricKind::PwMinus | MetricKind::SasakiCotangent => {
                Bundle::Cotangent
            }
            MetricKind::SasakiTangent | MetricKind::Horizontal => Bundle::Tangent,
        }
    }

    pub fn on(bundle: Bundle) -> impl Iterator<Item = MetricKind> {
        Self::ALL.into_iter().filter(move |k| k.bundle() == bundle)
    }

    /// Name used in check ids.
    pub fn id(self) -> &'static str {
        match self {
            MetricKind::PwPlus => "pw_plus",
            MetricKind::PwMinus => "pw_minus",
            MetricKind::SasakiCotangent | MetricKind::SasakiTangent => "sasaki",
            MetricKind::Horizontal => "horizontal",
        }
    }
}

/// A lift metric as frame components over the lifted chart, in the block
/// order (horizontal, vertical).
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedMetric {
    kind: MetricKind,
    matrix: Vec<Vec<ExprAst>>,
}

impl LiftedMetric {
    pub fn build(kind: MetricKind, spec: &ManifoldSpec) -> Self {
        let n = spec.dim();
        let h = spec.metric();
        let mut m = vec![vec![ExprAst::zero(); 2 * n]; 2 * n];
        match kind {
            MetricKind::PwPlus | MetricKind::PwMinus => {
                let s = if kind == MetricKind::PwPlus {
                    1.0
                } else {
                    -1.0
                };
                for i in 0..n {
                    m[n + i][i] = ExprAst::one();
                    m[i][n + i] = ExprAst::num(s);
                }
            }
            MetricKind::SasakiCotangent => {
                // h(h⁻¹dx^k, h⁻¹dx^l) = h^{lk}
                let hi = linalg::inverse_ast(h);
                for i in 0..n {
                    for j in 0..n {
                        m[i][j] = h[i][j].clone();
                        m[n + i][n + j] = hi[j][i].clone();
                    }
                }
            }
            MetricKind::SasakiTangent => {
                for i in 0..n {
                    for j in 0..n {
                        m[i][j] = h[i][j].clone();
                        m[n + i][n + j] = h[i][j].clone();
                    }
                }
            }
            MetricKind::Horizontal => {
                for i in 0..n {
                    for j in 0..n {
                        m[i][n + j] = h[i][j].clone();
                        m[n + j][i] = h[j][i].clone();
                    }
                }
            }
        }
        Self { kind, matrix: m }
    }

    pub fn kind(&self) -> MetricKind {
        self.kind
    }

    pub fn matrix(&self) -> &[Vec<ExprAst>] {
        &self.matrix
    }

    pub fn jets(&self, p: &[f64]) -> Result<Vec<Vec<Jet2>>, GeometryError> {
        metric_jets(&self.matrix, p)
    }

    pub fn values(&self, p: &[f64]) -> Result<Vec<Vec<f64>>, GeometryError> {
        self.matrix
            .iter()
            .map(|row| row.iter().map(|e| e.eval(p).map_err(Into::into)).collect())
            .collect()
    }

    /// g(A, B) for frame components A, B at the lifted point `p`.
    pub fn apply(&self, p: &[f64], a: &[f64], b: &[f64]) -> Result<f64, GeometryError> {
        let g = self.values(p)?;
        Ok(bilinear(&g, a, b))
    }
}

pub(crate) fn bilinear(g: &[Vec<f64>], a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .enumerate()
        .map(|(i, ai)| {
            b.iter()
                .enumerate()
                .map(|(j, bj)| ai * g[i][j] * bj)
                .sum::<f64>()
        })
        .sum()
}

/// The lift metric evaluated on the morphism images of X + α and Y + β,
/// at the lifted point `p`.
pub fn pullback_to_genbundle(
    metric: &LiftedMetric,
    spec: &ManifoldSpec,
    sigma: (&[f64], &[f64]),
    tau: (&[f64], &[f64]),
    p: &[f64],
) -> Result<f64, GeometryError> {
    let morphism = Morphism::for_bundle(metric.kind().bundle());
    let base = &p[..spec.dim()];
    let a = morphism.apply(spec, base, sigma.0, sigma.1)?;
    let b = morphism.apply(spec, base, tau.0, tau.1)?;
    metric.apply(p, &a, &b)
}
