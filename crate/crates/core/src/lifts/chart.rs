use std::collections::BTreeMap;

use super::Bundle;
use crate::expr::ExprAst;
use crate::geometry::{
    musical_flat, musical_sharp, FrameField, FramedConnection, GeometryError, ManifoldSpec,
};
use crate::linalg;
use crate::sampling::{self, Interval};

/// T*M or TM over a base chart, with the frame {X_i^H, ∂/∂y_j}:
///
/// - cotangent: X_i^H = ∂/∂x^i + y_k Γ^k_{il} ∂/∂y_l
/// - tangent:   X_i^H = ∂/∂x^i − y^k Γ^l_{ik} ∂/∂y^l
#[derive(Debug, Clone)]
pub struct LiftedChart {
    base: ManifoldSpec,
    bundle: Bundle,
    coords: Vec<String>,
    frame: FrameField,
    fiber: Interval,
}

fn fiber_names(base: &[String]) -> Vec<String> {
    let n = base.len();
    for stem in ["y", "p", "q", "v", "w"] {
        let names: Vec<String> = (1..=n).map(|i| format!("{stem}{i}")).collect();
        if names.iter().all(|c| !base.contains(c)) {
            return names;
        }
    }
    (1..=n).map(|i| format!("fiber_{i}")).collect()
}

impl LiftedChart {
    pub fn new(
        base: &ManifoldSpec,
        bundle: Bundle,
        fiber: Interval,
    ) -> Result<Self, GeometryError> {
        let n = base.dim();
        let mut coords = base.coords().to_vec();
        coords.extend(fiber_names(base.coords()));
        let g = |k: usize, i: usize, j: usize| {
            base.gamma()
                .get(&(k, i, j))
                .cloned()
                .unwrap_or_else(ExprAst::zero)
        };
        let y = |k: usize| ExprAst::var(n + k);
        let mut vectors = Vec::with_capacity(2 * n);
        for i in 0..n {
            let mut v = vec![ExprAst::zero(); 2 * n];
            v[i] = ExprAst::one();
            for l in 0..n {
                v[n + l] = match bundle {
                    Bundle::Cotangent => {
                        ExprAst::sum((0..n).map(|k| ExprAst::mul(y(k), g(k, i, l))))
                    }
                    Bundle::Tangent => {
                        ExprAst::neg(ExprAst::sum((0..n).map(|k| ExprAst::mul(y(k), g(l, i, k)))))
                    }
                };
            }
            vectors.push(v);
        }
        for j in 0..n {
            let mut v = vec![ExprAst::zero(); 2 * n];
            v[n + j] = ExprAst::one();
            vectors.push(v);
        }
        let frame = FrameField::new(vectors)?;
        Ok(Self {
            base: base.clone(),
            bundle,
            coords,
            frame,
            fiber,
        })
    }

    pub fn base(&self) -> &ManifoldSpec {
        &self.base
    }

    pub fn bundle(&self) -> Bundle {
        self.bundle
    }

    pub fn base_dim(&self) -> usize {
        self.base.dim()
    }

    pub fn dim(&self) -> usize {
        2 * self.base.dim()
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn frame(&self) -> &FrameField {
        &self.frame
    }

    pub fn fiber(&self) -> Interval {
        self.fiber
    }

    /// Sample points over the base domain and fiber interval; the first one
    /// has every |y| ≥ 0.5.
    pub fn sample(&self, count: usize, seed: u64) -> Vec<Vec<f64>> {
        sampling::sample_lifted(self.base.domain(), self.fiber, count, seed)
    }

    /// Splits a lifted point into base point and fiber coordinates.
    pub fn split<'a>(&self, p: &'a [f64]) -> (&'a [f64], &'a [f64]) {
        p.split_at(self.base_dim())
    }
}

/// Bundle morphisms TM ⊕ T*M → T(T*M) and TM ⊕ T*M → T(TM), in frame
/// components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Morphism {
    /// Φ(X + α) = X^H + α_j ∂/∂y_j.
    Phi,
    /// Ψ(X + α) = X^H + h^{jk} α_j ∂/∂y^k.
    Psi,
}

impl Morphism {
    pub fn for_bundle(bundle: Bundle) -> Self {
        match bundle {
            Bundle::Cotangent => Morphism::Phi,
            Bundle::Tangent => Morphism::Psi,
        }
    }

    pub fn bundle(self) -> Bundle {
        match self {
            Morphism::Phi => Bundle::Cotangent,
            Morphism::Psi => Bundle::Tangent,
        }
    }

    /// Frame components of the image of X + α over the base point `p`.
    pub fn apply(
        self,
        spec: &ManifoldSpec,
        p: &[f64],
        x: &[f64],
        alpha: &[f64],
    ) -> Result<Vec<f64>, GeometryError> {
        let mut out = x.to_vec();
        match self {
            Morphism::Phi => out.extend_from_slice(alpha),
            Morphism::Psi => out.extend(musical_sharp(spec, alpha, p)?),
        }
        Ok(out)
    }

    /// Inverse on frame components.
    pub fn invert(
        self,
        spec: &ManifoldSpec,
        p: &[f64],
        w: &[f64],
    ) -> Result<(Vec<f64>, Vec<f64>), GeometryError> {
        let n = spec.dim();
        let (x, v) = w.split_at(n);
        let alpha = match self {
            Morphism::Phi => v.to_vec(),
            Morphism::Psi => musical_flat(spec, v, p)?,
        };
        Ok((x.to_vec(), alpha))
    }
}

fn require(chart: &LiftedChart, bundle: Bundle) -> Result<(), GeometryError> {
    if chart.bundle() == bundle {
        Ok(())
    } else {
        Err(GeometryError::Invalid(format!(
            "expected a {bundle} chart, got {}",
            chart.bundle()
        )))
    }
}

/// ∇̃ on T*M, the pull-back of ∇̂:
///
/// - ∇̃_{X_i^H} X_j^H = Γ^k_{ij} X_k^H
/// - ∇̃_{X_i^H} ∂/∂y_j = (∂_i h^{jk} + h^{jl} Γ^k_{il}) h_{kr} ∂/∂y_r
/// - ∇̃_{∂/∂y} = 0
///
/// ∂_i h^{jk} is formed as −h^{ja} (∂_i h_{ab}) h^{bk}.
pub fn tilde_connection(chart: &LiftedChart) -> Result<FramedConnection, GeometryError> {
    require(chart, Bundle::Cotangent)?;
    let spec = chart.base();
    let n = spec.dim();
    let h = spec.metric();
    let hi = linalg::inverse_ast(h);
    let g = |k: usize, i: usize, j: usize| {
        spec.gamma()
            .get(&(k, i, j))
            .cloned()
            .unwrap_or_else(ExprAst::zero)
    };
    let mut coeffs = horizontal_block(spec);
    for i in 0..n {
        let dh: Vec<Vec<ExprAst>> = h
            .iter()
            .map(|row| row.iter().map(|e| e.derivative(i)).collect())
            .collect();
        for j in 0..n {
            let inner: Vec<ExprAst> = (0..n)
                .map(|k| {
                    let d_inv = ExprAst::neg(ExprAst::sum((0..n).flat_map(|a| {
                        let (hi, dh) = (&hi, &dh);
                        (0..n).map(move |b| {
                            ExprAst::mul(
                                hi[j][a].clone(),
                                ExprAst::mul(dh[a][b].clone(), hi[b][k].clone()),
                            )
                        })
                    })));
                    let conn =
                        ExprAst::sum((0..n).map(|l| ExprAst::mul(hi[j][l].clone(), g(k, i, l))));
                    ExprAst::add(d_inv, conn)
                })
                .collect();
            for r in 0..n {
                let c =
                    ExprAst::sum((0..n).map(|k| ExprAst::mul(inner[k].clone(), h[k][r].clone())));
                coeffs.insert((n + r, i, n + j), c);
            }
        }
    }
    FramedConnection::new(chart.frame().clone(), coeffs)
}

/// ∇̃̃ on TM: Γ^k_{ij} on both X_i^H X_j^H → X_k^H and X_i^H ∂/∂y^j → ∂/∂y^k;
/// derivatives along ∂/∂y vanish.
pub fn tilde_tilde_connection(chart: &LiftedChart) -> Result<FramedConnection, GeometryError> {
    require(chart, Bundle::Tangent)?;
    let spec = chart.base();
    let n = spec.dim();
    let mut coeffs = horizontal_block(spec);
    for (&(k, i, j), e) in spec.gamma() {
        coeffs.insert((n + k, i, n + j), e.clone());
    }
    FramedConnection::new(chart.frame().clone(), coeffs)
}

fn horizontal_block(spec: &ManifoldSpec) -> BTreeMap<(usize, usize, usize), ExprAst> {
    spec.gamma()
        .iter()
        .map(|(&key, e)| (key, e.clone()))
        .collect()
}

/// The induced connection on the chart's bundle.
pub fn lifted_connection(chart: &LiftedChart) -> Result<FramedConnection, GeometryError> {
    match chart.bundle() {
        Bundle::Cotangent => tilde_connection(chart),
        Bundle::Tangent => tilde_tilde_connection(chart),
    }
}
