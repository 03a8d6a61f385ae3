use serde::Serialize;

use super::{metric_jets, FramedConnection, GeometryError, ManifoldSpec};
use crate::expr::ExprAst;
use crate::sampling;

/// Vanishing tests for the torsion, ∇h, d^∇h and curvature tensors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Classification {
    pub torsion_free: bool,
    pub metric_parallel: bool,
    pub quasi_statistical: bool,
    pub flat: bool,
    /// Quasi-statistical and flat.
    pub hessian: bool,
    pub max_torsion: f64,
    pub max_nabla_h: f64,
    pub max_d_nabla_h: f64,
    pub max_curvature: f64,
}

/// Classifies (g, ∇) on any framed chart, with g given by frame components.
pub fn classify_points(
    connection: &FramedConnection,
    metric: &[Vec<ExprAst>],
    points: &[Vec<f64>],
    tol: f64,
) -> Result<Classification, GeometryError> {
    let (mut t, mut nh, mut d, mut r) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    let worse = |acc: f64, v: f64| {
        if v.is_nan() || acc.is_nan() {
            f64::NAN
        } else {
            acc.max(v)
        }
    };
    for p in points {
        let cp = connection.at(p)?;
        let g = metric_jets(metric, p)?;
        t = worse(t, cp.torsion_tensor().max_abs());
        nh = worse(nh, cp.covariant_02_tensor(&g).max_abs());
        d = worse(d, cp.d_nabla_tensor(&g).max_abs());
        r = worse(r, cp.curvature_tensor().max_abs());
    }
    let ok = |v: f64| v <= tol;
    Ok(Classification {
        torsion_free: ok(t),
        metric_parallel: ok(nh),
        quasi_statistical: ok(d),
        flat: ok(r),
        hessian: ok(d) && ok(r),
        max_torsion: t,
        max_nabla_h: nh,
        max_d_nabla_h: d,
        max_curvature: r,
    })
}

/// Classifies a base manifold at `samples` points drawn from its domain.
pub fn classify(
    spec: &ManifoldSpec,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<Classification, GeometryError> {
    let points = sampling::sample_box(spec.domain(), samples.max(1), seed);
    spec.validate_at(&points)?;
    classify_points(&spec.connection(), spec.metric(), &points, tol)
}
