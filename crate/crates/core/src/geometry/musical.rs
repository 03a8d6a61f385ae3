use super::{GeometryError, ManifoldSpec};
use crate::linalg;

/// (flat X)_j = X^i h_{ij}.
pub fn musical_flat(spec: &ManifoldSpec, x: &[f64], p: &[f64]) -> Result<Vec<f64>, GeometryError> {
    let h = spec.metric_checked(p)?;
    let n = spec.dim();
    Ok((0..n)
        .map(|j| (0..n).map(|i| x[i] * h[i][j]).sum())
        .collect())
}

/// Inverse of [`musical_flat`]: (sharp α)^i = h^{ji} α_j with h^{ij} the
/// entries of the inverse matrix.
pub fn musical_sharp(
    spec: &ManifoldSpec,
    alpha: &[f64],
    p: &[f64],
) -> Result<Vec<f64>, GeometryError> {
    let h = spec.metric_checked(p)?;
    let inv = linalg::invert(&h).ok_or_else(|| GeometryError::Degenerate {
        point: p.to_vec(),
        det: linalg::det(&h),
    })?;
    let n = spec.dim();
    Ok((0..n)
        .map(|i| (0..n).map(|j| inv[j][i] * alpha[j]).sum())
        .collect())
}
