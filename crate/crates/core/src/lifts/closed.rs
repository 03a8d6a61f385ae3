//! Closed-form torsion, curvature and d^∇ of the lift metrics, written in
//! terms of base tensors at the projected point and the fiber coordinates.
//! The suite compares these against the frame-generic computation.

use super::{Bundle, MetricKind};
use crate::genbundle::GenPoint;
use crate::geometry::{TensorValue, Valence};

fn y_dot_curvature(gp: &GenPoint, y: &[f64], upper: impl Fn(usize) -> [usize; 4]) -> f64 {
    (0..gp.n())
        .map(|l| y[l] * gp.curvature().get(&upper(l)))
        .sum()
}

/// Frame components of the torsion of ∇̃ (cotangent) or ∇̃̃ (tangent) at
/// [c, a, b]:
///
/// - T(X_i^H, X_j^H) = T^k_{ij} X_k^H − y_l R^l_{ijk} ∂/∂y_k (cotangent)
/// - T(X_i^H, X_j^H) = T^k_{ij} X_k^H + y^l R^k_{ijl} ∂/∂y^k (tangent)
/// - T(∂/∂y_i, X_j^H) = −((∂_j h^{ik} + h^{il} Γ^k_{jl}) h_{kr} + Γ^i_{jr}) ∂/∂y_r (cotangent), 0 (tangent)
pub fn torsion_display(bundle: Bundle, gp: &GenPoint, y: &[f64]) -> TensorValue {
    let n = gp.n();
    let mut t = TensorValue::zeros(Valence::V12, 2 * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                t.set(&[k, i, j], gp.torsion().get(&[k, i, j]));
                let v = match bundle {
                    Bundle::Cotangent => -y_dot_curvature(gp, y, |l| [l, i, j, k]),
                    Bundle::Tangent => y_dot_curvature(gp, y, |l| [k, i, j, l]),
                };
                t.set(&[n + k, i, j], v);
            }
        }
    }
    if bundle == Bundle::Cotangent {
        let h = gp.metric();
        let hi = gp.inverse_metric();
        let hi_jets = gp.inverse_metric_jets();
        for i in 0..n {
            for j in 0..n {
                for r in 0..n {
                    let mut a = 0.0;
                    for k in 0..n {
                        let mut inner = hi_jets[i][k].grad_at(j);
                        for l in 0..n {
                            inner += hi[i][l] * gp.gamma_value(k, j, l);
                        }
                        a += inner * h[k][r];
                    }
                    let v = -(a + gp.gamma_value(i, j, r));
                    t.set(&[n + r, n + i, j], v);
                    t.set(&[n + r, j, n + i], -v);
                }
            }
        }
    }
    t
}

/// Frame components R^d_{abc} at [d, a, b, c]. Only R(X_i^H, X_j^H) is
/// nonzero:
///
/// - on X_k^H: (R(∂_i, ∂_j) ∂_k)^H
/// - on ∂/∂y_k (cotangent): h^{kr} R^l_{ijr} h_{ls} ∂/∂y_s
/// - on ∂/∂y^k (tangent): R^l_{ijk} ∂/∂y^l
pub fn curvature_display(bundle: Bundle, gp: &GenPoint) -> TensorValue {
    let n = gp.n();
    let r = gp.curvature();
    let mut t = TensorValue::zeros(Valence::V13, 2 * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    t.set(&[l, i, j, k], r.get(&[l, i, j, k]));
                }
                match bundle {
                    Bundle::Cotangent => {
                        let (h, hi) = (gp.metric(), gp.inverse_metric());
                        for s in 0..n {
                            let mut v = 0.0;
                            for q in 0..n {
                                for l in 0..n {
                                    v += hi[k][q] * r.get(&[l, i, j, q]) * h[l][s];
                                }
                            }
                            t.set(&[n + s, i, j, n + k], v);
                        }
                    }
                    Bundle::Tangent => {
                        for l in 0..n {
                            t.set(&[n + l, i, j, n + k], r.get(&[l, i, j, k]));
                        }
                    }
                }
            }
        }
    }
    t
}

fn set_anti(t: &mut TensorValue, a: usize, b: usize, c: usize, v: f64) {
    t.set(&[a, b, c], v);
    t.set(&[b, a, c], -v);
}

/// (d g)(e_a, e_b, e_c) at [a, b, c] for a lift metric g and the induced
/// connection. Components not listed vanish.
///
/// - h^{S*}: (H_i, H_j, H_k) ↦ d^∇h(i, j, k); (H_i, H_j, V^k) ↦ −y_l R^l_{ijr} h^{kr}
/// - h̃_±: (H_i, H_j, H_k) ↦ −y_l R^l_{ijk}; (H_i, H_j, V^k) ↦ ±ε h^{kl} d^∇h(i, j, l),
///   ε = +1 for symmetric and −1 for skew h
/// - h^S: (H_i, H_j, H_k) ↦ d^∇h(i, j, k); (H_i, H_j, V_k) ↦ y^l R^r_{ijl} h_{rk};
///   (H_i, V_j, V_k) ↦ (∇_i h)_{jk}
/// - h^H: (H_i, H_j, H_k) ↦ y^l R^r_{ijl} h_{rk}; (H_i, H_j, V_k) ↦ d^∇h(i, j, k);
///   (H_i, V_j, H_k) ↦ (∇_i h)_{jk}
///
/// Returns `None` for h̃_± when h is neither symmetric nor skew.
pub fn d_display(kind: MetricKind, gp: &GenPoint, y: &[f64]) -> Option<TensorValue> {
    let n = gp.n();
    let (h, hi) = (gp.metric(), gp.inverse_metric());
    let d = gp.d_nabla_h();
    let nh = gp.nabla_h();
    let mut t = TensorValue::zeros(Valence::V03, 2 * n);
    // y^l R^r_{ijl} h_{rk}
    let tangent_r = |i: usize, j: usize, k: usize| -> f64 {
        (0..n)
            .map(|r| y_dot_curvature(gp, y, |l| [r, i, j, l]) * h[r][k])
            .sum()
    };
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for k in 0..n {
                let (hh, hv) = match kind {
                    MetricKind::SasakiCotangent => {
                        let v = (0..n)
                            .map(|r| -y_dot_curvature(gp, y, |l| [l, i, j, r]) * hi[k][r])
                            .sum();
                        (d.get(&[i, j, k]), v)
                    }
                    MetricKind::PwPlus | MetricKind::PwMinus => {
                        let s = if kind == MetricKind::PwPlus {
                            1.0
                        } else {
                            -1.0
                        };
                        let eps = gp.symmetry().sign()?;
                        let v: f64 = (0..n).map(|l| hi[k][l] * d.get(&[i, j, l])).sum();
                        (-y_dot_curvature(gp, y, |l| [l, i, j, k]), s * eps * v)
                    }
                    MetricKind::SasakiTangent => (d.get(&[i, j, k]), tangent_r(i, j, k)),
                    MetricKind::Horizontal => (tangent_r(i, j, k), d.get(&[i, j, k])),
                };
                t.set(&[i, j, k], hh);
                t.set(&[i, j, n + k], hv);
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                match kind {
                    MetricKind::SasakiTangent => {
                        set_anti(&mut t, i, n + j, n + k, nh.get(&[i, j, k]))
                    }
                    MetricKind::Horizontal => set_anti(&mut t, i, n + j, k, nh.get(&[i, j, k])),
                    _ => {}
                }
            }
        }
    }
    Some(t)
}
