use std::collections::BTreeMap;

use super::frame::{FrameField, FramePoint};
use super::tensor::{TensorValue, Valence};
use super::GeometryError;
use crate::expr::{ExprAst, Jet2};
use crate::linalg;

/// Connection coefficients ∇_{e_a} e_b = Γ^c_{ab} e_c in a frame, keyed by
/// (c, a, b); absent entries are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct FramedConnection {
    frame: FrameField,
    coeffs: BTreeMap<(usize, usize, usize), ExprAst>,
}

pub fn metric_jets(metric: &[Vec<ExprAst>], p: &[f64]) -> Result<Vec<Vec<Jet2>>, GeometryError> {
    metric
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| e.eval_jet2(p).map_err(Into::into))
                .collect()
        })
        .collect()
}

impl FramedConnection {
    pub fn new(
        frame: FrameField,
        coeffs: BTreeMap<(usize, usize, usize), ExprAst>,
    ) -> Result<Self, GeometryError> {
        let m = frame.dim();
        if coeffs.keys().any(|&(c, a, b)| c >= m || a >= m || b >= m) {
            return Err(GeometryError::Invalid(
                "connection coefficient index out of range".into(),
            ));
        }
        let coeffs = coeffs.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(Self { frame, coeffs })
    }

    /// Re-expresses a coordinate connection (keyed (k, i, j)) in `frame`:
    /// Γ^c_{ab} = θ^c_k (e_a(e_b^k) + Γ^k_{ij} e_a^i e_b^j), with the coframe θ
    /// built symbolically. Only practical for small charts.
    pub fn from_coordinate_connection(
        gamma: &BTreeMap<(usize, usize, usize), ExprAst>,
        frame: FrameField,
    ) -> Result<Self, GeometryError> {
        let m = frame.dim();
        let e = frame.vectors();
        // frame matrix F[mu][a] = e_a^mu; coframe = F⁻¹
        let f: Vec<Vec<ExprAst>> = (0..m)
            .map(|mu| (0..m).map(|a| e[a][mu].clone()).collect())
            .collect();
        let theta = linalg::inverse_ast(&f);
        let g = |k: usize, i: usize, j: usize| {
            gamma.get(&(k, i, j)).cloned().unwrap_or_else(ExprAst::zero)
        };
        let mut coeffs = BTreeMap::new();
        for a in 0..m {
            for b in 0..m {
                let nabla: Vec<ExprAst> = (0..m)
                    .map(|k| {
                        let deriv = ExprAst::sum(
                            (0..m).map(|i| ExprAst::mul(e[a][i].clone(), e[b][k].derivative(i))),
                        );
                        let conn = ExprAst::sum((0..m).flat_map(|i| {
                            let g = &g;
                            (0..m).map(move |j| {
                                ExprAst::mul(
                                    g(k, i, j),
                                    ExprAst::mul(e[a][i].clone(), e[b][j].clone()),
                                )
                            })
                        }));
                        ExprAst::add(deriv, conn)
                    })
                    .collect();
                for c in 0..m {
                    let v = ExprAst::sum(
                        (0..m).map(|k| ExprAst::mul(theta[c][k].clone(), nabla[k].clone())),
                    );
                    coeffs.insert((c, a, b), v);
                }
            }
        }
        Self::new(frame, coeffs)
    }

    pub fn frame(&self) -> &FrameField {
        &self.frame
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    pub fn coefficient(&self, c: usize, a: usize, b: usize) -> Option<&ExprAst> {
        self.coeffs.get(&(c, a, b))
    }

    pub fn coefficients(&self) -> &BTreeMap<(usize, usize, usize), ExprAst> {
        &self.coeffs
    }

    pub fn at(&self, p: &[f64]) -> Result<ConnectionPoint, GeometryError> {
        let frame = self.frame.at(p)?;
        let m = self.dim();
        let zero = Jet2::constant(m, 0.0);
        let mut gamma = vec![vec![vec![zero; m]; m]; m];
        for (&(c, a, b), e) in &self.coeffs {
            gamma[c][a][b] = e.eval_jet2(p)?;
        }
        Ok(ConnectionPoint { frame, gamma })
    }
}

/// A connection evaluated at one point, with everything needed for torsion,
/// curvature and first covariant derivatives of (0,2)-tensors.
#[derive(Debug, Clone)]
pub struct ConnectionPoint {
    pub frame: FramePoint,
    /// `gamma[c][a][b]` = Γ^c_{ab} as jets.
    pub gamma: Vec<Vec<Vec<Jet2>>>,
}

impl ConnectionPoint {
    pub fn dim(&self) -> usize {
        self.gamma.len()
    }

    fn g(&self, c: usize, a: usize, b: usize) -> f64 {
        self.gamma[c][a][b].value()
    }

    /// Frame components of T(e_a, e_b).
    pub fn torsion(&self, a: usize, b: usize) -> Vec<f64> {
        (0..self.dim())
            .map(|c| self.g(c, a, b) - self.g(c, b, a) - self.frame.structure[c][a][b])
            .collect()
    }

    /// Frame components of R(e_a, e_b) e_c.
    pub fn curvature(&self, a: usize, b: usize, c: usize) -> Vec<f64> {
        let m = self.dim();
        (0..m)
            .map(|d| {
                let mut r = self.frame.derivative(a, &self.gamma[d][b][c])
                    - self.frame.derivative(b, &self.gamma[d][a][c]);
                for e in 0..m {
                    r += self.g(e, b, c) * self.g(d, a, e)
                        - self.g(e, a, c) * self.g(d, b, e)
                        - self.frame.structure[e][a][b] * self.g(d, e, c);
                }
                r
            })
            .collect()
    }

    /// (∇_{e_a} g)(e_b, e_c) for a (0,2)-tensor with frame components `g`.
    pub fn covariant_02(&self, g: &[Vec<Jet2>], a: usize, b: usize, c: usize) -> f64 {
        let mut v = self.frame.derivative(a, &g[b][c]);
        for d in 0..self.dim() {
            v -= self.g(d, a, b) * g[d][c].value() + self.g(d, a, c) * g[b][d].value();
        }
        v
    }

    /// (d^∇g)(e_a, e_b, e_c).
    pub fn d_nabla(&self, g: &[Vec<Jet2>], a: usize, b: usize, c: usize) -> f64 {
        let t = self.torsion(a, b);
        let mut v = self.covariant_02(g, a, b, c) - self.covariant_02(g, b, a, c);
        for (d, td) in t.iter().enumerate() {
            v += td * g[d][c].value();
        }
        v
    }

    pub fn torsion_tensor(&self) -> TensorValue {
        let m = self.dim();
        let mut t = TensorValue::zeros(Valence::V12, m);
        for a in 0..m {
            for b in 0..m {
                for (c, v) in self.torsion(a, b).into_iter().enumerate() {
                    t.set(&[c, a, b], v);
                }
            }
        }
        t
    }

    /// R^d_{abc} stored at index [d, a, b, c].
    pub fn curvature_tensor(&self) -> TensorValue {
        let m = self.dim();
        let mut r = TensorValue::zeros(Valence::V13, m);
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    for (d, v) in self.curvature(a, b, c).into_iter().enumerate() {
                        r.set(&[d, a, b, c], v);
                    }
                }
            }
        }
        r
    }

    /// (∇g) stored at index [a, b, c] = (∇_{e_a} g)(e_b, e_c).
    pub fn covariant_02_tensor(&self, g: &[Vec<Jet2>]) -> TensorValue {
        self.tensor3(|a, b, c| self.covariant_02(g, a, b, c))
    }

    pub fn d_nabla_tensor(&self, g: &[Vec<Jet2>]) -> TensorValue {
        self.tensor3(|a, b, c| self.d_nabla(g, a, b, c))
    }

    fn tensor3(&self, f: impl Fn(usize, usize, usize) -> f64) -> TensorValue {
        let m = self.dim();
        let mut t = TensorValue::zeros(Valence::V03, m);
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    t.set(&[a, b, c], f(a, b, c));
                }
            }
        }
        t
    }
}
