use super::GeometryError;
use crate::expr::{ExprAst, Jet2};
use crate::linalg::{self, Matrix};

/// m vector fields on an m-dimensional chart. `vectors[a][mu]` is the
/// ∂_mu-component of e_a.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameField {
    dim: usize,
    vectors: Vec<Vec<ExprAst>>,
    coordinate: bool,
}

impl FrameField {
    pub fn coordinate(dim: usize) -> Self {
        let vectors = (0..dim)
            .map(|a| {
                (0..dim)
                    .map(|mu| {
                        if a == mu {
                            ExprAst::one()
                        } else {
                            ExprAst::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Self {
            dim,
            vectors,
            coordinate: true,
        }
    }

    pub fn new(vectors: Vec<Vec<ExprAst>>) -> Result<Self, GeometryError> {
        let dim = vectors.len();
        if dim == 0 || dim > crate::expr::MAX_DIM {
            return Err(GeometryError::Invalid(format!(
                "frame size {dim} unsupported"
            )));
        }
        if vectors.iter().any(|v| v.len() != dim) {
            return Err(GeometryError::Invalid(
                "frame vectors must have one component per coordinate".into(),
            ));
        }
        if vectors
            .iter()
            .flatten()
            .any(|e| e.max_var().is_some_and(|v| v >= dim))
        {
            return Err(GeometryError::Invalid(
                "frame component references a variable outside the chart".into(),
            ));
        }
        Ok(Self {
            dim,
            vectors,
            coordinate: false,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_coordinate(&self) -> bool {
        self.coordinate
    }

    pub fn vectors(&self) -> &[Vec<ExprAst>] {
        &self.vectors
    }

    /// Frame vectors, coframe and structure functions at `p`.
    pub fn at(&self, p: &[f64]) -> Result<FramePoint, GeometryError> {
        let m = self.dim;
        if p.len() != m {
            return Err(GeometryError::Invalid(format!(
                "point has {} coordinates, chart has {m}",
                p.len()
            )));
        }
        if self.coordinate {
            let e = (0..m)
                .map(|a| {
                    (0..m)
                        .map(|mu| Jet2::constant(m, if a == mu { 1.0 } else { 0.0 }))
                        .collect()
                })
                .collect();
            return Ok(FramePoint {
                e,
                coframe: linalg::identity(m),
                structure: vec![vec![vec![0.0; m]; m]; m],
            });
        }
        let e: Vec<Vec<Jet2>> = self
            .vectors
            .iter()
            .map(|v| v.iter().map(|c| c.eval_jet2(p)).collect::<Result<_, _>>())
            .collect::<Result<_, _>>()?;
        // frame matrix F[mu][a] = e_a^mu
        let f: Matrix = (0..m)
            .map(|mu| (0..m).map(|a| e[a][mu].value()).collect())
            .collect();
        let det = linalg::det(&f);
        if det.abs() < 1e-9 {
            return Err(GeometryError::SingularFrame { point: p.to_vec() });
        }
        let coframe =
            linalg::invert(&f).ok_or_else(|| GeometryError::SingularFrame { point: p.to_vec() })?;
        let mut structure = vec![vec![vec![0.0; m]; m]; m];
        for a in 0..m {
            for b in 0..m {
                let coord: Vec<f64> = (0..m)
                    .map(|mu| {
                        (0..m)
                            .map(|nu| {
                                e[a][nu].value() * e[b][mu].grad_at(nu)
                                    - e[b][nu].value() * e[a][mu].grad_at(nu)
                            })
                            .sum()
                    })
                    .collect();
                for (d, row) in coframe.iter().enumerate() {
                    structure[d][a][b] = row.iter().zip(&coord).map(|(x, y)| x * y).sum();
                }
            }
        }
        Ok(FramePoint {
            e,
            coframe,
            structure,
        })
    }
}

/// A frame evaluated at one point.
#[derive(Debug, Clone)]
pub struct FramePoint {
    /// `e[a][mu]`: coordinate components of e_a as jets.
    pub e: Vec<Vec<Jet2>>,
    /// Inverse frame matrix: frame component a of a coordinate vector v is
    /// Σ_mu coframe[a][mu] v^mu.
    pub coframe: Matrix,
    /// Structure functions: [e_a, e_b] = Σ_d structure[d][a][b] e_d.
    pub structure: Vec<Vec<Vec<f64>>>,
}

impl FramePoint {
    pub fn dim(&self) -> usize {
        self.e.len()
    }

    /// e_a(f) at the point.
    pub fn derivative(&self, a: usize, f: &Jet2) -> f64 {
        self.e[a]
            .iter()
            .enumerate()
            .map(|(mu, c)| c.value() * f.grad_at(mu))
            .sum()
    }

    /// Coordinate components of Σ_a w^a e_a.
    pub fn to_coordinates(&self, w: &[f64]) -> Vec<f64> {
        let m = self.dim();
        (0..m)
            .map(|mu| (0..m).map(|a| w[a] * self.e[a][mu].value()).sum())
            .collect()
    }

    pub fn to_frame(&self, v: &[f64]) -> Vec<f64> {
        linalg::mat_vec(&self.coframe, v)
    }
}

/// Frame components of [e_a, e_b] at `p`.
pub fn frame_bracket(
    frame: &FrameField,
    a: usize,
    b: usize,
    p: &[f64],
) -> Result<Vec<f64>, GeometryError> {
    let fp = frame.at(p)?;
    Ok((0..frame.dim()).map(|d| fp.structure[d][a][b]).collect())
}
