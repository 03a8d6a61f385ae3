use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expr::{ExprAst, ExprError, Jet2};
use crate::geometry::GeometryError;

/// A section X + α of TM ⊕ T*M: n vector components and n covector
/// components as functions on the base chart.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedSection {
    vector: Vec<ExprAst>,
    covector: Vec<ExprAst>,
}

impl GeneralizedSection {
    pub fn new(vector: Vec<ExprAst>, covector: Vec<ExprAst>) -> Result<Self, GeometryError> {
        if vector.len() != covector.len() || vector.is_empty() {
            return Err(GeometryError::Invalid(
                "a generalized section needs n vector and n covector components".into(),
            ));
        }
        Ok(Self { vector, covector })
    }

    /// Section with constant components.
    pub fn constant(vector: &[f64], covector: &[f64]) -> Self {
        Self {
            vector: vector.iter().map(|&v| ExprAst::num(v)).collect(),
            covector: covector.iter().map(|&v| ExprAst::num(v)).collect(),
        }
    }

    /// ∂_i + 0.
    pub fn coordinate_vector(n: usize, i: usize) -> Self {
        let mut x = vec![0.0; n];
        x[i] = 1.0;
        Self::constant(&x, &vec![0.0; n])
    }

    /// 0 + dx^j.
    pub fn coordinate_covector(n: usize, j: usize) -> Self {
        let mut a = vec![0.0; n];
        a[j] = 1.0;
        Self::constant(&vec![0.0; n], &a)
    }

    /// The 2n sections {∂_i + 0} ∪ {0 + dx^j}, vectors first.
    pub fn basis(n: usize) -> Vec<Self> {
        (0..n)
            .map(|i| Self::coordinate_vector(n, i))
            .chain((0..n).map(|j| Self::coordinate_covector(n, j)))
            .collect()
    }

    /// Random sections whose components are quadratic polynomials with
    /// coefficients in [−1, 1]. With `vector_only` the covector part is zero.
    pub fn random(n: usize, count: usize, seed: u64, vector_only: bool) -> Vec<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let poly = |rng: &mut ChaCha8Rng| {
            let mut terms = vec![ExprAst::num(rng.gen_range(-1.0..=1.0))];
            for i in 0..n {
                terms.push(ExprAst::mul(
                    ExprAst::num(rng.gen_range(-1.0..=1.0)),
                    ExprAst::var(i),
                ));
                for j in i..n {
                    let c = ExprAst::num(rng.gen_range(-1.0..=1.0));
                    terms.push(ExprAst::mul(
                        c,
                        ExprAst::mul(ExprAst::var(i), ExprAst::var(j)),
                    ));
                }
            }
            ExprAst::sum(terms)
        };
        (0..count)
            .map(|_| {
                let vector = (0..n).map(|_| poly(&mut rng)).collect();
                let covector = (0..n)
                    .map(|_| {
                        if vector_only {
                            ExprAst::zero()
                        } else {
                            poly(&mut rng)
                        }
                    })
                    .collect();
                Self { vector, covector }
            })
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.vector.len()
    }

    pub fn vector(&self) -> &[ExprAst] {
        &self.vector
    }

    pub fn covector(&self) -> &[ExprAst] {
        &self.covector
    }

    /// Components with value, gradient and Hessian at `p`.
    pub fn jets(&self, p: &[f64]) -> Result<GenJet, ExprError> {
        let ev = |v: &[ExprAst]| {
            v.iter()
                .map(|e| e.eval_jet2(p))
                .collect::<Result<Vec<_>, _>>()
        };
        Ok(GenJet {
            x: ev(&self.vector)?,
            a: ev(&self.covector)?,
        })
    }
}

/// A generalized section's components as jets at one point.
#[derive(Debug, Clone)]
pub struct GenJet {
    pub x: Vec<Jet2>,
    pub a: Vec<Jet2>,
}

impl GenJet {
    pub fn new(x: Vec<Jet2>, a: Vec<Jet2>) -> Self {
        Self { x, a }
    }

    /// Constant section value on a chart of dimension `dim`.
    pub fn constant(dim: usize, x: &[f64], a: &[f64]) -> Self {
        Self {
            x: x.iter().map(|&v| Jet2::constant(dim, v)).collect(),
            a: a.iter().map(|&v| Jet2::constant(dim, v)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// Vector components followed by covector components.
    pub fn values(&self) -> Vec<f64> {
        self.x.iter().chain(&self.a).map(Jet2::value).collect()
    }

    pub fn vector_values(&self) -> Vec<f64> {
        self.x.iter().map(Jet2::value).collect()
    }

    pub fn covector_values(&self) -> Vec<f64> {
        self.a.iter().map(Jet2::value).collect()
    }

    pub fn add(&self, o: &GenJet) -> GenJet {
        let z = |u: &[Jet2], v: &[Jet2]| u.iter().zip(v).map(|(a, b)| *a + *b).collect();
        GenJet {
            x: z(&self.x, &o.x),
            a: z(&self.a, &o.a),
        }
    }

    pub fn sub(&self, o: &GenJet) -> GenJet {
        self.add(&o.scale(-1.0))
    }

    pub fn scale(&self, c: f64) -> GenJet {
        GenJet {
            x: self.x.iter().map(|v| v.scale(c)).collect(),
            a: self.a.iter().map(|v| v.scale(c)).collect(),
        }
    }

    /// Largest absolute component value.
    pub fn max_abs(&self) -> f64 {
        crate::linalg::max_abs(self.values())
    }
}
