//! Almost complex and almost product structures on T*M and TM obtained by
//! conjugating Ĵ_∓ with the bundle morphisms, and the Norden axioms.

mod suite;

use serde::Serialize;

use crate::expr::{ExprAst, Jet2};
use crate::genbundle::Structure;
use crate::geometry::{metric_jets, GeometryError};
use crate::lifts::{Bundle, LiftedChart, LiftedMetric};
use crate::linalg;

pub use suite::norden_suite;

/// A (1,1)-tensor on a lifted chart in frame components:
/// J(e_b) = Σ_a matrix[a][b] e_a.
#[derive(Debug, Clone, PartialEq)]
pub struct EndoField {
    bundle: Bundle,
    structure: Structure,
    matrix: Vec<Vec<ExprAst>>,
}

/// J̃_∓ on T*M: J̃(X_i^H) = h_{ik} ∂/∂y_k, J̃(∂/∂y_j) = ∓h^{jk} X_k^H.
/// `Structure::Complex` is the − branch.
pub fn build_jtilde(chart: &LiftedChart, structure: Structure) -> Result<EndoField, GeometryError> {
    require(chart, Bundle::Cotangent)?;
    let spec = chart.base();
    let n = spec.dim();
    let h = spec.metric();
    let hi = linalg::inverse_ast(h);
    let mut m = vec![vec![ExprAst::zero(); 2 * n]; 2 * n];
    for i in 0..n {
        for k in 0..n {
            m[n + k][i] = h[i][k].clone();
            m[k][n + i] = ExprAst::mul(ExprAst::num(structure.sign()), hi[i][k].clone());
        }
    }
    Ok(EndoField {
        bundle: Bundle::Cotangent,
        structure,
        matrix: m,
    })
}

/// J̄_∓ on TM: J̄(X^H) = X^V, J̄(X^V) = ∓X^H.
pub fn build_jbar(chart: &LiftedChart, structure: Structure) -> Result<EndoField, GeometryError> {
    require(chart, Bundle::Tangent)?;
    let n = chart.base_dim();
    let mut m = vec![vec![ExprAst::zero(); 2 * n]; 2 * n];
    for i in 0..n {
        m[n + i][i] = ExprAst::one();
        m[i][n + i] = ExprAst::num(structure.sign());
    }
    Ok(EndoField {
        bundle: Bundle::Tangent,
        structure,
        matrix: m,
    })
}

/// J̃ on the cotangent chart, J̄ on the tangent chart.
pub fn build_structure(
    chart: &LiftedChart,
    structure: Structure,
) -> Result<EndoField, GeometryError> {
    match chart.bundle() {
        Bundle::Cotangent => build_jtilde(chart, structure),
        Bundle::Tangent => build_jbar(chart, structure),
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

impl EndoField {
    pub fn bundle(&self) -> Bundle {
        self.bundle
    }

    pub fn structure(&self) -> Structure {
        self.structure
    }

    /// J² = square_sign · Id: −1 for the complex branch, +1 for the product branch.
    pub fn square_sign(&self) -> f64 {
        self.structure.sign()
    }

    /// Id used in check ids and report flags, e.g. `jtilde_minus`.
    pub fn id(&self) -> String {
        let base = if self.bundle == Bundle::Cotangent {
            "jtilde"
        } else {
            "jbar"
        };
        let branch = if self.structure == Structure::Complex {
            "minus"
        } else {
            "plus"
        };
        format!("{base}_{branch}")
    }

    pub fn matrix(&self) -> &[Vec<ExprAst>] {
        &self.matrix
    }

    pub fn jets(&self, p: &[f64]) -> Result<Vec<Vec<Jet2>>, GeometryError> {
        metric_jets(&self.matrix, p)
    }

    pub fn values(&self, p: &[f64]) -> Result<Vec<Vec<f64>>, GeometryError> {
        Ok(self
            .jets(p)?
            .iter()
            .map(|r| r.iter().map(Jet2::value).collect())
            .collect())
    }

    /// J applied to frame components at `p`.
    pub fn apply(&self, p: &[f64], w: &[f64]) -> Result<Vec<f64>, GeometryError> {
        Ok(linalg::mat_vec(&self.values(p)?, w))
    }

    /// Coordinate components J^μ_ν = F J F⁻¹ as jets, F the frame matrix.
    pub fn coordinate_jets(
        &self,
        chart: &LiftedChart,
        p: &[f64],
    ) -> Result<Vec<Vec<Jet2>>, GeometryError> {
        let m = chart.dim();
        let fp = chart.frame().at(p)?;
        let f: Vec<Vec<Jet2>> = (0..m)
            .map(|mu| (0..m).map(|a| fp.e[a][mu]).collect())
            .collect();
        let f_inv = linalg::invert_jets(&f)
            .ok_or_else(|| GeometryError::SingularFrame { point: p.to_vec() })?;
        let j = self.jets(p)?;
        Ok(jet_mul(&jet_mul(&f, &j), &f_inv))
    }
}

fn jet_mul(a: &[Vec<Jet2>], b: &[Vec<Jet2>]) -> Vec<Vec<Jet2>> {
    let n = a.len();
    let dim = a[0][0].dim();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| crate::expr::sum_jets(dim, (0..n).map(|k| a[i][k] * b[k][j])))
                .collect()
        })
        .collect()
}

fn jet_apply(j: &[Vec<Jet2>], v: &[Jet2]) -> Vec<Jet2> {
    let dim = v[0].dim();
    j.iter()
        .map(|row| crate::expr::sum_jets(dim, row.iter().zip(v).map(|(a, b)| *a * *b)))
        .collect()
}

/// Coordinate Lie bracket value [A, B]^μ = A^ν ∂_ν B^μ − B^ν ∂_ν A^μ.
fn lie_values(a: &[Jet2], b: &[Jet2]) -> Vec<f64> {
    let av: Vec<f64> = a.iter().map(Jet2::value).collect();
    let bv: Vec<f64> = b.iter().map(Jet2::value).collect();
    (0..a.len())
        .map(|mu| {
            (0..a.len())
                .map(|nu| av[nu] * b[mu].grad_at(nu) - bv[nu] * a[mu].grad_at(nu))
                .sum()
        })
        .collect()
}

/// N_J(A, B) = [JA, JB] − J[JA, B] − J[A, JB] + J²[A, B] with coordinate
/// brackets on the lifted chart. `a` and `b` are coordinate components of
/// vector fields as jets at the point; returns coordinate components.
pub fn nijenhuis_coordinates(j: &[Vec<Jet2>], a: &[Jet2], b: &[Jet2]) -> Vec<f64> {
    let jv: Vec<Vec<f64>> = j
        .iter()
        .map(|r| r.iter().map(Jet2::value).collect())
        .collect();
    let (ja, jb) = (jet_apply(j, a), jet_apply(j, b));
    let t1 = lie_values(&ja, &jb);
    let t2 = linalg::mat_vec(&jv, &lie_values(&ja, b));
    let t3 = linalg::mat_vec(&jv, &lie_values(a, &jb));
    let t4 = linalg::mat_vec(&jv, &linalg::mat_vec(&jv, &lie_values(a, b)));
    (0..a.len())
        .map(|mu| t1[mu] - t2[mu] - t3[mu] + t4[mu])
        .collect()
}

/// Frame components of N_J(e_a, e_b) at `p`, computed in lifted
/// coordinates through the frame matrix.
pub fn nijenhuis_endo(
    endo: &EndoField,
    chart: &LiftedChart,
    a: usize,
    b: usize,
    p: &[f64],
) -> Result<Vec<f64>, GeometryError> {
    let fp = chart.frame().at(p)?;
    let j = endo.coordinate_jets(chart, p)?;
    let n = nijenhuis_coordinates(&j, &fp.e[a], &fp.e[b]);
    Ok(fp.to_frame(&n))
}

/// Outcome of the Norden/Para-Norden axioms for (J, g) on sampled points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NordenCheck {
    /// J² = ∓Id.
    pub square_ok: bool,
    /// trace J = 0; with J² = Id this splits the ±1 eigenbundles n/n. Always
    /// true for the complex branch.
    pub rank_ok: bool,
    /// g(JA, B) = g(A, JB).
    pub h_symmetric: bool,
    /// g(JA, B) = −g(A, JB), the Hermitian-type pattern.
    pub h_antisymmetric: bool,
    /// N_J = 0.
    pub integrable: bool,
    pub max_square: f64,
    pub max_trace: f64,
    pub max_symmetric: f64,
    pub max_antisymmetric: f64,
    pub max_nijenhuis: f64,
}

/// Evaluates the axioms on frame pairs at `points`.
pub fn norden_check(
    endo: &EndoField,
    chart: &LiftedChart,
    metric: &LiftedMetric,
    points: &[Vec<f64>],
    tol: f64,
) -> Result<NordenCheck, GeometryError> {
    let m = chart.dim();
    let (mut sq, mut tr, mut sym, mut anti, mut nij) =
        (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    let upd = |acc: &mut f64, v: f64| {
        *acc = if v.is_nan() || acc.is_nan() {
            f64::NAN
        } else {
            acc.max(v.abs())
        };
    };
    for p in points {
        let j = endo.values(p)?;
        let g = metric.values(p)?;
        let j2 = linalg::mat_mul(&j, &j);
        for a in 0..m {
            for b in 0..m {
                let id = if a == b { endo.square_sign() } else { 0.0 };
                upd(&mut sq, j2[a][b] - id);
                // g(J e_a, e_b) and g(e_a, J e_b)
                let gja: f64 = (0..m).map(|c| j[c][a] * g[c][b]).sum();
                let gjb: f64 = (0..m).map(|c| j[c][b] * g[a][c]).sum();
                upd(&mut sym, gja - gjb);
                upd(&mut anti, gja + gjb);
            }
        }
        if endo.structure() == Structure::Product {
            upd(&mut tr, (0..m).map(|a| j[a][a]).sum());
        }
        for a in 0..m {
            for b in (a + 1)..m {
                upd(
                    &mut nij,
                    linalg::max_abs(nijenhuis_endo(endo, chart, a, b, p)?),
                );
            }
        }
    }
    Ok(NordenCheck {
        square_ok: sq <= tol,
        rank_ok: tr <= tol,
        h_symmetric: sym <= tol,
        h_antisymmetric: anti <= tol,
        integrable: nij <= tol,
        max_square: sq,
        max_trace: tr,
        max_symmetric: sym,
        max_antisymmetric: anti,
        max_nijenhuis: nij,
    })
}
