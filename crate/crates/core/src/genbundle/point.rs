use serde::Serialize;

use super::section::GenJet;
use crate::expr::{sum_jets, Jet2};
use crate::geometry::{ConnectionPoint, GeometryError, ManifoldSpec, Symmetry, TensorValue};
use crate::linalg;

/// Bilinear forms on TM ⊕ T*M.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairingKind {
    /// ⟨σ, τ⟩ = −½(α(Y) + β(X)).
    Indefinite,
    /// (σ, τ) = −½(α(Y) − β(X)).
    Symplectic,
    /// ȟ(σ, τ) = h(X, Y) + h(h⁻¹α, h⁻¹β).
    CheckH,
}

impl PairingKind {
    /// The natural pairing matched to the symmetry class of h: indefinite for
    /// symmetric h, symplectic for skew h.
    pub fn natural(symmetry: Symmetry) -> Option<Self> {
        match symmetry {
            Symmetry::Symmetric => Some(PairingKind::Indefinite),
            Symmetry::Skew => Some(PairingKind::Symplectic),
            Symmetry::General => None,
        }
    }
}

/// Connections on TM ⊕ T*M induced by (h, ∇).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GenConnectionKind {
    /// D_σ τ = ∇_X Y + h(∇_X h⁻¹β).
    Hat,
    /// D_σ τ = ∇_X Y + ∇_X β.
    Check,
    /// D_σ τ = h⁻¹(∇_X h(Y)) + ∇_X β.
    HatDual,
}

/// Ĵ_∓(X + α) = ∓h⁻¹α + h(X).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Structure {
    /// Ĵ_c = Ĵ_−, squares to −Id.
    Complex,
    /// Ĵ_p = Ĵ_+, squares to +Id.
    Product,
}

impl Structure {
    /// Sign in front of h⁻¹α, which is also the square: Ĵ² = sign · Id.
    pub fn sign(self) -> f64 {
        match self {
            Structure::Complex => -1.0,
            Structure::Product => 1.0,
        }
    }
}

/// Base data at one point as jets, with the generalized-bundle operations.
///
/// Sections enter as [`GenJet`]s. Every derivative is taken with
/// [`Jet2::partial`], so an operation applied to the output of another (as in
/// D_σ D_τ ν) stays exact as long as the inputs were second-order jets.
#[derive(Debug, Clone)]
pub struct GenPoint {
    n: usize,
    symmetry: Symmetry,
    h: Vec<Vec<Jet2>>,
    h_inv: Vec<Vec<Jet2>>,
    h_val: Vec<Vec<f64>>,
    h_inv_val: Vec<Vec<f64>>,
    basis: Vec<GenJet>,
    grams: [Vec<Vec<f64>>; 3],
    conn: ConnectionPoint,
    torsion: TensorValue,
    curvature: TensorValue,
    nabla_h: TensorValue,
    d_nabla_h: TensorValue,
}

impl GenPoint {
    pub fn new(spec: &ManifoldSpec, p: &[f64]) -> Result<Self, GeometryError> {
        spec.metric_checked(p)?;
        let h = spec.metric_jets(p)?;
        let h_inv = linalg::invert_jets(&h).ok_or_else(|| GeometryError::Degenerate {
            point: p.to_vec(),
            det: 0.0,
        })?;
        let conn = spec.connection().at(p)?;
        let values = |m: &[Vec<Jet2>]| {
            m.iter()
                .map(|r| r.iter().map(Jet2::value).collect())
                .collect()
        };
        let n = spec.dim();
        let basis = (0..2 * n)
            .map(|k| {
                let mut v = vec![0.0; 2 * n];
                v[k] = 1.0;
                GenJet::constant(n, &v[..n], &v[n..])
            })
            .collect();
        let mut gp = Self {
            h_val: values(&h),
            h_inv_val: values(&h_inv),
            basis,
            grams: Default::default(),
            n,
            symmetry: spec.symmetry(),
            torsion: conn.torsion_tensor(),
            curvature: conn.curvature_tensor(),
            nabla_h: conn.covariant_02_tensor(&h),
            d_nabla_h: conn.d_nabla_tensor(&h),
            h,
            h_inv,
            conn,
        };
        for pk in [
            PairingKind::Indefinite,
            PairingKind::Symplectic,
            PairingKind::CheckH,
        ] {
            let g = gp
                .basis
                .iter()
                .map(|b| {
                    gp.basis
                        .iter()
                        .map(|c| gp.pairing_value(pk, b, c))
                        .collect()
                })
                .collect();
            gp.grams[pk as usize] = g;
        }
        Ok(gp)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn metric(&self) -> &[Vec<f64>] {
        &self.h_val
    }

    pub fn inverse_metric(&self) -> &[Vec<f64>] {
        &self.h_inv_val
    }

    /// Γ^k_{ij} at the point.
    pub fn gamma_value(&self, k: usize, i: usize, j: usize) -> f64 {
        self.conn.gamma[k][i][j].value()
    }

    /// h^{ij} with first and second derivatives.
    pub fn inverse_metric_jets(&self) -> &[Vec<Jet2>] {
        &self.h_inv
    }

    /// T^k_{ij} at [k, i, j].
    pub fn torsion(&self) -> &TensorValue {
        &self.torsion
    }

    /// R^l_{ijk} at [l, i, j, k].
    pub fn curvature(&self) -> &TensorValue {
        &self.curvature
    }

    /// (∇_i h)_{jk} at [i, j, k].
    pub fn nabla_h(&self) -> &TensorValue {
        &self.nabla_h
    }

    /// (d^∇h)(∂i, ∂j, ∂k) at [i, j, k].
    pub fn d_nabla_h(&self) -> &TensorValue {
        &self.d_nabla_h
    }

    fn zero(&self) -> Jet2 {
        Jet2::constant(self.n, 0.0)
    }

    fn gamma(&self, k: usize, i: usize, j: usize) -> Jet2 {
        self.conn.gamma[k][i][j]
    }

    // ---- tensor calculus on component jets ----

    /// (flat X)_j = X^i h_{ij}.
    pub fn flat(&self, x: &[Jet2]) -> Vec<Jet2> {
        (0..self.n)
            .map(|j| sum_jets(self.n, (0..self.n).map(|i| x[i] * self.h[i][j])))
            .collect()
    }

    /// (sharp α)^i = h^{ji} α_j.
    pub fn sharp(&self, a: &[Jet2]) -> Vec<Jet2> {
        (0..self.n)
            .map(|i| sum_jets(self.n, (0..self.n).map(|j| self.h_inv[j][i] * a[j])))
            .collect()
    }

    /// X(f) = X^i ∂_i f.
    pub fn derivative(&self, x: &[Jet2], f: &Jet2) -> Jet2 {
        f.directional(x)
    }

    /// (∇_X Y)^k = X^i (∂_i Y^k + Γ^k_{ij} Y^j).
    pub fn nabla_vector(&self, x: &[Jet2], y: &[Jet2]) -> Vec<Jet2> {
        (0..self.n)
            .map(|k| {
                let mut acc = self.derivative(x, &y[k]);
                for i in 0..self.n {
                    for j in 0..self.n {
                        acc += x[i] * self.gamma(k, i, j) * y[j];
                    }
                }
                acc
            })
            .collect()
    }

    /// (∇_X β)_j = X^i (∂_i β_j − Γ^m_{ij} β_m).
    pub fn nabla_covector(&self, x: &[Jet2], b: &[Jet2]) -> Vec<Jet2> {
        (0..self.n)
            .map(|j| {
                let mut acc = self.derivative(x, &b[j]);
                for i in 0..self.n {
                    for m in 0..self.n {
                        acc -= x[i] * self.gamma(m, i, j) * b[m];
                    }
                }
                acc
            })
            .collect()
    }

    /// [X, Y]^k = X(Y^k) − Y(X^k).
    pub fn lie(&self, x: &[Jet2], y: &[Jet2]) -> Vec<Jet2> {
        (0..self.n)
            .map(|k| self.derivative(x, &y[k]) - self.derivative(y, &x[k]))
            .collect()
    }

    fn contract(&self, a: &[Jet2], x: &[Jet2]) -> Jet2 {
        sum_jets(self.n, a.iter().zip(x).map(|(u, v)| *u * *v))
    }

    // ---- generalized bundle ----

    pub fn pairing(&self, kind: PairingKind, s: &GenJet, t: &GenJet) -> Jet2 {
        match kind {
            PairingKind::Indefinite => {
                (self.contract(&s.a, &t.x) + self.contract(&t.a, &s.x)).scale(-0.5)
            }
            PairingKind::Symplectic => {
                (self.contract(&s.a, &t.x) - self.contract(&t.a, &s.x)).scale(-0.5)
            }
            PairingKind::CheckH => {
                let hxy = self.contract(&self.flat(&s.x), &t.x);
                let (sa, sb) = (self.sharp(&s.a), self.sharp(&t.a));
                hxy + self.contract(&self.flat(&sa), &sb)
            }
        }
    }

    /// Value of [`GenPoint::pairing`] without derivatives.
    pub fn pairing_value(&self, kind: PairingKind, s: &GenJet, t: &GenJet) -> f64 {
        let (sx, sa) = (s.vector_values(), s.covector_values());
        let (tx, ta) = (t.vector_values(), t.covector_values());
        let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
        match kind {
            PairingKind::Indefinite => -0.5 * (dot(&sa, &tx) + dot(&ta, &sx)),
            PairingKind::Symplectic => -0.5 * (dot(&sa, &tx) - dot(&ta, &sx)),
            PairingKind::CheckH => {
                let hxy = dot(&self.flat_values(&sx), &tx);
                hxy + dot(
                    &self.flat_values(&self.sharp_values(&sa)),
                    &self.sharp_values(&ta),
                )
            }
        }
    }

    pub fn j_apply(&self, which: Structure, s: &GenJet) -> GenJet {
        let sign = which.sign();
        GenJet {
            x: self
                .sharp(&s.a)
                .into_iter()
                .map(|v| v.scale(sign))
                .collect(),
            a: self.flat(&s.x),
        }
    }

    /// [σ, τ]_∇ = [X, Y] + ∇_X β − ∇_Y α.
    pub fn bracket(&self, s: &GenJet, t: &GenJet) -> GenJet {
        let xb = self.nabla_covector(&s.x, &t.a);
        let ya = self.nabla_covector(&t.x, &s.a);
        GenJet {
            x: self.lie(&s.x, &t.x),
            a: xb.into_iter().zip(ya).map(|(u, v)| u - v).collect(),
        }
    }

    pub fn nijenhuis(&self, which: Structure, s: &GenJet, t: &GenJet) -> GenJet {
        let js = self.j_apply(which, s);
        let jt = self.j_apply(which, t);
        let a = self.bracket(&js, &jt);
        let b = self.j_apply(which, &self.bracket(&js, t));
        let c = self.j_apply(which, &self.bracket(s, &jt));
        let d = self.bracket(s, t).scale(which.sign());
        a.sub(&b).sub(&c).add(&d)
    }

    /// D_σ τ. Only the vector part X of σ enters.
    pub fn connection(&self, kind: GenConnectionKind, s: &GenJet, t: &GenJet) -> GenJet {
        match kind {
            GenConnectionKind::Hat => GenJet {
                x: self.nabla_vector(&s.x, &t.x),
                a: self.flat(&self.nabla_vector(&s.x, &self.sharp(&t.a))),
            },
            GenConnectionKind::Check => GenJet {
                x: self.nabla_vector(&s.x, &t.x),
                a: self.nabla_covector(&s.x, &t.a),
            },
            GenConnectionKind::HatDual => GenJet {
                x: self.sharp(&self.nabla_covector(&s.x, &self.flat(&t.x))),
                a: self.nabla_covector(&s.x, &t.a),
            },
        }
    }

    /// T^D(σ, τ) = D_σ τ − D_τ σ − [σ, τ]_∇.
    pub fn gen_torsion(&self, kind: GenConnectionKind, s: &GenJet, t: &GenJet) -> GenJet {
        self.connection(kind, s, t)
            .sub(&self.connection(kind, t, s))
            .sub(&self.bracket(s, t))
    }

    /// (D_σ ĥ)(τ, ν) = X(ĥ(τ, ν)) − ĥ(D_σ τ, ν) − ĥ(τ, D_σ ν).
    pub fn nabla_pairing(
        &self,
        kind: GenConnectionKind,
        pk: PairingKind,
        s: &GenJet,
        t: &GenJet,
        v: &GenJet,
    ) -> f64 {
        let direct = self.derivative(&s.x, &self.pairing(pk, t, v)).value();
        direct
            - self.pairing_value(pk, &self.connection(kind, s, t), v)
            - self.pairing_value(pk, t, &self.connection(kind, s, v))
    }

    /// (d^D ĥ)(σ, τ, ν) = (D_σ ĥ)(τ, ν) − (D_τ ĥ)(σ, ν) + ĥ(T^D(σ, τ), ν).
    pub fn gen_d(
        &self,
        kind: GenConnectionKind,
        pk: PairingKind,
        s: &GenJet,
        t: &GenJet,
        v: &GenJet,
    ) -> f64 {
        self.nabla_pairing(kind, pk, s, t, v) - self.nabla_pairing(kind, pk, t, s, v)
            + self.pairing_value(pk, &self.gen_torsion(kind, s, t), v)
    }

    /// R^D(σ, τ)ν = D_σ D_τ ν − D_τ D_σ ν − D_{[σ,τ]_∇} ν.
    pub fn gen_curvature(
        &self,
        kind: GenConnectionKind,
        s: &GenJet,
        t: &GenJet,
        v: &GenJet,
    ) -> GenJet {
        let st = self.connection(kind, s, &self.connection(kind, t, v));
        let ts = self.connection(kind, t, &self.connection(kind, s, v));
        let br = self.connection(kind, &self.bracket(s, t), v);
        st.sub(&ts).sub(&br)
    }

    /// R(X, Y)Z with vector arguments given by values.
    pub fn curvature_vector(&self, x: &[f64], y: &[f64], z: &[f64]) -> Vec<f64> {
        let n = self.n;
        (0..n)
            .map(|l| {
                let mut acc = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            acc += self.curvature.get(&[l, i, j, k]) * x[i] * y[j] * z[k];
                        }
                    }
                }
                acc
            })
            .collect()
    }

    /// (R(X, Y)γ)_k = −γ_l R^l_{ijk} X^i Y^j.
    pub fn curvature_covector(&self, x: &[f64], y: &[f64], g: &[f64]) -> Vec<f64> {
        let n = self.n;
        (0..n)
            .map(|k| {
                let mut acc = 0.0;
                for l in 0..n {
                    for i in 0..n {
                        for j in 0..n {
                            acc -= g[l] * self.curvature.get(&[l, i, j, k]) * x[i] * y[j];
                        }
                    }
                }
                acc
            })
            .collect()
    }

    pub fn flat_values(&self, x: &[f64]) -> Vec<f64> {
        let h = &self.h_val;
        (0..self.n)
            .map(|j| (0..self.n).map(|i| x[i] * h[i][j]).sum())
            .collect()
    }

    pub fn sharp_values(&self, a: &[f64]) -> Vec<f64> {
        let hi = &self.h_inv_val;
        (0..self.n)
            .map(|i| (0..self.n).map(|j| hi[j][i] * a[j]).sum())
            .collect()
    }

    /// R^D(σ, τ)ν from the conjugation formulas: for D = ∇̂,
    /// (R(X,Y)Z, h(R(X,Y)h⁻¹γ)); for ∇̂*, (h⁻¹(R(X,Y)h(Z)), R(X,Y)γ); for ∇̌,
    /// (R(X,Y)Z, R(X,Y)γ). Returned as vector values followed by covector values.
    pub fn curvature_closed(
        &self,
        kind: GenConnectionKind,
        s: &GenJet,
        t: &GenJet,
        v: &GenJet,
    ) -> Vec<f64> {
        let (x, y) = (s.vector_values(), t.vector_values());
        let (z, g) = (v.vector_values(), v.covector_values());
        let (vec_part, cov_part) = match kind {
            GenConnectionKind::Hat => (
                self.curvature_vector(&x, &y, &z),
                self.flat_values(&self.curvature_vector(&x, &y, &self.sharp_values(&g))),
            ),
            GenConnectionKind::HatDual => (
                self.sharp_values(&self.curvature_covector(&x, &y, &self.flat_values(&z))),
                self.curvature_covector(&x, &y, &g),
            ),
            GenConnectionKind::Check => (
                self.curvature_vector(&x, &y, &z),
                self.curvature_covector(&x, &y, &g),
            ),
        };
        vec_part.into_iter().chain(cov_part).collect()
    }

    /// (D_σ Ĵ)τ = D_σ(Ĵτ) − Ĵ(D_σ τ).
    pub fn parallel_defect(
        &self,
        which: Structure,
        kind: GenConnectionKind,
        s: &GenJet,
        t: &GenJet,
    ) -> GenJet {
        self.connection(kind, s, &self.j_apply(which, t))
            .sub(&self.j_apply(which, &self.connection(kind, s, t)))
    }

    /// Gram matrix of a pairing on the basis {∂i, dx^j} at this point.
    pub fn gram(&self, pk: PairingKind) -> &[Vec<f64>] {
        &self.grams[pk as usize]
    }

    /// The dual of `base` with respect to `pk`, evaluated on (σ, ν) by
    /// solving ĥ(τ_b, D*_σ ν) = X(ĥ(τ_b, ν)) − ĥ(D_σ τ_b, ν) over the constant
    /// basis sections τ_b. Returns vector values followed by covector values.
    pub fn dual_implicit(
        &self,
        pk: PairingKind,
        base: GenConnectionKind,
        s: &GenJet,
        v: &GenJet,
    ) -> Result<Vec<f64>, GeometryError> {
        let rhs: Vec<f64> = self
            .basis
            .iter()
            .map(|tb| {
                self.derivative(&s.x, &self.pairing(pk, tb, v)).value()
                    - self.pairing_value(pk, &self.connection(base, s, tb), v)
            })
            .collect();
        linalg::solve(self.gram(pk), &rhs)
            .ok_or_else(|| GeometryError::Invalid("pairing Gram matrix is singular".into()))
    }

    pub fn zero_section(&self) -> GenJet {
        GenJet {
            x: vec![self.zero(); self.n],
            a: vec![self.zero(); self.n],
        }
    }
}
