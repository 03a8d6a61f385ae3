//! Second-order forward-mode jets.
//!
//! A [`Jet2`] carries the value, gradient and Hessian of a scalar function of
//! up to [`MAX_DIM`] chart coordinates. Arithmetic propagates all three by the
//! usual product/quotient/chain rules, so evaluating an expression tree on
//! jets yields exact derivatives (up to rounding).
//!
//! Taking a partial derivative of a jet ([`Jet2::partial`]) lowers its exact
//! order by one. Derivatives that are no longer known are filled with NaN, so
//! any computation that silently needed a third derivative shows up as NaN
//! instead of a plausible wrong number.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

/// Largest chart dimension a jet can carry (base charts up to 4, lifted charts up to 8).
pub const MAX_DIM: usize = 8;

#[derive(Clone, Copy)]
pub struct Jet2 {
    dim: usize,
    order: u8,
    value: f64,
    grad: [f64; MAX_DIM],
    hess: [f64; MAX_DIM * MAX_DIM],
}

impl fmt::Debug for Jet2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hess: Vec<Vec<f64>> = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.hess(i, j)).collect())
            .collect();
        f.debug_struct("Jet2")
            .field("order", &self.order)
            .field("value", &self.value)
            .field("grad", &self.grad())
            .field("hess", &hess)
            .finish()
    }
}

impl Jet2 {
    #[inline]
    pub fn constant(dim: usize, value: f64) -> Self {
        assert!(dim <= MAX_DIM, "jet dimension {dim} exceeds {MAX_DIM}");
        Self {
            dim,
            order: 2,
            value,
            grad: [0.0; MAX_DIM],
            hess: [0.0; MAX_DIM * MAX_DIM],
        }
    }

    /// The coordinate function `x_index` evaluated at `value`.
    pub fn variable(dim: usize, index: usize, value: f64) -> Self {
        assert!(
            index < dim,
            "variable index {index} out of range for dimension {dim}"
        );
        let mut jet = Self::constant(dim, value);
        jet.grad[index] = 1.0;
        jet
    }

    /// Builds a jet from explicit parts. `hess` is row-major `dim × dim`.
    pub fn from_parts(value: f64, grad: &[f64], hess: &[f64]) -> Self {
        let dim = grad.len();
        assert_eq!(hess.len(), dim * dim);
        let mut jet = Self::constant(dim, value);
        jet.grad[..dim].copy_from_slice(grad);
        for i in 0..dim {
            for j in 0..dim {
                jet.hess[i * MAX_DIM + j] = hess[i * dim + j];
            }
        }
        jet
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of derivative orders known exactly (2 for freshly evaluated jets).
    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn grad(&self) -> &[f64] {
        &self.grad[..self.dim]
    }

    pub fn grad_at(&self, i: usize) -> f64 {
        self.grad[i]
    }

    pub fn hess(&self, i: usize, j: usize) -> f64 {
        self.hess[i * MAX_DIM + j]
    }

    /// Hessian as a dense row-major `dim × dim` matrix.
    pub fn hess_matrix(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.hess(i, j)).collect())
            .collect()
    }

    /// ∂f/∂x_i as a jet one order lower.
    pub fn partial(&self, i: usize) -> Self {
        assert!(i < self.dim);
        let mut out = Self::constant(self.dim, self.grad[i]);
        out.order = self.order.saturating_sub(1);
        for j in 0..self.dim {
            out.grad[j] = self.hess[i * MAX_DIM + j];
        }
        out.poison();
        out
    }

    /// Directional derivative Σ dir_i ∂_i f, with `dir` given as jets.
    pub fn directional(&self, dir: &[Jet2]) -> Self {
        let mut acc = Self::constant(self.dim, 0.0);
        for (i, d) in dir.iter().enumerate() {
            acc += *d * self.partial(i);
        }
        acc
    }

    /// Directional derivative along a constant vector (value only).
    pub fn directional_value(&self, dir: &[f64]) -> f64 {
        dir.iter().zip(self.grad()).map(|(d, g)| d * g).sum()
    }

    #[inline]
    fn poison(&mut self) {
        if self.order < 2 {
            for i in 0..self.dim {
                for j in 0..self.dim {
                    self.hess[i * MAX_DIM + j] = f64::NAN;
                }
            }
        }
        if self.order < 1 {
            for g in self.grad.iter_mut().take(self.dim) {
                *g = f64::NAN;
            }
        }
    }

    fn check_dims(&self, other: &Self) {
        assert_eq!(self.dim, other.dim, "jet dimension mismatch");
    }

    /// Applies a scalar function given its value and first two derivatives at `self.value`.
    pub fn chain(&self, f0: f64, f1: f64, f2: f64) -> Self {
        let n = self.dim;
        let mut out = Self::constant(n, f0);
        out.order = self.order;
        for i in 0..n {
            out.grad[i] = f1 * self.grad[i];
        }
        for i in 0..n {
            for j in i..n {
                let v = f2 * self.grad[i] * self.grad[j] + f1 * self.hess[i * MAX_DIM + j];
                out.hess[i * MAX_DIM + j] = v;
                out.hess[j * MAX_DIM + i] = v;
            }
        }
        out.poison();
        out
    }

    pub fn scale(&self, c: f64) -> Self {
        self.chain(c * self.value, c, 0.0)
    }

    pub fn recip(&self) -> Self {
        let v = self.value;
        self.chain(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v))
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    #[inline]
    fn add(self, rhs: Jet2) -> Jet2 {
        self.check_dims(&rhs);
        let n = self.dim;
        let mut out = Jet2::constant(n, self.value + rhs.value);
        out.order = self.order.min(rhs.order);
        for i in 0..n {
            out.grad[i] = self.grad[i] + rhs.grad[i];
            for j in 0..n {
                let k = i * MAX_DIM + j;
                out.hess[k] = self.hess[k] + rhs.hess[k];
            }
        }
        out.poison();
        out
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    #[inline]
    fn sub(self, rhs: Jet2) -> Jet2 {
        self + (-rhs)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    #[inline]
    fn neg(self) -> Jet2 {
        let mut out = self;
        out.value = -out.value;
        for i in 0..self.dim {
            out.grad[i] = -out.grad[i];
            for j in 0..self.dim {
                out.hess[i * MAX_DIM + j] = -out.hess[i * MAX_DIM + j];
            }
        }
        out
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    #[inline]
    fn mul(self, rhs: Jet2) -> Jet2 {
        self.check_dims(&rhs);
        let n = self.dim;
        let (a, b) = (self.value, rhs.value);
        let mut out = Jet2::constant(n, a * b);
        out.order = self.order.min(rhs.order);
        for i in 0..n {
            out.grad[i] = self.grad[i] * b + a * rhs.grad[i];
        }
        for i in 0..n {
            for j in i..n {
                let k = i * MAX_DIM + j;
                let v = self.hess[k] * b
                    + self.grad[i] * rhs.grad[j]
                    + rhs.grad[i] * self.grad[j]
                    + a * rhs.hess[k];
                out.hess[k] = v;
                out.hess[j * MAX_DIM + i] = v;
            }
        }
        out.poison();
        out
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    #[inline]
    fn div(self, rhs: Jet2) -> Jet2 {
        self.check_dims(&rhs);
        let n = self.dim;
        let b = rhs.value;
        let q = self.value / b;
        let mut out = Jet2::constant(n, q);
        out.order = self.order.min(rhs.order);
        for i in 0..n {
            out.grad[i] = (self.grad[i] - q * rhs.grad[i]) / b;
        }
        for i in 0..n {
            for j in i..n {
                let k = i * MAX_DIM + j;
                let v = (self.hess[k]
                    - out.grad[i] * rhs.grad[j]
                    - rhs.grad[i] * out.grad[j]
                    - q * rhs.hess[k])
                    / b;
                out.hess[k] = v;
                out.hess[j * MAX_DIM + i] = v;
            }
        }
        out.poison();
        out
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: f64) -> Jet2 {
        self.scale(rhs)
    }
}

impl Add<f64> for Jet2 {
    type Output = Jet2;
    fn add(self, rhs: f64) -> Jet2 {
        let mut out = self;
        out.value += rhs;
        out
    }
}

impl AddAssign for Jet2 {
    #[inline]
    fn add_assign(&mut self, rhs: Jet2) {
        *self = *self + rhs;
    }
}

impl SubAssign for Jet2 {
    fn sub_assign(&mut self, rhs: Jet2) {
        *self = *self - rhs;
    }
}

/// Sum of jets; `dim` is needed for the empty sum.
pub fn sum_jets<I: IntoIterator<Item = Jet2>>(dim: usize, items: I) -> Jet2 {
    items
        .into_iter()
        .fold(Jet2::constant(dim, 0.0), |acc, j| acc + j)
}
