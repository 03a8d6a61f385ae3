//! Small dense linear algebra on `f64`, on jets, and on expression trees.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::expr::{ExprAst, Jet2};

pub type Matrix = Vec<Vec<f64>>;

trait Entry:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn magnitude(&self) -> f64;
}

impl Entry for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Entry for Jet2 {
    fn magnitude(&self) -> f64 {
        self.value().abs()
    }
}

/// Gauss-Jordan inversion with partial pivoting. Returns `None` when a pivot
/// falls below `1e-14` times the largest entry.
fn invert_generic<T: Entry>(m: &[Vec<T>], zero: T, one: T) -> Option<Vec<Vec<T>>> {
    let n = m.len();
    let scale = m
        .iter()
        .flatten()
        .map(Entry::magnitude)
        .fold(0.0_f64, f64::max);
    if scale == 0.0 {
        return None;
    }
    let mut a: Vec<Vec<T>> = m.to_vec();
    let mut inv: Vec<Vec<T>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { one } else { zero }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| a[r][col].magnitude().total_cmp(&a[s][col].magnitude()))
            .expect("non-empty range");
        if a[pivot][col].magnitude() <= 1e-14 * scale {
            return None;
        }
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col];
        for j in 0..n {
            a[col][j] = a[col][j] / p;
            inv[col][j] = inv[col][j] / p;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r][col];
            if f.magnitude() == 0.0 {
                continue;
            }
            for j in 0..n {
                a[r][j] = a[r][j] - f * a[col][j];
                inv[r][j] = inv[r][j] - f * inv[col][j];
            }
        }
    }
    Some(inv)
}

pub fn invert(m: &[Vec<f64>]) -> Option<Matrix> {
    invert_generic(m, 0.0, 1.0)
}

/// Inverse of a matrix of jets; derivatives of the inverse come out exact.
pub fn invert_jets(m: &[Vec<Jet2>]) -> Option<Vec<Vec<Jet2>>> {
    let dim = m.first()?.first()?.dim();
    invert_generic(m, Jet2::constant(dim, 0.0), Jet2::constant(dim, 1.0))
}

pub fn solve(m: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let inv = invert(m)?;
    Some(mat_vec(&inv, b))
}

pub fn det(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))
            .expect("non-empty range");
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(col, pivot);
            d = -d;
        }
        d *= a[col][col];
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for j in col..n {
                a[r][j] -= f * a[col][j];
            }
        }
    }
    d
}

pub fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Matrix {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * brow[j]).sum())
                .collect()
        })
        .collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

pub fn max_abs(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, v| {
        if v.is_nan() || m.is_nan() {
            f64::NAN
        } else {
            m.max(v.abs())
        }
    })
}

fn minor<T: Clone>(m: &[Vec<T>], row: usize, col: usize) -> Vec<Vec<T>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|(j, _)| *j != col)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

/// Determinant as an expression, by cofactor expansion along the first row.
pub fn det_ast(m: &[Vec<ExprAst>]) -> ExprAst {
    match m.len() {
        0 => ExprAst::one(),
        1 => m[0][0].clone(),
        _ => ExprAst::sum((0..m.len()).map(|j| {
            let term = ExprAst::mul(m[0][j].clone(), det_ast(&minor(m, 0, j)));
            if j % 2 == 0 {
                term
            } else {
                ExprAst::neg(term)
            }
        })),
    }
}

/// Inverse as adjugate over determinant. Intended for the small matrices of
/// base charts; the tree grows factorially with the size.
pub fn inverse_ast(m: &[Vec<ExprAst>]) -> Vec<Vec<ExprAst>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![ExprAst::div(ExprAst::one(), m[0][0].clone())]];
    }
    let d = det_ast(m);
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    // (A⁻¹)_{ij} = C_{ji} / det
                    let c = det_ast(&minor(m, j, i));
                    let c = if (i + j) % 2 == 0 { c } else { ExprAst::neg(c) };
                    ExprAst::div(c, d.clone())
                })
                .collect()
        })
        .collect()
}
