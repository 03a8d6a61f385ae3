#![allow(clippy::needless_range_loop)]
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qstat_core::catalog;
use qstat_core::expr::{ExprAst, Function, Jet2};
use qstat_core::geometry::ManifoldSpec;
use qstat_core::manifest::Manifest;

pub fn coords(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

pub fn entry(name: &str) -> ManifoldSpec {
    catalog::builtin(name)
        .unwrap_or_else(|e| panic!("{e}"))
        .spec
}

pub fn spec_from_json(json: &str) -> ManifoldSpec {
    Manifest::from_json(json)
        .unwrap()
        .to_validated_spec()
        .unwrap()
}

/// A 2-dimensional spec with a non-constant symmetric metric and a generic
/// torsionful connection, so nothing vanishes by accident.
pub fn generic2() -> ManifoldSpec {
    spec_from_json(
        r#"{
            "label": "generic2",
            "dimension": 2,
            "coordinates": ["x1", "x2"],
            "metric": [["2+x1^2", "x1*x2"], ["x1*x2", "1+x2^2"]],
            "symmetry": "symmetric",
            "connection": {"1,1,1": "x2", "1,1,2": "sin(x1)", "2,2,1": "x1*x2", "2,1,1": "0.5", "1,2,2": "cos(x2)"},
            "domain": [[-1, 1], [-1, 1]]
        }"#,
    )
}

/// Random smooth expression in `n` variables that is finite on [−1, 1]^n.
pub fn random_expr(rng: &mut ChaCha8Rng, n: usize, depth: usize) -> ExprAst {
    if depth == 0 || rng.gen_bool(0.2) {
        return if rng.gen_bool(0.7) {
            ExprAst::var(rng.gen_range(0..n))
        } else {
            ExprAst::num((rng.gen_range(-2.0..2.0_f64) * 8.0).round() / 8.0)
        };
    }
    let sub = |rng: &mut ChaCha8Rng| random_expr(rng, n, depth - 1);
    match rng.gen_range(0..10) {
        0 => ExprAst::add(sub(rng), sub(rng)),
        1 => ExprAst::sub(sub(rng), sub(rng)),
        2 | 3 => ExprAst::mul(sub(rng), sub(rng)),
        4 => {
            let d = sub(rng);
            ExprAst::div(
                sub(rng),
                ExprAst::add(ExprAst::num(1.5), ExprAst::mul(d.clone(), d)),
            )
        }
        5 => ExprAst::call(Function::Sin, sub(rng)),
        6 => ExprAst::call(Function::Cos, sub(rng)),
        7 => ExprAst::call(Function::Exp, ExprAst::call(Function::Sin, sub(rng))),
        8 => {
            let a = sub(rng);
            let f = if rng.gen_bool(0.5) {
                Function::Log
            } else {
                Function::Sqrt
            };
            ExprAst::call(
                f,
                ExprAst::add(ExprAst::num(1.0), ExprAst::mul(a.clone(), a)),
            )
        }
        _ => {
            let base = ExprAst::add(random_expr(rng, n, 0), random_expr(rng, n, 0));
            ExprAst::pow(base, rng.gen_range(2..=3) as f64)
        }
    }
}

pub fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Central-difference gradient and Hessian of `f` at `p` with one
/// Richardson step (fourth-order truncation error).
pub fn fd_grad_hess(f: impl Fn(&[f64]) -> f64, p: &[f64], h: f64) -> (Vec<f64>, Vec<Vec<f64>>) {
    let (g1, h1) = central(&f, p, h);
    let (g2, h2) = central(&f, p, h / 2.0);
    let rich = |a: f64, b: f64| (4.0 * b - a) / 3.0;
    let grad = g1.iter().zip(&g2).map(|(a, b)| rich(*a, *b)).collect();
    let hess = h1
        .iter()
        .zip(&h2)
        .map(|(r1, r2)| r1.iter().zip(r2).map(|(a, b)| rich(*a, *b)).collect())
        .collect();
    (grad, hess)
}

fn central(f: &impl Fn(&[f64]) -> f64, p: &[f64], h: f64) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = p.len();
    let at = |shifts: &[(usize, f64)]| {
        let mut q = p.to_vec();
        for &(i, s) in shifts {
            q[i] += s;
        }
        f(&q)
    };
    let grad = (0..n)
        .map(|i| (at(&[(i, h)]) - at(&[(i, -h)])) / (2.0 * h))
        .collect();
    let mut hess = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            hess[i][j] = if i == j {
                (at(&[(i, h)]) - 2.0 * f(p) + at(&[(i, -h)])) / (h * h)
            } else {
                (at(&[(i, h), (j, h)]) - at(&[(i, h), (j, -h)]) - at(&[(i, -h), (j, h)])
                    + at(&[(i, -h), (j, -h)]))
                    / (4.0 * h * h)
            };
        }
    }
    (grad, hess)
}

/// Largest |ad − fd| / max(1, |ad|) over value, gradient and Hessian.
pub fn jet_vs_fd(jet: &Jet2, grad: &[f64], hess: &[Vec<f64>]) -> f64 {
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(1.0);
    let mut worst = 0.0_f64;
    for (i, g) in grad.iter().enumerate() {
        worst = worst.max(rel(jet.grad_at(i), *g));
        for (j, h) in hess[i].iter().enumerate() {
            worst = worst.max(rel(jet.hess(i, j), *h));
        }
    }
    worst
}
