use super::{BinaryOp, ExprAst, ExprError, Function, Jet2};

/// Number types an expression can be evaluated on.
trait Scalar: Copy {
    fn constant(dim: usize, v: f64) -> Self;
    fn variable(dim: usize, i: usize, v: f64) -> Self;
    fn value(&self) -> f64;
    fn add(self, o: Self) -> Self;
    fn sub(self, o: Self) -> Self;
    fn mul(self, o: Self) -> Self;
    fn div(self, o: Self) -> Self;
    fn neg(self) -> Self;
    /// Applies a scalar function given f, f', f'' at the current value.
    fn chain(self, f0: f64, f1: f64, f2: f64) -> Self;
    const NEEDS_DERIVATIVES: bool;
}

impl Scalar for f64 {
    fn constant(_: usize, v: f64) -> Self {
        v
    }
    fn variable(_: usize, _: usize, v: f64) -> Self {
        v
    }
    fn value(&self) -> f64 {
        *self
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn sub(self, o: Self) -> Self {
        self - o
    }
    fn mul(self, o: Self) -> Self {
        self * o
    }
    fn div(self, o: Self) -> Self {
        self / o
    }
    fn neg(self) -> Self {
        -self
    }
    fn chain(self, f0: f64, _: f64, _: f64) -> Self {
        f0
    }
    const NEEDS_DERIVATIVES: bool = false;
}

impl Scalar for Jet2 {
    fn constant(dim: usize, v: f64) -> Self {
        Jet2::constant(dim, v)
    }
    fn variable(dim: usize, i: usize, v: f64) -> Self {
        Jet2::variable(dim, i, v)
    }
    fn value(&self) -> f64 {
        Jet2::value(self)
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn sub(self, o: Self) -> Self {
        self - o
    }
    fn mul(self, o: Self) -> Self {
        self * o
    }
    fn div(self, o: Self) -> Self {
        self / o
    }
    fn neg(self) -> Self {
        -self
    }
    fn chain(self, f0: f64, f1: f64, f2: f64) -> Self {
        Jet2::chain(&self, f0, f1, f2)
    }
    const NEEDS_DERIVATIVES: bool = true;
}

fn domain(node: &ExprAst, reason: &str) -> ExprError {
    ExprError::Domain {
        node: node.display(&[]).to_string(),
        reason: reason.to_string(),
    }
}

fn is_integer(e: f64) -> bool {
    e.fract() == 0.0 && e.abs() < 1e9
}

fn eval_node<S: Scalar>(node: &ExprAst, point: &[f64]) -> Result<S, ExprError> {
    let dim = point.len();
    let out = match node {
        ExprAst::Num(v) => S::constant(dim, *v),
        ExprAst::Const(c) => S::constant(dim, c.value()),
        ExprAst::Var(i) => {
            if *i >= dim {
                return Err(ExprError::PointDimension {
                    expected: i + 1,
                    got: dim,
                });
            }
            S::variable(dim, *i, point[*i])
        }
        ExprAst::Neg(a) => eval_node::<S>(a, point)?.neg(),
        ExprAst::Binary(op, a, b) => {
            let x = eval_node::<S>(a, point)?;
            let y = eval_node::<S>(b, point)?;
            match op {
                BinaryOp::Add => x.add(y),
                BinaryOp::Sub => x.sub(y),
                BinaryOp::Mul => x.mul(y),
                BinaryOp::Div => {
                    if y.value() == 0.0 {
                        return Err(domain(node, "division by zero"));
                    }
                    x.div(y)
                }
            }
        }
        ExprAst::Pow(a, e) => {
            let x = eval_node::<S>(a, point)?;
            let b = x.value();
            let e = *e;
            if is_integer(e) {
                if b == 0.0 && e < 0.0 {
                    return Err(domain(node, "zero raised to a negative power"));
                }
                let n = e as i32;
                let f1 = if n == 0 { 0.0 } else { e * b.powi(n - 1) };
                let f2 = if n == 0 || n == 1 {
                    0.0
                } else {
                    e * (e - 1.0) * b.powi(n - 2)
                };
                x.chain(b.powi(n), f1, f2)
            } else {
                if b <= 0.0 {
                    return Err(domain(node, "non-integer power of a non-positive base"));
                }
                x.chain(
                    b.powf(e),
                    e * b.powf(e - 1.0),
                    e * (e - 1.0) * b.powf(e - 2.0),
                )
            }
        }
        ExprAst::Call(f, a) => {
            let x = eval_node::<S>(a, point)?;
            let v = x.value();
            match f {
                Function::Sin => x.chain(v.sin(), v.cos(), -v.sin()),
                Function::Cos => x.chain(v.cos(), -v.sin(), -v.cos()),
                Function::Exp => {
                    let ev = v.exp();
                    x.chain(ev, ev, ev)
                }
                Function::Log => {
                    if v <= 0.0 {
                        return Err(domain(node, "log of a non-positive value"));
                    }
                    x.chain(v.ln(), 1.0 / v, -1.0 / (v * v))
                }
                Function::Sqrt => {
                    if v < 0.0 || (S::NEEDS_DERIVATIVES && v == 0.0) {
                        return Err(domain(node, "sqrt outside its differentiable domain"));
                    }
                    let s = v.sqrt();
                    let f1 = if S::NEEDS_DERIVATIVES { 0.5 / s } else { 0.0 };
                    let f2 = if S::NEEDS_DERIVATIVES {
                        -0.25 / (s * v)
                    } else {
                        0.0
                    };
                    x.chain(s, f1, f2)
                }
            }
        }
    };
    if !out.value().is_finite() {
        return Err(domain(node, "non-finite value"));
    }
    Ok(out)
}

impl ExprAst {
    /// Value at `point`. The point must cover every referenced variable.
    pub fn eval(&self, point: &[f64]) -> Result<f64, ExprError> {
        eval_node::<f64>(self, point)
    }

    /// Value, gradient and Hessian at `point`, with respect to all
    /// `point.len()` coordinates.
    pub fn eval_jet2(&self, point: &[f64]) -> Result<Jet2, ExprError> {
        eval_node::<Jet2>(self, point)
    }
}
