//! Arithmetic expressions over named chart coordinates.
//!
//! Component functions (metric entries, Christoffel symbols, frame vector
//! fields, section components) are stored as [`ExprAst`] trees and evaluated
//! to second-order jets, so every derivative the connection calculus needs is
//! exact.

mod eval;
mod jet;
mod parser;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

pub use jet::{sum_jets, Jet2, MAX_DIM};
pub use parser::parse;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("invalid coordinate list: {0}")]
    InvalidCoordinates(String),
    #[error("domain error in `{node}`: {reason}")]
    Domain { node: String, reason: String },
    #[error("point has {got} coordinates, expression expects {expected}")]
    PointDimension { expected: usize, got: usize },
    #[error("no substitution given for variable #{0}")]
    MissingMapping(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Function {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
}

impl Function {
    pub fn name(self) -> &'static str {
        match self {
            Function::Sin => "sin",
            Function::Cos => "cos",
            Function::Exp => "exp",
            Function::Log => "log",
            Function::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Function::Sin,
            "cos" => Function::Cos,
            "exp" => Function::Exp,
            "log" => Function::Log,
            "sqrt" => Function::Sqrt,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constant {
    Pi,
    E,
}

impl Constant {
    pub fn value(self) -> f64 {
        match self {
            Constant::Pi => std::f64::consts::PI,
            Constant::E => std::f64::consts::E,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Constant::Pi => "pi",
            Constant::E => "e",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinaryOp {
    fn symbol(self) -> char {
        match self {
            BinaryOp::Add => '+',
            BinaryOp::Sub => '-',
            BinaryOp::Mul => '*',
            BinaryOp::Div => '/',
        }
    }
}

/// Expression tree. Variables are indices into the chart's coordinate list.
#[derive(Debug, Clone, PartialEq)]
pub enum ExprAst {
    Num(f64),
    Var(usize),
    Const(Constant),
    Neg(Box<ExprAst>),
    Binary(BinaryOp, Box<ExprAst>, Box<ExprAst>),
    /// `base ^ exponent`; non-integer exponents need a positive base.
    Pow(Box<ExprAst>, f64),
    Call(Function, Box<ExprAst>),
}

impl From<f64> for ExprAst {
    fn from(v: f64) -> Self {
        ExprAst::Num(v)
    }
}

// Constructors below drop exact-zero and exact-one operands so that trees
// assembled programmatically (lifted frames, inverse metrics) stay small.
#[allow(clippy::should_implement_trait)]
impl ExprAst {
    pub fn num(v: f64) -> Self {
        ExprAst::Num(v)
    }

    pub fn var(i: usize) -> Self {
        ExprAst::Var(i)
    }

    pub fn zero() -> Self {
        ExprAst::Num(0.0)
    }

    pub fn one() -> Self {
        ExprAst::Num(1.0)
    }

    /// True when the tree is the literal 0.
    pub fn is_zero(&self) -> bool {
        matches!(self, ExprAst::Num(v) if *v == 0.0)
    }

    pub fn is_one(&self) -> bool {
        matches!(self, ExprAst::Num(v) if *v == 1.0)
    }

    pub fn add(a: ExprAst, b: ExprAst) -> ExprAst {
        if a.is_zero() {
            b
        } else if b.is_zero() {
            a
        } else {
            ExprAst::Binary(BinaryOp::Add, Box::new(a), Box::new(b))
        }
    }

    pub fn sub(a: ExprAst, b: ExprAst) -> ExprAst {
        if b.is_zero() {
            a
        } else if a.is_zero() {
            ExprAst::neg(b)
        } else {
            ExprAst::Binary(BinaryOp::Sub, Box::new(a), Box::new(b))
        }
    }

    pub fn mul(a: ExprAst, b: ExprAst) -> ExprAst {
        if a.is_zero() || b.is_zero() {
            ExprAst::zero()
        } else if a.is_one() {
            b
        } else if b.is_one() {
            a
        } else {
            ExprAst::Binary(BinaryOp::Mul, Box::new(a), Box::new(b))
        }
    }

    pub fn div(a: ExprAst, b: ExprAst) -> ExprAst {
        if a.is_zero() {
            ExprAst::zero()
        } else if b.is_one() {
            a
        } else {
            ExprAst::Binary(BinaryOp::Div, Box::new(a), Box::new(b))
        }
    }

    pub fn neg(a: ExprAst) -> ExprAst {
        match a {
            ExprAst::Num(v) => ExprAst::Num(-v),
            ExprAst::Neg(inner) => *inner,
            other => ExprAst::Neg(Box::new(other)),
        }
    }

    pub fn pow(base: ExprAst, exponent: f64) -> ExprAst {
        if exponent == 0.0 {
            ExprAst::one()
        } else if exponent == 1.0 {
            base
        } else if base.is_zero() && exponent > 0.0 {
            ExprAst::zero()
        } else {
            ExprAst::Pow(Box::new(base), exponent)
        }
    }

    pub fn call(f: Function, arg: ExprAst) -> ExprAst {
        ExprAst::Call(f, Box::new(arg))
    }

    /// Sum of many terms, skipping literal zeros.
    pub fn sum<I: IntoIterator<Item = ExprAst>>(terms: I) -> ExprAst {
        terms.into_iter().fold(ExprAst::zero(), ExprAst::add)
    }

    /// Largest variable index referenced, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            ExprAst::Num(_) | ExprAst::Const(_) => None,
            ExprAst::Var(i) => Some(*i),
            ExprAst::Neg(a) | ExprAst::Pow(a, _) | ExprAst::Call(_, a) => a.max_var(),
            ExprAst::Binary(_, a, b) => match (a.max_var(), b.max_var()) {
                (Some(x), Some(y)) => Some(x.max(y)),
                (x, y) => x.or(y),
            },
        }
    }

    /// Node count, mostly useful for diagnostics.
    pub fn size(&self) -> usize {
        match self {
            ExprAst::Num(_) | ExprAst::Const(_) | ExprAst::Var(_) => 1,
            ExprAst::Neg(a) | ExprAst::Pow(a, _) | ExprAst::Call(_, a) => 1 + a.size(),
            ExprAst::Binary(_, a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Replaces every variable by its image. Images must be expressed over the
    /// new coordinate list.
    pub fn substitute(&self, map: &BTreeMap<usize, ExprAst>) -> Result<ExprAst, ExprError> {
        Ok(match self {
            ExprAst::Num(v) => ExprAst::Num(*v),
            ExprAst::Const(c) => ExprAst::Const(*c),
            ExprAst::Var(i) => map.get(i).cloned().ok_or(ExprError::MissingMapping(*i))?,
            ExprAst::Neg(a) => ExprAst::Neg(Box::new(a.substitute(map)?)),
            ExprAst::Binary(op, a, b) => ExprAst::Binary(
                *op,
                Box::new(a.substitute(map)?),
                Box::new(b.substitute(map)?),
            ),
            ExprAst::Pow(a, e) => ExprAst::Pow(Box::new(a.substitute(map)?), *e),
            ExprAst::Call(f, a) => ExprAst::Call(*f, Box::new(a.substitute(map)?)),
        })
    }

    /// Symbolic partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> ExprAst {
        match self {
            ExprAst::Num(_) | ExprAst::Const(_) => ExprAst::zero(),
            ExprAst::Var(i) => {
                if *i == var {
                    ExprAst::one()
                } else {
                    ExprAst::zero()
                }
            }
            ExprAst::Neg(a) => ExprAst::neg(a.derivative(var)),
            ExprAst::Binary(op, a, b) => {
                let (da, db) = (a.derivative(var), b.derivative(var));
                let (a, b) = ((**a).clone(), (**b).clone());
                match op {
                    BinaryOp::Add => ExprAst::add(da, db),
                    BinaryOp::Sub => ExprAst::sub(da, db),
                    BinaryOp::Mul => ExprAst::add(ExprAst::mul(da, b), ExprAst::mul(a, db)),
                    BinaryOp::Div => {
                        // (a/b)' = a'/b - a b' / b^2
                        let first = ExprAst::div(da, b.clone());
                        let second = ExprAst::div(ExprAst::mul(a, db), ExprAst::pow(b, 2.0));
                        ExprAst::sub(first, second)
                    }
                }
            }
            ExprAst::Pow(a, e) => {
                let da = a.derivative(var);
                if da.is_zero() {
                    return ExprAst::zero();
                }
                ExprAst::mul(
                    ExprAst::mul(ExprAst::num(*e), ExprAst::pow((**a).clone(), e - 1.0)),
                    da,
                )
            }
            ExprAst::Call(f, a) => {
                let da = a.derivative(var);
                if da.is_zero() {
                    return ExprAst::zero();
                }
                let a = (**a).clone();
                let outer = match f {
                    Function::Sin => ExprAst::call(Function::Cos, a),
                    Function::Cos => ExprAst::neg(ExprAst::call(Function::Sin, a)),
                    Function::Exp => ExprAst::call(Function::Exp, a),
                    Function::Log => ExprAst::div(ExprAst::one(), a),
                    Function::Sqrt => {
                        ExprAst::div(ExprAst::num(0.5), ExprAst::call(Function::Sqrt, a))
                    }
                };
                ExprAst::mul(outer, da)
            }
        }
    }

    /// Renders the tree with coordinate names. The output re-parses to a tree
    /// with identical evaluation.
    pub fn display<'a>(&'a self, coords: &'a [String]) -> DisplayExpr<'a> {
        DisplayExpr { ast: self, coords }
    }
}

/// Pretty-printer returned by [`ExprAst::display`].
pub struct DisplayExpr<'a> {
    ast: &'a ExprAst,
    coords: &'a [String],
}

fn write_number(f: &mut fmt::Formatter<'_>, v: f64) -> fmt::Result {
    if v < 0.0 || (v == 0.0 && v.is_sign_negative()) {
        write!(f, "(-{:?})", -v)
    } else {
        write!(f, "{:?}", v)
    }
}

impl fmt::Display for DisplayExpr<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords = self.coords;
        let sub = |ast| DisplayExpr { ast, coords };
        match self.ast {
            ExprAst::Num(v) => write_number(f, *v),
            ExprAst::Var(i) => match self.coords.get(*i) {
                Some(name) => write!(f, "{name}"),
                None => write!(f, "#{i}"),
            },
            ExprAst::Const(c) => write!(f, "{}", c.name()),
            ExprAst::Neg(a) => write!(f, "(-{})", sub(a)),
            ExprAst::Binary(op, a, b) => {
                write!(f, "({} {} {})", sub(a), op.symbol(), sub(b))
            }
            ExprAst::Pow(a, e) => {
                write!(f, "({})^", sub(a))?;
                write_number(f, *e)
            }
            ExprAst::Call(func, a) => write!(f, "{}({})", func.name(), sub(a)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coords(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn substitute_renames_variable() {
        let c1 = coords(&["x1"]);
        let c2 = coords(&["x1", "y1"]);
        let ast = parse("x1+1", &c1).unwrap();
        let map = BTreeMap::from([(0, ExprAst::var(1))]);
        let out = ast.substitute(&map).unwrap();
        assert_eq!(out, parse("y1+1", &c2).unwrap());
    }

    #[test]
    fn substitute_composes() {
        let c1 = coords(&["x1"]);
        let c2 = coords(&["x1", "y1"]);
        let ast = parse("x1^2", &c1).unwrap();
        let image = parse("x1+y1", &c2).unwrap();
        let out = ast.substitute(&BTreeMap::from([(0, image)])).unwrap();
        assert_eq!(out.eval(&[1.0, 2.0]).unwrap(), 9.0);
    }

    #[test]
    fn substitute_identity_extends_chart() {
        let c1 = coords(&["x1"]);
        let ast = parse("x1^2", &c1).unwrap();
        let out = ast
            .substitute(&BTreeMap::from([(0, ExprAst::var(0))]))
            .unwrap();
        let jet = out.eval_jet2(&[3.0, -1.0]).unwrap();
        assert_eq!(jet.value(), 9.0);
        assert_eq!(jet.grad(), &[6.0, 0.0]);
    }

    #[test]
    fn substitute_reports_missing_mapping() {
        let c = coords(&["x1", "x2"]);
        let ast = parse("x1*x2", &c).unwrap();
        let err = ast
            .substitute(&BTreeMap::from([(0, ExprAst::var(0))]))
            .unwrap_err();
        assert_eq!(err, ExprError::MissingMapping(1));
    }

    #[test]
    fn symbolic_derivative_agrees_with_jet_gradient() {
        let c = coords(&["x1", "x2"]);
        let ast = parse("sin(x1*x2)/(2+x2^2) + sqrt(3+x1^2) - log(2+cos(x2))", &c).unwrap();
        let p = [0.3, -0.7];
        let jet = ast.eval_jet2(&p).unwrap();
        for v in 0..2 {
            let d = ast.derivative(v).eval_jet2(&p).unwrap();
            assert!((d.value() - jet.grad_at(v)).abs() < 1e-14);
            for w in 0..2 {
                assert!((d.grad_at(w) - jet.hess(v, w)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn display_round_trips_negative_literals() {
        let c = coords(&["x1"]);
        let ast = parse("-2.5*x1^-2 - 1e-7", &c).unwrap();
        let text = ast.display(&c).to_string();
        let back = parse(&text, &c).unwrap();
        assert_eq!(back.eval(&[1.3]).unwrap(), ast.eval(&[1.3]).unwrap());
    }
}
