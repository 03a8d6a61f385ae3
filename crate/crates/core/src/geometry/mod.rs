//! Charts, frames and the connection calculus.
//!
//! Everything is frame-generic: a [`FramedConnection`] stores Γ^c_{ab} with
//! ∇_{e_a} e_b = Γ^c_{ab} e_c in a frame of explicit vector fields, and the
//! torsion, curvature and metric derivatives include the frame structure
//! functions. A base manifold in coordinates is the special case of the
//! coordinate frame.
//!
//! Index conventions: R(e_a, e_b) e_c = R^d_{abc} e_d and
//! (d^∇g)(X, Y, Z) = (∇_X g)(Y, Z) − (∇_Y g)(X, Z) + g(T(X, Y), Z).

mod classify;
mod connection;
mod frame;
mod musical;
mod spec;
mod tensor;

use thiserror::Error;

use crate::expr::ExprError;

pub use classify::{classify, classify_points, Classification};
pub use connection::{metric_jets, ConnectionPoint, FramedConnection};
pub use frame::{frame_bracket, FrameField, FramePoint};
pub use musical::{musical_flat, musical_sharp};
pub use spec::{ManifoldSpec, Symmetry, MAX_BASE_DIM};
pub use tensor::{TensorValue, Valence};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("metric is degenerate at {point:?} (det = {det:e})")]
    Degenerate { point: Vec<f64>, det: f64 },
    #[error("frame matrix is singular at {point:?}")]
    SingularFrame { point: Vec<f64> },
    #[error("metric entries ({i},{j}) violate the declared symmetry class `{symmetry}` at {point:?} (defect {defect:e})")]
    SymmetryViolation {
        i: usize,
        j: usize,
        symmetry: Symmetry,
        point: Vec<f64>,
        defect: f64,
    },
    #[error("invalid manifold data: {0}")]
    Invalid(String),
}
