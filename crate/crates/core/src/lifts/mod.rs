//! Cotangent and tangent bundles as explicit 2n-dimensional charts with
//! horizontal/vertical frames, the lift metrics, and the connections ∇̃ and ∇̃̃
//! induced from the generalized bundle.
//!
//! Lifted points are `[x1..xn, y1..yn]`. Frame index `i < n` is the
//! horizontal lift X_i^H, frame index `n + j` the vertical vector ∂/∂y_j.

mod chart;
mod closed;
mod metric;
mod suite;

use serde::{Deserialize, Serialize};

pub use chart::{
    lifted_connection, tilde_connection, tilde_tilde_connection, LiftedChart, Morphism,
};
pub use closed::{curvature_display, d_display, torsion_display};
pub use metric::{pullback_to_genbundle, LiftedMetric, MetricKind};
pub use suite::lifted_invariant_suite;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bundle {
    Cotangent,
    Tangent,
}

impl Bundle {
    /// Short tag used in check ids.
    pub fn tag(self) -> &'static str {
        match self {
            Bundle::Cotangent => "cot",
            Bundle::Tangent => "tan",
        }
    }
}

impl std::fmt::Display for Bundle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Bundle::Cotangent => "cotangent",
            Bundle::Tangent => "tangent",
        })
    }
}
