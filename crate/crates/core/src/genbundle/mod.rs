//! The generalized tangent bundle TM ⊕ T*M over a base (h, ∇): pairings,
//! the structures Ĵ_c and Ĵ_p, the ∇-bracket and its Nijenhuis tensor, the
//! induced connections ∇̂, ∇̌, ∇̂* and their torsion, curvature and d^D ĥ.

mod point;
mod section;
mod suite;

pub use point::{GenConnectionKind, GenPoint, PairingKind, Structure};
pub use section::{GenJet, GeneralizedSection};
pub use suite::{generalized_suite, test_sections};
