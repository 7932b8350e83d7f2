//! Harmonic analysis on truncated compact quantum groups.
//!
//! Given the irreducible corepresentation data of a compact quantum group
//! (dimensions, F-matrix eigenvalues, conjugates, fusion rules) this crate
//! realises the convolution algebras L¹(𝔾) and L²(𝔾) on the
//! matrix-coefficient basis, together with characters, quantum characters,
//! the conjugation projection onto central vectors, the projection onto the
//! centre of L²(𝔾), and, for Kac algebras, the central projection of L¹(𝔾).
//! [`verify::run_suite`] checks every identity numerically.

pub mod element;
mod error;
pub mod fusion_data;
pub mod instances;
pub mod l1_algebra;
pub mod l2_space;
pub mod random;
pub mod verify;

pub use element::{AnyElement, BasisKey, CoefficientElement, Element, L1Element, L2Vector};
pub use error::{Error, Result};
pub use fusion_data::{CharacterRingElement, IrrepInfo, IrrepLabel, QuantumGroupData};
pub use instances::Instance;
