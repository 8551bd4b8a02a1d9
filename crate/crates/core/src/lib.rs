//! A window-bounded combinatorics engine for Nash-Williams barriers on the
//! naturals: symbolic ordinal ranks of finitely coded barriers, barrier
//! algebra, Ramsey-style partition searches, double-arrow witness synthesis
//! and verification, and Hechler-tree machinery for the associated ideals.
//!
//! Infinite quantifiers are truncated to a [`sets::Window`]; every search
//! emits a certificate that an independent exhaustive checker re-verifies.

pub mod barrier;
pub mod embed;
pub mod ideals;
pub mod oracle;
pub mod ordinal;
pub mod ramsey;
pub mod sets;
pub mod verify;

pub use barrier::{BarrierCode, BarrierError, ParamRule, TailRule};
pub use ordinal::Ordinal;
pub use sets::{FiniteSet, SetDescriptor, Window};
