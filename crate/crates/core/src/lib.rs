//! Homological measurement of logical Pauli operators in CSS codes.
//!
//! The crate builds ancilla systems whose mapping cone with a CSS code
//! measures a chosen logical operator, and checks the resulting merged code.

pub mod codelib;
pub mod css;
pub mod f2la;
pub mod homology;
pub mod hypergraph;
pub mod protocol;
pub mod surgery;

pub use css::{CssCode, Distance, PauliOperator, Sector, SymplecticCode};
pub use f2la::{BitMatrix, BitVec};
