//! Frobenius-twisted polynomials acting on Laurent series over finite fields.
//!
//! The ring R = 𝔽_d(X)[t; φ] of twisted polynomials acts on 𝔽_d((X)) by
//! x.(Σ tⁱaᵢ) = Σ x^(dⁱ) aᵢ. This crate provides exact arithmetic for that
//! action, its tropical shadow, Hensel solving, matrix normal forms over R,
//! pseudo-complements, quantifier elimination near zero, and the computation
//! of invariants |A / (A ∧ B)| for positive primitive formulas.

pub mod cli;
pub mod complement;
pub mod decide;
pub mod error;
pub mod hensel;
pub mod series;
pub mod linalg;
pub mod logic;
pub mod ore;
pub mod tropical;

pub use error::{Error, Result};
pub use ore::TwistedPoly;
pub use series::{Field, LaurentSeries};
pub use tropical::Trop;
