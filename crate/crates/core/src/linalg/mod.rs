//! Matrices over R: triangulation, lower-triangular-separable rewriting,
//! valuation normalization and row-space comparison; dense 𝔽_d matrices.

pub mod fd;
mod rmatrix;
mod rowspace;
mod separable;
mod triangulate;
mod vddku;

pub use fd::FdMatrix;
pub use rmatrix::RMatrix;
pub use rowspace::{mat_rowspace_equal, near_zero_equal, rowspace_contains, saturated_rank, saturated_span_equal, separable_rank};
pub use separable::{lower_separable, LowerSeparable};
pub use triangulate::{triangulate, Triangulation};
pub use vddku::{laurent_rank, vddku, Vddku};
