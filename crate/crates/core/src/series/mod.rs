//! 𝔽_d and truncated Laurent series over it.

mod field;
mod laurent;

pub use field::{Field, MAX_D};
pub use laurent::LaurentSeries;

use rand::Rng;

/// Working precision used when none is given.
pub const DEFAULT_PRECISION: i64 = 64;

/// Field plus the default precision and coefficient window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FieldConfig {
    pub field: Field,
    pub precision: i64,
    pub window: i64,
}

impl FieldConfig {
    pub fn new(field: Field) -> Self {
        FieldConfig { field, precision: DEFAULT_PRECISION, window: 32 }
    }
}

/// Random exact polynomial with support in [lo, hi).
pub fn random_poly<R: Rng + ?Sized>(field: Field, rng: &mut R, lo: i64, hi: i64) -> LaurentSeries {
    let coeffs = (lo..hi).map(|_| rng.gen_range(0..field.d())).collect();
    LaurentSeries::from_coeffs(field, lo, coeffs, crate::tropical::Inf)
}

/// Random exact polynomial with at most `terms` nonzero monomials in [lo, hi).
pub fn random_sparse<R: Rng + ?Sized>(
    field: Field,
    rng: &mut R,
    lo: i64,
    hi: i64,
    terms: usize,
) -> LaurentSeries {
    let pairs: Vec<(i64, u32)> =
        (0..terms).map(|_| (rng.gen_range(lo..hi), rng.gen_range(1..field.d()))).collect();
    LaurentSeries::from_terms(field, &pairs)
}
