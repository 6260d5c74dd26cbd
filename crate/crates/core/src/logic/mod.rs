//! λ-terms, positive primitive formulas, ball bounds and quantifier elimination near zero.

mod formula;
mod qe;
mod term;

pub use formula::{parse_formula_at, Atom, Normalized, PPFormula, QFLambdaFormula};
pub use qe::{division_ball, qe_near_zero, term_ball_bound, triangular_ball, QeResult};
pub use term::{trop_preimage, Coord, LambdaTerm, MAX_LAMBDA_LEVEL};
