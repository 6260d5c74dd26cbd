//! Eliminate the quantifier of a p.p. formula on a small ball.

use rmodule::logic::{qe_near_zero, PPFormula};
use rmodule::Field;

fn main() -> rmodule::Result<()> {
    let f = Field::prime(2)?;
    for text in ["E y : x = y.(t - 1)", "E y : x.(t*X^-1 + 1) = y.(t^2*X^-1 + t)", "E y : x.(t) = y.(t*X^-1)"] {
        let phi = PPFormula::parse(f, text)?;
        let r = qe_near_zero(&phi)?;
        println!("{text}\n  on P({}): {}", r.delta, r.psi);
    }
    Ok(())
}
