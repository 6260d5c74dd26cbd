//! Index of A ∧ B in A for a few pairs, next to the window-oracle estimates.

use rmodule::decide::{invariant_report, oracle_estimate};
use rmodule::logic::PPFormula;
use rmodule::Field;

fn main() -> rmodule::Result<()> {
    let f = Field::prime(2)?;
    let pairs = [
        ("x in P(0)", "E y : x = y.(t - 1)"),
        ("x in P(-2)", "x in P(1)"),
        ("E y : x = y.(t*X + 1)", "E z : x = z.(t)"),
    ];
    for (a, b) in pairs {
        let (fa, fb) = (PPFormula::parse(f, a)?, PPFormula::parse(f, b)?);
        let r = invariant_report(&fa, &fb)?;
        let est: Vec<u32> = [6, 12, 24].iter().map(|&w| oracle_estimate(&fa, &fb, w)).collect::<Result<_, _>>()?;
        println!("[{a}] / [{b}]: {:?} (alpha {:?}, gamma {:?}), oracle {est:?}", r.invariant, r.alpha, r.gamma);
    }
    Ok(())
}
