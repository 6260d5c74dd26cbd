//! Solve y^3 - y = x near zero over F_3((X)) and check the residual.

use rmodule::hensel::hensel_solve_to;
use rmodule::ore::parse_series;
use rmodule::{Field, TwistedPoly};

fn main() -> rmodule::Result<()> {
    let f = Field::prime(3)?;
    let s = TwistedPoly::parse(f, "t - 1")?;
    let x = parse_series(f, "X^2 + 2*X^5 + X^7")?;
    let sol = hensel_solve_to(&s, &x, 48)?;
    println!("y = {}", sol.y);
    println!("y.s - x = {}", s.apply(&sol.y).sub(&x));
    Ok(())
}
