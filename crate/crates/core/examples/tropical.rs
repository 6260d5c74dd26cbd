//! Jump values and Hensel radii of a few twisted polynomials.

use rmodule::tropical::{hensel_pair, jump_set, trop_act, Fin};
use rmodule::{Field, TwistedPoly};

fn main() -> rmodule::Result<()> {
    let f = Field::prime(2)?;
    for text in ["t - 1", "t^2 + X", "t*X + 1", "t^2*X + t + X^-1"] {
        let q = TwistedPoly::parse(f, text)?;
        let jumps = jump_set(&q);
        let values: Vec<String> = (-3..=3).map(|g| trop_act(Fin(g), &q).to_string()).collect();
        print!("{text}: jumps {jumps:?}, gamma.q for gamma in -3..=3: {}", values.join(" "));
        if q.is_separable() {
            let hd = hensel_pair(&q)?;
            print!(", maps P({}) onto P({})", hd.h, hd.hens);
        }
        println!();
    }
    Ok(())
}
