//! Evaluate boolean combinations of invariant sentences.

use rmodule::decide::{evaluate_sentence, parse_sentence};
use rmodule::Field;

fn main() -> rmodule::Result<()> {
    let f = Field::prime(3)?;
    for text in [
        "|[x in P(0)] / [E y : x = y.(t - 1)]| = 3",
        "|[x in P(-1)] / [x in P(1)]| > 3 and |[x in P(0)] / [x in P(0)]| = 1",
        "not |[E y : x = y.(t)] / [x in P(0)]| = inf",
    ] {
        let s = parse_sentence(f, text)?;
        println!("{text}: {}", evaluate_sentence(&s)?);
    }
    Ok(())
}
