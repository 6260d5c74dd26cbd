//! Split series into image, complement and ball parts for the Artin-Schreier image.

use rmodule::complement::{comp_decompose, comp_f, complement_generators};
use rmodule::ore::parse_series;
use rmodule::{Field, TwistedPoly};

fn main() -> rmodule::Result<()> {
    let f = Field::prime(2)?;
    let gens = [TwistedPoly::parse(f, "t - 1")?];
    let data = comp_f(f, &gens)?;
    let comp: Vec<String> = complement_generators(f, &data).iter().map(|q| q.to_string()).collect();
    println!("complement generators {comp:?}, gamma {}", data.gamma);
    for text in ["X^-5 + X^-2 + 1 + X^3", "X^-8 + X^-1"] {
        let x = parse_series(f, text)?;
        let dec = comp_decompose(&x, &data)?;
        println!("{text} = ({}) + ({}) + ({})", dec.a, dec.c, dec.r);
    }
    Ok(())
}
