//! Universal definition of the Artin-Schreier image.

use rmodule::decide::universalize;
use rmodule::logic::PPFormula;
use rmodule::Field;

fn main() -> rmodule::Result<()> {
    let f = Field::prime(2)?;
    let a = PPFormula::parse(f, "E y : x = y.(t - 1)")?;
    let conf = universalize(&a)?;
    println!("{}", conf.universal);
    println!("checks {:?}", conf.checks);
    Ok(())
}
