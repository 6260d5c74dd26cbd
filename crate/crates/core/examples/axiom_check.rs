//! Randomized axiom tallies for F_4((X)).

use rmodule::hensel::{axiom_check, AxiomConfig};
use rmodule::Field;

fn main() -> rmodule::Result<()> {
    let f = Field::new(2, 2)?;
    let report = axiom_check(&AxiomConfig::new(f, 300, 1));
    for t in &report.tallies {
        println!("{:<20} {}/{} violations", t.axiom, t.violations, t.trials);
    }
    Ok(())
}
