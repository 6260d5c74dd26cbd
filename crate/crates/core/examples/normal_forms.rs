//! Triangulate a matrix over R, then normalize the leading valuations of a column.

use rmodule::linalg::{triangulate, vddku, RMatrix};
use rmodule::Field;

fn main() -> rmodule::Result<()> {
    let f = Field::prime(2)?;
    let a = RMatrix::parse_json(f, r#"[["t", "X"], ["1", "t"], ["t + X", "t^2"]]"#)?;
    let t = triangulate(&a)?;
    println!("T = {:?}, rank {}", t.t.to_strings(), t.rank);
    println!("P.A.Q = T: {}", t.p.mul(&a).mul(&t.q).agrees_with(&t.t));

    let q = RMatrix::parse_json(f, r#"[["t + 1"], ["t*X + 1"]]"#)?;
    let n = vddku(&q)?;
    println!("Q' = {:?} at level {}, leading valuations {:?}", n.q.to_strings(), n.level, n.lead_vals);
    Ok(())
}
