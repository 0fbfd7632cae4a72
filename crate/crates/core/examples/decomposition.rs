//! Splits a class into its free part H and exceptional fixed part N.

use fatpoints::lattice::DivisorClass;
use fatpoints::linsys::{decompose, expected_h0, expected_h1};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let arg = std::env::args().nth(1);
    let f: DivisorClass = arg.as_deref().unwrap_or("102;50,50,38,38,26,26,22,18,14,14").parse()?;
    match decompose(&f) {
        None => println!("{f} is not effective"),
        Some(d) => {
            println!("F = {f}");
            println!("H = {}  (H^2 = {}, chi = {})", d.h, d.h.self_intersection(), d.h.chi());
            for c in &d.components {
                println!("  + {} * ({})", c.coefficient, c.class);
            }
        }
    }
    println!("e(h0) = {}, e(h1) = {}", expected_h0(&f), expected_h1(&f)?);
    Ok(())
}
