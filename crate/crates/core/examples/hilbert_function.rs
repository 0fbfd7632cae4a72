//! Expected Hilbert function of eleven fat points, with fixed parts.
//!
//! `cargo run --example hilbert_function -- 77,77,77,77,77,77,77,44,11,11,11`

use fatpoints::lattice::FatPointScheme;
use fatpoints::linsys::{alpha, hilbert};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let arg = std::env::args().nth(1);
    let z: FatPointScheme = arg.as_deref().unwrap_or("77,77,77,77,77,77,77,44,11,11,11").parse()?;
    let a = alpha(&z);
    println!("Z = {z}  (degree {}, alpha = {a})", z.degree());
    for row in hilbert(&z, (a - 2).max(0)..=a + 3).rows {
        print!("t = {:4}  e(h_Z, t) = {:6}", row.t, row.value);
        for c in &row.fixed_part {
            print!("  + {}*({})", c.coefficient, c.class);
        }
        println!();
    }
    Ok(())
}
