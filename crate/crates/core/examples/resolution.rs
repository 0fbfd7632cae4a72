//! Expected graded Betti numbers of I(Z).
//!
//! `cargo run --example resolution -- 50,50,38,38,26,26,22,18,14,14`

use fatpoints::betti::assemble_resolution;
use fatpoints::lattice::FatPointScheme;
use fatpoints::splitting::SplitOptions;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let arg = std::env::args().nth(1);
    let z: FatPointScheme = arg.as_deref().unwrap_or("48,33,33,33,32,32,32,24,16").parse()?;
    let table = assemble_resolution(&z, 0, &SplitOptions::default())?;
    println!("Z = {z}, alpha = {}", table.alpha);
    println!("{:>6} {:>8} {:>8} {:>8}  flag", "deg", "h", "g", "s");
    for r in &table.rows {
        println!("{:>6} {:>8} {:>8} {:>8}  {:?}", r.degree, r.hilbert, r.g.to_string(), r.s.to_string(), r.flag);
    }
    println!("g_(alpha+1) via {:?}", table.alpha_plus_one.path);
    Ok(())
}
