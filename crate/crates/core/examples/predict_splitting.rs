//! Predicts a splitting type from the defect sum of the images of the E_i.

use fatpoints::lattice::DivisorClass;
use fatpoints::splitting::{predict_splitting, SplitOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let arg = std::env::args().nth(1);
    let c: DivisorClass = arg.as_deref().unwrap_or("12;5,5,5,4,4,4,4,2").parse()?;
    let p = predict_splitting(&c, &SplitOptions::default())?;
    println!("class {}  defect sum {:?}", p.class, p.defect);
    for cand in &p.candidates {
        let mark = if cand.a == p.splitting.a { "<-" } else { "" };
        println!("  ({}, {}) score {} feasible {} {mark}", cand.a, cand.b, cand.score, cand.feasible);
    }
    println!("predicted {}", p.splitting);
    Ok(())
}
