//! dim cok of the multiplication map for L + mE, by the neighbourhood
//! formula and by brute force on fat points, against the predicted bound.

use fatpoints::cokernel::{cok_dimension, CokOptions, Method};
use fatpoints::lattice::DivisorClass;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let e: DivisorClass = "3;2,1,1,1,1,1,1".parse()?;
    for seed in [1, 2] {
        let opts = CokOptions { seed, ..CokOptions::default() };
        for m in 0..=e.t {
            let f = cok_dimension(&e, m, &opts, None, Method::Formula)?;
            let b = cok_dimension(&e, m, &opts, None, Method::BruteForce)?;
            println!(
                "seed {seed} m {m}: formula {} brute force {} bound {} (type {})",
                f.computed, b.computed, f.predicted, f.splitting
            );
        }
    }
    let hard: DivisorClass = "19;7,7,7,7,7,7,7,4,1,1,1".parse()?;
    let v = cok_dimension(&hard, 11, &CokOptions::default(), None, Method::Formula)?;
    println!("{hard} at m = 11: {} vs bound {}", v.computed, v.predicted);
    Ok(())
}
