//! Splitting types of exceptional curves, computed from random points over
//! a prime field and compared with the allowed interval.

use fatpoints::lattice::DivisorClass;
use fatpoints::splitting::{compute_splitting, forced_splitting, split_bounds, SplitOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let opts = SplitOptions::default();
    for s in ["3;2,1,1,1,1,1,1", "13;5,5,5,5,5,5,4,1,1,1,1", "19;7,7,7,7,7,7,7,4,1,1,1"] {
        let e: DivisorClass = s.parse()?;
        let bounds = split_bounds(&e)?;
        match forced_splitting(&e)? {
            Some(t) => println!("{e}: forced {t}"),
            None => {
                let r = compute_splitting(&e, &opts)?;
                println!(
                    "{e}: {} from trials {:?} ({} allowed types, p = {})",
                    r.splitting(),
                    r.trial_results,
                    bounds.len(),
                    r.prime
                );
            }
        }
    }
    Ok(())
}
