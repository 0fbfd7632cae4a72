//! Counts exceptional classes by degree.

use std::collections::BTreeMap;

use fatpoints::weyl::enumerate_exceptional;

fn main() {
    let max: i64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    let all = enumerate_exceptional(max);
    let mut by_degree: BTreeMap<i64, usize> = BTreeMap::new();
    for e in &all {
        *by_degree.entry(e.t).or_default() += 1;
    }
    for (d, k) in &by_degree {
        println!("{d:3} {k:5}");
    }
    println!("total {}", all.len());
}
