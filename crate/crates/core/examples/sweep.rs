//! Splitting types of all exceptional classes up to a degree, checking the
//! cokernel at m = b wherever equality in the bound is not yet a theorem.

use fatpoints::cli::{sweep, SweepStatus};
use fatpoints::cokernel::CokOptions;
use fatpoints::splitting::SplitOptions;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let max: i64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    let r = sweep(max, &SplitOptions::default(), &CokOptions::default(), 0)?;
    println!("{} classes, {} need verification", r.total, r.needs_verification);
    for row in &r.rows {
        let status = match &row.status {
            SweepStatus::Verified { .. } => "ok".to_string(),
            SweepStatus::Violation { computed } => format!("VIOLATION ({computed})"),
            SweepStatus::Skipped { rows, cols, .. } => format!("skipped ({rows}x{cols})"),
        };
        println!("{:3} {:3} {:3}  {:?}  {status}", row.a, row.b, row.d, row.multiplicities);
    }
    Ok(())
}
