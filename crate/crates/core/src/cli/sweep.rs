use rayon::prelude::*;
use serde::Serialize;

use crate::cokernel::{cok_formula, CokOptions};
use crate::error::{Error, Result};
use crate::lattice::DivisorClass;
use crate::splitting::{cokernel_bound_is_sharp, splitting_type, SplitOptions, SplittingType};
use crate::weyl::enumerate_exceptional;

/// Largest degree accepted by the sweep and the enumeration command.
pub const MAX_SWEEP_DEGREE: i64 = 30;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum SweepStatus {
    Verified { computed: i64 },
    Violation { computed: i64 },
    Skipped { rows: usize, cols: usize, ceiling: usize },
}

/// A class whose cokernel bound is not known to be sharp.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub class: DivisorClass,
    pub a: i64,
    pub b: i64,
    pub d: i64,
    /// Positive multiplicities, i.e. `E·E_i > 0`.
    pub multiplicities: Vec<i64>,
    /// `C(b-a, 2)`, the bound at `m = b`.
    pub predicted: i64,
    #[serde(flatten)]
    pub status: SweepStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub max_degree: i64,
    pub total: usize,
    /// Classes where equality in the cokernel bound is already a theorem.
    pub guaranteed: usize,
    pub needs_verification: usize,
    pub verified: usize,
    pub violations: usize,
    pub skipped: usize,
    /// One entry per class of `needs_verification`, in enumeration order.
    pub rows: Vec<SweepRow>,
}

fn verify(e: &DivisorClass, s: SplittingType, cok: &CokOptions) -> Result<SweepRow> {
    let predicted = s.cokernel_bound(s.b);
    let status = match cok_formula(e, s.b, cok) {
        Ok(c) if c == predicted => SweepStatus::Verified { computed: c },
        Ok(c) => SweepStatus::Violation { computed: c },
        Err(Error::Infeasible { rows, cols, ceiling }) => SweepStatus::Skipped { rows, cols, ceiling },
        Err(e) => return Err(e),
    };
    Ok(SweepRow {
        class: e.clone(),
        a: s.a,
        b: s.b,
        d: e.t,
        multiplicities: e.m.iter().copied().filter(|&x| x > 0).collect(),
        predicted,
        status,
    })
}

/// Splitting types of every exceptional class of degree `1..=max_degree`,
/// with the cokernel checked at `m = b` wherever the bound is not known to
/// be sharp. `jobs = 0` uses one worker per core.
pub fn sweep(max_degree: i64, split: &SplitOptions, cok: &CokOptions, jobs: usize) -> Result<SweepReport> {
    if max_degree > MAX_SWEEP_DEGREE {
        return Err(Error::InvalidInput(format!(
            "max degree {max_degree} exceeds the cap of {MAX_SWEEP_DEGREE}"
        )));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    let classes = enumerate_exceptional(max_degree);
    log::info!("computing splitting types of {} classes", classes.len());
    let types: Vec<SplittingType> = pool.install(|| {
        classes
            .par_iter()
            .map(|e| splitting_type(e, split))
            .collect::<Result<_>>()
    })?;
    let open: Vec<(&DivisorClass, SplittingType)> = classes
        .iter()
        .zip(types)
        .filter(|(e, s)| !cokernel_bound_is_sharp(e, *s))
        .collect();
    log::info!("verifying {} classes at m = b", open.len());
    let rows: Vec<SweepRow> = pool.install(|| {
        open.par_iter()
            .map(|(e, s)| {
                let row = verify(e, *s, cok);
                log::debug!("verified {e}");
                row
            })
            .collect::<Result<_>>()
    })?;
    let count = |f: fn(&SweepStatus) -> bool| rows.iter().filter(|r| f(&r.status)).count();
    let report = SweepReport {
        max_degree,
        total: classes.len(),
        guaranteed: classes.len() - rows.len(),
        needs_verification: rows.len(),
        verified: count(|s| matches!(s, SweepStatus::Verified { .. })),
        violations: count(|s| matches!(s, SweepStatus::Violation { .. })),
        skipped: count(|s| matches!(s, SweepStatus::Skipped { .. })),
        rows,
    };
    log::info!(
        "{} classes: {} guaranteed, {} verified, {} violations, {} skipped",
        report.total,
        report.guaranteed,
        report.verified,
        report.violations,
        report.skipped
    );
    Ok(report)
}
