//! Exhaustive verification engines over finite ranges of pairs.
//!
//! Every sweep splits its range into row blocks, evaluates the blocks
//! independently (in parallel on the current rayon pool) and merges the block
//! results in a schedule-independent way.

mod coverage;
mod report;
mod search;
mod sweeps;

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::collatz_weights::{classify, PairClass, ParityCase};
use crate::error::{invalid, Result};
use crate::exact::wide_point;
use crate::Point;

pub use coverage::{condition_coverage, ConditionCoverageReport, CoverageCell, PairRef, COVERAGE_CELLS};
pub use report::{Extremum, Tally, VerificationReport, Violation, ViolationKind, VIOLATION_RETAIN};
pub use search::{search_lambda, LambdaSearchResult, SearchCaseRow, SearchGrid};
pub use sweeps::{
    cross_check_simplified, orbit_decay_sweep, sweep_cell, sweep_cell_label, verify_lemmas, verify_pseudocontraction,
    verify_pseudocontraction_with, verify_weight_bound, LhsRoute, PseudoOptions, SWEEP_CELLS,
};

/// Progress is logged each time this many more pairs have been processed.
pub const PROGRESS_EVERY: u64 = 1_000_000;

/// A rectangle of pairs, optionally restricted to some parity cases.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeSpec {
    #[serde(with = "wide_point")]
    pub x_min: Point,
    #[serde(with = "wide_point")]
    pub x_max: Point,
    #[serde(with = "wide_point")]
    pub y_min: Point,
    #[serde(with = "wide_point")]
    pub y_max: Point,
    /// Sorted and deduplicated; `None` admits every case.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cases: Option<Vec<ParityCase>>,
}

impl RangeSpec {
    pub fn new(x_min: Point, x_max: Point, y_min: Point, y_max: Point) -> Result<Self> {
        if x_min == 0 || y_min == 0 {
            return Err(invalid("range bounds must be positive"));
        }
        if x_min > x_max || y_min > y_max {
            return Err(invalid(format!("empty range [{x_min}, {x_max}] x [{y_min}, {y_max}]")));
        }
        if x_max > u64::MAX as Point || y_max > u64::MAX as Point {
            return Err(invalid("range bounds must fit in 64 bits"));
        }
        Ok(RangeSpec {
            x_min,
            x_max,
            y_min,
            y_max,
            cases: None,
        })
    }

    /// `[lo, hi] × [lo, hi]`.
    pub fn square(lo: Point, hi: Point) -> Result<Self> {
        RangeSpec::new(lo, hi, lo, hi)
    }

    pub fn with_cases(mut self, cases: impl IntoIterator<Item = ParityCase>) -> Self {
        let mut v: Vec<ParityCase> = cases.into_iter().collect();
        v.sort();
        v.dedup();
        self.cases = Some(v);
        self
    }

    pub fn admits(&self, case: ParityCase) -> bool {
        self.cases.as_ref().map_or(true, |c| c.binary_search(&case).is_ok())
    }

    /// Number of pairs in the rectangle that pass the case filter.
    pub fn cardinality(&self) -> Result<u64> {
        let mut n = 0u64;
        for_each_row_pair(self, self.x_min, self.x_max, |_, _, _| {
            n += 1;
            Ok(())
        })?;
        Ok(n)
    }

    pub(crate) fn bounding(&self, other: &RangeSpec) -> RangeSpec {
        RangeSpec {
            x_min: self.x_min.min(other.x_min),
            x_max: self.x_max.max(other.x_max),
            y_min: self.y_min.min(other.y_min),
            y_max: self.y_max.max(other.y_max),
            cases: self.cases.clone(),
        }
    }

    fn rows(&self) -> u64 {
        (self.x_max - self.x_min) as u64 + 1
    }

    fn cols(&self) -> u64 {
        (self.y_max - self.y_min) as u64 + 1
    }
}

/// Visit the admitted pairs with `x ∈ [x_lo, x_hi]` in row-major order.
pub(crate) fn for_each_row_pair(
    range: &RangeSpec,
    x_lo: Point,
    x_hi: Point,
    mut f: impl FnMut(Point, Point, &PairClass) -> Result<()>,
) -> Result<()> {
    for x in x_lo..=x_hi {
        for y in range.y_min..=range.y_max {
            let pc = classify(x, y)?;
            if range.admits(pc.case) {
                f(x, y, &pc)?;
            }
        }
    }
    Ok(())
}

/// Split `[lo, hi]` into contiguous blocks, run `block` on each (in parallel)
/// and fold the results in block order. The first error in block order wins.
pub(crate) fn par_blocks<T, F, M>(lo: Point, hi: Point, work_per_row: u64, block: F, merge: M) -> Result<T>
where
    T: Send,
    F: Fn(Point, Point, &Progress) -> Result<T> + Sync,
    M: Fn(T, T) -> T,
{
    let rows = (hi - lo) as u64 + 1;
    let target = (rayon::current_num_threads() as u64 * 8).max(1);
    let per_block = rows.div_ceil(target).max(1);
    let starts: Vec<Point> = (0..rows.div_ceil(per_block))
        .map(|i| lo + (i * per_block) as Point)
        .collect();
    let progress = Progress::new(work_per_row);
    let results: Vec<Result<T>> = starts
        .par_iter()
        .map(|&s| block(s, (s + per_block as Point - 1).min(hi), &progress))
        .collect();
    let mut it = results.into_iter();
    let mut acc = it.next().expect("at least one block")?;
    for r in it {
        acc = merge(acc, r?);
    }
    Ok(acc)
}

/// Shared progress counter that logs each [`PROGRESS_EVERY`] units.
pub(crate) struct Progress {
    done: AtomicU64,
    per_row: u64,
}

impl Progress {
    fn new(per_row: u64) -> Self {
        Progress {
            done: AtomicU64::new(0),
            per_row,
        }
    }

    pub(crate) fn row_done(&self) {
        self.add(self.per_row);
    }

    pub(crate) fn add(&self, n: u64) {
        let before = self.done.fetch_add(n, Ordering::Relaxed);
        let after = before + n;
        if before / PROGRESS_EVERY != after / PROGRESS_EVERY {
            log::info!("processed {} units", after / PROGRESS_EVERY * PROGRESS_EVERY);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_validation() {
        assert!(RangeSpec::square(0, 5).is_err());
        assert!(RangeSpec::square(5, 4).is_err());
        assert!(RangeSpec::new(1, 1, 2, 1).is_err());
        let r = RangeSpec::square(1, 10).unwrap();
        assert_eq!(r.cardinality().unwrap(), 100);
    }

    #[test]
    fn case_filter_counts() {
        let r = RangeSpec::square(1, 10)
            .unwrap()
            .with_cases([ParityCase::EvenEven, ParityCase::EvenEven]);
        assert_eq!(r.cases.as_deref(), Some(&[ParityCase::EvenEven][..]));
        assert_eq!(r.cardinality().unwrap(), 25);
        let r = RangeSpec::square(1, 10).unwrap().with_cases([ParityCase::OneOne]);
        assert_eq!(r.cardinality().unwrap(), 1);
    }

    #[test]
    fn blocks_cover_every_row_once() {
        let rows = par_blocks(
            3,
            1000,
            1,
            |a, b, _| Ok((a..=b).collect::<Vec<_>>()),
            |mut a, b| {
                a.extend(b);
                a
            },
        )
        .unwrap();
        assert_eq!(rows, (3..=1000).collect::<Vec<Point>>());
    }
}
