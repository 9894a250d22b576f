//! Sweep reports and their merge.
//!
//! A report over a range is the merge of reports over any partition of that
//! range: tallies add, extrema combine with a fixed tie-break, and violations
//! are kept sorted so that block scheduling never shows in the output.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::RangeSpec;
use crate::collatz_weights::ParityCase;
use crate::error::{invalid, Result};
use crate::exact::{wide_point, Rational, WideUint};
use crate::Point;

/// Violations retained per report; the total is always counted in full.
pub const VIOLATION_RETAIN: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    /// The defining left-hand side is positive.
    LhsPositive,
    /// Closed form and six-term evaluation disagree.
    CrossMismatch,
    /// The left-hand side exceeds the sharpened per-case bound.
    BoundExceeded,
    /// Negative triangle-inequality gap.
    Lemma1,
    /// Symmetrized left-hand side is not the λ-blend of the two raw ones.
    Lemma2Identity,
    /// Symmetrized left-hand side is positive.
    Lemma2Sign,
    /// One-step decay failed where condition (5) holds.
    Decay,
    /// `d(Tⁿx,Tⁿ⁺¹x)² > Aⁿ·d(x,Tx)²` on a run where condition (5) held throughout.
    Telescoped,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Violation {
    #[serde(with = "wide_point")]
    pub x: Point,
    #[serde(with = "wide_point")]
    pub y: Point,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub z: Option<WideUint>,
    pub kind: ViolationKind,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub case: Option<ParityCase>,
    /// The offending exact number (the quantity that should have been `≤ 0`,
    /// `≥ 0` or `= 0`, depending on `kind`).
    pub value: Rational,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

/// Where an extremum was observed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Extremum {
    pub value: Rational,
    #[serde(with = "wide_point")]
    pub x: Point,
    #[serde(with = "wide_point")]
    pub y: Point,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub cell: String,
    pub checked: u64,
    pub min: Option<Extremum>,
    pub max: Option<Extremum>,
    /// Bound the checked quantity is asserted to respect, when there is one.
    pub bound: Option<Rational>,
}

impl Tally {
    pub fn new(cell: impl Into<String>, bound: Option<Rational>) -> Self {
        Tally {
            cell: cell.into(),
            checked: 0,
            min: None,
            max: None,
            bound,
        }
    }

    fn merge(&mut self, other: Tally) {
        self.checked += other.checked;
        self.min = pick(self.min, other.min, |a, b| a.value < b.value);
        self.max = pick(self.max, other.max, |a, b| a.value > b.value);
    }
}

/// Better extremum; ties go to the smaller `(x, y)`.
fn pick(a: Option<Extremum>, b: Option<Extremum>, better: impl Fn(&Extremum, &Extremum) -> bool) -> Option<Extremum> {
    match (a, b) {
        (Some(a), Some(b)) => {
            if better(&b, &a) || (b.value == a.value && (b.x, b.y) < (a.x, a.y)) {
                Some(b)
            } else {
                Some(a)
            }
        }
        (a, None) => a,
        (None, b) => b,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub range: RangeSpec,
    pub pairs_checked: u64,
    pub per_case: Vec<Tally>,
    pub violations: Vec<Violation>,
    pub violations_total: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<u64>,
}

impl VerificationReport {
    pub fn is_clean(&self) -> bool {
        self.violations_total == 0
    }

    pub fn tally(&self, cell: &str) -> Option<&Tally> {
        self.per_case.iter().find(|t| t.cell == cell)
    }

    /// Combine reports of the same sweep over disjoint ranges.
    pub fn merge(mut self, other: VerificationReport) -> Result<VerificationReport> {
        if self.command != other.command || self.params != other.params {
            return Err(invalid("cannot merge reports of different sweeps"));
        }
        self.range = self.range.bounding(&other.range);
        self.pairs_checked += other.pairs_checked;
        for t in other.per_case {
            match self.per_case.iter_mut().find(|s| s.cell == t.cell) {
                Some(s) => s.merge(t),
                None => self.per_case.push(t),
            }
        }
        self.violations.extend(other.violations);
        self.violations.sort();
        self.violations.truncate(VIOLATION_RETAIN);
        self.violations_total += other.violations_total;
        self.elapsed_ms = match (self.elapsed_ms, other.elapsed_ms) {
            (None, None) => None,
            (a, b) => Some(a.unwrap_or(0) + b.unwrap_or(0)),
        };
        Ok(self)
    }
}

/// Per-block accumulator used by the sweeps before building a report.
#[derive(Debug, Clone)]
pub(crate) struct Acc<V> {
    pub(crate) pairs: u64,
    pub(crate) cells: Vec<CellAcc<V>>,
    pub(crate) violations: Vec<Violation>,
    pub(crate) violations_total: u64,
}

#[derive(Debug, Clone)]
pub(crate) struct CellAcc<V> {
    pub(crate) checked: u64,
    pub(crate) min: Option<(V, Point, Point)>,
    pub(crate) max: Option<(V, Point, Point)>,
}

impl<V: Ord + Copy> CellAcc<V> {
    fn new() -> Self {
        CellAcc {
            checked: 0,
            min: None,
            max: None,
        }
    }

    // Rows and columns are visited in increasing order within a block, so a
    // strict comparison keeps the smallest (x, y) on ties.
    pub(crate) fn observe(&mut self, v: V, x: Point, y: Point) {
        self.checked += 1;
        if self.min.map_or(true, |(m, _, _)| v < m) {
            self.min = Some((v, x, y));
        }
        if self.max.map_or(true, |(m, _, _)| v > m) {
            self.max = Some((v, x, y));
        }
    }

    fn absorb(&mut self, other: CellAcc<V>) {
        self.checked += other.checked;
        let tie = |a: (V, Point, Point), b: (V, Point, Point)| (b.1, b.2) < (a.1, a.2);
        self.min = match (self.min, other.min) {
            (Some(a), Some(b)) if b.0 < a.0 || (b.0 == a.0 && tie(a, b)) => Some(b),
            (Some(a), _) => Some(a),
            (None, b) => b,
        };
        self.max = match (self.max, other.max) {
            (Some(a), Some(b)) if b.0 > a.0 || (b.0 == a.0 && tie(a, b)) => Some(b),
            (Some(a), _) => Some(a),
            (None, b) => b,
        };
    }
}

impl<V: Ord + Copy + Into<Rational>> Acc<V> {
    pub(crate) fn new(cells: usize) -> Self {
        Acc {
            pairs: 0,
            cells: (0..cells).map(|_| CellAcc::new()).collect(),
            violations: Vec::new(),
            violations_total: 0,
        }
    }

    pub(crate) fn violate(&mut self, v: Violation) {
        self.violations_total += 1;
        if self.violations.len() < VIOLATION_RETAIN {
            self.violations.push(v);
        } else {
            // Keep the smallest ones so the retained set is schedule independent.
            self.violations.push(v);
            self.violations.sort();
            self.violations.truncate(VIOLATION_RETAIN);
        }
    }

    pub(crate) fn absorb(mut self, other: Acc<V>) -> Self {
        self.pairs += other.pairs;
        for (a, b) in self.cells.iter_mut().zip(other.cells) {
            a.absorb(b);
        }
        self.violations.extend(other.violations);
        self.violations.sort();
        self.violations.truncate(VIOLATION_RETAIN);
        self.violations_total += other.violations_total;
        self
    }

    /// Tallies in cell order, labelled and bounded by `describe(index)`.
    pub(crate) fn tallies(&self, describe: impl Fn(usize) -> (String, Option<Rational>)) -> Vec<Tally> {
        let ext = |e: Option<(V, Point, Point)>| e.map(|(v, x, y)| Extremum { value: v.into(), x, y });
        self.cells
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let (cell, bound) = describe(i);
                Tally {
                    cell,
                    checked: c.checked,
                    min: ext(c.min),
                    max: ext(c.max),
                    bound,
                }
            })
            .collect()
    }
}
