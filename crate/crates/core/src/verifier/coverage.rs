//! Per-case coverage of a condition over a range of pairs.

use std::collections::BTreeSet;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{for_each_row_pair, par_blocks, RangeSpec};
use crate::collatz_weights::{CollatzWeights, PairClass, ParityCase};
use crate::error::{invalid, Result};
use crate::exact::{wide_point, Rational};
use crate::framework::{
    check_condition, symmetrize, Branch, ConditionKind, ConditionParams, Quantities, WeightFunction,
};
use crate::Point;

/// Eight cases, then odd-odd split into `x ≥ y` and `x < y`.
pub const COVERAGE_CELLS: [&str; 10] = [
    "one-one",
    "one-even",
    "one-odd",
    "even-one",
    "even-even",
    "even-odd",
    "odd-one",
    "odd-even",
    "odd-odd/x>=y",
    "odd-odd/x<y",
];

/// Distinct values kept per cell and set; further values only raise the flag.
const DISTINCT_CAP: usize = 64;

fn coverage_cell(pc: &PairClass, x: Point, y: Point) -> usize {
    match pc.case {
        ParityCase::OddOdd if x >= y => 8,
        ParityCase::OddOdd => 9,
        c => c.index(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PairRef {
    #[serde(with = "wide_point")]
    pub x: Point,
    #[serde(with = "wide_point")]
    pub y: Point,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageCell {
    pub cell: String,
    pub pairs: u64,
    pub holds_first: u64,
    pub holds_mirrored: u64,
    pub fails: u64,
    /// Smallest pair in each outcome class.
    pub exemplar_first: Option<PairRef>,
    pub exemplar_mirrored: Option<PairRef>,
    pub exemplar_fail: Option<PairRef>,
    /// Holding pairs whose contraction ratio on the succeeding branch equals `A`.
    pub ratio_equals_a: u64,
    /// Contraction ratios on the succeeding branch.
    pub ratios: BTreeSet<Rational>,
    /// `B`-sums on the succeeding branch.
    pub b_sums: BTreeSet<Rational>,
    /// Raw six-tuples `(α, β, γ, δ, ε, ζ)` at `(x, y)`.
    pub raw_combos: BTreeSet<[i128; 6]>,
    /// Some set above reached its size cap and dropped values.
    pub truncated: bool,
    /// Pairs where the symmetrized first-branch sums differ from the same
    /// sums of the raw weights.
    pub identification_mismatches: u64,
    /// Pairs whose raw weights at `(x, y)` or `(y, x)` exceed `M` in absolute value.
    pub m_failures_raw: u64,
    /// Same for the symmetrized weights.
    pub m_failures_symmetrized: u64,
}

impl CoverageCell {
    fn new(cell: &str) -> Self {
        CoverageCell {
            cell: cell.into(),
            pairs: 0,
            holds_first: 0,
            holds_mirrored: 0,
            fails: 0,
            exemplar_first: None,
            exemplar_mirrored: None,
            exemplar_fail: None,
            ratio_equals_a: 0,
            ratios: BTreeSet::new(),
            b_sums: BTreeSet::new(),
            raw_combos: BTreeSet::new(),
            truncated: false,
            identification_mismatches: 0,
            m_failures_raw: 0,
            m_failures_symmetrized: 0,
        }
    }

    pub fn holds(&self) -> u64 {
        self.holds_first + self.holds_mirrored
    }

    fn merge(&mut self, o: CoverageCell) {
        let min = |a: Option<PairRef>, b: Option<PairRef>| match (a, b) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.pairs += o.pairs;
        self.holds_first += o.holds_first;
        self.holds_mirrored += o.holds_mirrored;
        self.fails += o.fails;
        self.exemplar_first = min(self.exemplar_first, o.exemplar_first);
        self.exemplar_mirrored = min(self.exemplar_mirrored, o.exemplar_mirrored);
        self.exemplar_fail = min(self.exemplar_fail, o.exemplar_fail);
        self.ratio_equals_a += o.ratio_equals_a;
        self.truncated |= o.truncated;
        self.truncated |= insert_capped(&mut self.ratios, o.ratios);
        self.truncated |= insert_capped(&mut self.b_sums, o.b_sums);
        self.truncated |= insert_capped(&mut self.raw_combos, o.raw_combos);
        self.identification_mismatches += o.identification_mismatches;
        self.m_failures_raw += o.m_failures_raw;
        self.m_failures_symmetrized += o.m_failures_symmetrized;
    }
}

/// Union keeping the smallest `DISTINCT_CAP` values; true when values were dropped.
fn insert_capped<T: Ord>(set: &mut BTreeSet<T>, more: impl IntoIterator<Item = T>) -> bool {
    set.extend(more);
    let mut dropped = false;
    while set.len() > DISTINCT_CAP {
        set.pop_last();
        dropped = true;
    }
    dropped
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionCoverageReport {
    pub command: String,
    pub params: ConditionParams,
    pub condition: ConditionKind,
    pub corrected_c4: bool,
    pub range: RangeSpec,
    pub pairs_checked: u64,
    pub holds_total: u64,
    pub fails_total: u64,
    pub cells: Vec<CoverageCell>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<u64>,
}

impl ConditionCoverageReport {
    pub fn cell(&self, label: &str) -> Option<&CoverageCell> {
        self.cells.iter().find(|c| c.cell == label)
    }

    /// Combine reports of the same configuration over disjoint ranges.
    pub fn merge(mut self, other: ConditionCoverageReport) -> Result<Self> {
        if self.params != other.params || self.condition != other.condition || self.corrected_c4 != other.corrected_c4 {
            return Err(invalid("cannot merge coverage reports of different configurations"));
        }
        self.range = self.range.bounding(&other.range);
        self.pairs_checked += other.pairs_checked;
        self.holds_total += other.holds_total;
        self.fails_total += other.fails_total;
        for (a, b) in self.cells.iter_mut().zip(other.cells) {
            a.merge(b);
        }
        self.elapsed_ms = match (self.elapsed_ms, other.elapsed_ms) {
            (None, None) => None,
            (a, b) => Some(a.unwrap_or(0) + b.unwrap_or(0)),
        };
        Ok(self)
    }
}

fn first_branch_sums(q: &Quantities) -> [Rational; 3] {
    [q.beta_mass, q.beta_drift, q.beta_b_sum]
}

/// Evaluate `kind` at every pair of the range with the explicit weights.
pub fn condition_coverage(
    range: &RangeSpec,
    params: &ConditionParams,
    kind: ConditionKind,
    corrected_c4: bool,
) -> Result<ConditionCoverageReport> {
    let started = Instant::now();
    let fresh = || COVERAGE_CELLS.iter().map(|c| CoverageCell::new(c)).collect::<Vec<_>>();
    let cells = par_blocks(
        range.x_min,
        range.x_max,
        range.cols(),
        |lo, hi, progress| {
            let mut cells = fresh();
            for x in lo..=hi {
                for_each_row_pair(range, x, x, |x, y, pc| {
                    observe(&mut cells[coverage_cell(pc, x, y)], params, kind, corrected_c4, x, y)
                        .map_err(|e| e.at(x, y))
                })?;
                progress.row_done();
            }
            Ok(cells)
        },
        |mut a, b| {
            for (a, b) in a.iter_mut().zip(b) {
                a.merge(b);
            }
            a
        },
    )?;
    let pairs_checked = cells.iter().map(|c| c.pairs).sum();
    Ok(ConditionCoverageReport {
        command: "conditions".into(),
        params: params.clone(),
        condition: kind,
        corrected_c4,
        range: range.clone(),
        pairs_checked,
        holds_total: cells.iter().map(CoverageCell::holds).sum(),
        fails_total: cells.iter().map(|c| c.fails).sum(),
        cells,
        elapsed_ms: Some(started.elapsed().as_millis() as u64),
    })
}

fn observe(
    cell: &mut CoverageCell,
    params: &ConditionParams,
    kind: ConditionKind,
    corrected_c4: bool,
    x: Point,
    y: Point,
) -> Result<()> {
    let out = check_condition(kind, &CollatzWeights, params, x, y, corrected_c4)?;
    let here = Some(PairRef { x, y });
    let pick = |slot: &mut Option<PairRef>| {
        if slot.is_none() {
            *slot = here;
        }
    };
    cell.pairs += 1;
    let w = &out.witness;
    match (out.holds, out.branch) {
        (true, Some(branch)) => {
            let (ratio, b_sum) = match branch {
                Branch::First => {
                    cell.holds_first += 1;
                    pick(&mut cell.exemplar_first);
                    (w.first_ratio, w.at_xy.beta_b_sum)
                }
                Branch::Mirrored => {
                    cell.holds_mirrored += 1;
                    pick(&mut cell.exemplar_mirrored);
                    (w.mirrored_ratio, w.at_yx.map_or(w.at_xy.gamma_b_sum, |q| q.gamma_b_sum))
                }
            };
            if let Some(r) = ratio {
                cell.ratio_equals_a += u64::from(r == params.a);
                cell.truncated |= insert_capped(&mut cell.ratios, [r]);
            }
            cell.truncated |= insert_capped(&mut cell.b_sums, [b_sum]);
        }
        _ => {
            cell.fails += 1;
            pick(&mut cell.exemplar_fail);
        }
    }
    let raw = CollatzWeights.weights(x, y)?;
    cell.truncated |= insert_capped(&mut cell.raw_combos, [raw.to_array()]);
    let raw_q = Quantities::of(&raw.to_rational())?;
    let sym_q = Quantities::of(&symmetrize(&CollatzWeights, &params.lambda, x, y)?)?;
    cell.identification_mismatches += u64::from(first_branch_sums(&raw_q) != first_branch_sums(&sym_q));
    let raw_max = match w.raw_max_abs {
        Some(v) => v,
        None => raw.max_abs()?.max(CollatzWeights.weights(y, x)?.max_abs()?),
    };
    let sym_max = match w.symmetrized_max_abs {
        Some(v) => v,
        None => symmetrize(&CollatzWeights, &params.lambda, x, y)?
            .max_abs()?
            .max(symmetrize(&CollatzWeights, &params.lambda, y, x)?.max_abs()?),
    };
    cell.m_failures_raw += u64::from(raw_max > params.m);
    cell.m_failures_symmetrized += u64::from(sym_max > params.m);
    Ok(())
}
