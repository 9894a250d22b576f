//! Grid search over per-case λ values and `A`.
//!
//! The verdict at `(x, y)` depends only on `λ` at the case of `(x, y)`, on `λ`
//! at the transposed case and on `A`. The nine cases therefore fall into six
//! independent groups (a case together with its transpose), and the full
//! `(q+1)⁹` product is searched exactly by maximizing each group on its own
//! for every `A`.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{for_each_row_pair, par_blocks, RangeSpec};
use crate::collatz_weights::{CollatzWeights, ParityCase};
use crate::error::{invalid, Result};
use crate::exact::Rational;
use crate::framework::{check_condition, ConditionKind, ConditionParams, LambdaSpec};

use ParityCase::*;

/// Case groups closed under transposition, each listed in index order.
const GROUPS: [&[ParityCase]; 6] = [
    &[OneOne],
    &[OneEven, EvenOne],
    &[OneOdd, OddOne],
    &[EvenEven],
    &[EvenOdd, OddEven],
    &[OddOdd],
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchGrid {
    /// λ values are `0, 1/q, …, 1`; `q = 0` means `λ ≡ 0`.
    pub q: u32,
    #[serde(rename = "A_grid")]
    pub a_grid: Vec<Rational>,
    pub condition: ConditionKind,
    pub corrected_c4: bool,
    #[serde(rename = "B")]
    pub b: Rational,
    #[serde(rename = "M")]
    pub m: Rational,
    #[serde(default)]
    pub m_on_symmetrized: bool,
    /// Maximum number of condition evaluations (pair × λ combination).
    pub budget: u64,
}

impl SearchGrid {
    pub fn lambda_values(&self) -> Result<Vec<Rational>> {
        if self.q == 0 {
            return Ok(vec![Rational::ZERO]);
        }
        let q = i128::from(self.q);
        (0..=q).map(|i| Rational::new(i, q)).collect()
    }

    fn params(&self, lambda: LambdaSpec, a: Rational) -> Result<ConditionParams> {
        Ok(ConditionParams::new(lambda, a, self.b, self.m)?.with_m_on_symmetrized(self.m_on_symmetrized))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchCaseRow {
    pub case: ParityCase,
    pub lambda: Rational,
    pub pairs: u64,
    /// Pairs satisfying the condition under the best assignment.
    pub covered: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaSearchResult {
    pub command: String,
    pub grid: SearchGrid,
    pub range: RangeSpec,
    pub best_lambda: LambdaSpec,
    #[serde(rename = "best_A")]
    pub best_a: Rational,
    pub covered_pairs: u64,
    /// Pairs of the searched cases; equals the range cardinality unless the budget ran out.
    pub pairs_considered: u64,
    /// `covered_pairs / pairs_considered`, or 1 when nothing was considered.
    pub coverage: Rational,
    pub per_case: Vec<SearchCaseRow>,
    /// Cases with pairs that no grid choice of λ and `A` covers completely.
    pub irreducibly_failing: Vec<ParityCase>,
    pub evaluations: u64,
    pub budget_exhausted: bool,
    /// Cases skipped for lack of budget; their λ is reported as 0.
    pub unsearched_cases: Vec<ParityCase>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<u64>,
}

/// λ table for one group: `combo` indexes the grid for each case of the group.
fn group_table(group: &[ParityCase], combo: &[usize], values: &[Rational]) -> [Rational; 9] {
    let mut table = [Rational::ZERO; 9];
    for (case, &i) in group.iter().zip(combo) {
        table[case.index()] = values[i];
    }
    table
}

/// Index combinations for a group in lexicographic order.
fn combos(group_len: usize, n: usize) -> Vec<Vec<usize>> {
    match group_len {
        1 => (0..n).map(|i| vec![i]).collect(),
        _ => (0..n).flat_map(|i| (0..n).map(move |j| vec![i, j])).collect(),
    }
}

fn group_of(case: ParityCase) -> usize {
    GROUPS.iter().position(|g| g.contains(&case)).unwrap_or(0)
}

/// Find the per-case λ assignment and `A` covering the most pairs of the range.
/// Ties go to the lexicographically smallest (λ-vector in case order, `A`).
pub fn search_lambda(range: &RangeSpec, grid: &SearchGrid) -> Result<LambdaSearchResult> {
    let started = Instant::now();
    if grid.a_grid.is_empty() {
        return Err(invalid("the A grid is empty"));
    }
    let values = grid.lambda_values()?;
    let rechecks: Vec<ConditionParams> = grid
        .a_grid
        .iter()
        .map(|&a| grid.params(LambdaSpec::zero(), a))
        .collect::<Result<_>>()?;
    let group_combos: Vec<Vec<Vec<usize>>> = GROUPS.iter().map(|g| combos(g.len(), values.len())).collect();

    let mut case_pairs = [0u64; 9];
    for_each_row_pair(range, range.x_min, range.x_max, |_, _, pc| {
        case_pairs[pc.case.index()] += 1;
        Ok(())
    })?;

    let mut remaining = grid.budget;
    let mut searched = [false; 6];
    for (g, group) in GROUPS.iter().enumerate() {
        let pairs: u64 = group.iter().map(|c| case_pairs[c.index()]).sum();
        let cost = pairs.saturating_mul(group_combos[g].len() as u64);
        if cost <= remaining {
            remaining -= cost;
            searched[g] = true;
        }
    }
    let evaluations = grid.budget - remaining;

    // counts[case][combo * |A| + a]: pairs of `case` holding under that choice.
    let n_a = grid.a_grid.len();
    let fresh = || -> Vec<Vec<u64>> {
        ParityCase::ALL
            .iter()
            .map(|&c| vec![0u64; group_combos[group_of(c)].len() * n_a])
            .collect()
    };
    let counts = par_blocks(
        range.x_min,
        range.x_max,
        range.cols(),
        |lo, hi, progress| {
            let mut counts = fresh();
            for x in lo..=hi {
                for_each_row_pair(range, x, x, |x, y, pc| {
                    let g = group_of(pc.case);
                    if !searched[g] {
                        return Ok(());
                    }
                    let slot = &mut counts[pc.case.index()];
                    for (ci, combo) in group_combos[g].iter().enumerate() {
                        let lambda = LambdaSpec::per_case(group_table(GROUPS[g], combo, &values))?;
                        let params = grid.params(lambda, grid.a_grid[0])?;
                        let out = check_condition(grid.condition, &CollatzWeights, &params, x, y, grid.corrected_c4)
                            .map_err(|e| e.at(x, y))?;
                        for (ai, p) in rechecks.iter().enumerate() {
                            slot[ci * n_a + ai] += u64::from(out.recheck(p).0);
                        }
                    }
                    Ok(())
                })?;
                progress.row_done();
            }
            Ok(counts)
        },
        |mut a, b| {
            for (ra, rb) in a.iter_mut().zip(b) {
                for (u, v) in ra.iter_mut().zip(rb) {
                    *u += v;
                }
            }
            a
        },
    )?;

    let group_score =
        |g: usize, ci: usize, ai: usize| -> u64 { GROUPS[g].iter().map(|c| counts[c.index()][ci * n_a + ai]).sum() };

    // Best (λ-vector, A); per A the groups are maximized independently, and
    // the first maximizer of each group is its lexicographically smallest.
    let mut best: Option<(u64, [Rational; 9], usize, [usize; 6])> = None;
    for ai in 0..n_a {
        let mut choice = [0usize; 6];
        let mut total = 0u64;
        let mut table = [Rational::ZERO; 9];
        for g in 0..GROUPS.len() {
            if !searched[g] {
                continue;
            }
            let mut top = (0u64, 0usize);
            for ci in 0..group_combos[g].len() {
                let s = group_score(g, ci, ai);
                if ci == 0 || s > top.0 {
                    top = (s, ci);
                }
            }
            choice[g] = top.1;
            total += top.0;
            for (case, &vi) in GROUPS[g].iter().zip(&group_combos[g][top.1]) {
                table[case.index()] = values[vi];
            }
        }
        let better = match &best {
            None => true,
            Some((t, tab, bai, _)) => {
                total > *t || (total == *t && (table, grid.a_grid[ai]) < (*tab, grid.a_grid[*bai]))
            }
        };
        if better {
            best = Some((total, table, ai, choice));
        }
    }
    let (covered_pairs, table, ai, choice) = best.expect("A grid is nonempty");

    let mut per_case = Vec::new();
    let mut irreducibly_failing = Vec::new();
    let mut unsearched_cases = Vec::new();
    let mut pairs_considered = 0;
    for case in ParityCase::ALL {
        let g = group_of(case);
        let pairs = case_pairs[case.index()];
        if !searched[g] {
            unsearched_cases.push(case);
            continue;
        }
        pairs_considered += pairs;
        let row = &counts[case.index()];
        if pairs > 0 && row.iter().all(|&c| c < pairs) {
            irreducibly_failing.push(case);
        }
        per_case.push(SearchCaseRow {
            case,
            lambda: table[case.index()],
            pairs,
            covered: row[choice[g] * n_a + ai],
        });
    }
    let coverage = if pairs_considered == 0 {
        Rational::ONE
    } else {
        Rational::new(i128::from(covered_pairs), i128::from(pairs_considered))?
    };

    Ok(LambdaSearchResult {
        command: "search-lambda".into(),
        grid: grid.clone(),
        range: range.clone(),
        best_lambda: LambdaSpec::per_case(table)?,
        best_a: grid.a_grid[ai],
        covered_pairs,
        pairs_considered,
        coverage,
        per_case,
        irreducibly_failing,
        evaluations,
        budget_exhausted: !unsearched_cases.is_empty(),
        unsearched_cases,
        elapsed_ms: Some(started.elapsed().as_millis() as u64),
    })
}

/// Points of a case, used to size budgets in tests.
#[cfg(test)]
fn count_case(range: &RangeSpec, case: ParityCase) -> u64 {
    let mut n = 0;
    for_each_row_pair(range, range.x_min, range.x_max, |_, _, pc| {
        n += u64::from(pc.case == case);
        Ok(())
    })
    .unwrap();
    n
}
