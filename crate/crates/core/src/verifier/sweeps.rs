//! Pair, triple and orbit sweeps producing [`VerificationReport`]s.

use std::collections::BTreeMap;
use std::time::Instant;

use super::report::{Acc, VerificationReport, Violation, ViolationKind};
use super::{for_each_row_pair, par_blocks, RangeSpec};
use crate::collatz::AccelT;
use crate::collatz_weights::{
    case_bound, simplified_lhs, weight_vector, CollatzWeights, OddOddSubcase, PairClass, ParityCase,
};
use crate::error::{invalid, Error, Result};
use crate::exact::{Rational, WideUint};
use crate::framework::{
    check_orbit_decay, iterate_orbit, lemma1_gap_scaled, lhs, symmetrize, ConditionParams, LambdaSpec,
    SquaredDistances, StepStatus,
};
use crate::Point;

/// Eight non-odd-odd cases followed by the five odd-odd subcases.
pub const SWEEP_CELLS: usize = 13;

/// Index of a pair's cell in pair-sweep tallies.
pub fn sweep_cell(pc: &PairClass) -> usize {
    match pc.odd_odd_subcase() {
        Some(sub) => 8 + OddOddSubcase::ALL.iter().position(|s| *s == sub).unwrap_or(0),
        None => pc.case.index(),
    }
}

pub fn sweep_cell_label(cell: usize) -> String {
    if cell < 8 {
        ParityCase::ALL[cell].label().to_string()
    } else {
        format!("odd-odd/{}", OddOddSubcase::ALL[cell - 8].label())
    }
}

/// Sharpened bound of a sweep cell.
fn sweep_cell_bound(cell: usize) -> i128 {
    if cell < 8 {
        use ParityCase::*;
        match ParityCase::ALL[cell] {
            OneOne | OneEven | OneOdd => 0,
            OddOne => -4,
            _ => -1,
        }
    } else {
        match OddOddSubcase::ALL[cell - 8] {
            OddOddSubcase::LowerOpen | OddOddSubcase::UpperOpen => -8,
            _ => 0,
        }
    }
}

fn describe_cell(cell: usize) -> (String, Option<Rational>) {
    (sweep_cell_label(cell), Some(Rational::from_int(sweep_cell_bound(cell))))
}

/// How the left-hand side is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LhsRoute {
    /// Six-term weighted sum of squared distances.
    Direct,
    /// Per-case closed forms.
    Simplified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PseudoOptions {
    pub route: LhsRoute,
    /// Also flag values above the sharpened per-case bound.
    pub sharpened: bool,
}

impl Default for PseudoOptions {
    fn default() -> Self {
        PseudoOptions {
            route: LhsRoute::Direct,
            sharpened: true,
        }
    }
}

fn finish<V: Ord + Copy + Into<Rational>>(
    command: &str,
    params: BTreeMap<String, String>,
    range: &RangeSpec,
    acc: Acc<V>,
    describe: impl Fn(usize) -> (String, Option<Rational>),
    started: Instant,
) -> VerificationReport {
    VerificationReport {
        command: command.into(),
        params,
        range: range.clone(),
        pairs_checked: acc.pairs,
        per_case: acc.tallies(describe),
        violations: acc.violations,
        violations_total: acc.violations_total,
        elapsed_ms: Some(started.elapsed().as_millis() as u64),
    }
}

fn pair_violation(x: Point, y: Point, pc: &PairClass, kind: ViolationKind, value: i128) -> Violation {
    Violation {
        x,
        y,
        z: None,
        kind,
        case: Some(pc.case),
        value: Rational::from_int(value),
        detail: None,
    }
}

fn direct_lhs(x: Point, y: Point) -> Result<i128> {
    lhs(&CollatzWeights, &AccelT, x, y).map_err(|e| e.at(x, y))
}

/// Pair sweep with one integer observation per pair.
fn pair_sweep(
    range: &RangeSpec,
    visit: impl Fn(Point, Point, &PairClass, &mut Acc<i128>) -> Result<()> + Sync,
) -> Result<Acc<i128>> {
    par_blocks(
        range.x_min,
        range.x_max,
        range.cols(),
        |lo, hi, progress| {
            let mut acc = Acc::new(SWEEP_CELLS);
            for x in lo..=hi {
                for_each_row_pair(range, x, x, |x, y, pc| {
                    acc.pairs += 1;
                    visit(x, y, pc, &mut acc)
                })?;
                progress.row_done();
            }
            Ok(acc)
        },
        Acc::absorb,
    )
}

/// `lhs ≤ 0` and the sharpened per-case bound for every pair of the range.
pub fn verify_pseudocontraction(range: &RangeSpec) -> Result<VerificationReport> {
    verify_pseudocontraction_with(range, PseudoOptions::default())
}

pub fn verify_pseudocontraction_with(range: &RangeSpec, opts: PseudoOptions) -> Result<VerificationReport> {
    let started = Instant::now();
    let acc = pair_sweep(range, |x, y, pc, acc| {
        let v = match opts.route {
            LhsRoute::Direct => direct_lhs(x, y)?,
            LhsRoute::Simplified => simplified_lhs(x, y).map_err(|e| e.at(x, y))?,
        };
        acc.cells[sweep_cell(pc)].observe(v, x, y);
        if v > 0 {
            acc.violate(pair_violation(x, y, pc, ViolationKind::LhsPositive, v));
        }
        if opts.sharpened && v > case_bound(pc) {
            acc.violate(pair_violation(x, y, pc, ViolationKind::BoundExceeded, v));
        }
        Ok(())
    })?;
    let mut params = BTreeMap::new();
    let route = match opts.route {
        LhsRoute::Direct => "direct",
        LhsRoute::Simplified => "simplified",
    };
    params.insert("route".into(), route.into());
    params.insert("sharpened".into(), opts.sharpened.to_string());
    Ok(finish("verify", params, range, acc, describe_cell, started))
}

/// Closed forms against the six-term sum; tallies record the direct value.
pub fn cross_check_simplified(range: &RangeSpec) -> Result<VerificationReport> {
    let started = Instant::now();
    let acc = pair_sweep(range, |x, y, pc, acc| {
        let direct = direct_lhs(x, y)?;
        let closed = simplified_lhs(x, y).map_err(|e| e.at(x, y))?;
        acc.cells[sweep_cell(pc)].observe(direct, x, y);
        if closed != direct {
            let diff = closed.checked_sub(direct).ok_or(Error::OverflowAt {
                x,
                y,
                what: "cross-check difference",
            })?;
            let mut v = pair_violation(x, y, pc, ViolationKind::CrossMismatch, diff);
            v.detail = Some(format!("closed={closed} direct={direct}"));
            acc.violate(v);
        }
        Ok(())
    })?;
    let mut params = BTreeMap::new();
    params.insert("route".into(), "cross".into());
    Ok(finish("verify", params, range, acc, describe_cell, started))
}

/// `|w| ≤ m` for all six raw weights; tallies record `max |w|` per cell.
pub fn verify_weight_bound(range: &RangeSpec, m: Rational) -> Result<VerificationReport> {
    let started = Instant::now();
    let acc = pair_sweep(range, |x, y, pc, acc| {
        let w = weight_vector(x, y).map_err(|e| e.at(x, y))?;
        let top = w.to_array().into_iter().map(i128::abs).max().unwrap_or(0);
        acc.cells[sweep_cell(pc)].observe(top, x, y);
        if Rational::from_int(top) > m {
            let mut v = pair_violation(x, y, pc, ViolationKind::BoundExceeded, top);
            v.detail = Some(format!("weights={:?}", w.to_array()));
            acc.violate(v);
        }
        Ok(())
    })?;
    let mut params = BTreeMap::new();
    params.insert("M".into(), m.to_string());
    let describe = |c| (sweep_cell_label(c), Some(m));
    Ok(finish("weight-bound", params, range, acc, describe, started))
}

/// The triangle gap over `[x_min, x_max]³ × thetas`, then symmetrization over
/// the pairs of the range × `lambdas` with the explicit weights.
///
/// `pairs_checked` counts every (triple, θ) and (pair, λ) evaluation. Gap
/// tallies hold the gap; symmetrization tallies hold the symmetrized left-hand side.
pub fn verify_lemmas(range: &RangeSpec, thetas: &[Rational], lambdas: &[LambdaSpec]) -> Result<VerificationReport> {
    let started = Instant::now();
    let (lo, hi) = (range.x_min, range.x_max);
    let side = range.rows();

    let lemma1 = if thetas.is_empty() {
        Acc::<i128>::new(0)
    } else {
        par_blocks(
            lo,
            hi,
            side * side * thetas.len() as u64,
            |a, b, progress| {
                let mut acc = Acc::<i128>::new(thetas.len());
                for x in a..=b {
                    for y in lo..=hi {
                        for z in lo..=hi {
                            for (i, theta) in thetas.iter().enumerate() {
                                let gap = lemma1_gap_scaled(theta.numer(), x, y, z).map_err(|e| e.at(x, y))?;
                                acc.pairs += 1;
                                acc.cells[i].observe(gap, x, y);
                                if gap < 0 {
                                    acc.violate(Violation {
                                        x,
                                        y,
                                        z: Some(WideUint(z)),
                                        kind: ViolationKind::Lemma1,
                                        case: None,
                                        value: Rational::new(gap, theta.denom())?,
                                        detail: Some(format!("theta={theta}")),
                                    });
                                }
                            }
                        }
                    }
                    progress.row_done();
                }
                Ok(acc)
            },
            Acc::absorb,
        )?
    };

    let lemma2 = if lambdas.is_empty() {
        Acc::<Rational>::new(0)
    } else {
        par_blocks(
            lo,
            hi,
            range.cols() * lambdas.len() as u64,
            |a, b, progress| {
                let mut acc = Acc::<Rational>::new(lambdas.len());
                for x in a..=b {
                    for_each_row_pair(range, x, x, |x, y, pc| {
                        lemma2_pair(lambdas, x, y, pc, &mut acc).map_err(|e| e.at(x, y))
                    })?;
                    progress.row_done();
                }
                Ok(acc)
            },
            Acc::absorb,
        )?
    };

    let mut tallies = lemma1.tallies(|i| (format!("lemma1 theta={}", thetas[i]), Some(Rational::ZERO)));
    // Gap values were accumulated scaled by the denominator of θ.
    for (t, theta) in tallies.iter_mut().zip(thetas) {
        for e in [&mut t.min, &mut t.max].into_iter().flatten() {
            e.value = Rational::new(e.value.numer(), theta.denom())?;
        }
    }
    tallies.extend(lemma2.tallies(|i| (format!("lemma2 lambda={}", lambdas[i]), Some(Rational::ZERO))));

    let mut violations = lemma1.violations;
    violations.extend(lemma2.violations);
    violations.sort();
    violations.truncate(super::VIOLATION_RETAIN);

    let mut params = BTreeMap::new();
    let join = |v: Vec<String>| v.join(";");
    params.insert("thetas".into(), join(thetas.iter().map(|t| t.to_string()).collect()));
    params.insert("lambdas".into(), join(lambdas.iter().map(|l| l.to_string()).collect()));
    Ok(VerificationReport {
        command: "lemmas".into(),
        params,
        range: range.clone(),
        pairs_checked: lemma1.pairs + lemma2.pairs,
        per_case: tallies,
        violations,
        violations_total: lemma1.violations_total + lemma2.violations_total,
        elapsed_ms: Some(started.elapsed().as_millis() as u64),
    })
}

fn lemma2_pair(lambdas: &[LambdaSpec], x: Point, y: Point, pc: &PairClass, acc: &mut Acc<Rational>) -> Result<()> {
    let dist = SquaredDistances::at(&AccelT, x, y)?;
    let raw_xy = Rational::from_int(dist.weighted_sum(&weight_vector(x, y)?)?);
    let raw_yx = Rational::from_int(dist.transposed().weighted_sum(&weight_vector(y, x)?)?);
    for (i, spec) in lambdas.iter().enumerate() {
        let lam = spec.at(x, y)?;
        let sym = dist.weighted_sum(&symmetrize(&CollatzWeights, spec, x, y)?)?;
        let blend = Rational::ONE
            .checked_sub(&lam)?
            .checked_mul(&raw_xy)?
            .checked_add(&lam.checked_mul(&raw_yx)?)?;
        acc.pairs += 1;
        acc.cells[i].observe(sym, x, y);
        let mut report = |kind, value: Rational| {
            acc.violate(Violation {
                x,
                y,
                z: None,
                kind,
                case: Some(pc.case),
                value,
                detail: Some(format!("lambda={spec}")),
            })
        };
        if sym != blend {
            report(ViolationKind::Lemma2Identity, sym.checked_sub(&blend)?);
        }
        if sym.is_positive() {
            report(ViolationKind::Lemma2Sign, sym);
        }
    }
    Ok(())
}

const DECAY: usize = 0;
const PREMISE_FAILED: usize = 1;
const TELESCOPED: usize = 2;

/// One-step and telescoped geometric decay along the accelerated orbit of
/// every seed in `[seeds_lo, seeds_hi]`.
///
/// The `decay` tally records `d(Tⁿx,Tⁿ⁺¹x)² / d(Tⁿ⁻¹x,Tⁿx)²` at steps whose
/// pair satisfies condition (5); `premise-failed` and `telescoped` only
/// count steps. An orbit that does not reach 1 within `cap` steps is an error.
pub fn orbit_decay_sweep(
    seeds_lo: Point,
    seeds_hi: Point,
    params: &ConditionParams,
    cap: u64,
) -> Result<VerificationReport> {
    let started = Instant::now();
    let range = RangeSpec::new(seeds_lo, seeds_hi, 1, 1)?;
    if cap == 0 {
        return Err(invalid("cap must be at least 1"));
    }
    let acc = par_blocks(
        seeds_lo,
        seeds_hi,
        1,
        |a, b, progress| {
            let mut acc = Acc::<Rational>::new(3);
            for seed in a..=b {
                let orbit = iterate_orbit(&AccelT, seed, cap)?;
                if !orbit.reached_fixed_point {
                    return Err(Error::CapExceeded { seed, cap });
                }
                let report = check_orbit_decay(&orbit, &CollatzWeights, params)?;
                let sq = &orbit.step_distances_squared;
                acc.pairs += 1;
                for step in &report.steps {
                    let (px, py) = step.pair;
                    let detail = || Some(format!("seed={seed} n={}", step.n));
                    match step.status {
                        StepStatus::PremiseFailed => acc.cells[PREMISE_FAILED].checked += 1,
                        StepStatus::Decayed | StepStatus::Violated => {
                            let ratio = Rational::new(sq[step.n], sq[step.n - 1])?;
                            acc.cells[DECAY].observe(ratio, px, py);
                        }
                    }
                    if step.status == StepStatus::Violated {
                        let excess = Rational::from_int(sq[step.n])
                            .checked_sub(&params.a.checked_mul(&Rational::from_int(sq[step.n - 1]))?)?;
                        acc.violate(Violation {
                            x: px,
                            y: py,
                            z: None,
                            kind: ViolationKind::Decay,
                            case: None,
                            value: excess,
                            detail: detail(),
                        });
                    }
                    if step.telescoped.is_some() {
                        acc.cells[TELESCOPED].checked += 1;
                    }
                    if step.telescoped == Some(false) {
                        acc.violate(Violation {
                            x: px,
                            y: py,
                            z: None,
                            kind: ViolationKind::Telescoped,
                            case: None,
                            value: Rational::from_int(sq[step.n]),
                            detail: detail(),
                        });
                    }
                }
                progress.add(1);
            }
            Ok(acc)
        },
        Acc::absorb,
    )?;
    let mut p = BTreeMap::new();
    p.insert("lambda".into(), params.lambda.to_string());
    p.insert("A".into(), params.a.to_string());
    p.insert("cap".into(), cap.to_string());
    let a = params.a;
    let describe = |i| match i {
        DECAY => ("decay".to_string(), Some(a)),
        PREMISE_FAILED => ("premise-failed".to_string(), None),
        _ => ("telescoped".to_string(), None),
    };
    debug_assert_eq!(TELESCOPED, 2);
    Ok(finish("decay", p, &range, acc, describe, started))
}
