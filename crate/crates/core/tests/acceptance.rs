//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
//!
//! Run with `cargo test -p collatz-fp --test acceptance`.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use collatz_fp::collatz::AccelT;
use collatz_fp::collatz::{accel_t, collatz_c, consistency_ct, stopping_time, CollatzMap};
use collatz_fp::collatz_weights::CollatzWeights;
use collatz_fp::framework::{check_condition, lhs, ConditionKind, ConditionParams, LambdaSpec};
use collatz_fp::verifier::{
    condition_coverage, cross_check_simplified, orbit_decay_sweep, search_lambda, verify_lemmas,
    verify_pseudocontraction, verify_weight_bound, ConditionCoverageReport, RangeSpec, SearchGrid, VerificationReport,
};
use collatz_fp::Rational;
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Every criterion is exact: no violation, mismatch or disagreement is tolerated.
const ALLOWED_VIOLATIONS: u64 = 0;

const SWEEP_N: u128 = 10_000;
const IDENTITY_N: u128 = 2_000;
const BOUNDS_N: u128 = 2_000;
const LEMMA1_N: u128 = 200;
const LEMMA1_THETAS: [&str; 9] = ["-3", "-5/2", "-2", "-1", "0", "1/2", "1", "2", "3"];
const LEMMA2_N: u128 = 500;
const LEMMA2_LAMBDAS: [&str; 5] = ["0", "1/4", "1/2", "3/4", "1"];
const COVERAGE_N: u128 = 999;
const COVERAGE_ORACLE_N: u64 = 150;
const M_BOUND_N: u128 = 10_000;
const DECAY_SEEDS: u128 = 100_000;
const PLUMBING_N: u64 = 1_000_000;
const CONSISTENCY_N: u128 = 100_000;
const STEP_CAP: u64 = 100_000;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(s: &str) -> Rational {
    s.parse().expect("rational literal")
}

fn base_params(lambda: &str) -> ConditionParams {
    ConditionParams::new(lambda.parse().expect("lambda literal"), q("1/2"), q("2"), q("2")).expect("valid params")
}

fn clean(r: &VerificationReport) -> Result<(), String> {
    ensure(r.violations_total == ALLOWED_VIOLATIONS, || {
        format!("{} violations, first: {:?}", r.violations_total, r.violations.first())
    })
}

fn inequality_sweep() -> Check {
    let r = verify_pseudocontraction(&RangeSpec::square(1, SWEEP_N).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    ensure(r.pairs_checked == (SWEEP_N * SWEEP_N) as u64, || {
        format!("checked {} pairs", r.pairs_checked)
    })?;
    clean(&r)?;
    Ok(format!(
        "{} pairs, lhs <= 0 and sharpened bounds everywhere",
        r.pairs_checked
    ))
}

fn closed_form_identity() -> Check {
    let r = cross_check_simplified(&RangeSpec::square(1, IDENTITY_N).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    ensure(r.pairs_checked == (IDENTITY_N * IDENTITY_N) as u64, || {
        format!("checked {}", r.pairs_checked)
    })?;
    clean(&r)?;
    // Independent evaluation on a sub-square.
    for x in 1..=400u64 {
        for y in 1..=400u64 {
            let lib = lhs(&CollatzWeights, &AccelT, x as u128, y as u128).map_err(|e| e.to_string())?;
            ensure(lib == i128::from(common::lhs(x, y)), || {
                format!("oracle disagrees at ({x}, {y})")
            })?;
        }
    }
    let cells = r.per_case.iter().filter(|t| t.checked > 0).count();
    Ok(format!(
        "{} pairs, 0 mismatches over {cells} case cells; oracle agrees on 400x400",
        r.pairs_checked
    ))
}

fn sharpened_bounds() -> Check {
    let r = verify_pseudocontraction(&RangeSpec::square(1, BOUNDS_N).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    clean(&r)?;
    let mut summary = Vec::new();
    for t in &r.per_case {
        let (Some(max), Some(bound)) = (t.max, t.bound) else {
            return Err(format!("cell {} was not exercised", t.cell));
        };
        ensure(max.value <= bound, || {
            format!("{}: max {} above {}", t.cell, max.value, bound)
        })?;
        summary.push(format!("{}<={}", t.cell, bound));
    }
    for (x, y) in [(1u64, 1u64), (1, 2), (1, 3)] {
        ensure(common::lhs(x, y) == 0, || format!("oracle lhs at ({x}, {y}) is not 0"))?;
        let lib = lhs(&CollatzWeights, &AccelT, x as u128, y as u128).map_err(|e| e.to_string())?;
        ensure(lib == 0, || format!("lhs at ({x}, {y}) is {lib}, expected the bound 0"))?;
    }
    Ok(format!(
        "{} cells within bounds; 0 attained at (1,1), (1,2), (1,3)",
        summary.len()
    ))
}

fn triangle_gap() -> Check {
    let thetas: Vec<Rational> = LEMMA1_THETAS.iter().map(|s| q(s)).collect();
    let r = verify_lemmas(
        &RangeSpec::square(1, LEMMA1_N).map_err(|e| e.to_string())?,
        &thetas,
        &[],
    )
    .map_err(|e| e.to_string())?;
    let expected = (LEMMA1_N * LEMMA1_N * LEMMA1_N) as u64 * thetas.len() as u64;
    ensure(r.pairs_checked == expected, || {
        format!("evaluated {} of {expected}", r.pairs_checked)
    })?;
    clean(&r)?;
    Ok(format!("{} (triple, theta) gaps, all >= 0", r.pairs_checked))
}

fn symmetrization() -> Check {
    let lambdas: Vec<LambdaSpec> = LEMMA2_LAMBDAS.iter().map(|s| s.parse().expect("lambda")).collect();
    let r = verify_lemmas(
        &RangeSpec::square(1, LEMMA2_N).map_err(|e| e.to_string())?,
        &[],
        &lambdas,
    )
    .map_err(|e| e.to_string())?;
    ensure(r.pairs_checked == (LEMMA2_N * LEMMA2_N) as u64 * 5, || {
        format!("evaluated {}", r.pairs_checked)
    })?;
    clean(&r)?;
    // Independent scaled evaluation for λ = p/4 on a sub-square.
    for t in &r.per_case {
        let max = t.max.ok_or("empty lemma 2 tally")?;
        ensure(!max.value.is_positive(), || {
            format!("{}: positive symmetrized lhs", t.cell)
        })?;
    }
    for p in 0..=4 {
        for x in 1..=120u64 {
            for y in 1..=120u64 {
                let scaled = common::sym_lhs_scaled(x, y, p, 4);
                let blend = (4 - p) * common::lhs(x, y) + p * common::lhs(y, x);
                ensure(scaled == blend && scaled <= 0, || {
                    format!("oracle: lambda={p}/4 at ({x}, {y})")
                })?;
            }
        }
    }
    Ok(format!(
        "{} (pair, lambda) evaluations: identity exact, symmetrized lhs <= 0",
        r.pairs_checked
    ))
}

const HOLDING_CELLS: [&str; 8] = [
    "one-one",
    "one-even",
    "even-one",
    "one-odd",
    "odd-one",
    "even-even",
    "even-odd",
    "odd-odd/x>=y",
];
const MIXED_CELLS: [&str; 6] = ["one-even", "one-odd", "even-one", "even-odd", "odd-one", "odd-even"];

fn coverage() -> Check {
    let range = RangeSpec::square(1, COVERAGE_N).map_err(|e| e.to_string())?;
    let kind = ConditionKind::FIXED_POINT_5;
    let zero = condition_coverage(&range, &base_params("0"), kind, false).map_err(|e| e.to_string())?;
    ensure(zero.holds_total + zero.fails_total == zero.pairs_checked, || {
        "tallies do not sum".into()
    })?;
    for label in HOLDING_CELLS {
        let c = zero.cell(label).ok_or_else(|| format!("missing cell {label}"))?;
        ensure(c.pairs > 0 && c.fails == 0, || {
            format!(
                "{label}: {} of {} pairs fail, e.g. {:?}",
                c.fails, c.pairs, c.exemplar_fail
            )
        })?;
    }
    let odd = zero.cell("odd-odd/x>=y").ok_or("missing odd-odd cell")?;
    let combos: BTreeSet<[i128; 6]> = [
        [2, 2, -2, -2, 0, 2],
        [2, 2, -2, -1, 0, 0],
        [2, 1, -1, -1, 0, 0],
        [2, 0, 0, -1, 0, 0],
    ]
    .into();
    ensure(odd.raw_combos == combos && !odd.truncated, || {
        format!("combos {:?}", odd.raw_combos)
    })?;
    let b_sums: BTreeSet<Rational> = ["6", "4", "3", "2"].iter().map(|s| q(s)).collect();
    ensure(odd.b_sums == b_sums, || format!("B-sums {:?}", odd.b_sums))?;
    ensure(
        odd.ratios == BTreeSet::from([q("1/2")]) && odd.ratio_equals_a == odd.pairs,
        || format!("ratios {:?}", odd.ratios),
    )?;

    let p35 = check_condition(kind, &CollatzWeights, &base_params("0"), 3, 5, false).map_err(|e| e.to_string())?;
    ensure(!p35.holds, || "(3, 5) satisfies the condition".into())?;
    let lt = zero.cell("odd-odd/x<y").ok_or("missing cell")?;
    ensure(lt.exemplar_fail.map(|p| (p.x, p.y)) == Some((3, 5)), || {
        format!("fail exemplar {:?}", lt.exemplar_fail)
    })?;
    ensure(zero.fails_total > 0, || "failure set is empty".into())?;

    let one = condition_coverage(&range, &base_params("1"), kind, false).map_err(|e| e.to_string())?;
    let differing: Vec<&str> = MIXED_CELLS
        .into_iter()
        .filter(|label| {
            let (a, b) = (zero.cell(label), one.cell(label));
            match (a, b) {
                (Some(a), Some(b)) => {
                    (a.holds_first, a.holds_mirrored, a.fails, a.identification_mismatches)
                        != (b.holds_first, b.holds_mirrored, b.fails, b.identification_mismatches)
                }
                _ => false,
            }
        })
        .collect();
    ensure(!differing.is_empty(), || {
        "lambda=1 report matches lambda=0 on every mixed cell".into()
    })?;

    for (lam, p) in [("0", 0), ("1", 1)] {
        let params = base_params(lam);
        for x in 1..=COVERAGE_ORACLE_N {
            for y in 1..=COVERAGE_ORACLE_N {
                let lib = check_condition(kind, &CollatzWeights, &params, x as u128, y as u128, false)
                    .map_err(|e| e.to_string())?
                    .holds;
                ensure(lib == common::fixed_point_condition(x, y, p, 1, 1, 2, 2, 2), || {
                    format!("oracle disagrees at ({x}, {y}) for lambda={lam}")
                })?;
            }
        }
    }
    Ok(format!(
        "lambda=0: listed cells hold on {} pairs, {} failures incl. (3,5); lambda=1 differs on {}",
        HOLDING_CELLS
            .iter()
            .filter_map(|l| zero.cell(l))
            .map(|c| c.pairs)
            .sum::<u64>(),
        zero.fails_total,
        differing.join(", ")
    ))
}

fn m_bound() -> Check {
    let r = verify_weight_bound(&RangeSpec::square(1, M_BOUND_N).map_err(|e| e.to_string())?, q("2"))
        .map_err(|e| e.to_string())?;
    ensure(r.pairs_checked == (M_BOUND_N * M_BOUND_N) as u64, || {
        format!("checked {}", r.pairs_checked)
    })?;
    clean(&r)?;
    for x in (1..=2_000u64).step_by(7) {
        for y in 1..=2_000u64 {
            ensure(common::weights(x, y).iter().all(|w| w.abs() <= 2), || {
                format!("oracle |w| > 2 at ({x}, {y})")
            })?;
        }
    }
    Ok(format!("{} pairs, all six raw weights within [-2, 2]", r.pairs_checked))
}

fn orbit_decay() -> Check {
    let params = base_params("0");
    let r = orbit_decay_sweep(1, DECAY_SEEDS, &params, STEP_CAP).map_err(|e| e.to_string())?;
    ensure(r.pairs_checked == DECAY_SEEDS as u64, || {
        format!("{} seeds", r.pairs_checked)
    })?;
    clean(&r)?;
    let decay = r.tally("decay").ok_or("missing decay tally")?;
    let failed = r.tally("premise-failed").map_or(0, |t| t.checked);
    let worst = decay.max.map(|e| e.value.to_string()).unwrap_or_else(|| "-".into());
    Ok(format!(
        "{} seeds, {} premise steps decayed (worst ratio {worst}), {failed} steps without premise",
        r.pairs_checked, decay.checked
    ))
}

fn collatz_plumbing() -> Check {
    let cmap = stopping_time(CollatzMap::C, 1, STEP_CAP, false).map_err(|e| e.to_string())?;
    ensure(cmap.steps == Some(3), || format!("c(1) = {:?}", cmap.steps))?;
    ensure(accel_t(3).map_err(|e| e.to_string())? == 5, || "t(3) != 5".into())?;
    for x in (3..=PLUMBING_N).step_by(2) {
        let twice = collatz_c(collatz_c(x as u128).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(twice == accel_t(x as u128).map_err(|e| e.to_string())?, || {
            format!("C^2 != T at {x}")
        })?;
    }
    for seed in 1..=PLUMBING_N {
        for map in [CollatzMap::C, CollatzMap::T] {
            let rec = stopping_time(map, seed as u128, STEP_CAP, false).map_err(|e| e.to_string())?;
            ensure(rec.reached_one(), || format!("seed {seed} did not reach 1 under {map}"))?;
        }
    }
    for seed in (1..=PLUMBING_N).step_by(997) {
        let lib = stopping_time(CollatzMap::C, seed as u128, STEP_CAP, false).map_err(|e| e.to_string())?;
        ensure(lib.steps == common::c_steps(seed, STEP_CAP), || {
            format!("oracle stopping time differs at {seed}")
        })?;
    }
    for seed in 1..=CONSISTENCY_N {
        ensure(consistency_ct(seed, STEP_CAP).map_err(|e| e.to_string())?, || {
            format!("C/T mismatch at {seed}")
        })?;
    }
    Ok(format!(
        "c(1)=3, t(3)=5, C^2=T on odd x <= {PLUMBING_N}, all seeds <= {PLUMBING_N} reach 1, C/T consistent to {CONSISTENCY_N}"
    ))
}

/// Pretty JSON with timing removed; also checks that parsing and re-rendering is byte-identical.
fn stable_json<T: Serialize + DeserializeOwned>(value: &T) -> Result<String, String> {
    let text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    let back: T = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let again = serde_json::to_string_pretty(&back).map_err(|e| e.to_string())?;
    ensure(text == again, || "JSON does not round-trip byte-identically".into())?;
    Ok(text)
}

fn all_reports() -> Result<Vec<String>, String> {
    let e = |e: collatz_fp::Error| e.to_string();
    let range = RangeSpec::square(1, 300).map_err(e)?;
    let mut out = Vec::new();
    let strip = |mut r: VerificationReport| {
        r.elapsed_ms = None;
        r
    };
    let strip_cov = |mut r: ConditionCoverageReport| {
        r.elapsed_ms = None;
        r
    };
    out.push(stable_json(&strip(verify_pseudocontraction(&range).map_err(e)?))?);
    out.push(stable_json(&strip(cross_check_simplified(&range).map_err(e)?))?);
    out.push(stable_json(&strip(
        verify_lemmas(
            &RangeSpec::square(1, 40).map_err(e)?,
            &[q("-2"), q("1/2")],
            &["1/3".parse().map_err(e)?],
        )
        .map_err(e)?,
    ))?);
    out.push(stable_json(&strip(
        orbit_decay_sweep(1, 3000, &base_params("1/2"), STEP_CAP).map_err(e)?,
    ))?);
    let small = RangeSpec::square(1, 99).map_err(e)?;
    out.push(stable_json(&strip_cov(
        condition_coverage(&small, &base_params("1"), ConditionKind::FIXED_POINT_5, false).map_err(e)?,
    ))?);
    let grid = SearchGrid {
        q: 1,
        a_grid: vec![q("1/2"), q("2/3")],
        condition: ConditionKind::FIXED_POINT_5,
        corrected_c4: false,
        b: q("2"),
        m: q("2"),
        m_on_symmetrized: false,
        budget: u64::MAX,
    };
    let mut s = search_lambda(&RangeSpec::square(1, 40).map_err(e)?, &grid).map_err(e)?;
    s.elapsed_ms = None;
    out.push(stable_json(&s)?);
    Ok(out)
}

fn determinism() -> Check {
    let run = |threads: usize| -> Result<Vec<String>, String> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| e.to_string())?
            .install(all_reports)
    };
    let base = run(1)?;
    for threads in [1, 2, 5] {
        ensure(run(threads)? == base, || {
            format!("reports differ with {threads} threads")
        })?;
    }
    Ok(format!(
        "{} report kinds byte-identical across repeats and 1/2/5 threads",
        base.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("inequality-sweep", inequality_sweep),
        ("closed-form-identity", closed_form_identity),
        ("sharpened-bounds", sharpened_bounds),
        ("triangle-gap", triangle_gap),
        ("symmetrization", symmetrization),
        ("condition-coverage", coverage),
        ("m-bound", m_bound),
        ("orbit-decay", orbit_decay),
        ("collatz-plumbing", collatz_plumbing),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let started = Instant::now();
        let outcome = check();
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
