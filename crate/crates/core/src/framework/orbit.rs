use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{
    check_condition, metric_d, require_point, Branch, ConditionKind, ConditionParams, SelfMap, WeightFunction,
};
use crate::error::{invalid, Result};
use crate::exact::{checked_square, Rational};
use crate::Point;

/// The points `x, Tx, T²x, …` with squared step lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitRecord {
    pub seed: Point,
    pub points: Vec<Point>,
    /// `d(Tⁿx, Tⁿ⁺¹x)²` for each recorded step.
    pub step_distances_squared: Vec<i128>,
    pub reached_fixed_point: bool,
    pub steps_taken: u64,
}

/// Iterate `map` from `seed` until `T(p) = p` or `max_steps` applications.
pub fn iterate_orbit<M: SelfMap + ?Sized>(map: &M, seed: Point, max_steps: u64) -> Result<OrbitRecord> {
    require_point(seed)?;
    if max_steps == 0 {
        return Err(invalid("max_steps must be at least 1"));
    }
    let mut points = vec![seed];
    let mut dists = Vec::new();
    let mut current = seed;
    let mut reached = false;
    for _ in 0..max_steps {
        let next = map.apply(current)?;
        dists.push(checked_square(metric_d(current, next))?);
        points.push(next);
        if next == current {
            reached = true;
            break;
        }
        current = next;
    }
    Ok(OrbitRecord {
        seed,
        steps_taken: dists.len() as u64,
        points,
        step_distances_squared: dists,
        reached_fixed_point: reached,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepStatus {
    /// Condition (5) holds at the step's pair and the squared step shrank by `A`.
    Decayed,
    /// Condition (5) holds but `d(Tⁿx,Tⁿ⁺¹x)² > A·d(Tⁿ⁻¹x,Tⁿx)²`.
    Violated,
    /// Condition (5) fails at the pair; nothing is asserted.
    PremiseFailed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecayStep {
    /// Index `n ≥ 1`; the pair is `(Tⁿ⁻¹x, Tⁿx)`.
    pub n: usize,
    pub pair: (Point, Point),
    pub branch: Option<Branch>,
    pub status: StepStatus,
    /// `d(Tⁿx,Tⁿ⁺¹x)² ≤ Aⁿ·d(x,Tx)²`, checked while every earlier step met the premise.
    pub telescoped: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecayReport {
    pub seed: Point,
    pub steps: Vec<DecayStep>,
}

impl DecayReport {
    pub fn violations(&self) -> impl Iterator<Item = &DecayStep> {
        self.steps
            .iter()
            .filter(|s| s.status == StepStatus::Violated || s.telescoped == Some(false))
    }

    pub fn premise_failures(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| s.status == StepStatus::PremiseFailed)
            .count()
    }
}

/// Check the one-step geometric decay along an orbit at every step whose pair
/// satisfies condition (5), plus the telescoped bound on the leading run of
/// such steps. Orbits shorter than two steps are vacuously fine.
pub fn check_orbit_decay<W>(orbit: &OrbitRecord, w: &W, params: &ConditionParams) -> Result<DecayReport>
where
    W: WeightFunction + ?Sized,
{
    let sq = &orbit.step_distances_squared;
    let a = params.a;
    let (a_num, a_den) = (BigInt::from(a.numer()), BigInt::from(a.denom()));
    let base = BigInt::from(sq.first().copied().unwrap_or(0));
    let mut a_pow_num = BigInt::from(1);
    let mut a_pow_den = BigInt::from(1);
    let mut prefix_intact = true;

    let mut steps = Vec::with_capacity(sq.len().saturating_sub(1));
    for n in 1..sq.len() {
        let (prev, cur) = (orbit.points[n - 1], orbit.points[n]);
        let outcome = check_condition(ConditionKind::CAUCHY_5, w, params, prev, cur, false)?;
        let status = if !outcome.holds {
            StepStatus::PremiseFailed
        } else if Rational::from_int(sq[n]) <= a.checked_mul(&Rational::from_int(sq[n - 1]))? {
            StepStatus::Decayed
        } else {
            StepStatus::Violated
        };
        prefix_intact &= outcome.holds;
        let telescoped = if prefix_intact {
            a_pow_num *= &a_num;
            a_pow_den *= &a_den;
            Some(BigInt::from(sq[n]) * &a_pow_den <= &a_pow_num * &base)
        } else {
            None
        };
        steps.push(DecayStep {
            n,
            pair: (prev, cur),
            branch: outcome.branch,
            status,
            telescoped,
        });
    }
    Ok(DecayReport {
        seed: orbit.seed,
        steps,
    })
}
