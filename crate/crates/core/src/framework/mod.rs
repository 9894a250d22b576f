//! Weighted generalized pseudocontractions over the metric space `(ℕ, |x − y|)`.
//!
//! A self-map `T` is a pseudocontraction for weights `(α, β, γ, δ, ε, ζ)` when
//!
//! ```text
//! α d(Tx,Ty)² + β d(x,Ty)² + γ d(Tx,y)² + δ d(x,y)² + ε d(x,Tx)² + ζ d(y,Ty)² ≤ 0
//! ```
//!
//! for every pair. This module evaluates that left-hand side exactly, blends
//! weight systems with their transposes through a λ-mapping, and checks the
//! per-pair conditions that drive geometric decay of orbits.

mod conditions;
mod lambda;
mod orbit;
mod weights;

pub use conditions::{
    check_condition, contraction_ratio, Branch, ConditionKind, ConditionNumber, ConditionOutcome, ConditionParams,
    Quantities, Theorem, Witness,
};
pub use lambda::LambdaSpec;
pub use orbit::{check_orbit_decay, iterate_orbit, DecayReport, DecayStep, OrbitRecord, StepStatus};
pub use weights::{
    lhs, lhs_with, symmetrize, ConstantWeights, SquaredDistances, Symmetrized, WeightFunction, WeightVector,
};

use crate::error::{invalid, Result};
use crate::exact::{checked_square, Rational};
use crate::Point;

/// A self-map of the positive integers.
pub trait SelfMap: Sync {
    fn apply(&self, x: Point) -> Result<Point>;
}

impl<F> SelfMap for F
where
    F: Fn(Point) -> Result<Point> + Sync,
{
    fn apply(&self, x: Point) -> Result<Point> {
        self(x)
    }
}

pub(crate) fn require_point(x: Point) -> Result<()> {
    if x == 0 {
        Err(invalid("points must be positive integers"))
    } else {
        Ok(())
    }
}

/// `|x − y|`.
pub fn metric_d(x: Point, y: Point) -> Point {
    x.abs_diff(y)
}

/// `θ·d(x,y)² − 2·min{θ,0}·(d(x,z)² + d(z,y)²)`, which the triangle
/// inequality keeps nonnegative.
pub fn lemma1_gap(theta: Rational, x: Point, y: Point, z: Point) -> Result<Rational> {
    let scaled = lemma1_gap_scaled(theta.numer(), x, y, z)?;
    Rational::new(scaled, theta.denom())
}

/// [`lemma1_gap`] multiplied by the (positive) denominator of `θ`; `theta_numer`
/// is the numerator. Same sign as the unscaled gap.
pub fn lemma1_gap_scaled(theta_numer: i128, x: Point, y: Point, z: Point) -> Result<i128> {
    require_point(x)?;
    require_point(y)?;
    require_point(z)?;
    let dxy = checked_square(metric_d(x, y))?;
    let detour = checked_square(metric_d(x, z))?
        .checked_add(checked_square(metric_d(z, y))?)
        .ok_or(crate::Error::Overflow("lemma 1 detour"))?;
    let direct = theta_numer
        .checked_mul(dxy)
        .ok_or(crate::Error::Overflow("lemma 1 direct term"))?;
    let penalty = theta_numer
        .min(0)
        .checked_mul(2)
        .and_then(|t| t.checked_mul(detour))
        .ok_or(crate::Error::Overflow("lemma 1 detour term"))?;
    direct.checked_sub(penalty).ok_or(crate::Error::Overflow("lemma 1 gap"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn metric_examples() {
        assert_eq!(metric_d(5, 5), 0);
        assert_eq!(metric_d(3, 8), 5);
        assert_eq!(metric_d(8, 3), 5);
    }

    #[test]
    fn metric_axioms_small() {
        for x in 1..=40u128 {
            for y in 1..=40u128 {
                assert_eq!(metric_d(x, y) == 0, x == y);
                assert_eq!(metric_d(x, y), metric_d(y, x));
                for z in 1..=40u128 {
                    assert!(metric_d(x, z) <= metric_d(x, y) + metric_d(y, z));
                }
            }
        }
    }

    #[test]
    fn lemma1_examples() {
        assert_eq!(lemma1_gap(q("0"), 7, 2, 9).unwrap(), Rational::ZERO);
        assert_eq!(lemma1_gap(q("1"), 1, 4, 2).unwrap(), q("9"));
        assert_eq!(lemma1_gap(q("-1"), 1, 4, 2).unwrap(), q("1"));
        // θ = −5/2: −5/2·9 + 5·(1 + 4) = 5/2.
        assert_eq!(lemma1_gap(q("-5/2"), 1, 4, 2).unwrap(), q("5/2"));
        assert!(lemma1_gap(q("1"), 0, 4, 2).is_err());
    }
}
