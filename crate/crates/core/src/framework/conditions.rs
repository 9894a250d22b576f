//! Per-pair evaluation of the five alternative hypotheses on λ-symmetrized
//! weights. The hypotheses are universally quantified over pairs; here each
//! one is checked at a single pair and sweeps aggregate the outcomes.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{symmetrize, LambdaSpec, WeightFunction, WeightVector};
use crate::error::{invalid, Result};
use crate::exact::{Rational, Scalar};
use crate::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Theorem {
    /// Orbits are Cauchy.
    One,
    /// Orbits converge (complete space).
    Two,
    /// A fixed point exists; condition (5) adds the `B` and `M` bounds.
    Three,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum ConditionNumber {
    C1,
    C2,
    C3,
    C4,
    C5,
}

impl TryFrom<u8> for Theorem {
    type Error = crate::Error;

    fn try_from(n: u8) -> Result<Self> {
        match n {
            1 => Ok(Theorem::One),
            2 => Ok(Theorem::Two),
            3 => Ok(Theorem::Three),
            _ => Err(invalid(format!("theorem must be 1, 2 or 3, got {n}"))),
        }
    }
}

impl From<Theorem> for u8 {
    fn from(t: Theorem) -> u8 {
        match t {
            Theorem::One => 1,
            Theorem::Two => 2,
            Theorem::Three => 3,
        }
    }
}

impl TryFrom<u8> for ConditionNumber {
    type Error = crate::Error;

    fn try_from(n: u8) -> Result<Self> {
        match n {
            1 => Ok(ConditionNumber::C1),
            2 => Ok(ConditionNumber::C2),
            3 => Ok(ConditionNumber::C3),
            4 => Ok(ConditionNumber::C4),
            5 => Ok(ConditionNumber::C5),
            _ => Err(invalid(format!("condition must be 1..=5, got {n}"))),
        }
    }
}

impl From<ConditionNumber> for u8 {
    fn from(c: ConditionNumber) -> u8 {
        c as u8 + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConditionKind {
    pub theorem: Theorem,
    pub condition: ConditionNumber,
}

impl ConditionKind {
    pub fn new(theorem: u8, condition: u8) -> Result<Self> {
        Ok(ConditionKind {
            theorem: theorem.try_into()?,
            condition: condition.try_into()?,
        })
    }

    /// Condition (5) of the fixed-point theorem, the one the explicit weights target.
    pub const FIXED_POINT_5: ConditionKind = ConditionKind {
        theorem: Theorem::Three,
        condition: ConditionNumber::C5,
    };

    /// Condition (5) without the `B`/`M` bounds; enough for geometric decay.
    pub const CAUCHY_5: ConditionKind = ConditionKind {
        theorem: Theorem::One,
        condition: ConditionNumber::C5,
    };
}

impl fmt::Display for ConditionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "theorem {} condition ({})",
            u8::from(self.theorem),
            u8::from(self.condition)
        )
    }
}

/// λ-mapping and the constants `A`, `B`, `M`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionParams {
    pub lambda: LambdaSpec,
    #[serde(rename = "A")]
    pub a: Rational,
    #[serde(rename = "B")]
    pub b: Rational,
    #[serde(rename = "M")]
    pub m: Rational,
    /// Also require `|w| ≤ M` on the symmetrized weights, not only the raw ones.
    #[serde(default)]
    pub m_on_symmetrized: bool,
}

impl ConditionParams {
    pub fn new(lambda: LambdaSpec, a: Rational, b: Rational, m: Rational) -> Result<Self> {
        if !a.is_positive() || a >= Rational::ONE {
            return Err(invalid(format!("A must lie in (0, 1), got {a}")));
        }
        if !b.is_positive() {
            return Err(invalid(format!("B must be positive, got {b}")));
        }
        if !m.is_positive() {
            return Err(invalid(format!("M must be positive, got {m}")));
        }
        Ok(ConditionParams {
            lambda,
            a,
            b,
            m,
            m_on_symmetrized: false,
        })
    }

    pub fn with_m_on_symmetrized(mut self, on: bool) -> Self {
        self.m_on_symmetrized = on;
        self
    }
}

/// Which disjunct of condition (5) succeeded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// The β-based inequalities at `(x, y)`.
    First,
    /// The γ-based inequalities at `(y, x)`.
    Mirrored,
}

/// Linear combinations of symmetrized weights that the conditions compare.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quantities {
    /// `α + ζ + 2·min{β, 0}`
    pub beta_mass: Rational,
    /// `δ + ε + 2·min{β, 0}`
    pub beta_drift: Rational,
    /// `α + ε + 2·min{γ, 0}`
    pub gamma_mass: Rational,
    /// `δ + ζ + 2·min{γ, 0}`
    pub gamma_drift: Rational,
    /// `α + β + ζ`
    pub beta_b_sum: Rational,
    /// `α + γ + ε`
    pub gamma_b_sum: Rational,
}

impl Quantities {
    pub fn of(w: &WeightVector<Rational>) -> Result<Self> {
        let two = Rational::from_int(2);
        let beta_pen = two.checked_mul(&w.beta.min_zero())?;
        let gamma_pen = two.checked_mul(&w.gamma.min_zero())?;
        let sum = |a: Rational, b: Rational, c: Rational| a.checked_add(&b)?.checked_add(&c);
        Ok(Quantities {
            beta_mass: sum(w.alpha, w.zeta, beta_pen)?,
            beta_drift: sum(w.delta, w.epsilon, beta_pen)?,
            gamma_mass: sum(w.alpha, w.epsilon, gamma_pen)?,
            gamma_drift: sum(w.delta, w.zeta, gamma_pen)?,
            beta_b_sum: sum(w.alpha, w.beta, w.zeta)?,
            gamma_b_sum: sum(w.alpha, w.gamma, w.epsilon)?,
        })
    }

    fn ratio(mass: Rational, drift: Rational) -> Result<Option<Rational>> {
        if !mass.is_positive() {
            return Ok(None);
        }
        drift.checked_neg()?.checked_div(&mass)
    }
}

/// `−drift / mass` for the requested branch of one symmetrized weight vector,
/// or `None` when the mass is not positive. For [`Branch::Mirrored`] pass the
/// vector at `(y, x)`.
pub fn contraction_ratio(wl: &WeightVector<Rational>, branch: Branch) -> Result<Option<Rational>> {
    let q = Quantities::of(wl)?;
    match branch {
        Branch::First => Quantities::ratio(q.beta_mass, q.beta_drift),
        Branch::Mirrored => Quantities::ratio(q.gamma_mass, q.gamma_drift),
    }
}

/// Everything the verdict was computed from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// Quantities of the symmetrized weights at `(x, y)`.
    pub at_xy: Quantities,
    /// Quantities of the symmetrized weights at `(y, x)`; condition (5) only.
    pub at_yx: Option<Quantities>,
    pub first_ratio: Option<Rational>,
    pub mirrored_ratio: Option<Rational>,
    /// `max |w|` over the raw weights at `(x, y)` and `(y, x)`; theorem 3 (5) only.
    pub raw_max_abs: Option<Rational>,
    /// Same for the symmetrized weights.
    pub symmetrized_max_abs: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionOutcome {
    pub kind: ConditionKind,
    pub corrected_c4: bool,
    pub holds: bool,
    pub branch: Option<Branch>,
    pub witness: Witness,
}

impl ConditionOutcome {
    /// Recompute the verdict from the recorded witness values alone.
    pub fn recheck(&self, params: &ConditionParams) -> (bool, Option<Branch>) {
        verdict(self.kind, self.corrected_c4, params, &self.witness)
    }
}

fn verdict(kind: ConditionKind, corrected_c4: bool, params: &ConditionParams, w: &Witness) -> (bool, Option<Branch>) {
    let q = &w.at_xy;
    let zero = Rational::ZERO;
    let simple = match kind.condition {
        ConditionNumber::C1 => Some(q.beta_mass > zero && q.beta_drift >= zero),
        ConditionNumber::C2 => Some(q.beta_mass >= zero && q.beta_drift > zero),
        ConditionNumber::C3 => Some(q.gamma_mass > zero && q.gamma_drift >= zero),
        ConditionNumber::C4 => {
            let second = if corrected_c4 { q.gamma_drift } else { q.beta_drift };
            Some(q.gamma_mass >= zero && second > zero)
        }
        ConditionNumber::C5 => None,
    };
    if let Some(ok) = simple {
        return (ok, ok.then_some(Branch::First));
    }

    let with_b = kind.theorem == Theorem::Three;
    let first_ok =
        q.beta_mass > zero && w.first_ratio.is_some_and(|r| r <= params.a) && (!with_b || q.beta_b_sum >= params.b);
    let mirrored_ok = w.at_yx.as_ref().is_some_and(|m| {
        m.gamma_mass > zero && w.mirrored_ratio.is_some_and(|r| r <= params.a) && (!with_b || m.gamma_b_sum >= params.b)
    });
    let branch = if first_ok {
        Some(Branch::First)
    } else if mirrored_ok {
        Some(Branch::Mirrored)
    } else {
        None
    };
    let m_ok = !with_b
        || (w.raw_max_abs.is_some_and(|v| v <= params.m)
            && (!params.m_on_symmetrized || w.symmetrized_max_abs.is_some_and(|v| v <= params.m)));
    (branch.is_some() && m_ok, branch)
}

/// Evaluate one condition at the pair `(x, y)`.
pub fn check_condition<W>(
    kind: ConditionKind,
    w: &W,
    params: &ConditionParams,
    x: Point,
    y: Point,
    corrected_c4: bool,
) -> Result<ConditionOutcome>
where
    W: WeightFunction + ?Sized,
{
    let sym_xy = symmetrize(w, &params.lambda, x, y)?;
    let at_xy = Quantities::of(&sym_xy)?;
    let witness = if kind.condition == ConditionNumber::C5 {
        let sym_yx = symmetrize(w, &params.lambda, y, x)?;
        let at_yx = Quantities::of(&sym_yx)?;
        let (raw_max_abs, symmetrized_max_abs) = if kind.theorem == Theorem::Three {
            let raw = w.weights(x, y)?.max_abs()?.max(w.weights(y, x)?.max_abs()?);
            let sym = sym_xy.max_abs()?.max(sym_yx.max_abs()?);
            (Some(raw), Some(sym))
        } else {
            (None, None)
        };
        Witness {
            at_xy,
            at_yx: Some(at_yx),
            first_ratio: Quantities::ratio(at_xy.beta_mass, at_xy.beta_drift)?,
            mirrored_ratio: Quantities::ratio(at_yx.gamma_mass, at_yx.gamma_drift)?,
            raw_max_abs,
            symmetrized_max_abs,
        }
    } else {
        Witness {
            at_xy,
            at_yx: None,
            first_ratio: None,
            mirrored_ratio: None,
            raw_max_abs: None,
            symmetrized_max_abs: None,
        }
    };
    let (holds, branch) = verdict(kind, corrected_c4, params, &witness);
    Ok(ConditionOutcome {
        kind,
        corrected_c4,
        holds,
        branch,
        witness,
    })
}

impl<S: Scalar> WeightVector<S> {
    /// Condition quantities of this vector read as already-symmetrized weights.
    pub fn quantities(&self) -> Result<Quantities> {
        Quantities::of(&self.to_rational())
    }
}
