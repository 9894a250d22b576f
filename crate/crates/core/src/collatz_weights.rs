//! Explicit weights making the accelerated Collatz map `T` a weighted
//! generalized pseudocontraction, with the nine-way parity case split and
//! the per-case closed forms of the defining left-hand side.
//!
//! Points are written `x = 2k` (even) or `x = 2k + 1` (odd, `x ≥ 3`); `k`
//! and `ℓ` are the reduced coordinates of `x` and `y`. Every closed form in
//! this module is a polynomial in `(k, ℓ)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::framework::{WeightFunction, WeightVector};
use crate::Point;

/// Reduced coordinates beyond this magnitude are refused by the closed forms
/// so that every cubic term stays far inside `i128`.
const MAX_REDUCED: i128 = 1 << 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointKind {
    One,
    Even,
    /// Odd and at least 3.
    Odd,
}

impl PointKind {
    pub fn of(x: Point) -> Result<PointKind> {
        match x {
            0 => Err(invalid("points must be positive integers")),
            1 => Ok(PointKind::One),
            x if x % 2 == 0 => Ok(PointKind::Even),
            _ => Ok(PointKind::Odd),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParityCase {
    OneOne,
    OneEven,
    OneOdd,
    EvenOne,
    EvenEven,
    EvenOdd,
    OddOne,
    OddEven,
    OddOdd,
}

impl ParityCase {
    pub const ALL: [ParityCase; 9] = [
        ParityCase::OneOne,
        ParityCase::OneEven,
        ParityCase::OneOdd,
        ParityCase::EvenOne,
        ParityCase::EvenEven,
        ParityCase::EvenOdd,
        ParityCase::OddOne,
        ParityCase::OddEven,
        ParityCase::OddOdd,
    ];

    pub fn from_kinds(x: PointKind, y: PointKind) -> ParityCase {
        use ParityCase::*;
        use PointKind::*;
        match (x, y) {
            (One, One) => OneOne,
            (One, Even) => OneEven,
            (One, Odd) => OneOdd,
            (Even, One) => EvenOne,
            (Even, Even) => EvenEven,
            (Even, Odd) => EvenOdd,
            (Odd, One) => OddOne,
            (Odd, Even) => OddEven,
            (Odd, Odd) => OddOdd,
        }
    }

    pub fn kinds(self) -> (PointKind, PointKind) {
        use ParityCase::*;
        use PointKind::*;
        match self {
            OneOne => (One, One),
            OneEven => (One, Even),
            OneOdd => (One, Odd),
            EvenOne => (Even, One),
            EvenEven => (Even, Even),
            EvenOdd => (Even, Odd),
            OddOne => (Odd, One),
            OddEven => (Odd, Even),
            OddOdd => (Odd, Odd),
        }
    }

    /// The case of `(y, x)` when `self` is the case of `(x, y)`.
    pub fn transposed(self) -> ParityCase {
        let (a, b) = self.kinds();
        ParityCase::from_kinds(b, a)
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        use ParityCase::*;
        match self {
            OneOne => "one-one",
            OneEven => "one-even",
            OneOdd => "one-odd",
            EvenOne => "even-one",
            EvenEven => "even-even",
            EvenOdd => "even-odd",
            OddOne => "odd-one",
            OddEven => "odd-even",
            OddOdd => "odd-odd",
        }
    }

    /// The two coordinates fall in different classes.
    pub fn is_mixed(self) -> bool {
        let (a, b) = self.kinds();
        a != b
    }
}

impl fmt::Display for ParityCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ParityCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ParityCase::ALL
            .into_iter()
            .find(|c| c.label() == s)
            .ok_or_else(|| invalid(format!("unknown parity case {s:?}")))
    }
}

/// The five regions of the odd-odd case in reduced coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OddOddSubcase {
    /// `k − ℓ ≤ −2` and `11k − 10ℓ + 1 ≤ 0`.
    LowerGated,
    /// `k − ℓ ≤ −2` and `11k − 10ℓ + 1 ≥ 1`.
    LowerOpen,
    /// `k − ℓ ≥ 2` and `−10k + 11ℓ + 1 ≤ 0`.
    UpperGated,
    /// `k − ℓ ≥ 2` and `−10k + 11ℓ + 1 ≥ 1`.
    UpperOpen,
    /// `|k − ℓ| ≤ 1`.
    Diagonal,
}

impl OddOddSubcase {
    pub const ALL: [OddOddSubcase; 5] = [
        OddOddSubcase::LowerGated,
        OddOddSubcase::LowerOpen,
        OddOddSubcase::UpperGated,
        OddOddSubcase::UpperOpen,
        OddOddSubcase::Diagonal,
    ];

    #[allow(clippy::int_plus_one)]
    pub fn of(k: i128, l: i128) -> OddOddSubcase {
        let diff = k - l;
        if diff <= -2 {
            if 11 * k - 10 * l + 1 <= 0 {
                OddOddSubcase::LowerGated
            } else {
                OddOddSubcase::LowerOpen
            }
        } else if diff >= 2 {
            if -10 * k + 11 * l + 1 <= 0 {
                OddOddSubcase::UpperGated
            } else {
                OddOddSubcase::UpperOpen
            }
        } else {
            OddOddSubcase::Diagonal
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            OddOddSubcase::LowerGated => "lower-gated",
            OddOddSubcase::LowerOpen => "lower-open",
            OddOddSubcase::UpperGated => "upper-gated",
            OddOddSubcase::UpperOpen => "upper-open",
            OddOddSubcase::Diagonal => "diagonal",
        }
    }
}

/// A pair with its parity case and reduced coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PairClass {
    pub case: ParityCase,
    /// `x = 2k` or `x = 2k + 1`; absent for `x = 1`.
    pub k: Option<Point>,
    pub l: Option<Point>,
}

impl PairClass {
    pub fn reconstruct(&self) -> (Point, Point) {
        let (kx, ky) = self.case.kinds();
        (rebuild(kx, self.k), rebuild(ky, self.l))
    }

    pub fn odd_odd_subcase(&self) -> Option<OddOddSubcase> {
        match (self.case, self.k, self.l) {
            (ParityCase::OddOdd, Some(k), Some(l)) => Some(OddOddSubcase::of(
                gate_coordinate(Some(k)).ok()?,
                gate_coordinate(Some(l)).ok()?,
            )),
            _ => None,
        }
    }
}

fn rebuild(kind: PointKind, r: Option<Point>) -> Point {
    match (kind, r) {
        (PointKind::One, _) => 1,
        (PointKind::Even, Some(r)) => 2 * r,
        (PointKind::Odd, Some(r)) => 2 * r + 1,
        (_, None) => unreachable!("reduced coordinate missing for a non-unit point"),
    }
}

pub fn classify(x: Point, y: Point) -> Result<PairClass> {
    let (kx, ky) = (PointKind::of(x)?, PointKind::of(y)?);
    let reduce = |kind: PointKind, v: Point| (kind != PointKind::One).then_some(v / 2);
    Ok(PairClass {
        case: ParityCase::from_kinds(kx, ky),
        k: reduce(kx, x),
        l: reduce(ky, y),
    })
}

pub fn beta0(k: i128, l: i128) -> i128 {
    (k - l).clamp(-2, 2)
}

pub fn delta0(k: i128, l: i128) -> i128 {
    match OddOddSubcase::of(k, l) {
        OddOddSubcase::LowerGated | OddOddSubcase::UpperGated => -2,
        _ => -1,
    }
}

pub fn eps0(k: i128, l: i128) -> i128 {
    if OddOddSubcase::of(k, l) == OddOddSubcase::LowerGated {
        2
    } else {
        0
    }
}

pub fn zeta0(k: i128, l: i128) -> i128 {
    if OddOddSubcase::of(k, l) == OddOddSubcase::UpperGated {
        2
    } else {
        0
    }
}

fn reduced(r: Option<Point>) -> Result<i128> {
    let r = r.ok_or_else(|| invalid("reduced coordinate missing"))?;
    match i128::try_from(r) {
        Ok(v) if v <= MAX_REDUCED => Ok(v),
        _ => Err(Error::Overflow("reduced coordinate")),
    }
}

/// The subcase gates evaluate `11k − 10ℓ + 1`-style forms, which must not overflow.
fn gate_coordinate(r: Option<Point>) -> Result<i128> {
    match r {
        Some(r) if r <= 1 << 120 => Ok(r as i128),
        Some(_) => Err(Error::Overflow("odd-odd subcase gate")),
        None => Err(invalid("reduced coordinate missing")),
    }
}

fn wv(a: i128, b: i128, g: i128, d: i128, e: i128, z: i128) -> WeightVector<i128> {
    WeightVector::new(a, b, g, d, e, z)
}

pub fn weight_vector(x: Point, y: Point) -> Result<WeightVector<i128>> {
    let pc = classify(x, y)?;
    use ParityCase::*;
    Ok(match pc.case {
        OneOne => wv(1, 0, 0, 0, -1, 1),
        OneEven => wv(1, 0, 0, -1, 0, 1),
        OneOdd => wv(0, 0, 0, -2, 1, 2),
        EvenOne => wv(1, 0, 1, -1, 0, 1),
        EvenEven => wv(1, 0, -1, 0, -1, 1),
        EvenOdd => wv(0, 0, -2, 1, -2, 2),
        OddOne => wv(1, 0, -1, -1, 0, 1),
        OddEven => wv(0, -2, 0, 1, 2, -2),
        OddOdd => {
            let (k, l) = (gate_coordinate(pc.k)?, gate_coordinate(pc.l)?);
            let b0 = beta0(k, l);
            wv(2, b0, -b0, delta0(k, l), eps0(k, l), zeta0(k, l))
        }
    })
}

/// The explicit weight system as a [`WeightFunction`].
#[derive(Debug, Clone, Copy, Default)]
pub struct CollatzWeights;

impl WeightFunction for CollatzWeights {
    type Scalar = i128;

    fn weights(&self, x: Point, y: Point) -> Result<WeightVector<i128>> {
        weight_vector(x, y)
    }
}

/// The six-term odd-odd expression before it is split into subcases.
pub fn odd_odd_master(k: i128, l: i128) -> i128 {
    let d = k - l;
    (18 + 4 * delta0(k, l)) * d * d - 5 * beta0(k, l) * d * (k + l + 2)
        + eps0(k, l) * (k + 1) * (k + 1)
        + zeta0(k, l) * (l + 1) * (l + 1)
}

/// Factorized closed form for one odd-odd subcase.
pub fn odd_odd_factorized(sub: OddOddSubcase, k: i128, l: i128) -> i128 {
    match sub {
        OddOddSubcase::LowerGated => 2 * (k + 1) * (11 * k - 10 * l + 1),
        OddOddSubcase::LowerOpen => 4 * (k - l) * (6 * k - l + 5),
        OddOddSubcase::UpperGated => 2 * (l + 1) * (-10 * k + 11 * l + 1),
        OddOddSubcase::UpperOpen => 4 * (k - l) * (k - 6 * l - 5),
        OddOddSubcase::Diagonal => (k - l) * (k - l) * (4 - 5 * (k + l)),
    }
}

/// The left-hand side of the defining inequality via the per-case closed forms.
pub fn simplified_lhs(x: Point, y: Point) -> Result<i128> {
    let pc = classify(x, y)?;
    use ParityCase::*;
    let value = match pc.case {
        OneOne => 0,
        OneEven => {
            let l = reduced(pc.l)?;
            -2 * l * l + 2 * l
        }
        OneOdd => {
            let l = reduced(pc.l)?;
            -6 * l * l + 4 * l + 2
        }
        EvenOne => {
            let k = reduced(pc.k)?;
            -2 * k * k + 1
        }
        EvenEven => {
            let (k, l) = (reduced(pc.k)?, reduced(pc.l)?);
            -k * k + 2 * k * l - 2 * l * l
        }
        EvenOdd => {
            let l = reduced(pc.l)?;
            -2 * l * l + 1
        }
        OddOne => {
            let k = reduced(pc.k)?;
            -4 * k * k
        }
        OddEven => {
            let k = reduced(pc.k)?;
            -2 * k * k + 1
        }
        OddOdd => {
            let (k, l) = (reduced(pc.k)?, reduced(pc.l)?);
            odd_odd_factorized(OddOddSubcase::of(k, l), k, l)
        }
    };
    Ok(value)
}

/// Upper bound on the left-hand side that the case analysis establishes.
pub fn case_bound(pc: &PairClass) -> i128 {
    use ParityCase::*;
    match pc.case {
        OneOne | OneEven | OneOdd => 0,
        EvenOne | EvenEven | EvenOdd | OddEven => -1,
        OddOne => -4,
        OddOdd => match pc.odd_odd_subcase() {
            Some(OddOddSubcase::LowerOpen | OddOddSubcase::UpperOpen) => -8,
            _ => 0,
        },
    }
}
