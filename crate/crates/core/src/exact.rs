//! Exact scalars: checked `i128` integers and reduced `i128` rationals.
//!
//! Nothing in this crate touches floating point. Every operation that can
//! leave the 127-bit signed range returns [`Error::Overflow`] instead of
//! wrapping.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Error, Result};

/// An exact rational number in lowest terms with a positive denominator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(Ratio<i128>);

impl Rational {
    pub const ZERO: Rational = Rational(Ratio::new_raw(0, 1));
    pub const ONE: Rational = Rational(Ratio::new_raw(1, 1));

    pub fn new(numer: i128, denom: i128) -> Result<Self> {
        if denom == 0 {
            return Err(invalid("zero denominator"));
        }
        // Ratio::new negates both parts for a negative denominator; i128::MIN cannot be negated.
        if denom < 0 && (numer == i128::MIN || denom == i128::MIN) {
            return Err(Error::Overflow("rational normalization"));
        }
        Ok(Rational(Ratio::new(numer, denom)))
    }

    pub const fn from_int(n: i128) -> Self {
        Rational(Ratio::new_raw(n, 1))
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn checked_add(&self, rhs: &Rational) -> Result<Rational> {
        self.0
            .checked_add(&rhs.0)
            .map(Rational)
            .ok_or(Error::Overflow("rational addition"))
    }

    pub fn checked_sub(&self, rhs: &Rational) -> Result<Rational> {
        self.0
            .checked_sub(&rhs.0)
            .map(Rational)
            .ok_or(Error::Overflow("rational subtraction"))
    }

    pub fn checked_mul(&self, rhs: &Rational) -> Result<Rational> {
        self.0
            .checked_mul(&rhs.0)
            .map(Rational)
            .ok_or(Error::Overflow("rational multiplication"))
    }

    pub fn checked_neg(&self) -> Result<Rational> {
        self.numer()
            .checked_neg()
            .map(|n| Rational(Ratio::new_raw(n, self.denom())))
            .ok_or(Error::Overflow("rational negation"))
    }

    /// `self / rhs`, or `None` when `rhs` is zero.
    pub fn checked_div(&self, rhs: &Rational) -> Result<Option<Rational>> {
        if rhs.0.is_zero() {
            return Ok(None);
        }
        let recip = Rational::new(rhs.denom(), rhs.numer())?;
        self.checked_mul(&recip).map(Some)
    }

    pub fn abs(&self) -> Result<Rational> {
        if self.is_negative() {
            self.checked_neg()
        } else {
            Ok(*self)
        }
    }

    pub fn min_zero(&self) -> Rational {
        if self.is_negative() {
            *self
        } else {
            Rational::ZERO
        }
    }
}

impl From<i128> for Rational {
    fn from(n: i128) -> Self {
        Rational::from_int(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `p`, `-p`, or `p/q` with decimal integers and `q != 0`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse = |part: &str| -> Result<i128> {
            let part = part.trim();
            let digits = part.strip_prefix(['-', '+']).unwrap_or(part);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(invalid(format!("malformed rational {s:?}")));
            }
            part.parse::<i128>()
                .map_err(|_| invalid(format!("rational component out of range in {s:?}")))
        };
        match s.split_once('/') {
            None => Ok(Rational::from_int(parse(s)?)),
            Some((p, q)) => {
                let (p, q) = (parse(p)?, parse(q)?);
                if q == 0 {
                    return Err(invalid(format!("zero denominator in {s:?}")));
                }
                Rational::new(p, q)
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// Arithmetic shared by integer weights and λ-symmetrized rational weights.
pub trait Scalar: Copy + Ord + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn from_i128(n: i128) -> Self;
    fn add(self, rhs: Self) -> Result<Self>;
    fn mul(self, rhs: Self) -> Result<Self>;
    fn to_rational(self) -> Rational;
}

impl Scalar for i128 {
    fn zero() -> Self {
        0
    }

    fn from_i128(n: i128) -> Self {
        n
    }

    fn add(self, rhs: Self) -> Result<Self> {
        self.checked_add(rhs).ok_or(Error::Overflow("integer addition"))
    }

    fn mul(self, rhs: Self) -> Result<Self> {
        self.checked_mul(rhs).ok_or(Error::Overflow("integer multiplication"))
    }

    fn to_rational(self) -> Rational {
        Rational::from_int(self)
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Rational::ZERO
    }

    fn from_i128(n: i128) -> Self {
        Rational::from_int(n)
    }

    fn add(self, rhs: Self) -> Result<Self> {
        self.checked_add(&rhs)
    }

    fn mul(self, rhs: Self) -> Result<Self> {
        self.checked_mul(&rhs)
    }

    fn to_rational(self) -> Rational {
        self
    }
}

/// Checked square of a distance, as a signed value ready for weighting.
pub fn checked_square(d: u128) -> Result<i128> {
    let d = i128::try_from(d).map_err(|_| Error::Overflow("distance"))?;
    d.checked_mul(d).ok_or(Error::Overflow("squared distance"))
}

/// Compare `lhs * a` against `rhs * b` without leaving exact arithmetic.
pub fn cmp_products(lhs: i128, a: Rational, rhs: i128, b: Rational) -> Result<Ordering> {
    let l = Rational::from_int(lhs).checked_mul(&a)?;
    let r = Rational::from_int(rhs).checked_mul(&b)?;
    Ok(l.cmp(&r))
}

/// Signed 128-bit integer for reports. JSON carries it as a number while it
/// fits a double exactly and as a decimal string beyond 2^53.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct WideInt(pub i128);

/// Unsigned counterpart of [`WideInt`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct WideUint(pub u128);

const JSON_SAFE: u128 = 1 << 53;

impl Serialize for WideInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.unsigned_abs() <= JSON_SAFE {
            serializer.serialize_i64(self.0 as i64)
        } else {
            serializer.collect_str(&self.0)
        }
    }
}

impl Serialize for WideUint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0 <= JSON_SAFE {
            serializer.serialize_u64(self.0 as u64)
        } else {
            serializer.collect_str(&self.0)
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NumOrStr {
    Signed(i64),
    Unsigned(u64),
    Text(String),
}

impl<'de> Deserialize<'de> for WideInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match NumOrStr::deserialize(deserializer)? {
            NumOrStr::Signed(n) => Ok(WideInt(n.into())),
            NumOrStr::Unsigned(n) => Ok(WideInt(n.into())),
            NumOrStr::Text(s) => s.parse().map(WideInt).map_err(de::Error::custom),
        }
    }
}

impl<'de> Deserialize<'de> for WideUint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match NumOrStr::deserialize(deserializer)? {
            NumOrStr::Signed(n) => u128::try_from(n).map(WideUint).map_err(de::Error::custom),
            NumOrStr::Unsigned(n) => Ok(WideUint(n.into())),
            NumOrStr::Text(s) => s.parse().map(WideUint).map_err(de::Error::custom),
        }
    }
}

impl fmt::Display for WideInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Display for WideUint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `#[serde(with = "wide_point")]` for `u128` fields, using the [`WideUint`] encoding.
pub mod wide_point {
    use super::WideUint;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &u128, s: S) -> Result<S::Ok, S::Error> {
        WideUint(*v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u128, D::Error> {
        WideUint::deserialize(d).map(|w| w.0)
    }
}
