use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::collatz_weights::{classify, ParityCase};
use crate::error::{invalid, Error, Result};
use crate::exact::Rational;
use crate::Point;

/// A λ-mapping from pairs into `[0, 1]`.
///
/// Text form: a single rational (`1/2`) for a constant, or nine
/// `case=value` entries separated by commas for a per-case table, e.g.
/// `one-one=0,one-even=1,...,odd-odd=1/2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LambdaSpec {
    Constant(Rational),
    PerCase([Rational; 9]),
}

fn check_unit(v: Rational) -> Result<Rational> {
    if v.is_negative() || v > Rational::ONE {
        Err(invalid(format!("λ value {v} is outside [0, 1]")))
    } else {
        Ok(v)
    }
}

impl LambdaSpec {
    pub fn constant(v: Rational) -> Result<Self> {
        Ok(LambdaSpec::Constant(check_unit(v)?))
    }

    pub fn per_case(table: [Rational; 9]) -> Result<Self> {
        for v in table {
            check_unit(v)?;
        }
        Ok(LambdaSpec::PerCase(table))
    }

    pub fn zero() -> Self {
        LambdaSpec::Constant(Rational::ZERO)
    }

    pub fn at(&self, x: Point, y: Point) -> Result<Rational> {
        match self {
            LambdaSpec::Constant(v) => Ok(*v),
            LambdaSpec::PerCase(table) => Ok(table[classify(x, y)?.case.index()]),
        }
    }

    /// Value on one parity case.
    pub fn on_case(&self, case: ParityCase) -> Rational {
        match self {
            LambdaSpec::Constant(v) => *v,
            LambdaSpec::PerCase(table) => table[case.index()],
        }
    }
}

impl fmt::Display for LambdaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaSpec::Constant(v) => write!(f, "{v}"),
            LambdaSpec::PerCase(table) => {
                for (i, case) in ParityCase::ALL.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{}={}", case.label(), table[i])?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for LambdaSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if !s.contains('=') {
            return LambdaSpec::constant(s.parse()?);
        }
        let mut table: [Option<Rational>; 9] = [None; 9];
        for entry in s.split(',') {
            let (label, value) = entry
                .split_once('=')
                .ok_or_else(|| invalid(format!("malformed λ entry {entry:?}")))?;
            let case: ParityCase = label.trim().parse()?;
            if table[case.index()].replace(value.parse()?).is_some() {
                return Err(invalid(format!("λ given twice for case {case}")));
            }
        }
        let mut out = [Rational::ZERO; 9];
        for (case, (slot, v)) in ParityCase::ALL.iter().zip(out.iter_mut().zip(table)) {
            *slot = v.ok_or_else(|| invalid(format!("λ missing for case {case}")))?;
        }
        LambdaSpec::per_case(out)
    }
}

impl Serialize for LambdaSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LambdaSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(de::Error::custom)
    }
}
