//! The Collatz map `C`, the accelerated map `T`, and stopping times.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exact::WideUint;
use crate::framework::SelfMap;
use crate::Point;

/// Default iteration cap for trajectories.
pub const DEFAULT_CAP: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CollatzMap {
    /// `x/2` for even `x`, `3x+1` for odd `x`.
    C,
    /// `1 ↦ 1`, `x/2` for even `x`, `(3x+1)/2` for odd `x ≥ 3`.
    T,
}

impl CollatzMap {
    pub fn apply(self, x: Point) -> Result<Point> {
        match self {
            CollatzMap::C => collatz_c(x),
            CollatzMap::T => accel_t(x),
        }
    }
}

impl std::str::FromStr for CollatzMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "C" | "c" => Ok(CollatzMap::C),
            "T" | "t" => Ok(CollatzMap::T),
            _ => Err(invalid(format!("unknown map {s:?}, expected C or T"))),
        }
    }
}

impl std::fmt::Display for CollatzMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CollatzMap::C => "C",
            CollatzMap::T => "T",
        })
    }
}

fn require_positive(x: Point) -> Result<()> {
    if x == 0 {
        Err(invalid("points must be positive integers"))
    } else {
        Ok(())
    }
}

fn three_x_plus_one(x: Point) -> Result<Point> {
    x.checked_mul(3)
        .and_then(|v| v.checked_add(1))
        .ok_or(Error::Overflow("3x+1"))
}

pub fn collatz_c(x: Point) -> Result<Point> {
    require_positive(x)?;
    if x % 2 == 0 {
        Ok(x / 2)
    } else {
        three_x_plus_one(x)
    }
}

pub fn accel_t(x: Point) -> Result<Point> {
    require_positive(x)?;
    if x == 1 {
        Ok(1)
    } else if x % 2 == 0 {
        Ok(x / 2)
    } else {
        Ok(three_x_plus_one(x)? / 2)
    }
}

/// The accelerated map as a [`SelfMap`] for the fixed-point framework.
#[derive(Debug, Clone, Copy, Default)]
pub struct AccelT;

impl SelfMap for AccelT {
    fn apply(&self, x: Point) -> Result<Point> {
        accel_t(x)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub seed: WideUint,
    pub map: CollatzMap,
    /// Minimal `n ≥ 1` with `mapⁿ(seed) = 1`; `None` when the cap was hit first.
    pub steps: Option<u64>,
    pub peak: WideUint,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub path: Option<Vec<WideUint>>,
}

impl TrajectoryRecord {
    pub fn reached_one(&self) -> bool {
        self.steps.is_some()
    }
}

/// Iterate `map` from `seed` until the value 1 is attained after at least one step.
pub fn stopping_time(map: CollatzMap, seed: Point, cap: u64, keep_path: bool) -> Result<TrajectoryRecord> {
    require_positive(seed)?;
    if cap == 0 {
        return Err(invalid("step cap must be at least 1"));
    }
    let mut path = keep_path.then(|| vec![WideUint(seed)]);
    let mut peak = seed;
    let mut value = seed;
    let mut steps = None;
    for n in 1..=cap {
        value = map.apply(value)?;
        peak = peak.max(value);
        if let Some(p) = path.as_mut() {
            p.push(WideUint(value));
        }
        if value == 1 {
            steps = Some(n);
            break;
        }
    }
    Ok(TrajectoryRecord {
        seed: WideUint(seed),
        map,
        steps,
        peak: WideUint(peak),
        path,
    })
}

fn path_to_one(map: CollatzMap, seed: Point, cap: u64) -> Result<Vec<Point>> {
    let rec = stopping_time(map, seed, cap, true)?;
    if !rec.reached_one() {
        return Err(Error::CapExceeded { seed, cap });
    }
    Ok(rec.path.unwrap_or_default().into_iter().map(|v| v.0).collect())
}

/// Whether the `T`-trajectory of `seed` is the `C`-trajectory with the even
/// value after each odd step removed (and `1 → 4 → 2 → 1` collapsed to `1 → 1`).
pub fn consistency_ct(seed: Point, cap: u64) -> Result<bool> {
    let c_path = path_to_one(CollatzMap::C, seed, cap)?;
    let t_path = path_to_one(CollatzMap::T, seed, cap)?;

    let mut compressed = vec![c_path[0]];
    let mut i = 0;
    while i + 1 < c_path.len() {
        let v = c_path[i];
        let stride = if v == 1 {
            3
        } else if v % 2 == 1 {
            2
        } else {
            1
        };
        let Some(&next) = c_path.get(i + stride) else {
            return Ok(false);
        };
        compressed.push(next);
        i += stride;
    }
    Ok(compressed == t_path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maps_on_small_inputs() {
        assert_eq!(collatz_c(1).unwrap(), 4);
        assert_eq!(collatz_c(4).unwrap(), 2);
        assert_eq!(collatz_c(7).unwrap(), 22);
        assert_eq!(accel_t(1).unwrap(), 1);
        assert_eq!(accel_t(3).unwrap(), 5);
        assert_eq!(accel_t(6).unwrap(), 3);
    }

    #[test]
    fn zero_is_rejected() {
        assert!(collatz_c(0).is_err());
        assert!(accel_t(0).is_err());
        assert!(stopping_time(CollatzMap::T, 0, 10, false).is_err());
        assert!(stopping_time(CollatzMap::T, 5, 0, false).is_err());
    }

    #[test]
    fn overflow_does_not_wrap() {
        let odd = (u128::MAX / 3 + 1) | 1;
        assert!(collatz_c(odd).unwrap_err().is_overflow());
        assert!(accel_t(odd).unwrap_err().is_overflow());
    }

    #[test]
    fn stopping_times() {
        assert_eq!(stopping_time(CollatzMap::C, 1, 10, false).unwrap().steps, Some(3));
        assert_eq!(stopping_time(CollatzMap::T, 1, 10, false).unwrap().steps, Some(1));
        let t3 = stopping_time(CollatzMap::T, 3, 100, true).unwrap();
        assert_eq!(t3.steps, Some(5));
        let path: Vec<u128> = t3.path.unwrap().iter().map(|v| v.0).collect();
        assert_eq!(path, [3, 5, 8, 4, 2, 1]);
        assert_eq!(t3.peak.0, 8);
    }

    #[test]
    fn cap_is_a_reported_outcome() {
        let rec = stopping_time(CollatzMap::C, 27, 10, false).unwrap();
        assert_eq!(rec.steps, None);
        assert!(rec.peak.0 >= 27);
        // c(27) = 111, a classical value.
        assert_eq!(stopping_time(CollatzMap::C, 27, 1000, false).unwrap().steps, Some(111));
        assert_eq!(stopping_time(CollatzMap::C, 27, 1000, false).unwrap().peak.0, 9232);
    }

    #[test]
    fn consistency_examples() {
        assert!(consistency_ct(3, 100).unwrap());
        assert!(consistency_ct(1, 100).unwrap());
        assert!(consistency_ct(4, 100).unwrap());
        assert!(matches!(consistency_ct(27, 10), Err(Error::CapExceeded { .. })));
    }
}
