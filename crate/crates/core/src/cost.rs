//! Nonnegative extended-real costs.
//!
//! Every distance sum in the crate is a [`Cost`]. Infinity is a regular value
//! that absorbs addition, so recursions can add onto unreachable subproblems
//! without special cases. Finite sums that exceed `f64::MAX` saturate to
//! [`Cost::INFINITY`].
//!
//! Metrics whose distances are all integers ("integral" metrics) produce
//! integer-valued costs that are exact as long as they stay below 2^53, which
//! is why tests over such metrics compare costs with `==`.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Cost(f64);

impl Cost {
    pub const ZERO: Cost = Cost(0.0);
    pub const INFINITY: Cost = Cost(f64::INFINITY);

    /// Wraps a nonnegative value.
    ///
    /// # Panics
    ///
    /// Panics if `value` is negative or NaN.
    pub fn new(value: f64) -> Cost {
        Cost::try_new(value).unwrap_or_else(|| panic!("cost must be nonnegative, got {value}"))
    }

    pub fn try_new(value: f64) -> Option<Cost> {
        (value >= 0.0).then_some(Cost(value))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    #[inline]
    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// Multiplies by a nonnegative factor; infinity stays infinite even for a zero factor.
    #[inline]
    pub fn times(self, factor: f64) -> Cost {
        debug_assert!(factor >= 0.0);
        if self.is_infinite() {
            Cost::INFINITY
        } else {
            Cost(self.0 * factor)
        }
    }

    /// True when the value is a whole number (always false for infinity).
    pub fn is_integral(self) -> bool {
        self.is_finite() && self.0.fract() == 0.0
    }
}

impl Add for Cost {
    type Output = Cost;

    #[inline]
    fn add(self, rhs: Cost) -> Cost {
        // Both operands are >= 0, so the sum is never NaN; overflow lands on +inf.
        Cost(self.0 + rhs.0)
    }
}

impl AddAssign for Cost {
    #[inline]
    fn add_assign(&mut self, rhs: Cost) {
        *self = *self + rhs;
    }
}

impl Sum for Cost {
    fn sum<I: Iterator<Item = Cost>>(iter: I) -> Cost {
        iter.fold(Cost::ZERO, Add::add)
    }
}

impl Eq for Cost {}

impl PartialOrd for Cost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cost {
    #[inline]
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl From<u32> for Cost {
    fn from(v: u32) -> Cost {
        Cost(f64::from(v))
    }
}

impl From<usize> for Cost {
    fn from(v: usize) -> Cost {
        Cost(v as f64)
    }
}

impl PartialEq<f64> for Cost {
    fn eq(&self, other: &f64) -> bool {
        self.0 == *other
    }
}

impl PartialOrd<f64> for Cost {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            fmt::Display::fmt(&self.0, f)
        }
    }
}

/// Finite costs serialize as JSON numbers, infinity as the string `"inf"`.
impl Serialize for Cost {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Cost {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Cost, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Cost::try_new(v).ok_or_else(|| serde::de::Error::custom("negative cost")),
            Repr::Str(s) if s == "inf" => Ok(Cost::INFINITY),
            Repr::Str(s) => Err(serde::de::Error::custom(format!("invalid cost {s:?}"))),
        }
    }
}
