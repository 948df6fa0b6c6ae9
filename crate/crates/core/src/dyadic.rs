//! Exact dyadic rationals `n / 2^k`.
//!
//! Every probability and tensor entry in the theory is of this form, so the
//! whole library works with exact equality. Values are kept canonical: the
//! numerator is odd whenever the exponent is positive, and zero is `0 / 2^0`.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest exponent accepted when parsing or constructing; far beyond anything
/// the theory produces but small enough that aligned numerators fit in `i128`.
const MAX_EXPONENT: u32 = 96;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Dyadic {
    num: i128,
    exp: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { num: 0, exp: 0 };
    pub const ONE: Dyadic = Dyadic { num: 1, exp: 0 };
    pub const HALF: Dyadic = Dyadic { num: 1, exp: 1 };
    pub const QUARTER: Dyadic = Dyadic { num: 1, exp: 2 };

    /// `num / 2^exp`, canonicalized.
    pub fn new(num: i128, exp: u32) -> Self {
        let mut d = Dyadic { num, exp };
        d.normalize();
        d
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic::new(n as i128, 0)
    }

    pub fn numerator(&self) -> i128 {
        self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    fn normalize(&mut self) {
        if self.num == 0 {
            self.exp = 0;
            return;
        }
        let tz = self.num.trailing_zeros().min(self.exp);
        self.num >>= tz;
        self.exp -= tz;
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_negative(&self) -> bool {
        self.num < 0
    }

    pub fn abs(self) -> Self {
        Dyadic { num: self.num.abs(), exp: self.exp }
    }

    /// Multiply by `2^-k`.
    pub fn halve(self, k: u32) -> Self {
        Dyadic::new(self.num, self.exp + k)
    }

    /// Division, defined only when the divisor is `±2^k` for some integer `k`
    /// (positive or negative).
    pub fn checked_div(self, rhs: Dyadic) -> Option<Dyadic> {
        let mag = rhs.num.unsigned_abs();
        if !mag.is_power_of_two() {
            return None;
        }
        // rhs = ±2^(j - e): dividing shifts the exponent by j - e
        let exp = self.exp as i64 + mag.trailing_zeros() as i64 - rhs.exp as i64;
        let shifted = if exp >= 0 {
            Dyadic::new(self.num, exp as u32)
        } else {
            Dyadic::new(self.num.checked_shl((-exp) as u32)?, 0)
        };
        Some(if rhs.num < 0 { -shifted } else { shifted })
    }

    fn aligned(a: Dyadic, b: Dyadic) -> (i128, i128, u32) {
        let exp = a.exp.max(b.exp);
        let an = a.num.checked_shl(exp - a.exp).expect("dyadic overflow");
        let bn = b.num.checked_shl(exp - b.exp).expect("dyadic overflow");
        (an, bn, exp)
    }

    /// Floating-point approximation, for display only.
    pub fn to_f64(self) -> f64 {
        self.num as f64 / (2f64).powi(self.exp as i32)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        let (a, b, exp) = Dyadic::aligned(self, rhs);
        Dyadic::new(a.checked_add(b).expect("dyadic overflow"), exp)
    }
}

impl AddAssign for Dyadic {
    fn add_assign(&mut self, rhs: Dyadic) {
        *self = *self + rhs;
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        self + (-rhs)
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { num: -self.num, exp: self.exp }
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Dyadic) -> Dyadic {
        Dyadic::new(self.num.checked_mul(rhs.num).expect("dyadic overflow"), self.exp + rhs.exp)
    }
}

impl Sum for Dyadic {
    fn sum<I: Iterator<Item = Dyadic>>(iter: I) -> Dyadic {
        iter.fold(Dyadic::ZERO, |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Dyadic> for Dyadic {
    fn sum<I: Iterator<Item = &'a Dyadic>>(iter: I) -> Dyadic {
        iter.fold(Dyadic::ZERO, |acc, x| acc + *x)
    }
}

impl From<i64> for Dyadic {
    fn from(n: i64) -> Self {
        Dyadic::from_int(n)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = Dyadic::aligned(*self, *other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exact fraction form: `"0"`, `"-1"`, `"3/4"`, `"-1/2"`.
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, 1u128 << self.exp)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a dyadic fraction: {s:?}"));
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: i128 = num.parse().map_err(|_| bad())?;
        let den: u128 = den.parse().map_err(|_| bad())?;
        if den == 0 || !den.is_power_of_two() {
            return Err(bad());
        }
        let exp = den.trailing_zeros();
        if exp > MAX_EXPONENT {
            return Err(bad());
        }
        Ok(Dyadic::new(num, exp))
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
