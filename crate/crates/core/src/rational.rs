//! Exact reduced fractions used as entangling-class keys.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// A reduced fraction `num/den` with `den > 0`.
///
/// Equality and ordering are structural on the reduced form, so two values
/// compare equal exactly when they denote the same number.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(Ratio<i64>);

impl Rational {
    pub const ZERO: Rational = Rational(Ratio::new_raw(0, 1));

    /// Builds `num/den` in lowest terms. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        Rational(Ratio::new(num, den))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(Ratio::from_integer(n))
    }

    pub fn num(&self) -> i64 {
        *self.0.numer()
    }

    pub fn den(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn checked_add(&self, other: &Rational) -> Option<Rational> {
        use num_traits::CheckedAdd;
        self.0.checked_add(&other.0).map(Rational)
    }

    pub fn checked_mul_int(&self, k: i64) -> Option<Rational> {
        use num_traits::CheckedMul;
        self.0.checked_mul(&Ratio::from_integer(k)).map(Rational)
    }

    pub fn checked_div_int(&self, k: i64) -> Option<Rational> {
        use num_traits::CheckedDiv;
        if k == 0 {
            return None;
        }
        self.0.checked_div(&Ratio::from_integer(k)).map(Rational)
    }

    pub fn as_ratio(&self) -> Ratio<i64> {
        self.0
    }
}

impl From<Ratio<i64>> for Rational {
    fn from(r: Ratio<i64>) -> Self {
        Rational(r)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den() == 1 {
            write!(f, "{}", self.num())
        } else {
            write!(f, "{}/{}", self.num(), self.den())
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

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |message: String| Error::Parse {
            line: 1,
            column: 1,
            message,
        };
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: i64 = n
            .parse()
            .map_err(|_| bad(format!("invalid numerator {n:?}")))?;
        let d: i64 = d
            .parse()
            .map_err(|_| bad(format!("invalid denominator {d:?}")))?;
        if d == 0 {
            return Err(bad("zero denominator".into()));
        }
        Ok(Rational::new(n, d))
    }
}

#[derive(Serialize, Deserialize)]
struct RationalRepr {
    num: i64,
    den: i64,
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RationalRepr {
            num: self.num(),
            den: self.den(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let r = RationalRepr::deserialize(deserializer)?;
        if r.den == 0 {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(Rational::new(r.num, r.den))
    }
}
