use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use dashu_int::ops::PowerOfTwo;
use dashu_int::{IBig, UBig};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::Rational;

/// `num / 2^exp`, normalized so that `num` is odd unless the value is zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: IBig,
    exp: u32,
}

impl Dyadic {
    pub fn new(num: impl Into<IBig>, exp: u32) -> Self {
        let mut num = num.into();
        let mut exp = exp;
        if num == IBig::ZERO {
            return Dyadic { num, exp: 0 };
        }
        let tz = num.trailing_zeros().unwrap_or(0).min(exp as usize);
        if tz > 0 {
            num >>= tz;
            exp -= tz as u32;
        }
        Dyadic { num, exp }
    }

    pub fn zero() -> Self {
        Dyadic::new(0, 0)
    }

    pub fn one() -> Self {
        Dyadic::new(1, 0)
    }

    pub fn numerator(&self) -> &IBig {
        &self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn to_rational(&self) -> Rational {
        Rational::new(self.num.clone(), IBig::ONE << self.exp as usize).expect("nonzero")
    }

    /// `None` unless the denominator is a power of two.
    pub fn from_rational(r: &Rational) -> Option<Self> {
        let den: &UBig = r.denominator();
        if !den.is_power_of_two() {
            return None;
        }
        let exp = den.trailing_zeros().unwrap_or(0) as u32;
        Some(Dyadic::new(r.numerator().clone(), exp))
    }

    /// Numerator at the common scale `2^s`; requires `s >= exponent`.
    pub fn scaled(&self, s: u32) -> IBig {
        assert!(s >= self.exp, "scale below exponent");
        self.num.clone() << (s - self.exp) as usize
    }

    pub fn to_f64(&self) -> f64 {
        self.to_rational().to_f64()
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let s = self.exp.max(other.exp);
        self.scaled(s).cmp(&other.scaled(s))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let s = self.exp.max(rhs.exp);
        Dyadic::new(self.scaled(s) + rhs.scaled(s), s)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let s = self.exp.max(rhs.exp);
        Dyadic::new(self.scaled(s) - rhs.scaled(s), s)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.num * &rhs.num, self.exp + rhs.exp)
    }
}

impl From<Dyadic> for Rational {
    fn from(d: Dyadic) -> Rational {
        d.to_rational()
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_rational(), f)
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
        let r: Rational = s.parse()?;
        Dyadic::from_rational(&r).ok_or_else(|| Error::Parse(format!("not a dyadic rational: {s:?}")))
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes() {
        let d = Dyadic::new(12, 4);
        assert_eq!(d.numerator(), &IBig::from(3));
        assert_eq!(d.exponent(), 2);
        assert_eq!(Dyadic::new(0, 9).exponent(), 0);
        assert_eq!(Dyadic::new(8, 2), Dyadic::new(2, 0));
    }

    #[test]
    fn arithmetic_and_order() {
        let a: Dyadic = "3/8".parse().unwrap();
        let b: Dyadic = "0.25".parse().unwrap();
        assert_eq!((&a + &b).to_string(), "5/8");
        assert_eq!((&a - &b).to_string(), "1/8");
        assert_eq!((&a * &b).to_string(), "3/32");
        assert!(b < a);
        assert!("1/3".parse::<Dyadic>().is_err());
        assert!("0.1".parse::<Dyadic>().is_err());
    }
}
