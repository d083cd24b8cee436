use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use dashu_int::ops::PowerOfTwo;
use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::real::Real;

/// Exact fraction, always kept in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Rational(RBig);

impl Rational {
    pub fn new(num: impl Into<IBig>, den: impl Into<IBig>) -> Result<Self> {
        let num = num.into();
        let den = den.into();
        if den == IBig::ZERO {
            return Err(Error::InvalidOperand("zero denominator".into()));
        }
        let (sign, den) = den.into_parts();
        let num = if sign == dashu_int::Sign::Negative { -num } else { num };
        Ok(Rational(RBig::from_parts(num, den)))
    }

    pub fn from_int(v: impl Into<IBig>) -> Self {
        Rational(RBig::from(v.into()))
    }

    pub fn zero() -> Self {
        Rational(RBig::ZERO)
    }

    pub fn one() -> Self {
        Rational(RBig::ONE)
    }

    /// `2^-k`.
    pub fn pow2_neg(k: u32) -> Self {
        Rational(RBig::from_parts(IBig::ONE, UBig::ONE << k as usize))
    }

    pub fn numerator(&self) -> &IBig {
        self.0.numerator()
    }

    pub fn denominator(&self) -> &UBig {
        self.0.denominator()
    }

    pub fn is_zero(&self) -> bool {
        self.0 == RBig::ZERO
    }

    pub fn is_integer(&self) -> bool {
        *self.denominator() == UBig::ONE
    }

    /// True when the denominator is a power of two.
    pub fn is_dyadic(&self) -> bool {
        self.denominator().is_power_of_two()
    }

    pub fn abs(&self) -> Self {
        if self.numerator() < &IBig::ZERO {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn signum(&self) -> i32 {
        match self.numerator().cmp(&IBig::ZERO) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    /// Division; fails on a zero divisor.
    pub fn checked_div(&self, rhs: &Rational) -> Result<Rational> {
        if rhs.is_zero() {
            return Err(Error::InvalidOperand("division by zero".into()));
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    pub fn recip(&self) -> Result<Rational> {
        Rational::one().checked_div(self)
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> IBig {
        self.0.floor()
    }

    pub fn mul_int(&self, k: impl Into<IBig>) -> Rational {
        Rational(&self.0 * RBig::from(k.into()))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }

    /// Rounded to `precision` significant bits.
    pub fn to_real(&self, precision: usize) -> Real {
        crate::real::from_rational(self, precision)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_int(v)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numerator())
        } else {
            write!(f, "{}/{}", self.numerator(), self.denominator())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `p/q`, plain integers and finite decimals such as `0.75`.
impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not an exact number: {s:?}"));
        if let Some((p, q)) = s.split_once('/') {
            let p = IBig::from_str(p.trim()).map_err(|_| bad())?;
            let q = IBig::from_str(q.trim()).map_err(|_| bad())?;
            return Rational::new(p, q).map_err(|_| bad());
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let negative = int.starts_with('-');
            let int_digits = int.trim_start_matches(['-', '+']);
            if !int_digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let digits = format!("{}{}", if int_digits.is_empty() { "0" } else { int_digits }, frac);
            let mut num = IBig::from_str(&digits).map_err(|_| bad())?;
            if negative {
                num = -num;
            }
            let den = IBig::from(10u8).pow(frac.len());
            return Rational::new(num, den);
        }
        IBig::from_str(s).map(Rational::from_int).map_err(|_| bad())
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
        s.parse().map_err(serde::de::Error::custom)
    }
}
