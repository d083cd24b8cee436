//! High-precision binary floating point used for bump evaluation and probes.

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::IBig;

use crate::exact::Rational;

pub type Real = FBig<HalfEven, 2>;

/// Default working precision in bits.
pub const DEFAULT_PRECISION: usize = 128;

pub fn from_rational(r: &Rational, precision: usize) -> Real {
    let num = Real::from(r.numerator().clone()).with_precision(precision).value();
    let den = Real::from(IBig::from(r.denominator().clone()))
        .with_precision(precision)
        .value();
    num / den
}

pub fn from_f64(x: f64, precision: usize) -> Real {
    Real::try_from(x)
        .expect("finite value")
        .with_precision(precision)
        .value()
}

pub fn to_f64(x: &Real) -> f64 {
    x.to_f64().value()
}

pub fn from_int(v: i64, precision: usize) -> Real {
    Real::from(v).with_precision(precision).value()
}
