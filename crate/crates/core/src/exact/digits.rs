use dashu_int::IBig;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Dyadic, Rational};

/// How a point on a shared boundary is assigned to a cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Closure {
    /// The cell with the lexicographically smallest digit sequence wins.
    #[default]
    Min,
    /// Cells are half-open `[a, b)`, except that 1 belongs to the last cell.
    LeftClosed,
}

/// Base-`2^base_log2` digits (1-based) of the nested intervals containing `t`.
pub fn digits_of_point(t: &Rational, base_log2: u32, depth: usize, closure: Closure) -> Result<Vec<u32>> {
    if base_log2 == 0 || base_log2 > 31 {
        return Err(Error::InvalidOperand(format!("base 2^{base_log2} unsupported")));
    }
    if t.signum() < 0 || t > &Rational::one() {
        return Err(Error::Domain(format!("{t} lies outside [0,1]")));
    }
    let base = 1i64 << base_log2;
    let max = base - 1;
    let mut rem = t.clone();
    let mut out = Vec::with_capacity(depth);
    for _ in 0..depth {
        let scaled = rem.mul_int(base);
        let fl = scaled.floor();
        let exact = Rational::from_int(fl.clone()) == scaled;
        let mut idx = i64::try_from(fl).expect("digit fits");
        if closure == Closure::Min && exact {
            idx -= 1;
        }
        let idx = idx.clamp(0, max);
        rem = scaled - Rational::from_int(idx);
        out.push(idx as u32 + 1);
    }
    Ok(out)
}

/// Same as [`digits_of_point`] on a dyadic input.
pub fn digits_of_dyadic(t: &Dyadic, base_log2: u32, depth: usize, closure: Closure) -> Result<Vec<u32>> {
    digits_of_point(&t.to_rational(), base_log2, depth, closure)
}

/// Closed interval `[lo, hi]` named by 1-based base-`2^base_log2` digits.
pub fn interval_of_digits(digits: &[u32], base_log2: u32) -> (Dyadic, Dyadic) {
    let mut num = IBig::ZERO;
    for &d in digits {
        num = (num << base_log2 as usize) + IBig::from(d - 1);
    }
    let exp = base_log2 * digits.len() as u32;
    let lo = Dyadic::new(num.clone(), exp);
    let hi = Dyadic::new(num + IBig::ONE, exp);
    (lo, hi)
}

/// Splits a 1-based spatial digit into per-axis bits; axis 0 is the most significant.
pub fn digit_bits(digit: u32, dim: u32) -> Vec<u8> {
    let v = digit - 1;
    (0..dim).map(|a| ((v >> (dim - 1 - a)) & 1) as u8).collect()
}

/// Inverse of [`digit_bits`].
pub fn bits_digit(bits: &[u8]) -> u32 {
    let dim = bits.len() as u32;
    bits.iter()
        .enumerate()
        .fold(0u32, |acc, (a, &b)| acc | ((b as u32) << (dim - 1 - a as u32)))
        + 1
}

/// Regroups binary digits (values 1..2) into base-`2^k` digits; the length must divide.
pub fn group_binary(bits: &[u32], k: u32) -> Result<Vec<u32>> {
    if k == 0 || !bits.len().is_multiple_of(k as usize) {
        return Err(Error::Shape(format!("{} binary digits do not split into groups of {k}", bits.len())));
    }
    Ok(bits
        .chunks(k as usize)
        .map(|c| c.iter().fold(0u32, |acc, &b| (acc << 1) | (b - 1)) + 1)
        .collect())
}

/// Expands base-`2^k` digits into binary digits (values 1..2).
pub fn ungroup_binary(digits: &[u32], k: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(digits.len() * k as usize);
    for &d in digits {
        for j in (0..k).rev() {
            out.push((((d - 1) >> j) & 1) + 1);
        }
    }
    out
}
