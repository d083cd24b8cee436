//! The majorant series bounding image diameters against gap widths.

use std::ops::Range;

use dashu_base::SquareRoot;
use dashu_int::IBig;

use crate::error::{Error, Result};
use crate::real::{self, Real};

fn check_order(m: u32, n: u32, k: f64) -> Result<()> {
    if n == 0 || m <= n {
        return Err(Error::Dimension(format!("need m > n >= 1, got m={m}, n={n}")));
    }
    if !(k >= 0.0 && k < m as f64 / n as f64) {
        return Err(Error::Domain(format!("k = {k} must satisfy 0 <= k < m/n = {}", m as f64 / n as f64)));
    }
    Ok(())
}

/// `sqrt(n) 2^(1 - j m) / G_s^k` with `s = (j + 1) n` and
/// `G_s = 1 / ((s - 1) s 2^(s - 1))`; `j >= 1`.
pub fn lemma21_term(m: u32, n: u32, k: f64, j: usize, precision: usize) -> Result<Real> {
    check_order(m, n, k)?;
    if j == 0 {
        return Err(Error::Domain("series starts at j = 1".into()));
    }
    let s = (j + 1) * n as usize;
    let inv_gap = real::from_int(((s - 1) * s) as i64, precision) * real::from_int(2, precision).powi(IBig::from(s - 1));
    let sqrt_n = real::from_int(n as i64, precision).sqrt();
    let head = sqrt_n * real::from_int(2, precision).powi(IBig::from(1 - (j * m as usize) as isize));
    let scale = if k == 0.0 { real::from_int(1, precision) } else { inv_gap.powf(&real::from_f64(k, precision)) };
    Ok(head * scale)
}

/// `sqrt(n) 2^(1 - j m) / G_((j+1)n+1)^k`: the diameter bound of a level-`j`
/// image cube over the narrowest gap inside the matching shrunken cube.
/// Defined for `j >= 0`.
pub fn segment_majorant(m: u32, n: u32, k: f64, j: usize, precision: usize) -> Result<Real> {
    check_order(m, n, k)?;
    let s = (j + 1) * n as usize + 1;
    let inv_gap = real::from_int(((s - 1) * s) as i64, precision) * real::from_int(2, precision).powi(IBig::from(s - 1));
    let sqrt_n = real::from_int(n as i64, precision).sqrt();
    let head = sqrt_n * real::from_int(2, precision).powi(IBig::from(1 - (j * m as usize) as isize));
    let scale = if k == 0.0 { real::from_int(1, precision) } else { inv_gap.powf(&real::from_f64(k, precision)) };
    Ok(head * scale)
}

/// Terms for every `j` in `js`.
pub fn lemma21_series(m: u32, n: u32, k: f64, js: Range<usize>, precision: usize) -> Result<Vec<Real>> {
    js.map(|j| lemma21_term(m, n, k, j, precision)).collect()
}

/// Ratio of consecutive terms, `term(j + 1) / term(j)`, in closed form:
/// `2^(n k - m) (((s + n - 1)(s + n)) / ((s - 1) s))^k`. It decreases in
/// `j` toward `2^(n k - m) < 1`.
pub fn lemma21_step_ratio(m: u32, n: u32, k: f64, j: usize, precision: usize) -> Result<Real> {
    check_order(m, n, k)?;
    let s = ((j + 1) * n as usize) as i64;
    let nn = n as i64;
    let poly = real::from_int((s + nn - 1) * (s + nn), precision) / real::from_int((s - 1) * s, precision);
    let kk = real::from_f64(k, precision);
    let two = real::from_int(2, precision);
    let expo = real::from_f64(n as f64 * k - m as f64, precision);
    Ok(two.powf(&expo) * if k == 0.0 { real::from_int(1, precision) } else { poly.powf(&kk) })
}

/// First `j >= 1` from which the series is strictly decreasing.
pub fn lemma21_crossover(m: u32, n: u32, k: f64, precision: usize) -> Result<usize> {
    check_order(m, n, k)?;
    let one = real::from_int(1, precision);
    let mut j = 1;
    while lemma21_step_ratio(m, n, k, j, precision)? >= one {
        j += 1;
        if j > 1 << 20 {
            return Err(Error::Budget { requested: j as u128, budget: 1 << 20 });
        }
    }
    Ok(j)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_zero_halves_every_level() {
        let t = lemma21_series(2, 1, 0.0, 1..5, 96).unwrap();
        let f: Vec<f64> = t.iter().map(real::to_f64).collect();
        assert_eq!(f, vec![0.5, 0.125, 0.03125, 0.0078125]);
    }

    #[test]
    fn rejects_large_k() {
        assert!(matches!(lemma21_term(2, 1, 2.0, 1, 64), Err(Error::Domain(_))));
        assert!(lemma21_term(2, 1, 1.9, 1, 64).is_ok());
    }

    #[test]
    fn step_ratio_matches_terms() {
        for j in 1..10 {
            let a = real::to_f64(&lemma21_term(3, 2, 1.3, j, 128).unwrap());
            let b = real::to_f64(&lemma21_term(3, 2, 1.3, j + 1, 128).unwrap());
            let r = real::to_f64(&lemma21_step_ratio(3, 2, 1.3, j, 128).unwrap());
            assert!((b / a - r).abs() < 1e-12 * r.max(1.0));
        }
    }
}
