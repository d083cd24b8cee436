//! The smooth step `g(t) = e(t) / (e(t) + e(1 - t))`, `e(t) = exp(-1/t)`.
//!
//! Written as `1 / (1 + exp(w))` with `w = (1 - 2t) / (t (1 - t))`, so that
//! `g(1/2) = 1/2` exactly and all derivatives vanish at 0 and 1.

use crate::exact::Rational;
use crate::real::{self, Real};

/// `w(t)`; only meaningful for `0 < t < 1`.
fn exponent(t: &Rational) -> Rational {
    let one = Rational::one();
    let num = &one - &t.mul_int(2);
    let den = t * &(&one - t);
    num.checked_div(&den).expect("0 < t < 1")
}

/// Exact at `t <= 0`, `t >= 1` and `t = 1/2`; otherwise rounded to `precision` bits.
pub fn bump_g_real(t: &Rational, precision: usize) -> Real {
    if t.signum() <= 0 {
        return real::from_int(0, precision);
    }
    if t >= &Rational::one() {
        return real::from_int(1, precision);
    }
    let w = exponent(t);
    // Past this size exp(-|w|) is below 2^-(2 precision).
    let cutoff = Rational::from_int(2 * precision as i64);
    if w.abs() > cutoff {
        return real::from_int(if w.signum() > 0 { 0 } else { 1 }, precision);
    }
    let one = real::from_int(1, precision);
    let e = (-w.abs().to_real(precision)).exp();
    let small = &e / (&one + &e);
    if w.signum() > 0 {
        small
    } else {
        one - small
    }
}

/// Double-precision `g`.
pub fn bump_g(t: f64) -> f64 {
    bump_g_derivs(t, 0)[0]
}

/// `g(t), g'(t), ..., g^(order)(t)` in double precision.
pub fn bump_g_derivs(t: f64, order: usize) -> Vec<f64> {
    let k = order + 1;
    if t <= 0.0 || t >= 1.0 {
        let mut out = vec![0.0; k];
        out[0] = if t >= 1.0 { 1.0 } else { 0.0 };
        return out;
    }
    let tj = Jet::variable(t, k);
    let one = Jet::constant(1.0, k);
    let w = (&one - &tj.scale(2.0)).div(&tj.mul(&(&one - &tj)));
    let g = if w.c[0] > 0.0 {
        let e = w.scale(-1.0).exp();
        e.div(&(&one + &e))
    } else {
        let e = w.exp();
        &one - &e.div(&(&one + &e))
    };
    let mut fact = 1.0;
    g.c.iter()
        .enumerate()
        .map(|(i, c)| {
            if i > 0 {
                fact *= i as f64;
            }
            c * fact
        })
        .collect()
}

/// Truncated Taylor series `sum c_i h^i`.
#[derive(Clone, Debug)]
struct Jet {
    c: Vec<f64>,
}

impl Jet {
    fn constant(v: f64, k: usize) -> Self {
        let mut c = vec![0.0; k];
        c[0] = v;
        Jet { c }
    }

    fn variable(v: f64, k: usize) -> Self {
        let mut j = Jet::constant(v, k);
        if k > 1 {
            j.c[1] = 1.0;
        }
        j
    }

    fn scale(&self, s: f64) -> Self {
        Jet { c: self.c.iter().map(|x| x * s).collect() }
    }

    fn mul(&self, o: &Jet) -> Jet {
        let k = self.c.len();
        let c = (0..k).map(|i| (0..=i).map(|j| self.c[j] * o.c[i - j]).sum()).collect();
        Jet { c }
    }

    fn recip(&self) -> Jet {
        let k = self.c.len();
        let mut r = vec![0.0; k];
        r[0] = 1.0 / self.c[0];
        for i in 1..k {
            let s: f64 = (1..=i).map(|j| self.c[j] * r[i - j]).sum();
            r[i] = -s * r[0];
        }
        Jet { c: r }
    }

    fn div(&self, o: &Jet) -> Jet {
        self.mul(&o.recip())
    }

    fn exp(&self) -> Jet {
        let k = self.c.len();
        let mut e = vec![0.0; k];
        e[0] = self.c[0].exp();
        for i in 1..k {
            let s: f64 = (1..=i).map(|j| j as f64 * self.c[j] * e[i - j]).sum();
            e[i] = s / i as f64;
        }
        Jet { c: e }
    }
}

impl std::ops::Add for &Jet {
    type Output = Jet;
    fn add(self, o: &Jet) -> Jet {
        Jet { c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }
}

impl std::ops::Sub for &Jet {
    type Output = Jet;
    fn sub(self, o: &Jet) -> Jet {
        Jet { c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn fixed_points() {
        assert_eq!(real::to_f64(&bump_g_real(&q("0"), 64)), 0.0);
        assert_eq!(real::to_f64(&bump_g_real(&q("1"), 64)), 1.0);
        assert_eq!(real::to_f64(&bump_g_real(&q("1/2"), 64)), 0.5);
        assert_eq!(bump_g(-3.0), 0.0);
        assert_eq!(bump_g(7.0), 1.0);
        assert_eq!(bump_g(0.5), 0.5);
    }

    #[test]
    fn closed_form_agrees() {
        for &t in &[0.01, 0.1, 0.3, 0.77, 0.95] {
            let e = |s: f64| (-1.0 / s).exp();
            let want = e(t) / (e(t) + e(1.0 - t));
            assert!((bump_g(t) - want).abs() < 1e-14);
            let r = real::to_f64(&bump_g_real(&Rational::new((t * 1000.0).round() as i64, 1000).unwrap(), 128));
            assert!((r - want).abs() < 1e-12);
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let t = 0.37;
        let d = bump_g_derivs(t, 2);
        let h = 1e-5;
        let fd1 = (bump_g(t + h) - bump_g(t - h)) / (2.0 * h);
        let fd2 = (bump_g(t + h) - 2.0 * bump_g(t) + bump_g(t - h)) / (h * h);
        assert!((d[1] - fd1).abs() < 1e-8);
        assert!((d[2] - fd2).abs() < 1e-4);
        assert!(d[1] > 0.0);
    }

    #[test]
    fn flat_at_ends() {
        let d = bump_g_derivs(0.005, 4);
        assert!(d.iter().all(|x| x.abs() < 1e-12));
    }
}
