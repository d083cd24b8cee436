use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Derivative orders `{0, 1, ..., floor(k), k, k - 1, ..., k - floor(k)}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivOrderSet {
    pub k: f64,
    pub integer: Vec<u32>,
    pub fractional: Vec<f64>,
}

impl DerivOrderSet {
    pub fn new(k: f64) -> Result<Self> {
        if !(k.is_finite() && k >= 0.0) {
            return Err(Error::Domain(format!("order {k} must be finite and non-negative")));
        }
        let fl = k.floor() as u32;
        let integer = (0..=fl).collect();
        let fractional = if k.fract() == 0.0 { Vec::new() } else { (0..=fl).map(|i| k - i as f64).collect() };
        Ok(DerivOrderSet { k, integer, fractional })
    }

    /// All entries, integers first, without duplicates.
    pub fn entries(&self) -> Vec<f64> {
        self.integer.iter().map(|&i| i as f64).chain(self.fractional.iter().copied()).collect()
    }

    /// Number of difference steps used to probe order `o`: `floor(o) + 1`.
    pub fn stencil(o: f64) -> usize {
        o.floor() as usize + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entries() {
        let t = DerivOrderSet::new(1.5).unwrap();
        assert_eq!(t.entries(), vec![0.0, 1.0, 1.5, 0.5]);
        let t = DerivOrderSet::new(2.0).unwrap();
        assert_eq!(t.entries(), vec![0.0, 1.0, 2.0]);
        assert!(DerivOrderSet::new(-1.0).is_err());
    }
}
