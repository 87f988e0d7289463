use num::{BigRational, Zero};

use crate::scalar::ratio;

/// Exact harmonic numbers H_k = 1 + 1/2 + ... + 1/k, cached up to a bound.
#[derive(Clone, Debug)]
pub struct HarmonicCache {
    values: Vec<BigRational>,
}

impl HarmonicCache {
    pub fn new(max: usize) -> Self {
        let mut values = Vec::with_capacity(max + 1);
        values.push(BigRational::zero());
        for k in 1..=max {
            let next = &values[k - 1] + ratio(1, k as i64);
            values.push(next);
        }
        Self { values }
    }

    pub fn max(&self) -> usize {
        self.values.len() - 1
    }

    /// H_k; panics if k exceeds the cached bound.
    pub fn get(&self, k: usize) -> &BigRational {
        &self.values[k]
    }

    pub fn get_f64(&self, k: usize) -> f64 {
        use num::ToPrimitive;
        self.values[k].to_f64().unwrap()
    }
}

/// H_n as f64 by direct summation, for n beyond exact caching needs.
pub fn harmonic_f64(n: usize) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum()
}
