use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Observed counts, kept both as raw values and as a frequency table.
///
/// All statistics are computed from the frequency table, so a sample built
/// from raw values and one built from the equivalent table give bit-identical
/// results downstream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountSample {
    values: Vec<u64>,
    freq: BTreeMap<u64, u64>,
    n: u64,
    /// Largest value when it stands for an open "at least" cell.
    open_tail: Option<u64>,
}

impl CountSample {
    pub fn from_values(values: Vec<u64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Data("sample is empty".into()));
        }
        let mut freq = BTreeMap::new();
        for &v in &values {
            *freq.entry(v).or_insert(0) += 1;
        }
        let n = values.len() as u64;
        Ok(Self { values, freq, n, open_tail: None })
    }

    /// Builds a sample from `(value, frequency)` pairs. Repeated values are
    /// merged; zero frequencies are allowed but at least one must be positive.
    pub fn from_frequencies<I: IntoIterator<Item = (u64, u64)>>(pairs: I) -> Result<Self> {
        let mut freq = BTreeMap::new();
        for (v, f) in pairs {
            *freq.entry(v).or_insert(0) += f;
        }
        freq.retain(|_, f| *f > 0);
        let n: u64 = freq.values().sum();
        if n == 0 {
            return Err(Error::Data("frequency table has no positive frequency".into()));
        }
        let values = freq
            .iter()
            .flat_map(|(&v, &f)| std::iter::repeat(v).take(f as usize))
            .collect();
        Ok(Self { values, freq, n, open_tail: None })
    }

    /// Marks the largest value as an open `>= value` cell. Likelihoods still
    /// treat such observations as exactly `value`.
    pub fn with_open_tail(mut self, value: u64) -> Result<Self> {
        if self.max() != value {
            return Err(Error::Data(format!(
                "open tail {value} must equal the largest value {}",
                self.max()
            )));
        }
        self.open_tail = Some(value);
        Ok(self)
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn freq(&self) -> &BTreeMap<u64, u64> {
        &self.freq
    }

    pub fn frequency(&self, value: u64) -> u64 {
        self.freq.get(&value).copied().unwrap_or(0)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Number of zeros.
    pub fn n0(&self) -> u64 {
        self.frequency(0)
    }

    pub fn max(&self) -> u64 {
        *self.freq.keys().next_back().expect("non-empty sample")
    }

    pub fn open_tail(&self) -> Option<u64> {
        self.open_tail
    }

    pub fn mean(&self) -> f64 {
        self.freq.iter().map(|(&v, &f)| v as f64 * f as f64).sum::<f64>() / self.n as f64
    }

    /// Mean of squares, `(1/n) sum x_i^2`.
    pub fn mean_of_squares(&self) -> f64 {
        self.freq
            .iter()
            .map(|(&v, &f)| (v as f64) * (v as f64) * f as f64)
            .sum::<f64>()
            / self.n as f64
    }

    /// Sample variance with divisor `n`.
    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.mean_of_squares() - m * m
    }

    /// True when every observation is 0 or 1, so the mean equals the mean of
    /// squares and the moment equations have no solution.
    pub fn is_degenerate(&self) -> bool {
        self.max() <= 1
    }

    /// Observed frequencies over `0..=max_k`; values above `max_k` are
    /// pooled into the last cell when `pool_tail` is set, dropped otherwise.
    pub fn cell_counts(&self, max_k: u64, pool_tail: bool) -> Vec<u64> {
        let mut counts = vec![0u64; max_k as usize + 1];
        for (&v, &f) in &self.freq {
            if v <= max_k {
                counts[v as usize] += f;
            } else if pool_tail {
                counts[max_k as usize] += f;
            }
        }
        counts
    }
}
