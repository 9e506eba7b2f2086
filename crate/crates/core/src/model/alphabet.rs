use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const SUM_TOLERANCE: f64 = 1e-12;
const SPEC_SUM_TOLERANCE: f64 = 1e-9;

/// Attribute law over the alphabet `{1, ..., k}`.
///
/// Every symbol has strictly positive mass, `k >= 2`, and the masses sum to one
/// within `1e-12`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphabetDistribution {
    probs: Vec<f64>,
}

impl AlphabetDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.len() < 2 {
            return Err(Error::Domain(format!(
                "alphabet must have at least 2 symbols, got {}",
                probs.len()
            )));
        }
        if let Some((i, p)) = probs
            .iter()
            .enumerate()
            .find(|(_, p)| !(p.is_finite() && **p > 0.0 && **p <= 1.0))
        {
            return Err(Error::Domain(format!(
                "probability of symbol {} is {p}, must lie in (0, 1]",
                i + 1
            )));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::Domain(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(Self { probs })
    }

    pub fn uniform(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::Domain(format!(
                "alphabet must have at least 2 symbols, got {k}"
            )));
        }
        Ok(Self {
            probs: vec![1.0 / k as f64; k],
        })
    }

    /// Accepts weights summing to one within `1e-9` and renormalizes them.
    pub fn from_probabilities_loose(probs: Vec<f64>) -> Result<Self> {
        let total: f64 = probs.iter().sum();
        if !total.is_finite() || (total - 1.0).abs() > SPEC_SUM_TOLERANCE {
            return Err(Error::Domain(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Self::new(probs.into_iter().map(|p| p / total).collect())
    }

    /// Empirical law from symbol counts. Zero counts are rejected because the
    /// support must be the whole alphabet.
    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::Domain("no observations".into()));
        }
        Self::new(counts.iter().map(|&c| c as f64 / total as f64).collect())
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn alphabet_size(&self) -> usize {
        self.probs.len()
    }

    pub fn is_uniform(&self) -> bool {
        self.probs.windows(2).all(|w| w[0] == w[1])
    }
}

impl FromStr for AlphabetDistribution {
    type Err = Error;

    /// `uniform:k` or a comma-separated list of probabilities.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(k) = s.strip_prefix("uniform:") {
            let k: usize = k
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad alphabet size in `{s}`")))?;
            return Self::uniform(k);
        }
        let probs = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad probability `{}` in `{s}`", p.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_probabilities_loose(probs)
    }
}

impl fmt::Display for AlphabetDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_uniform() {
            return write!(f, "uniform:{}", self.probs.len());
        }
        for (i, p) in self.probs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}
