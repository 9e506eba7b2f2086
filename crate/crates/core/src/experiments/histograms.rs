use super::stats::MeanStderr;
use crate::detection::{check_uniqueness, column_histograms, Uniqueness};
use crate::error::{usage, Error, Result};
use crate::generator::sample_database;
use crate::model::AlphabetDistribution;
use crate::probability::histogram_uniqueness_bound;
use crate::rng::{SeedSpec, SymbolSampler};

/// One row of the histogram-uniqueness table.
#[derive(Debug, Clone, PartialEq)]
pub struct HistogramStudyRow {
    pub n: usize,
    pub m: u64,
    pub alphabet: usize,
    pub trials: u64,
    /// Empirical probability that two of the `n` column histograms coincide.
    pub dup_prob: f64,
    pub dup_prob_stderr: f64,
    /// `min(1, n^2 Pr(H1 = H2))` when the exact oracle is feasible.
    pub bound_exact: Option<f64>,
    /// `m^((k-1)/4)`: histograms become unique once this outgrows `n`.
    pub scaling_ref: f64,
}

/// Duplicate-histogram frequency over `trials` random `m x n` databases, for
/// each `m`. Trial `t` at row count `m` uses stream `m * 2^32 + t`.
pub fn histogram_uniqueness_study(
    n: usize,
    ms: &[u64],
    dist: &AlphabetDistribution,
    trials: u64,
    master_seed: u64,
    memory_cap: u64,
) -> Result<Vec<HistogramStudyRow>> {
    if n == 0 || trials == 0 {
        return Err(usage!("need n >= 1 and at least one trial"));
    }
    let k = dist.alphabet_size();
    ms.iter()
        .map(|&m| {
            if m == 0 || m >= 1 << 32 {
                return Err(usage!("row count {m} outside 1..2^32"));
            }
            let mut dup = MeanStderr::default();
            for t in 0..trials {
                let seed = SeedSpec::new(master_seed, (m << 32) | t);
                let db = sample_database(m, n, dist, seed, memory_cap)?;
                let hit = check_uniqueness(&column_histograms(&db)) != Uniqueness::Unique;
                dup.push(if hit { 1.0 } else { 0.0 });
            }
            let p = dup.mean();
            let bound_exact = match histogram_uniqueness_bound(n as u64, m, dist) {
                Ok(b) => Some(b),
                Err(Error::Capacity(_)) => None,
                Err(e) => return Err(e),
            };
            Ok(HistogramStudyRow {
                n,
                m,
                alphabet: k,
                trials,
                dup_prob: p,
                dup_prob_stderr: (p * (1.0 - p) / trials as f64).sqrt(),
                bound_exact,
                scaling_ref: (m as f64).powf((k as f64 - 1.0) / 4.0),
            })
        })
        .collect()
}

/// Monte Carlo `Pr(H1 = H2)` for two independent length-`m` columns; returns
/// `(estimate, standard error)`.
pub fn histogram_collision_monte_carlo(
    m: usize,
    dist: &AlphabetDistribution,
    samples: u64,
    seed: SeedSpec,
) -> (f64, f64) {
    let k = dist.alphabet_size();
    let sampler = SymbolSampler::new(dist);
    let mut rng = seed.rng();
    let (mut a, mut b) = (vec![0u16; m], vec![0u16; m]);
    let (mut ha, mut hb) = (vec![0u32; k], vec![0u32; k]);
    let mut hits = 0u64;
    for _ in 0..samples {
        sampler.fill(&mut rng, &mut a);
        sampler.fill(&mut rng, &mut b);
        ha.fill(0);
        hb.fill(0);
        for (&x, &y) in a.iter().zip(&b) {
            ha[x as usize - 1] += 1;
            hb[y as usize - 1] += 1;
        }
        hits += u64::from(ha == hb);
    }
    let p = hits as f64 / samples as f64;
    (p, (p * (1.0 - p) / samples as f64).sqrt())
}
