//! Closed-form quantities of the matching problem.
//!
//! Everything that can underflow (binomial tails, Chernoff bounds) is carried
//! as a base-2 logarithm and only exponentiated at the reporting boundary.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::model::AlphabetDistribution;

/// Histograms with more compositions than this are left to Monte Carlo.
pub const MAX_COMPOSITIONS: u128 = 10_000_000;

/// Capacities at one deletion budget, in bits per column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityPoint {
    pub delta: f64,
    pub adv_bits: f64,
    pub random_bits: f64,
}

/// `q = sum_x p(x)^2`, the probability that two independent entries agree.
///
/// Accumulated with error-free products so that e.g. the uniform law on five
/// symbols gives exactly `0.2`.
pub fn collision_param(dist: &AlphabetDistribution) -> f64 {
    let (mut sum, mut err) = (0.0f64, 0.0f64);
    for &p in dist.probs() {
        let prod = p * p;
        let prod_err = p.mul_add(p, -prod);
        let t = sum + prod;
        // Neumaier compensation
        err += if sum.abs() >= prod.abs() {
            (sum - t) + prod
        } else {
            (prod - t) + sum
        } + prod_err;
        sum = t;
    }
    sum + err
}

/// Entropy in bits.
pub fn shannon_entropy(dist: &AlphabetDistribution) -> f64 {
    -dist.probs().iter().map(|&p| p * p.ln()).sum::<f64>() / LN_2
}

fn kl_nats(a: f64, b: f64) -> f64 {
    let mut d = 0.0;
    if a > 0.0 {
        d += a * (a.ln() - b.ln());
    }
    if a < 1.0 {
        d += (1.0 - a) * ((1.0 - a).ln() - (1.0 - b).ln());
    }
    d
}

/// `D(a || b)` between Bernoulli laws, in bits, with `0 log 0 = 0`.
pub fn bernoulli_kl(a: f64, b: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::Domain(format!("first argument {a} outside [0, 1]")));
    }
    if !(b > 0.0 && b < 1.0) {
        return Err(Error::Domain(format!(
            "second argument {b} must lie in (0, 1); divergence is infinite"
        )));
    }
    Ok(kl_nats(a, b) / LN_2)
}

fn check_budget(delta: f64) {
    assert!(
        (0.0..=1.0).contains(&delta),
        "deletion budget {delta} outside [0, 1]"
    );
}

/// Adversarial matching capacity: `D(delta || 1 - q)` below the threshold
/// `1 - q`, zero above it.
///
/// # Panics
/// If `delta` is outside `[0, 1]`.
pub fn adv_capacity(dist: &AlphabetDistribution, delta: f64) -> f64 {
    check_budget(delta);
    let threshold = 1.0 - collision_param(dist);
    if delta <= threshold {
        kl_nats(delta, threshold) / LN_2
    } else {
        0.0
    }
}

/// Capacity under i.i.d. random deletions, `(1 - delta) H(X)`.
///
/// # Panics
/// If `delta` is outside `[0, 1]`.
pub fn random_capacity(dist: &AlphabetDistribution, delta: f64) -> f64 {
    check_budget(delta);
    (1.0 - delta) * shannon_entropy(dist)
}

pub fn capacity_point(dist: &AlphabetDistribution, delta: f64) -> CapacityPoint {
    CapacityPoint {
        delta,
        adv_bits: adv_capacity(dist, delta),
        random_bits: random_capacity(dist, delta),
    }
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

/// Natural-log pmf terms `ln Pr(X = i)` for `i = 0..=k`.
fn ln_binom_terms(n: u64, p: f64, k: u64) -> Vec<f64> {
    let (ln_p, ln_q) = (p.ln(), (1.0 - p).ln());
    let mut ln_choose = 0.0;
    (0..=k)
        .map(|i| {
            if i > 0 {
                ln_choose += ((n - i + 1) as f64).ln() - (i as f64).ln();
            }
            let succ = if i == 0 { 0.0 } else { i as f64 * ln_p };
            let fail = if i == n { 0.0 } else { (n - i) as f64 * ln_q };
            ln_choose + succ + fail
        })
        .collect()
}

fn check_binom(n: u64, p: f64, k: u64) -> Result<()> {
    if k > n {
        return Err(Error::Usage(format!("k = {k} exceeds n = {n}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!(
            "success probability {p} outside [0, 1]"
        )));
    }
    Ok(())
}

/// `log2 Pr(X = k)` for `X ~ Binom(n, p)`.
pub fn log2_binom_pmf(n: u64, p: f64, k: u64) -> Result<f64> {
    check_binom(n, p, k)?;
    Ok(ln_binom_terms(n, p, k)[k as usize] / LN_2)
}

/// `log2 Pr(X <= k)` for `X ~ Binom(n, p)`, summed in log space.
pub fn log2_binom_cdf(n: u64, p: f64, k: u64) -> Result<f64> {
    check_binom(n, p, k)?;
    if k == n {
        return Ok(0.0);
    }
    Ok(log_sum_exp(&ln_binom_terms(n, p, k)) / LN_2)
}

/// `Pr(X <= k)` for `X ~ Binom(n, p)`.
pub fn binom_cdf(n: u64, p: f64, k: u64) -> Result<f64> {
    log2_binom_cdf(n, p, k).map(f64::exp2)
}

/// Two-sided bound on `Pr(Binom(n, 1 - q) <= d)`, as base-2 logarithms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChernoffSandwich {
    /// `-n D(d/n || 1-q) - log2(2n) / 2`
    pub log2_lower: f64,
    /// `-n D(d/n || 1-q)`
    pub log2_upper: f64,
}

impl ChernoffSandwich {
    pub fn lower(&self) -> f64 {
        self.log2_lower.exp2()
    }

    pub fn upper(&self) -> f64 {
        self.log2_upper.exp2()
    }

    pub fn contains_log2(&self, log2_value: f64) -> bool {
        self.log2_lower <= log2_value && log2_value <= self.log2_upper
    }
}

/// Chernoff upper bound and its `1/sqrt(2n)` lower companion for the
/// probability that two i.i.d. rows are within Hamming distance `d`.
pub fn chernoff_sandwich(n: u64, qhat: f64, d: u64) -> Result<ChernoffSandwich> {
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    if !(qhat > 0.0 && qhat < 1.0) {
        return Err(Error::Domain(format!(
            "collision parameter {qhat} outside (0, 1)"
        )));
    }
    let disagree = 1.0 - qhat;
    let nf = n as f64;
    if d as f64 > nf * disagree * (1.0 + 1e-12) {
        return Err(Error::Domain(format!(
            "budget {d}/{n} exceeds 1 - q = {disagree}; the bounds do not apply"
        )));
    }
    // rounding can push d/n a hair past the mean; the divergence there is 0
    let rate = (d as f64 / nf).min(disagree);
    let exponent = nf * kl_nats(rate, disagree) / LN_2;
    Ok(ChernoffSandwich {
        log2_lower: -exponent - 0.5 * (2.0 * nf).log2(),
        log2_upper: -exponent,
    })
}

/// Number of histograms of `m` items over `k` bins, `C(m + k - 1, k - 1)`,
/// saturating.
pub fn composition_count(m: u64, k: usize) -> u128 {
    let mut c: u128 = 1;
    for i in 1..k as u128 {
        // C(m+i, i) = C(m+i-1, i-1) * (m+i) / i
        c = match c.checked_mul(m as u128 + i) {
            Some(v) => v / i,
            None => return u128::MAX,
        };
    }
    c
}

/// Visits every composition of `m` into `bins` nonnegative parts in
/// lexicographic order.
fn for_each_composition(m: u64, bins: usize, mut f: impl FnMut(&[u64])) {
    let mut parts = vec![0u64; bins];
    parts[0] = m;
    loop {
        f(&parts);
        // next composition in reverse-lexicographic order of the leading part
        let Some(pivot) = (0..bins - 1).rev().find(|&i| parts[i] > 0) else {
            return;
        };
        parts[pivot] -= 1;
        let tail: u64 = parts[pivot + 1..].iter().sum::<u64>() + 1;
        for p in &mut parts[pivot + 1..] {
            *p = 0;
        }
        parts[pivot + 1] = tail;
    }
}

/// Exact `Pr(H1 = H2)` for the histograms of two independent length-`m`
/// columns: the sum of squared multinomial probabilities.
pub fn exact_histogram_collision(m: u64, dist: &AlphabetDistribution) -> Result<f64> {
    let k = dist.alphabet_size();
    let count = composition_count(m, k);
    if count > MAX_COMPOSITIONS {
        return Err(Error::Capacity(format!(
            "{count} histograms of {m} rows over {k} symbols exceed the enumeration \
             limit {MAX_COMPOSITIONS}; use the Monte Carlo estimator"
        )));
    }
    let ln_fact: Vec<f64> = std::iter::once(0.0)
        .chain((1..=m).scan(0.0, |acc, i| {
            *acc += (i as f64).ln();
            Some(*acc)
        }))
        .collect();
    if m == 1 {
        return Ok(collision_param(dist));
    }
    let probs = dist.probs();
    let ln_p: Vec<f64> = probs.iter().map(|p| p.ln()).collect();
    let mut total = 0.0;
    let mut comp = 0.0;
    for_each_composition(m, k, |h| {
        // Direct products are exact for dyadic laws at small m; logs are the
        // fallback once the coefficient or the products leave that range.
        let direct = multinomial_exact(h).and_then(|coef| {
            let mass = h
                .iter()
                .zip(probs)
                .fold(1.0, |acc, (&c, &p)| acc * p.powi(c as i32));
            (mass >= f64::MIN_POSITIVE).then_some(coef * mass)
        });
        let pmf = direct.unwrap_or_else(|| {
            let ln_pmf = ln_fact[m as usize]
                + h.iter()
                    .zip(&ln_p)
                    .map(|(&c, lp)| c as f64 * lp - ln_fact[c as usize])
                    .sum::<f64>();
            ln_pmf.exp()
        });
        // Kahan
        let y = pmf * pmf - comp;
        let t = total + y;
        comp = (t - total) - y;
        total = t;
    });
    Ok(total)
}

/// Multinomial coefficient of `counts` when it is below `2^53`, so that it is
/// exact as an `f64`.
fn multinomial_exact(counts: &[u64]) -> Option<f64> {
    let mut coef: u128 = 1;
    let mut seen: u64 = 0;
    for &c in counts {
        for i in 1..=c {
            seen += 1;
            // coef * C(seen, i) / C(seen - 1, i - 1) stays integral
            coef = coef.checked_mul(seen as u128)? / i as u128;
            if coef >= 1 << 53 {
                return None;
            }
        }
    }
    Some(coef as f64)
}

/// Union bound `min(1, n^2 Pr(H1 = H2))` on a duplicate among `n` column
/// histograms.
pub fn histogram_uniqueness_bound(n: u64, m: u64, dist: &AlphabetDistribution) -> Result<f64> {
    let p = exact_histogram_collision(m, dist)?;
    Ok((n as f64 * n as f64 * p).min(1.0))
}
