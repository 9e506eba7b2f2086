//! Reproducible random streams and the symbol sampler.
//!
//! # Stream derivation
//!
//! A stream is named by a [`SeedSpec`] `(master_seed, stream_index)` plus an
//! optional chunk number. The 256-bit Xoshiro256++ state is produced by
//! absorbing the words `master_seed, stream_index, chunk` into a SplitMix64
//! accumulator (`acc = mix64(acc ^ word)`, starting from `0x243F6A8885A308D3`)
//! and then drawing four SplitMix64 outputs from `acc`. Trial streams use
//! `stream_index = trial << 3 | purpose`, see [`Purpose`]. This derivation is
//! part of the output contract: changing it changes every experiment.

use rand::RngCore;
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::model::{AlphabetDistribution, Symbol};

pub type StreamRng = Xoshiro256PlusPlus;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const ABSORB_INIT: u64 = 0x243F_6A88_85A3_08D3;

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// What a trial stream is used for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    Database = 0,
    Permutation = 1,
    Pattern = 2,
    RowSample = 3,
    PairSample = 4,
}

/// Names one random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        Self {
            master_seed,
            stream_index,
        }
    }

    /// Stream for `purpose` within trial `trial`.
    pub fn for_trial(master_seed: u64, trial: u64, purpose: Purpose) -> Self {
        Self::new(master_seed, (trial << 3) | purpose as u64)
    }

    pub fn rng(&self) -> StreamRng {
        self.chunk_rng(0)
    }

    /// Independent sub-stream `chunk` of this stream.
    pub fn chunk_rng(&self, chunk: u64) -> StreamRng {
        let mut acc = ABSORB_INIT;
        for w in [self.master_seed, self.stream_index, chunk] {
            acc = mix64(acc ^ w);
        }
        let mut seed = [0u8; 32];
        for word in seed.chunks_exact_mut(8) {
            acc = acc.wrapping_add(GOLDEN_GAMMA);
            word.copy_from_slice(&mix64(acc).to_le_bytes());
        }
        StreamRng::from_seed(seed)
    }
}

/// Largest block table the sampler builds.
const MAX_BLOCK_TABLE: usize = 256;

/// Draws i.i.d. symbols several at a time.
///
/// A block of `b` consecutive symbols is drawn as one outcome of the product
/// law over `k^b` values using Walker's alias method, so each 64-bit random
/// word yields `b` exact i.i.d. symbols. `b` is the largest power with
/// `k^b <= 256`. The high part of `r * size` picks the column and the low 64
/// bits (the fractional part) serve as the acceptance coin.
#[derive(Debug, Clone)]
pub struct SymbolSampler {
    block_len: usize,
    /// acceptance threshold (scaled to 2^64) per table slot
    threshold: Vec<u64>,
    alias: Vec<u32>,
    /// decoded symbols, `block_len` per table slot
    decode: Vec<Symbol>,
}

impl SymbolSampler {
    pub fn new(dist: &AlphabetDistribution) -> Self {
        let k = dist.alphabet_size();
        let mut block_len = 1;
        while k.saturating_pow(block_len as u32 + 1) <= MAX_BLOCK_TABLE {
            block_len += 1;
        }
        let size = k.pow(block_len as u32);
        let mut weights = Vec::with_capacity(size);
        let mut decode = Vec::with_capacity(size * block_len);
        for v in 0..size {
            let mut rest = v;
            let mut w = 1.0;
            // least significant digit first, so decode order is position order
            for _ in 0..block_len {
                let s = rest % k;
                rest /= k;
                w *= dist.probs()[s];
                decode.push(s as Symbol + 1);
            }
            weights.push(w);
        }
        let (threshold, alias) = build_alias(&weights);
        Self {
            block_len,
            threshold,
            alias,
            decode,
        }
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    #[inline]
    fn draw_block<R: RngCore>(&self, rng: &mut R) -> usize {
        let wide = rng.next_u64() as u128 * self.threshold.len() as u128;
        let slot = (wide >> 64) as usize;
        if (wide as u64) < self.threshold[slot] {
            slot
        } else {
            self.alias[slot] as usize
        }
    }

    /// Fills `out` with i.i.d. symbols. Blocks never straddle calls, so a row
    /// filled by one call uses `ceil(len / b)` draws.
    pub fn fill<R: RngCore>(&self, rng: &mut R, out: &mut [Symbol]) {
        let b = self.block_len;
        for chunk in out.chunks_mut(b) {
            let v = self.draw_block(rng);
            chunk.copy_from_slice(&self.decode[v * b..v * b + chunk.len()]);
        }
    }
}

/// Vose's alias construction; thresholds scaled to `2^64`.
fn build_alias(weights: &[f64]) -> (Vec<u64>, Vec<u32>) {
    let n = weights.len();
    let total: f64 = weights.iter().sum();
    let mut scaled: Vec<f64> = weights.iter().map(|w| w * n as f64 / total).collect();
    let mut alias: Vec<u32> = (0..n as u32).collect();
    let (mut small, mut large): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| scaled[i] < 1.0);
    while let (Some(s), Some(&l)) = (small.pop(), large.last()) {
        alias[s] = l as u32;
        scaled[l] -= 1.0 - scaled[s];
        if scaled[l] < 1.0 {
            large.pop();
            small.push(l);
        }
    }
    // leftovers are 1 up to rounding
    for i in small.into_iter().chain(large) {
        scaled[i] = 1.0;
        alias[i] = i as u32;
    }
    let threshold = scaled
        .iter()
        .map(|&p| {
            if p >= 1.0 {
                u64::MAX
            } else {
                (p * 18_446_744_073_709_551_616.0) as u64
            }
        })
        .collect();
    (threshold, alias)
}
