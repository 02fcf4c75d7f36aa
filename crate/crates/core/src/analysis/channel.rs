//! Substitution-only channel.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::codebook::CODEWORD_LEN;
use crate::error::{Error, Result};
use crate::ternary::{DnaSeq, Nucleotide};

/// The generator behind every stochastic output.
pub type ChannelRng = ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ChannelMode {
    /// Exactly `count` distinct substituted positions per 11-base window.
    FixedCount { count: usize },
    /// Each base substituted independently with probability `rate`.
    IidRate { rate: f64 },
}

impl ChannelMode {
    pub fn validate(self) -> Result<Self> {
        match self {
            ChannelMode::FixedCount { count } if count > CODEWORD_LEN => Err(Error::Channel(format!(
                "count {count} exceeds the {CODEWORD_LEN}-base window"
            ))),
            ChannelMode::IidRate { rate } if !(0.0..=1.0).contains(&rate) => {
                Err(Error::Channel(format!("rate {rate} outside [0, 1]")))
            }
            m => Ok(m),
        }
    }
}

impl FromStr for ChannelMode {
    type Err = Error;

    /// `count=N` or `rate=R`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Channel(format!("expected count=N or rate=R, got {s:?}"));
        let (key, value) = s.trim().split_once('=').ok_or_else(bad)?;
        let mode = match key.trim() {
            "count" => ChannelMode::FixedCount {
                count: value.trim().parse().map_err(|_| bad())?,
            },
            "rate" => ChannelMode::IidRate {
                rate: value.trim().parse().map_err(|_| bad())?,
            },
            _ => return Err(bad()),
        };
        mode.validate()
    }
}

impl fmt::Display for ChannelMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelMode::FixedCount { count } => write!(f, "count={count}"),
            ChannelMode::IidRate { rate } => write!(f, "rate={rate}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChannelSpec {
    pub mode: ChannelMode,
    pub seed: u64,
}

impl ChannelSpec {
    pub fn new(mode: ChannelMode, seed: u64) -> Result<Self> {
        Ok(ChannelSpec {
            mode: mode.validate()?,
            seed,
        })
    }

    pub fn fixed(count: usize, seed: u64) -> Result<Self> {
        Self::new(ChannelMode::FixedCount { count }, seed)
    }

    pub fn rate(rate: f64, seed: u64) -> Result<Self> {
        Self::new(ChannelMode::IidRate { rate }, seed)
    }

    pub fn rng(&self) -> ChannelRng {
        ChannelRng::seed_from_u64(self.seed)
    }
}

/// SplitMix64 finalizer over `seed` and `index`, for per-trial streams.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[inline]
fn substitute<R: Rng + ?Sized>(base: &mut Nucleotide, rng: &mut R) {
    *base = Nucleotide::from_index(base.index() + rng.random_range(1..=3u8));
}

/// Corrupts `bases` in place and returns the number of substitutions. A
/// trailing partial window takes `min(count, len)` substitutions.
pub fn inject_in_place<R: Rng + ?Sized>(bases: &mut [Nucleotide], mode: ChannelMode, rng: &mut R) -> Result<usize> {
    let mut hits = 0;
    match mode.validate()? {
        ChannelMode::FixedCount { count } => {
            for window in bases.chunks_mut(CODEWORD_LEN) {
                let k = count.min(window.len());
                for pos in sample(rng, window.len(), k).iter() {
                    substitute(&mut window[pos], rng);
                }
                hits += k;
            }
        }
        ChannelMode::IidRate { rate } => {
            for base in bases.iter_mut() {
                if rng.random_bool(rate) {
                    substitute(base, rng);
                    hits += 1;
                }
            }
        }
    }
    Ok(hits)
}

pub fn inject_substitutions(d: &DnaSeq, spec: &ChannelSpec) -> Result<DnaSeq> {
    let mut out = d.clone();
    inject_in_place(out.as_mut_slice(), spec.mode, &mut spec.rng())?;
    Ok(out)
}
