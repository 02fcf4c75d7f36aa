//! Monte Carlo decoding over a grid of channel settings.

use rand::SeedableRng;
use rayon::prelude::*;
use serde::Serialize;

use super::channel::{derive_seed, inject_in_place, ChannelMode, ChannelRng, ChannelSpec};
use crate::chunk::{encode_file_with, ChunkRecord, FileDescriptor, DEFAULT_CHUNK_BASES, HEADER_FIXED_TRITS};
use crate::codebook::ByteCodebook;
use crate::decoder::{decode_file, DecodeOptions};
use crate::error::{Error, Result};
use crate::fasta::{ChunkCandidate, ParsedChunks};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimulationOptions {
    pub chunk_bases: usize,
    /// Also corrupt chunk headers, which carry no error correction.
    pub corrupt_headers: bool,
}

impl Default for SimulationOptions {
    fn default() -> Self {
        SimulationOptions {
            chunk_bases: DEFAULT_CHUNK_BASES,
            corrupt_headers: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McRow {
    #[serde(rename = "channel", serialize_with = "serialize_display")]
    pub mode: ChannelMode,
    pub seed: u64,
    pub trials: usize,
    /// Correct content bytes over all trials, relative to the longer of the
    /// original and decoded content.
    pub byte_accuracy: f64,
    pub chunk_parity_failure_rate: f64,
    pub file_exact_rate: f64,
    pub decode_errors: usize,
    pub mean_substitutions: f64,
}

fn serialize_display<S: serde::Serializer>(mode: &ChannelMode, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(mode)
}

#[derive(Default)]
struct Tally {
    bytes_correct: u64,
    bytes_total: u64,
    parity_failures: u64,
    chunks: u64,
    exact: u64,
    errors: u64,
    substitutions: u64,
}

impl Tally {
    fn merge(mut self, o: Tally) -> Tally {
        self.bytes_correct += o.bytes_correct;
        self.bytes_total += o.bytes_total;
        self.parity_failures += o.parity_failures;
        self.chunks += o.chunks;
        self.exact += o.exact;
        self.errors += o.errors;
        self.substitutions += o.substitutions;
        self
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        1.0
    } else {
        num as f64 / den as f64
    }
}

fn run_trial(
    records: &[ChunkRecord],
    content: &[u8],
    mode: ChannelMode,
    seed: u64,
    codebook: &ByteCodebook,
    opts: SimulationOptions,
) -> Result<Tally> {
    let mut rng = ChannelRng::seed_from_u64(seed);
    let mut tally = Tally::default();
    let mut candidates = Vec::with_capacity(records.len());
    for r in records {
        let mut payload = r.payload_dna.clone();
        let mut header = r.header_dna.clone();
        tally.substitutions += inject_in_place(payload.as_mut_slice(), mode, &mut rng)? as u64;
        if opts.corrupt_headers {
            tally.substitutions += inject_in_place(header.as_mut_slice(), mode, &mut rng)? as u64;
        }
        candidates.push(ChunkCandidate {
            title: format!("f{}_c{}", r.file_id, r.chunk_index),
            payload,
            header,
        });
    }
    let parsed = ParsedChunks {
        chunk_bases: opts.chunk_bases,
        mu: records[0].header_dna.len() - HEADER_FIXED_TRITS,
        candidates,
    };
    tally.chunks = records.len() as u64;
    match decode_file(&parsed, codebook, &DecodeOptions::default()) {
        Ok(res) => {
            tally.parity_failures = res.per_chunk.iter().filter(|c| !c.parity_ok).count() as u64;
            tally.bytes_correct = content.iter().zip(&res.content).filter(|(a, b)| a == b).count() as u64;
            tally.bytes_total = content.len().max(res.content.len()) as u64;
            tally.exact = (res.complete && res.content == content) as u64;
        }
        Err(_) => {
            tally.errors = 1;
            tally.parity_failures = tally.chunks;
            tally.bytes_total = content.len() as u64;
        }
    }
    Ok(tally)
}

/// Runs `trials` independent corrupt-and-decode rounds for every channel in
/// `grid`. Trial `i` of a channel with seed `s` draws from `derive_seed(s, i)`.
pub fn monte_carlo_decode(
    fd: &FileDescriptor,
    grid: &[ChannelSpec],
    trials: usize,
    codebook: &ByteCodebook,
    opts: SimulationOptions,
) -> Result<Vec<McRow>> {
    if trials == 0 {
        return Err(Error::Channel("at least one trial is required".into()));
    }
    let records = encode_file_with(fd, codebook, opts.chunk_bases)?;
    grid.iter()
        .map(|spec| {
            let mode = spec.mode.validate()?;
            let tallies = (0..trials as u64)
                .into_par_iter()
                .map(|i| run_trial(&records, &fd.content, mode, derive_seed(spec.seed, i), codebook, opts))
                .collect::<Result<Vec<Tally>>>()?;
            let t = tallies.into_iter().fold(Tally::default(), Tally::merge);
            Ok(McRow {
                mode,
                seed: spec.seed,
                trials,
                byte_accuracy: ratio(t.bytes_correct, t.bytes_total),
                chunk_parity_failure_rate: ratio(t.parity_failures, t.chunks),
                file_exact_rate: t.exact as f64 / trials as f64,
                decode_errors: t.errors as usize,
                mean_substitutions: t.substitutions as f64 / trials as f64,
            })
        })
        .collect()
}
