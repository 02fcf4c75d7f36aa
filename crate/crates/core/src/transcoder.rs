//! Trit <-> DNA rotation coding.
//!
//! Each trit selects one of the three bases that differ from the previous
//! base, so the output never contains two equal adjacent bases. Decoding
//! needs the same starting base (the context) that the encoder used.

use crate::error::{Error, Result};
use crate::ternary::{DnaSeq, Nucleotide, Trit, TritString};

use Nucleotide::{A, C, G, T};

/// Rotation table: `forward[prev][trit]` is the next base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationTable {
    forward: [[Nucleotide; 3]; 4],
    backward: [[Option<Trit>; 4]; 4],
}

pub static GOLDMAN: RotationTable = RotationTable::goldman();

impl RotationTable {
    /// Rows are indexed by the previous base in A, C, G, T order.
    pub const fn goldman() -> Self {
        let forward = [[C, G, T], [G, T, A], [T, A, C], [A, C, G]];
        let mut backward = [[None; 4]; 4];
        let mut p = 0;
        while p < 4 {
            let mut t = 0;
            while t < 3 {
                let trit = match t {
                    0 => Trit::Zero,
                    1 => Trit::One,
                    _ => Trit::Two,
                };
                backward[p][forward[p][t] as usize] = Some(trit);
                t += 1;
            }
            p += 1;
        }
        RotationTable { forward, backward }
    }

    #[inline]
    pub fn forward(&self, prev: Nucleotide, t: Trit) -> Nucleotide {
        self.forward[prev as usize][t as usize]
    }

    /// `None` when `cur == prev`.
    #[inline]
    pub fn backward(&self, prev: Nucleotide, cur: Nucleotide) -> Option<Trit> {
        self.backward[prev as usize][cur as usize]
    }
}

/// The base preceding the first symbol being transcoded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TranscodeContext {
    pub prev_base: Nucleotide,
}

impl TranscodeContext {
    pub const fn new(prev_base: Nucleotide) -> Self {
        TranscodeContext { prev_base }
    }
}

impl Default for TranscodeContext {
    fn default() -> Self {
        TranscodeContext { prev_base: A }
    }
}

/// Appends the DNA image of `trits` to `out` and returns the last base written
/// (or `prev` for empty input).
pub fn encode_into(trits: &[Trit], mut prev: Nucleotide, out: &mut Vec<Nucleotide>) -> Nucleotide {
    out.reserve(trits.len());
    for &t in trits {
        prev = GOLDMAN.forward(prev, t);
        out.push(prev);
    }
    prev
}

pub fn trits_to_dna(t: &TritString, ctx: TranscodeContext) -> DnaSeq {
    let mut out = Vec::with_capacity(t.len());
    encode_into(t.as_slice(), ctx.prev_base, &mut out);
    DnaSeq::new(out)
}

pub fn dna_to_trits(d: &DnaSeq, ctx: TranscodeContext) -> Result<TritString> {
    let mut prev = ctx.prev_base;
    let mut out = Vec::with_capacity(d.len());
    for (i, cur) in d.iter().enumerate() {
        let t = GOLDMAN
            .backward(prev, cur)
            .ok_or(Error::Homopolymer { position: i + 1 })?;
        out.push(t);
        prev = cur;
    }
    Ok(TritString::new(out))
}

/// Best-effort reading: positions where a base repeats its predecessor come
/// back as `None`, everything else is read relative to the received predecessor.
pub fn read_trits_lossy(bases: &[Nucleotide], ctx: TranscodeContext) -> Vec<Option<Trit>> {
    let mut prev = ctx.prev_base;
    bases
        .iter()
        .map(|&cur| {
            let t = GOLDMAN.backward(prev, cur);
            prev = cur;
            t
        })
        .collect()
}
