//! Greedy (lexicode-style) construction of ternary codes.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::CodeFamilySpec;
use crate::ternary::{PackedTrits, TritString};

/// Largest length whose candidate index fits in a u64.
const MAX_LEN: usize = 40;
/// Random order shuffles the whole space up to this many candidates and samples beyond it.
const SHUFFLE_LIMIT: u64 = 1 << 22;
const DEFAULT_RANDOM_BUDGET: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ScanOrder {
    Lexicographic,
    SeededRandom(u64),
}

#[derive(Clone, Debug, Serialize)]
pub struct Construction {
    pub spec: CodeFamilySpec,
    pub order: ScanOrder,
    pub codewords: Vec<TritString>,
    pub candidates_scanned: u64,
    /// True when the scan stopped because candidates ran out (or hit the budget)
    /// before `spec.m` words were found.
    pub exhausted: bool,
}

pub fn greedy_construct(spec: &CodeFamilySpec, order: ScanOrder) -> Vec<TritString> {
    greedy_construct_with(spec, order, None).codewords
}

/// Accepts each candidate that keeps distance >= `spec.d` to every word taken
/// so far. Stops at `spec.m` words, at the end of the candidate stream, or after
/// `max_candidates`.
pub fn greedy_construct_with(spec: &CodeFamilySpec, order: ScanOrder, max_candidates: Option<u64>) -> Construction {
    assert!(spec.n <= MAX_LEN, "codeword length {} exceeds {MAX_LEN}", spec.n);
    let total = 3u64.checked_pow(spec.n as u32).unwrap_or(u64::MAX);
    let d = spec.d as u32;
    let mut code: Vec<PackedTrits> = Vec::with_capacity(spec.m.min(1 << 16));
    let mut scanned = 0u64;

    let offer = |cand: PackedTrits, code: &mut Vec<PackedTrits>| {
        // Recent words are the likeliest near neighbours in lexicographic order.
        if code.iter().rev().all(|w| w.distance(cand) >= d) {
            code.push(cand);
        }
        code.len() >= spec.m
    };

    let mut done = false;
    match order {
        ScanOrder::Lexicographic => {
            let limit = max_candidates.map_or(total, |m| m.min(total));
            let mut cand = PackedTrits::default();
            while scanned < limit {
                scanned += 1;
                if offer(cand, &mut code) {
                    done = true;
                    break;
                }
                increment(&mut cand);
            }
        }
        ScanOrder::SeededRandom(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            if total <= SHUFFLE_LIMIT {
                let mut all: Vec<u64> = (0..total).collect();
                all.shuffle(&mut rng);
                let limit = max_candidates.map_or(total, |m| m.min(total));
                for &idx in all.iter().take(limit as usize) {
                    scanned += 1;
                    if offer(pack_index(idx, spec.n), &mut code) {
                        done = true;
                        break;
                    }
                }
            } else {
                let limit = max_candidates.unwrap_or(DEFAULT_RANDOM_BUDGET);
                while scanned < limit {
                    scanned += 1;
                    let idx = rng.random_range(0..total);
                    if offer(pack_index(idx, spec.n), &mut code) {
                        done = true;
                        break;
                    }
                }
            }
        }
    }

    Construction {
        spec: *spec,
        order,
        codewords: code.iter().map(|p| unpack(*p, spec.n)).collect(),
        candidates_scanned: scanned,
        exhausted: !done,
    }
}

/// Base-3 increment on the bit planes; bit 0 is the last trit.
fn increment(p: &mut PackedTrits) {
    let mut bit = 1u64;
    loop {
        if p.lo & bit != 0 {
            p.lo &= !bit;
            p.hi |= bit;
            return;
        }
        if p.hi & bit != 0 {
            p.hi &= !bit;
            bit <<= 1;
            continue;
        }
        p.lo |= bit;
        return;
    }
}

fn pack_index(idx: u64, n: usize) -> PackedTrits {
    let t = TritString::from_index(idx, n).expect("index below 3^n");
    PackedTrits::pack(t.as_slice())
}

fn unpack(p: PackedTrits, n: usize) -> TritString {
    (0..n)
        .map(|i| {
            let bit = 1u64 << (n - 1 - i);
            if p.lo & bit != 0 {
                crate::ternary::Trit::One
            } else if p.hi & bit != 0 {
                crate::ternary::Trit::Two
            } else {
                crate::ternary::Trit::Zero
            }
        })
        .collect()
}
