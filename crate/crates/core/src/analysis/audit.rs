//! Exhaustive substitution audits of the codeword decoder.

use rayon::prelude::*;
use serde::Serialize;

use crate::codebook::{ByteCodebook, CODEWORD_LEN};
use crate::decoder::MlDecoder;
use crate::ternary::Nucleotide;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    /// Substitutions per window.
    pub substitutions: usize,
    pub cases: u64,
    /// Original byte at a unique minimum distance.
    pub uniquely_corrected: u64,
    /// Original byte recovered only through a tie-break.
    pub corrected_by_tiebreak: u64,
    pub miscorrected: u64,
    /// Cases that were ambiguous, whichever byte won.
    pub ambiguous: u64,
}

impl AuditReport {
    pub fn unique_fraction(&self) -> f64 {
        self.uniquely_corrected as f64 / self.cases as f64
    }

    pub fn corrected_fraction(&self) -> f64 {
        (self.uniquely_corrected + self.corrected_by_tiebreak) as f64 / self.cases as f64
    }

    fn merge(mut self, o: AuditReport) -> AuditReport {
        self.cases += o.cases;
        self.uniquely_corrected += o.uniquely_corrected;
        self.corrected_by_tiebreak += o.corrected_by_tiebreak;
        self.miscorrected += o.miscorrected;
        self.ambiguous += o.ambiguous;
        self
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Applies every way of substituting exactly `k` positions of every codeword
/// image under every context, and classifies the decoder's answer.
/// `256 * C(11, k) * 3^k * 4` cases.
pub fn audit_substitutions(codebook: &ByteCodebook, k: usize) -> AuditReport {
    assert!(k <= CODEWORD_LEN, "at most {CODEWORD_LEN} substitutions fit a window");
    let decoder = MlDecoder::new(codebook);
    let position_sets = combinations(CODEWORD_LEN, k);
    let patterns = 3usize.pow(k as u32);
    let jobs: Vec<(Nucleotide, u8)> = Nucleotide::ALL
        .into_iter()
        .flat_map(|ctx| (0..=255u8).map(move |b| (ctx, b)))
        .collect();
    let mut report = jobs
        .par_iter()
        .map(|&(ctx, byte)| {
            let clean = decoder.image(ctx, byte).into_vec();
            let mut r = AuditReport::default();
            let mut window = clean.clone();
            for positions in &position_sets {
                for pattern in 0..patterns {
                    window.copy_from_slice(&clean);
                    let mut p = pattern;
                    for &pos in positions {
                        let shift = (p % 3) as u8 + 1;
                        p /= 3;
                        window[pos] = Nucleotide::from_index(clean[pos].index() + shift);
                    }
                    let hit = decoder.decode_window(&window, ctx);
                    r.cases += 1;
                    r.ambiguous += hit.ambiguous as u64;
                    match (hit.byte == byte, hit.ambiguous) {
                        (true, false) => r.uniquely_corrected += 1,
                        (true, true) => r.corrected_by_tiebreak += 1,
                        (false, _) => r.miscorrected += 1,
                    }
                }
            }
            r
        })
        .reduce(AuditReport::default, AuditReport::merge);
    report.substitutions = k;
    report
}
