use serde::Serialize;

use crate::chunk::layout_for;
use crate::error::Result;

pub const COST_PER_BASE_USD: f64 = 0.05;
pub const BYTES_PER_MB: f64 = 1_000_000.0;

/// Information bits per base when each `bits_per_symbol`-bit symbol takes `n` bases.
pub fn code_rate(bits_per_symbol: u32, n: usize) -> f64 {
    assert!(n >= 1, "codeword length must be positive");
    bits_per_symbol as f64 / n as f64
}

pub fn synthesis_cost(num_bases: usize, per_base_usd: f64) -> f64 {
    num_bases as f64 * per_base_usd
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CostRow {
    pub size_bytes: usize,
    pub chunks: usize,
    pub mu: usize,
    pub bases: usize,
    pub cost_usd: f64,
    /// `None` for empty files.
    pub cost_per_mb: Option<f64>,
}

/// Synthesis cost for files of the given sizes (bases counted exactly,
/// headers included).
pub fn cost_curve(
    file_sizes: &[usize],
    extension_len: usize,
    chunk_bases: usize,
    per_base_usd: f64,
) -> Result<Vec<CostRow>> {
    file_sizes
        .iter()
        .map(|&size| {
            let layout = layout_for(size, extension_len, chunk_bases)?;
            let cost = synthesis_cost(layout.total_bases, per_base_usd);
            Ok(CostRow {
                size_bytes: size,
                chunks: layout.chunks,
                mu: layout.mu,
                bases: layout.total_bases,
                cost_usd: cost,
                cost_per_mb: (size > 0).then(|| cost / (size as f64 / BYTES_PER_MB)),
            })
        })
        .collect()
}
