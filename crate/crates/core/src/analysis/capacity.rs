//! Bytes storable per gram of single-stranded DNA under the chunk layout.
//!
//! With `l` payload bases per chunk, `N` bases per byte, `C` bases per gram
//! and `h` metadata bytes, a gram holds `x` bytes where
//!
//! ```text
//! x = C*l / (N * (l + 3 + mu)) - h,    mu = log3(N*(x + h) / l)
//! ```
//!
//! `mu` is the chunk-index width for the number of chunks the `x + h` bytes
//! occupy. The equation is solved by damped fixed-point iteration.

use serde::Serialize;

use crate::error::{Error, Result};

/// Single-stranded bases per gram.
pub const BASES_PER_GRAM: f64 = 1.82e21;
pub const DEFAULT_OVERHEAD_BYTES: f64 = 22.0;
const MAX_ITERATIONS: usize = 1000;
const STEP_TOLERANCE: f64 = 1e-12;
const DAMPING: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CapacityParams {
    /// Payload bases per chunk.
    pub l: usize,
    /// Bases per encoded byte.
    pub n: usize,
    pub bases_per_gram: f64,
    pub overhead_bytes: f64,
}

impl CapacityParams {
    pub fn new(l: usize, n: usize) -> Self {
        CapacityParams {
            l,
            n,
            bases_per_gram: BASES_PER_GRAM,
            overhead_bytes: DEFAULT_OVERHEAD_BYTES,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.l == 0 || self.n == 0 || !self.l.is_multiple_of(self.n) {
            return Err(Error::CapacityParams(format!(
                "l = {} must be a positive multiple of N = {}",
                self.l, self.n
            )));
        }
        if !(self.bases_per_gram.is_finite() && self.bases_per_gram > 0.0) {
            return Err(Error::CapacityParams("bases per gram must be positive".into()));
        }
        if !(self.overhead_bytes.is_finite() && self.overhead_bytes >= 0.0) {
            return Err(Error::CapacityParams("overhead must be non-negative".into()));
        }
        Ok(())
    }

    fn mu(&self, x: f64) -> f64 {
        (self.n as f64 * (x + self.overhead_bytes) / self.l as f64).log(3.0)
    }

    /// Right-hand side of the capacity equation.
    pub fn map(&self, x: f64) -> f64 {
        let (l, n) = (self.l as f64, self.n as f64);
        self.bases_per_gram * l / (n * (l + 3.0 + self.mu(x))) - self.overhead_bytes
    }

    /// The equation with `N` multiplying only the log term,
    /// `C*l / ((l + 3) + mu*N) - h`.
    pub fn map_as_printed(&self, x: f64) -> f64 {
        let (l, n) = (self.l as f64, self.n as f64);
        self.bases_per_gram * l / ((l + 3.0) + self.mu(x) * n) - self.overhead_bytes
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CapacityResult {
    pub bytes_per_gram: f64,
    pub mu: f64,
    /// `|map(x) - x| / x` at the returned point.
    pub residual: f64,
    pub iterations: usize,
}

fn iterate(p: &CapacityParams, x0: f64, f: impl Fn(f64) -> f64) -> Result<CapacityResult> {
    let mut x = x0;
    for it in 1..=MAX_ITERATIONS {
        let next = x + DAMPING * (f(x) - x);
        if !(next.is_finite() && next > 0.0) {
            return Err(Error::CapacityParams(format!(
                "iteration left the domain at x = {next}"
            )));
        }
        let step = (next - x).abs() / next;
        x = next;
        if step < STEP_TOLERANCE {
            return Ok(CapacityResult {
                bytes_per_gram: x,
                mu: p.mu(x),
                residual: (f(x) - x).abs() / x,
                iterations: it,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: MAX_ITERATIONS,
    })
}

fn start(p: &CapacityParams) -> f64 {
    p.bases_per_gram * p.l as f64 / (p.n as f64 * (p.l as f64 + 3.0))
}

pub fn solve_capacity(p: &CapacityParams) -> Result<CapacityResult> {
    p.validate()?;
    iterate(p, start(p), |x| p.map(x))
}

/// Fixed point of [`CapacityParams::map_as_printed`], kept for comparison.
pub fn solve_capacity_as_printed(p: &CapacityParams) -> Result<CapacityResult> {
    p.validate()?;
    iterate(p, start(p), |x| p.map_as_printed(x))
}
