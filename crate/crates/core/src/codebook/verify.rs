use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::ByteCodebook;
use crate::error::{Error, Result};
use crate::ternary::{PackedTrits, TritString};

/// Target parameters `(n, M, d)` of a ternary code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CodeFamilySpec {
    pub n: usize,
    pub m: usize,
    pub d: usize,
}

impl CodeFamilySpec {
    /// The seven length/distance families with 256 words.
    pub const FAMILIES: [CodeFamilySpec; 7] = [
        CodeFamilySpec { n: 9, m: 256, d: 3 },
        CodeFamilySpec { n: 11, m: 256, d: 5 },
        CodeFamilySpec { n: 15, m: 256, d: 7 },
        CodeFamilySpec { n: 18, m: 256, d: 9 },
        CodeFamilySpec { n: 21, m: 256, d: 11 },
        CodeFamilySpec { n: 24, m: 256, d: 13 },
        CodeFamilySpec { n: 26, m: 256, d: 15 },
    ];

    pub fn new(n: usize, m: usize, d: usize) -> Result<Self> {
        if n == 0 || m == 0 || d == 0 || d > n {
            return Err(Error::InvalidFamily(format!(
                "({n},{m},{d}) needs n >= 1, M >= 1, 1 <= d <= n"
            )));
        }
        Ok(CodeFamilySpec { n, m, d })
    }
}

impl FromStr for CodeFamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let nums: Option<Vec<usize>> = parts.iter().map(|p| p.parse().ok()).collect();
        match nums.as_deref() {
            Some(&[n, m, d]) => CodeFamilySpec::new(n, m, d),
            _ => Err(Error::InvalidFamily(format!("expected n,M,d, got {s:?}"))),
        }
    }
}

impl fmt::Display for CodeFamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.n, self.m, self.d)
    }
}

/// Cap on the number of offending pairs kept verbatim in a report.
const MAX_LISTED_VIOLATIONS: usize = 10_000;

#[derive(Clone, Debug, Serialize)]
pub struct CodeReport {
    pub spec: CodeFamilySpec,
    pub n: usize,
    pub m: usize,
    /// `None` for a single codeword.
    pub d_min: Option<usize>,
    /// `distance_histogram[k]` = number of unordered pairs at distance `k`.
    pub distance_histogram: Vec<u64>,
    /// Pairs `(i, j, distance)` closer than `spec.d`, by input index.
    pub violations: Vec<(usize, usize, usize)>,
    pub violation_count: u64,
    pub holds: bool,
}

/// Exact minimum distance by full pairwise enumeration.
pub fn verify_code(codewords: &[TritString], spec: CodeFamilySpec) -> Result<CodeReport> {
    let first = codewords.first().ok_or(Error::EmptyCode)?;
    let n = first.len();
    if let Some(bad) = codewords.iter().find(|w| w.len() != n) {
        return Err(Error::LengthMismatch {
            left: n,
            right: bad.len(),
        });
    }
    let packed: Vec<PackedTrits> = codewords.iter().map(|w| PackedTrits::pack(w.as_slice())).collect();

    let (histogram, mut violations, violation_count) = (0..packed.len())
        .into_par_iter()
        .map(|i| {
            let mut hist = vec![0u64; n + 1];
            let mut viol = Vec::new();
            let mut count = 0u64;
            for j in i + 1..packed.len() {
                let dist = packed[i].distance(packed[j]) as usize;
                hist[dist] += 1;
                if dist < spec.d {
                    count += 1;
                    if viol.len() < MAX_LISTED_VIOLATIONS {
                        viol.push((i, j, dist));
                    }
                }
            }
            (hist, viol, count)
        })
        .reduce(
            || (vec![0u64; n + 1], Vec::new(), 0u64),
            |(mut ha, mut va, ca), (hb, vb, cb)| {
                ha.iter_mut().zip(&hb).for_each(|(a, b)| *a += b);
                va.extend(vb);
                (ha, va, ca + cb)
            },
        );
    violations.sort_unstable();
    violations.truncate(MAX_LISTED_VIOLATIONS);

    let d_min = histogram.iter().position(|&c| c > 0);
    let holds = n == spec.n && codewords.len() >= spec.m && violation_count == 0;
    Ok(CodeReport {
        spec,
        n,
        m: codewords.len(),
        d_min,
        distance_histogram: histogram,
        violations,
        violation_count,
        holds,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SubcodeReport {
    pub min_distance: usize,
    pub target_size: usize,
    /// Byte values of the chosen subset, ascending.
    pub subset: Vec<u8>,
    pub meets_target: bool,
    pub subset_report: CodeReport,
    /// Byte values outside the subset.
    pub excluded: Vec<u8>,
    /// Smallest distance from any excluded codeword to any other codeword.
    pub excluded_min_distance: Option<usize>,
}

/// Finds a maximal subset of the codebook with pairwise distance at least
/// `min_distance`: drop the codeword with the most conflicts until none remain,
/// then re-admit dropped words that no longer conflict.
pub fn verify_subcode(codebook: &ByteCodebook, min_distance: usize, target_size: usize) -> SubcodeReport {
    let packed: Vec<PackedTrits> = (0..=255u8).map(|b| codebook.packed(b)).collect();
    let conflicts: Vec<Vec<usize>> = (0..256)
        .map(|i| {
            (0..256)
                .filter(|&j| j != i && (packed[i].distance(packed[j]) as usize) < min_distance)
                .collect()
        })
        .collect();

    let mut alive = [true; 256];
    let mut degree: Vec<usize> = conflicts.iter().map(Vec::len).collect();
    let mut removed = Vec::new();
    // Ties go to the larger byte value.
    while let Some(worst) = (0..256)
        .filter(|&i| alive[i] && degree[i] > 0)
        .max_by_key(|&i| (degree[i], i))
    {
        alive[worst] = false;
        removed.push(worst);
        for &j in &conflicts[worst] {
            if alive[j] {
                degree[j] -= 1;
            }
        }
    }
    removed.sort_unstable();
    for &r in &removed {
        if conflicts[r].iter().all(|&j| !alive[j]) {
            alive[r] = true;
        }
    }

    let subset: Vec<u8> = (0..256).filter(|&i| alive[i]).map(|i| i as u8).collect();
    let excluded: Vec<u8> = (0..256).filter(|&i| !alive[i]).map(|i| i as u8).collect();
    let words: Vec<TritString> = subset.iter().map(|&b| codebook.encode_byte(b).clone()).collect();
    let spec = CodeFamilySpec {
        n: super::CODEWORD_LEN,
        m: target_size,
        d: min_distance,
    };
    let subset_report = verify_code(&words, spec).expect("codebook subsets are non-empty");
    let excluded_min_distance = excluded
        .iter()
        .flat_map(|&e| {
            let pe = packed[e as usize];
            packed
                .iter()
                .enumerate()
                .filter(move |&(j, _)| j != e as usize)
                .map(move |(_, &p)| pe.distance(p) as usize)
        })
        .min();

    SubcodeReport {
        min_distance,
        target_size,
        meets_target: subset.len() >= target_size && subset_report.violation_count == 0,
        subset,
        subset_report,
        excluded,
        excluded_min_distance,
    }
}
