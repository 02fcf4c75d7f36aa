//! FASTA emission and parsing of chunk records.
//!
//! Each chunk becomes `>f<file_id>_c<chunk_index> len=<n>` followed by its
//! sequence (payload then header) wrapped at 80 columns. On the way back the
//! header width is inferred from record lengths, so the title line is
//! informational only.

use serde::Serialize;

use crate::chunk::{ChunkRecord, HEADER_FIXED_TRITS, MAX_FILE_ID};
use crate::codebook::CODEWORD_LEN;
use crate::error::{Error, Result};
use crate::ternary::{DnaSeq, Nucleotide};

pub const LINE_WIDTH: usize = 80;

/// Appends one `>title` record with the sequence wrapped at [`LINE_WIDTH`].
pub fn write_record(out: &mut String, title: &str, seq: &DnaSeq) {
    out.push('>');
    out.push_str(title);
    out.push('\n');
    let text = seq.to_string();
    for line in text.as_bytes().chunks(LINE_WIDTH) {
        out.push_str(std::str::from_utf8(line).expect("bases are ASCII"));
        out.push('\n');
    }
}

pub fn emit_fasta(records: &[ChunkRecord]) -> String {
    let mut sorted: Vec<&ChunkRecord> = records.iter().collect();
    sorted.sort_by_key(|r| (r.file_id, r.chunk_index));
    let mut out = String::new();
    for r in sorted {
        let title = format!("f{}_c{} len={}", r.file_id, r.chunk_index, r.len());
        write_record(&mut out, &title, &r.sequence());
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FastaRecord {
    pub title: String,
    /// 1-based line of the `>` line.
    pub line: usize,
    pub seq: DnaSeq,
}

pub fn parse_fasta_records(text: &str) -> Result<Vec<FastaRecord>> {
    let mut records: Vec<FastaRecord> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let raw = raw.trim_end_matches('\r');
        if let Some(title) = raw.strip_prefix('>') {
            if let Some(prev) = records.last() {
                if prev.seq.is_empty() {
                    return Err(Error::Fasta {
                        line: prev.line,
                        msg: "record has no sequence".into(),
                    });
                }
            }
            records.push(FastaRecord {
                title: title.trim().to_string(),
                line,
                seq: DnaSeq::default(),
            });
            continue;
        }
        let body = raw.trim();
        if body.is_empty() {
            continue;
        }
        let rec = records.last_mut().ok_or_else(|| Error::Fasta {
            line,
            msg: "sequence data before the first '>' line".into(),
        })?;
        for (col, ch) in body.chars().enumerate() {
            let n = Nucleotide::from_char(ch).ok_or_else(|| Error::Fasta {
                line,
                msg: format!("invalid base {ch:?} in column {}", col + 1),
            })?;
            rec.seq.push(n);
        }
    }
    if let Some(last) = records.last() {
        if last.seq.is_empty() {
            return Err(Error::Fasta {
                line: last.line,
                msg: "record has no sequence".into(),
            });
        }
    }
    Ok(records)
}

/// A record split into payload and header, chunk identity still unknown.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChunkCandidate {
    pub title: String,
    pub payload: DnaSeq,
    pub header: DnaSeq,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParsedChunks {
    pub chunk_bases: usize,
    pub mu: usize,
    pub candidates: Vec<ChunkCandidate>,
}

/// Splits records into payload/header using the record lengths: full chunks
/// are `chunk_bases + 3 + mu` long, and each file contributes at most one
/// shorter tail record. A lone record with no full chunk present has `mu = 1`.
pub fn split_records(records: Vec<FastaRecord>, chunk_bases: usize) -> Result<ParsedChunks> {
    if chunk_bases == 0 || !chunk_bases.is_multiple_of(CODEWORD_LEN) {
        return Err(Error::ChunkSize(chunk_bases));
    }
    let Some(max_len) = records.iter().map(|r| r.seq.len()).max() else {
        return Ok(ParsedChunks {
            chunk_bases,
            mu: 1,
            candidates: Vec::new(),
        });
    };

    let full_header = max_len.checked_sub(chunk_bases);
    let mu = match full_header {
        Some(h) if h > HEADER_FIXED_TRITS => h - HEADER_FIXED_TRITS,
        _ => {
            if records.len() > 1 {
                return Err(Error::RecordLengths(format!(
                    "{} records but none is a full {chunk_bases}-base chunk",
                    records.len()
                )));
            }
            1
        }
    };
    // Up to nine files of 3^mu chunks each can share one listing.
    let capacity = (MAX_FILE_ID as f64 + 1.0) * 3f64.powi(mu as i32);
    if mu > 40 || capacity < records.len() as f64 {
        return Err(Error::RecordLengths(format!(
            "header width {mu} cannot index {} records",
            records.len()
        )));
    }

    let header_len = HEADER_FIXED_TRITS + mu;
    let mut short_lines: Vec<usize> = Vec::new();
    let mut candidates = Vec::with_capacity(records.len());
    for rec in records {
        let len = rec.seq.len();
        let payload_len = len.checked_sub(header_len).filter(|&p| p > 0 && p % CODEWORD_LEN == 0);
        let Some(payload_len) = payload_len.filter(|&p| p <= chunk_bases) else {
            return Err(Error::RecordLengths(format!(
                "record at line {} has length {len}, which is not a chunk of {chunk_bases} payload bases plus a {header_len}-base header",
                rec.line
            )));
        };
        if payload_len != chunk_bases {
            short_lines.push(rec.line);
            if short_lines.len() > MAX_FILE_ID as usize + 1 {
                return Err(Error::RecordLengths(format!(
                    "records at lines {short_lines:?} are shorter than a full chunk, more than one per file"
                )));
            }
        }
        let bases = rec.seq.into_vec();
        candidates.push(ChunkCandidate {
            title: rec.title,
            payload: DnaSeq::from(&bases[..payload_len]),
            header: DnaSeq::from(&bases[payload_len..]),
        });
    }
    Ok(ParsedChunks {
        chunk_bases,
        mu,
        candidates,
    })
}

pub fn parse_fasta(text: &str, chunk_bases: usize) -> Result<ParsedChunks> {
    split_records(parse_fasta_records(text)?, chunk_bases)
}
