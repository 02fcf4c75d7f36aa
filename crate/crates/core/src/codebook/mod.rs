//! Byte <-> codeword bijection and code verification/construction.
//!
//! Table text format, one entry per line:
//!
//! ```text
//! # comment
//! <byte_value> <codeword> <declared_weight>
//! ```
//!
//! Rows are processed in file order. When a byte value appears twice with
//! different codewords the first row wins; the displaced codewords are handed
//! out, in order, to the byte values no row claimed (ascending). Everything the
//! loader repaired is listed in the [`LoadReport`].

mod construct;
mod verify;

pub use construct::{greedy_construct, greedy_construct_with, Construction, ScanOrder};
pub use verify::{verify_code, verify_subcode, CodeFamilySpec, CodeReport, SubcodeReport};

use std::collections::HashMap;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ternary::{weight, PackedTrits, TritString};

pub const CODEWORD_LEN: usize = 11;

/// The shipped (11,256,5) table.
pub const STANDARD_TABLE: &str = include_str!("../../assets/codebook.txt");

#[derive(Clone, Debug)]
pub struct ByteCodebook {
    words: Vec<TritString>,
    packed: Vec<PackedTrits>,
    reverse: HashMap<PackedTrits, u8>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct LoadReport {
    pub rows_read: usize,
    pub duplicates: Vec<DuplicateRow>,
    pub remaps: Vec<Remap>,
    pub weight_mismatches: Vec<WeightMismatch>,
    /// Displaced codewords left over once every byte had a codeword.
    pub unused_codewords: Vec<TritString>,
}

impl LoadReport {
    pub fn is_clean(&self) -> bool {
        self.duplicates.is_empty() && self.remaps.is_empty() && self.weight_mismatches.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DuplicateRow {
    pub line: usize,
    pub byte: u8,
    pub codeword: TritString,
    /// Line of the row that kept the byte value.
    pub kept_line: usize,
    /// True when this row repeats the kept row exactly.
    pub verbatim: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Remap {
    pub line: usize,
    pub codeword: TritString,
    pub declared_byte: u8,
    pub assigned_byte: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightMismatch {
    pub line: usize,
    pub byte: u8,
    pub codeword: TritString,
    pub declared: usize,
    pub computed: usize,
}

struct Row {
    line: usize,
    byte: u8,
    codeword: TritString,
}

fn parse_rows(source: &str, report: &mut LoadReport) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for (i, raw) in source.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::CodebookSyntax {
                line,
                msg: format!("expected 3 fields, found {}", fields.len()),
            });
        }
        let byte: u8 = fields[0].parse().map_err(|_| Error::CodebookSyntax {
            line,
            msg: format!("bad byte value {:?}", fields[0]),
        })?;
        let codeword: TritString = fields[1].parse::<TritString>().map_err(|e| Error::CodebookSyntax {
            line,
            msg: e.to_string(),
        })?;
        if codeword.len() != CODEWORD_LEN {
            return Err(Error::CodewordLength {
                expected: CODEWORD_LEN,
                found: codeword.len(),
            });
        }
        let declared: usize = fields[2].parse().map_err(|_| Error::CodebookSyntax {
            line,
            msg: format!("bad weight {:?}", fields[2]),
        })?;
        let computed = weight(&codeword);
        if computed != declared {
            report.weight_mismatches.push(WeightMismatch {
                line,
                byte,
                codeword: codeword.clone(),
                declared,
                computed,
            });
        }
        rows.push(Row { line, byte, codeword });
    }
    report.rows_read = rows.len();
    Ok(rows)
}

/// Parses and validates a codebook table, repairing duplicate byte rows.
pub fn load_codebook(source: &str) -> Result<(ByteCodebook, LoadReport)> {
    let mut report = LoadReport::default();
    let rows = parse_rows(source, &mut report)?;

    let mut slots: Vec<Option<(TritString, usize)>> = vec![None; 256];
    let mut owner: HashMap<TritString, u8> = HashMap::new();
    let mut displaced: Vec<Row> = Vec::new();

    for row in rows {
        match &slots[row.byte as usize] {
            None => {
                if let Some(&first) = owner.get(&row.codeword) {
                    return Err(Error::DuplicateCodeword {
                        codeword: row.codeword.to_string(),
                        first,
                        second: row.byte,
                    });
                }
                owner.insert(row.codeword.clone(), row.byte);
                slots[row.byte as usize] = Some((row.codeword, row.line));
            }
            Some((kept, kept_line)) => {
                let verbatim = *kept == row.codeword;
                report.duplicates.push(DuplicateRow {
                    line: row.line,
                    byte: row.byte,
                    codeword: row.codeword.clone(),
                    kept_line: *kept_line,
                    verbatim,
                });
                if !verbatim {
                    displaced.push(row);
                }
            }
        }
    }

    let mut spare = Vec::new();
    for row in displaced {
        if let Some(&first) = owner.get(&row.codeword) {
            return Err(Error::DuplicateCodeword {
                codeword: row.codeword.to_string(),
                first,
                second: row.byte,
            });
        }
        owner.insert(row.codeword.clone(), row.byte);
        spare.push(row);
    }

    let missing: Vec<u8> = (0..=255u8).filter(|&b| slots[b as usize].is_none()).collect();
    if spare.len() < missing.len() {
        return Err(Error::CodebookIncomplete {
            missing: missing[spare.len()..].to_vec(),
        });
    }
    let mut spare = spare.into_iter();
    for (&byte, row) in missing.iter().zip(spare.by_ref()) {
        report.remaps.push(Remap {
            line: row.line,
            codeword: row.codeword.clone(),
            declared_byte: row.byte,
            assigned_byte: byte,
        });
        slots[byte as usize] = Some((row.codeword, row.line));
    }
    report.unused_codewords = spare.map(|r| r.codeword).collect();

    let words: Vec<TritString> = slots.into_iter().map(|s| s.unwrap().0).collect();
    Ok((ByteCodebook::from_words(words), report))
}

impl ByteCodebook {
    fn from_words(words: Vec<TritString>) -> Self {
        let packed: Vec<PackedTrits> = words.iter().map(|w| PackedTrits::pack(w.as_slice())).collect();
        let reverse = packed.iter().enumerate().map(|(b, &p)| (p, b as u8)).collect();
        ByteCodebook { words, packed, reverse }
    }

    /// Builds a codebook from exactly 256 distinct length-11 codewords, indexed by byte.
    pub fn from_codewords(words: Vec<TritString>) -> Result<Self> {
        if words.len() != 256 {
            return Err(Error::CodebookIncomplete {
                missing: (words.len().min(256) as u16..256).map(|b| b as u8).collect(),
            });
        }
        let mut seen: HashMap<&TritString, u8> = HashMap::new();
        for (b, w) in words.iter().enumerate() {
            if w.len() != CODEWORD_LEN {
                return Err(Error::CodewordLength {
                    expected: CODEWORD_LEN,
                    found: w.len(),
                });
            }
            if let Some(&first) = seen.get(w) {
                return Err(Error::DuplicateCodeword {
                    codeword: w.to_string(),
                    first,
                    second: b as u8,
                });
            }
            seen.insert(w, b as u8);
        }
        Ok(Self::from_words(words))
    }

    /// The embedded table, loaded once.
    pub fn standard() -> &'static ByteCodebook {
        &standard_with_report().0
    }

    pub fn encode_byte(&self, b: u8) -> &TritString {
        &self.words[b as usize]
    }

    pub fn packed(&self, b: u8) -> PackedTrits {
        self.packed[b as usize]
    }

    /// `Ok(None)` when `c` is not a codeword.
    pub fn decode_byte_exact(&self, c: &TritString) -> Result<Option<u8>> {
        if c.len() != CODEWORD_LEN {
            return Err(Error::CodewordLength {
                expected: CODEWORD_LEN,
                found: c.len(),
            });
        }
        Ok(self.reverse.get(&PackedTrits::pack(c.as_slice())).copied())
    }

    pub fn codewords(&self) -> &[TritString] {
        &self.words
    }
}

pub fn standard_with_report() -> &'static (ByteCodebook, LoadReport) {
    static STANDARD: OnceLock<(ByteCodebook, LoadReport)> = OnceLock::new();
    STANDARD.get_or_init(|| load_codebook(STANDARD_TABLE).expect("embedded codebook is valid"))
}
