//! Maximum-likelihood decoding of received chunks.
//!
//! Every 11-base window is compared against the DNA image of all 256
//! codewords under the current context base and the closest image wins.
//! Equal DNA distances are separated by trit distance between the candidate
//! codeword and a best-effort trit reading of the window; anything still tied
//! goes to the smallest byte value and is flagged ambiguous.
//!
//! The context of a window is the last base of the previous *corrected*
//! window, so a correctly decoded codeword hands its successor the exact
//! context it was encoded with.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::chunk::{parity_trit, FIELD_SEPARATOR, FILE_ID_TRITS, RECORD_SEPARATOR};
use crate::codebook::{ByteCodebook, CODEWORD_LEN};
use crate::error::{Error, Result};
use crate::fasta::{ChunkCandidate, ParsedChunks};
use crate::ternary::{DnaSeq, Nucleotide, Trit};
use crate::transcoder::{dna_to_trits, encode_into, read_trits_lossy, TranscodeContext};

/// Low bit of each 2-bit base slot in a packed 11-base window.
const SLOT_MASK: u32 = 0x0015_5555;
const TRIT_MASK: u64 = (1 << CODEWORD_LEN) - 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecodedCodeword {
    pub byte_value: u8,
    pub dna_distance: usize,
    pub trit_distance: usize,
    pub ambiguous: bool,
    pub corrected_window: DnaSeq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Hit {
    pub byte: u8,
    pub dna_distance: u8,
    pub trit_distance: u8,
    pub ambiguous: bool,
}

/// Codeword images under every context, precomputed for one codebook.
pub struct MlDecoder<'a> {
    codebook: &'a ByteCodebook,
    images: Box<[[u32; 256]; 4]>,
    exact: [HashMap<u32, u8>; 4],
}

#[inline]
fn pack_window(w: &[Nucleotide]) -> u32 {
    w.iter().fold(0u32, |acc, &n| (acc << 2) | n.index() as u32)
}

#[inline]
fn window_distance(a: u32, b: u32) -> u32 {
    let x = a ^ b;
    ((x | (x >> 1)) & SLOT_MASK).count_ones()
}

impl<'a> MlDecoder<'a> {
    pub fn new(codebook: &'a ByteCodebook) -> Self {
        let mut images = Box::new([[0u32; 256]; 4]);
        let mut exact: [HashMap<u32, u8>; 4] = Default::default();
        let mut buf = Vec::with_capacity(CODEWORD_LEN);
        for ctx in Nucleotide::ALL {
            for b in 0..=255u8 {
                buf.clear();
                encode_into(codebook.encode_byte(b).as_slice(), ctx, &mut buf);
                let packed = pack_window(&buf);
                images[ctx as usize][b as usize] = packed;
                exact[ctx as usize].insert(packed, b);
            }
        }
        MlDecoder {
            codebook,
            images,
            exact,
        }
    }

    pub fn codebook(&self) -> &ByteCodebook {
        self.codebook
    }

    /// Last base of the image of `byte` under `ctx`.
    #[inline]
    pub fn image_last_base(&self, ctx: Nucleotide, byte: u8) -> Nucleotide {
        Nucleotide::from_index((self.images[ctx as usize][byte as usize] & 3) as u8)
    }

    pub fn image(&self, ctx: Nucleotide, byte: u8) -> DnaSeq {
        let packed = self.images[ctx as usize][byte as usize];
        (0..CODEWORD_LEN)
            .map(|i| Nucleotide::from_index(((packed >> (2 * (CODEWORD_LEN - 1 - i))) & 3) as u8))
            .collect()
    }

    fn trit_distance(&self, reading: (u64, u64, u64), byte: u8) -> u8 {
        let (lo, hi, unread) = reading;
        let c = self.codebook.packed(byte);
        (((lo ^ c.lo) | (hi ^ c.hi) | unread) & TRIT_MASK).count_ones() as u8
    }

    fn lossy_planes(window: &[Nucleotide], ctx: Nucleotide) -> (u64, u64, u64) {
        let mut planes = (0u64, 0u64, 0u64);
        for (i, t) in read_trits_lossy(window, TranscodeContext::new(ctx))
            .into_iter()
            .enumerate()
        {
            let bit = 1u64 << (CODEWORD_LEN - 1 - i);
            match t {
                Some(Trit::Zero) => {}
                Some(Trit::One) => planes.0 |= bit,
                Some(Trit::Two) => planes.1 |= bit,
                None => planes.2 |= bit,
            }
        }
        planes
    }

    /// `window` must hold exactly 11 bases.
    pub(crate) fn decode_window(&self, window: &[Nucleotide], ctx: Nucleotide) -> Hit {
        debug_assert_eq!(window.len(), CODEWORD_LEN);
        let received = pack_window(window);
        // A clean image is its own unique nearest neighbour: distinct images
        // under one context are at least 3 apart.
        if let Some(&byte) = self.exact[ctx as usize].get(&received) {
            return Hit {
                byte,
                dna_distance: 0,
                trit_distance: 0,
                ambiguous: false,
            };
        }

        let images = &self.images[ctx as usize];
        let mut best = u32::MAX;
        let mut ties = [0u8; 256];
        let mut n_ties = 0usize;
        for (b, &img) in images.iter().enumerate() {
            let d = window_distance(received, img);
            if d < best {
                best = d;
                n_ties = 0;
            }
            if d == best {
                ties[n_ties] = b as u8;
                n_ties += 1;
            }
        }

        let reading = Self::lossy_planes(window, ctx);
        if n_ties == 1 {
            return Hit {
                byte: ties[0],
                dna_distance: best as u8,
                trit_distance: self.trit_distance(reading, ties[0]),
                ambiguous: false,
            };
        }
        let mut best_t = u8::MAX;
        let mut choice = 0u8;
        let mut count = 0usize;
        for &b in &ties[..n_ties] {
            let td = self.trit_distance(reading, b);
            if td < best_t {
                best_t = td;
                choice = b;
                count = 1;
            } else if td == best_t {
                count += 1;
            }
        }
        Hit {
            byte: choice,
            dna_distance: best as u8,
            trit_distance: best_t,
            ambiguous: count > 1,
        }
    }

    pub fn decode_codeword(&self, window: &DnaSeq, ctx: TranscodeContext) -> Result<DecodedCodeword> {
        if window.len() != CODEWORD_LEN {
            return Err(Error::CodewordLength {
                expected: CODEWORD_LEN,
                found: window.len(),
            });
        }
        let hit = self.decode_window(window.as_slice(), ctx.prev_base);
        Ok(DecodedCodeword {
            byte_value: hit.byte,
            dna_distance: hit.dna_distance as usize,
            trit_distance: hit.trit_distance as usize,
            ambiguous: hit.ambiguous,
            corrected_window: self.image(ctx.prev_base, hit.byte),
        })
    }

    /// Decodes consecutive windows, chaining the context through corrected images.
    pub fn decode_payload(&self, payload: &[Nucleotide], ctx: Nucleotide) -> PayloadDecode {
        let mut out = PayloadDecode {
            bytes: Vec::with_capacity(payload.len() / CODEWORD_LEN),
            distances: Vec::with_capacity(payload.len() / CODEWORD_LEN),
            ambiguities: 0,
            total_distance: 0,
            last_base: ctx,
        };
        let mut prev = ctx;
        for w in payload.chunks_exact(CODEWORD_LEN) {
            let hit = self.decode_window(w, prev);
            out.bytes.push(hit.byte);
            out.distances.push(hit.dna_distance);
            out.total_distance += hit.dna_distance as usize;
            out.ambiguities += hit.ambiguous as usize;
            prev = self.image_last_base(prev, hit.byte);
        }
        out.last_base = prev;
        out
    }
}

/// One-shot form of [`MlDecoder::decode_codeword`].
pub fn decode_codeword_ml(window: &DnaSeq, ctx: TranscodeContext, codebook: &ByteCodebook) -> Result<DecodedCodeword> {
    MlDecoder::new(codebook).decode_codeword(window, ctx)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PayloadDecode {
    pub bytes: Vec<u8>,
    pub distances: Vec<u8>,
    pub ambiguities: usize,
    pub total_distance: usize,
    /// Context for whatever follows this payload.
    pub last_base: Nucleotide,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HeaderInfo {
    pub readable: bool,
    pub file_id: Option<u8>,
    pub chunk_index: Option<usize>,
    pub parity_ok: bool,
}

/// Literal header reading from a fresh A context; headers carry no correction.
pub fn decode_header(header: &DnaSeq, mu: usize) -> HeaderInfo {
    let unreadable = HeaderInfo {
        readable: false,
        file_id: None,
        chunk_index: None,
        parity_ok: false,
    };
    if header.len() != FILE_ID_TRITS + mu + 1 {
        return unreadable;
    }
    let Ok(trits) = dna_to_trits(header, TranscodeContext::default()) else {
        return unreadable;
    };
    let t = trits.as_slice();
    let body = &t[..FILE_ID_TRITS + mu];
    let digits = |s: &[Trit]| s.iter().fold(0u64, |acc, t| acc * 3 + t.value() as u64);
    HeaderInfo {
        readable: true,
        file_id: Some(digits(&body[..FILE_ID_TRITS]) as u8),
        chunk_index: Some(digits(&body[FILE_ID_TRITS..]) as usize),
        parity_ok: parity_trit(body) == t[FILE_ID_TRITS + mu],
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChunkDecodeReport {
    /// Position of the record in the input.
    pub record: usize,
    pub chunk_index: Option<usize>,
    pub file_id: Option<u8>,
    pub header_readable: bool,
    pub parity_ok: bool,
    /// Index assigned by elimination because the header could not be trusted.
    pub index_inferred: bool,
    /// Context base the payload was decoded from.
    pub context: char,
    pub context_searched: bool,
    pub codeword_distances: Vec<u8>,
    pub ambiguities: usize,
}

#[derive(Clone, Debug)]
pub struct ChunkDecode {
    pub report: ChunkDecodeReport,
    pub bytes: Vec<u8>,
    pub last_base: Nucleotide,
}

/// Decodes one chunk. With `ctx = None` all four context bases are tried and
/// the one giving the smallest total distance is kept.
pub fn decode_chunk(
    candidate: &ChunkCandidate,
    record: usize,
    mu: usize,
    ctx: Option<TranscodeContext>,
    decoder: &MlDecoder<'_>,
) -> ChunkDecode {
    let header = decode_header(&candidate.header, mu);
    let payload = candidate.payload.as_slice();
    let (context, decoded) = match ctx {
        Some(c) => (c.prev_base, decoder.decode_payload(payload, c.prev_base)),
        None => Nucleotide::ALL
            .into_iter()
            .map(|c| (c, decoder.decode_payload(payload, c)))
            .min_by_key(|(_, d)| d.total_distance)
            .unwrap(),
    };
    ChunkDecode {
        report: ChunkDecodeReport {
            record,
            chunk_index: header.chunk_index,
            file_id: header.file_id,
            header_readable: header.readable,
            parity_ok: header.parity_ok,
            index_inferred: false,
            context: context.to_char(),
            context_searched: ctx.is_none(),
            codeword_distances: decoded.distances,
            ambiguities: decoded.ambiguities,
        },
        bytes: decoded.bytes,
        last_base: decoded.last_base,
    }
}

#[derive(Clone, Debug, Default)]
pub struct DecodeOptions {
    /// Decode only this file id; by default the most common trusted id.
    pub file_id: Option<u8>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecodeResult {
    #[serde(skip)]
    pub content: Vec<u8>,
    pub file_id: u8,
    pub extension: String,
    /// From the metadata trailer, when one was found.
    pub size_bytes: Option<usize>,
    pub trailer_found: bool,
    /// Content fully recovered: no gaps, every header trusted, trailer consistent.
    pub complete: bool,
    pub mu: usize,
    pub per_chunk: Vec<ChunkDecodeReport>,
    /// Chunk indices with no record.
    pub unrecoverable_chunks: Vec<usize>,
    /// Records that could not be placed.
    pub orphan_records: Vec<usize>,
    /// Records repeating an already placed chunk verbatim.
    pub duplicate_records: Vec<usize>,
    /// Records with a trusted header naming another file id.
    pub foreign_records: Vec<usize>,
}

fn majority_id(headers: &[HeaderInfo], trusted: bool) -> Option<u8> {
    let mut counts: BTreeMap<u8, usize> = BTreeMap::new();
    for h in headers.iter().filter(|h| !trusted || h.parity_ok) {
        if let Some(id) = h.file_id {
            *counts.entry(id).or_default() += 1;
        }
    }
    counts
        .into_iter()
        .max_by_key(|&(id, c)| (c, std::cmp::Reverse(id)))
        .map(|(id, _)| id)
}

struct Trailer {
    content_end: usize,
    size: usize,
    extension: String,
}

/// Parses `... ; digits , extension ;` from the end of the stream.
fn parse_trailer(stream: &[u8]) -> Option<Trailer> {
    let (&last, body) = stream.split_last()?;
    if last != RECORD_SEPARATOR {
        return None;
    }
    let sep = body.iter().rposition(|&b| b == RECORD_SEPARATOR)?;
    let meta = &body[sep + 1..];
    let comma = meta.iter().position(|&b| b == FIELD_SEPARATOR)?;
    let digits = &meta[..comma];
    if digits.is_empty() || !digits.iter().all(u8::is_ascii_digit) {
        return None;
    }
    let size = std::str::from_utf8(digits).ok()?.parse().ok()?;
    Some(Trailer {
        content_end: sep,
        size,
        extension: String::from_utf8_lossy(&meta[comma + 1..]).into_owned(),
    })
}

/// Reassembles a file from parsed chunk candidates.
pub fn decode_file(parsed: &ParsedChunks, codebook: &ByteCodebook, options: &DecodeOptions) -> Result<DecodeResult> {
    let decoder = MlDecoder::new(codebook);
    let cands = &parsed.candidates;
    let mu = parsed.mu;
    let headers: Vec<HeaderInfo> = cands.iter().map(|c| decode_header(&c.header, mu)).collect();
    let file_id = options
        .file_id
        .or_else(|| majority_id(&headers, true))
        .or_else(|| majority_id(&headers, false))
        .unwrap_or(0);

    let mut slots: BTreeMap<usize, usize> = BTreeMap::new();
    let mut orphans = Vec::new();
    let mut duplicates = Vec::new();
    let mut foreign = Vec::new();
    let mut deferred = Vec::new();
    for (i, h) in headers.iter().enumerate() {
        match (h.parity_ok, h.file_id, h.chunk_index) {
            (true, Some(id), Some(idx)) if id == file_id => match slots.get(&idx) {
                None => {
                    slots.insert(idx, i);
                }
                Some(&j) if cands[j].payload == cands[i].payload => duplicates.push(i),
                Some(&j) => {
                    return Err(Error::ConflictingChunks {
                        index: idx,
                        first: j,
                        second: i,
                    })
                }
            },
            (true, Some(_), _) => foreign.push(i),
            _ => deferred.push(i),
        }
    }
    for i in deferred {
        match (headers[i].file_id, headers[i].chunk_index) {
            (Some(id), Some(idx)) if id == file_id && !slots.contains_key(&idx) => {
                slots.insert(idx, i);
            }
            _ => orphans.push(i),
        }
    }

    let mut inferred = Vec::new();
    let max_index = slots.keys().next_back().copied();
    let gaps: Vec<usize> = match max_index {
        Some(m) => (0..=m).filter(|k| !slots.contains_key(k)).collect(),
        None => (0..orphans.len()).collect(),
    };
    if !orphans.is_empty() && orphans.len() == gaps.len() {
        for (&k, &i) in gaps.iter().zip(&orphans) {
            slots.insert(k, i);
            inferred.push(i);
        }
        orphans.clear();
    }

    let last = slots.keys().next_back().copied();
    let indices: Vec<usize> = last.map_or(Vec::new(), |m| (0..=m).collect());
    let trusted = |k: usize| {
        slots
            .get(&k)
            .is_some_and(|&i| headers[i].parity_ok && !inferred.contains(&i))
    };

    // Guess each context from the received predecessor, decode in parallel,
    // then redo any chunk whose guess disagrees with the corrected chain.
    let guess = |k: usize| -> Option<TranscodeContext> {
        if k == 0 {
            return Some(TranscodeContext::default());
        }
        if !trusted(k - 1) {
            return None;
        }
        cands[slots[&(k - 1)]].payload.last().map(TranscodeContext::new)
    };
    let mut decoded: BTreeMap<usize, ChunkDecode> = indices
        .par_iter()
        .filter_map(|&k| {
            let &i = slots.get(&k)?;
            Some((k, decode_chunk(&cands[i], i, mu, guess(k), &decoder)))
        })
        .collect();
    for &k in indices.iter().skip(1) {
        if !slots.contains_key(&k) || !trusted(k - 1) {
            continue;
        }
        let actual = decoded[&(k - 1)].last_base;
        if guess(k).map(|c| c.prev_base) != Some(actual) {
            let i = slots[&k];
            let redo = decode_chunk(&cands[i], i, mu, Some(TranscodeContext::new(actual)), &decoder);
            decoded.insert(k, redo);
        }
    }

    let per_full_chunk = parsed.chunk_bases / CODEWORD_LEN;
    let mut stream = Vec::new();
    let mut per_chunk = Vec::with_capacity(decoded.len());
    let mut unrecoverable = Vec::new();
    for &k in &indices {
        match decoded.remove(&k) {
            Some(mut cd) => {
                cd.report.index_inferred = inferred.contains(&cd.report.record);
                if cd.report.index_inferred {
                    cd.report.chunk_index = Some(k);
                }
                stream.extend_from_slice(&cd.bytes);
                per_chunk.push(cd.report);
            }
            None => {
                unrecoverable.push(k);
                stream.extend(std::iter::repeat_n(0u8, per_full_chunk));
            }
        }
    }

    let trailer = parse_trailer(&stream);
    let (content, size_bytes, extension) = match &trailer {
        Some(t) => {
            let mut content = stream[..t.content_end].to_vec();
            content.truncate(t.size);
            (content, Some(t.size), t.extension.clone())
        }
        None => (stream, None, String::new()),
    };
    let complete = unrecoverable.is_empty()
        && orphans.is_empty()
        && size_bytes == Some(content.len())
        && per_chunk.iter().all(|r| r.parity_ok && !r.index_inferred);

    Ok(DecodeResult {
        content,
        file_id,
        extension,
        size_bytes,
        trailer_found: trailer.is_some(),
        complete,
        mu,
        per_chunk,
        unrecoverable_chunks: unrecoverable,
        orphan_records: orphans,
        duplicate_records: duplicates,
        foreign_records: foreign,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chunk::{encode_file, encode_file_with, FileDescriptor};
    use crate::fasta::{emit_fasta, parse_fasta};
    use crate::ternary::dna_hamming;
    use crate::transcoder::trits_to_dna;

    fn d(s: &str) -> DnaSeq {
        s.parse().unwrap()
    }

    const FROM_A: TranscodeContext = TranscodeContext::new(Nucleotide::A);

    /// Reference decoder: plain loops over DnaSeq values, no packing or fast path.
    fn brute_nearest(window: &DnaSeq, ctx: TranscodeContext, cb: &ByteCodebook) -> (Vec<u8>, usize) {
        let dists: Vec<usize> = (0..=255u8)
            .map(|b| dna_hamming(window, &trits_to_dna(cb.encode_byte(b), ctx)).unwrap())
            .collect();
        let best = *dists.iter().min().unwrap();
        let winners = (0..=255u8).filter(|&b| dists[b as usize] == best).collect();
        (winners, best)
    }

    #[test]
    fn clean_and_two_flip_examples() {
        let cb = ByteCodebook::standard();
        let clean = decode_codeword_ml(&d("GTCTCGTAGTC"), FROM_A, cb).unwrap();
        assert_eq!((clean.byte_value, clean.dna_distance, clean.ambiguous), (65, 0, false));
        assert_eq!(clean.corrected_window, d("GTCTCGTAGTC"));

        let noisy = decode_codeword_ml(&d("GAGTCGTAGTC"), FROM_A, cb).unwrap();
        assert_eq!(brute_nearest(&d("GAGTCGTAGTC"), FROM_A, cb), (vec![65], 2));
        assert_eq!((noisy.byte_value, noisy.dna_distance, noisy.ambiguous), (65, 2, false));
        assert_eq!(noisy.trit_distance, 2);
        assert_eq!(
            noisy.dna_distance,
            dna_hamming(&d("GAGTCGTAGTC"), &noisy.corrected_window).unwrap()
        );
    }

    #[test]
    fn wrong_window_length() {
        let cb = ByteCodebook::standard();
        assert!(decode_codeword_ml(&d("ACG"), FROM_A, cb).is_err());
    }

    #[test]
    fn agrees_with_brute_force_on_random_windows() {
        use rand::{Rng, SeedableRng};
        let cb = ByteCodebook::standard();
        let dec = MlDecoder::new(cb);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..2000 {
            let w: DnaSeq = (0..11)
                .map(|_| Nucleotide::from_index(rng.random_range(0..4)))
                .collect();
            let ctx = TranscodeContext::new(Nucleotide::from_index(rng.random_range(0..4)));
            let got = dec.decode_codeword(&w, ctx).unwrap();
            let (winners, best) = brute_nearest(&w, ctx, cb);
            assert_eq!(got.dna_distance, best);
            assert!(winners.contains(&got.byte_value));
            if winners.len() == 1 {
                assert!(!got.ambiguous);
            }
            assert_eq!(got.corrected_window, trits_to_dna(cb.encode_byte(got.byte_value), ctx));
        }
    }

    #[test]
    fn header_reading() {
        let h = decode_header(&d("CGAG"), 1);
        assert_eq!((h.file_id, h.chunk_index, h.parity_ok), (Some(0), Some(1), true));
        // CGCA = 0,0,2,2 is consistent; CGCT = 0,0,2,1 fails parity.
        assert!(decode_header(&d("CGCA"), 1).parity_ok);
        let bad = decode_header(&d("CGCT"), 1);
        assert!(bad.readable && !bad.parity_ok);
        assert!(!decode_header(&d("CCAG"), 1).readable);
        assert!(!decode_header(&d("CGAG"), 2).readable);
    }

    fn round_trip(fd: &FileDescriptor, chunk_bases: usize) -> DecodeResult {
        let cb = ByteCodebook::standard();
        let recs = encode_file_with(fd, cb, chunk_bases).unwrap();
        let parsed = parse_fasta(&emit_fasta(&recs), chunk_bases).unwrap();
        decode_file(&parsed, cb, &DecodeOptions::default()).unwrap()
    }

    #[test]
    fn clean_round_trips() {
        let da = FileDescriptor::new(b"DA".to_vec(), "txt", 0).unwrap();
        let r = round_trip(&da, 99);
        assert_eq!(r.content, b"DA");
        assert_eq!(r.extension, "txt");
        assert_eq!(r.size_bytes, Some(2));
        assert!(r.complete);
        assert!(r.per_chunk.iter().all(|c| c.parity_ok));

        let empty = FileDescriptor::new(vec![], "", 4).unwrap();
        let r = round_trip(&empty, 99);
        assert!(r.complete && r.content.is_empty());
        assert_eq!(r.file_id, 4);

        let big = FileDescriptor::new((0..5000u32).map(|i| (i % 256) as u8).collect(), "bin", 8).unwrap();
        for cb in [11, 99, 198] {
            let r = round_trip(&big, cb);
            assert!(r.complete);
            assert_eq!(r.content, big.content);
        }
    }

    #[test]
    fn content_with_separator_bytes() {
        let fd = FileDescriptor::new(b";;,,;12,x;".to_vec(), "a.b", 0).unwrap();
        let r = round_trip(&fd, 99);
        assert!(r.complete);
        assert_eq!(r.content, fd.content);
        assert_eq!(r.extension, "a.b");
    }

    #[test]
    fn one_substitution_per_codeword_is_corrected() {
        let cb = ByteCodebook::standard();
        let fd = FileDescriptor::new(b"DA".to_vec(), "txt", 0).unwrap();
        let mut recs = encode_file(&fd, cb).unwrap();
        for r in &mut recs {
            let bases = r.payload_dna.as_mut_slice();
            for (w, win) in bases.chunks_mut(11).enumerate() {
                let pos = (w * 5) % 11;
                win[pos] = Nucleotide::from_index(win[pos].index() + 1 + (w as u8 % 3));
            }
        }
        let parsed = parse_fasta(&emit_fasta(&recs), 99).unwrap();
        let r = decode_file(&parsed, cb, &DecodeOptions::default()).unwrap();
        assert_eq!(r.content, b"DA");
        assert!(r.complete);
        assert!(r.per_chunk.iter().flat_map(|c| &c.codeword_distances).all(|&d| d == 1));
    }

    #[test]
    fn missing_chunk_is_reported() {
        let cb = ByteCodebook::standard();
        let fd = FileDescriptor::new(vec![42; 60], "bin", 0).unwrap();
        let mut recs = encode_file(&fd, cb).unwrap();
        assert!(recs.len() >= 3);
        recs.remove(1);
        let parsed = parse_fasta(&emit_fasta(&recs), 99).unwrap();
        let r = decode_file(&parsed, cb, &DecodeOptions::default()).unwrap();
        assert_eq!(r.unrecoverable_chunks, vec![1]);
        assert!(!r.complete);
        // Chunk 2 lost its predecessor and was decoded via context search.
        assert!(r
            .per_chunk
            .iter()
            .any(|c| c.chunk_index == Some(2) && c.context_searched));
        assert_eq!(r.content.len(), 60);
        assert_eq!(&r.content[..9], &[42; 9]);
        assert_eq!(&r.content[18..], &[42; 42]);
    }

    #[test]
    fn shuffled_records_decode() {
        let cb = ByteCodebook::standard();
        let fd = FileDescriptor::new((0..400u32).map(|i| (i * 7) as u8).collect(), "", 0).unwrap();
        let mut recs = encode_file(&fd, cb).unwrap();
        recs.reverse();
        let text: String = recs.iter().map(|r| emit_fasta(std::slice::from_ref(r))).collect();
        let parsed = parse_fasta(&text, 99).unwrap();
        let r = decode_file(&parsed, cb, &DecodeOptions::default()).unwrap();
        assert!(r.complete);
        assert_eq!(r.content, fd.content);
    }

    #[test]
    fn conflicting_duplicates_are_an_error() {
        let cb = ByteCodebook::standard();
        let fd = FileDescriptor::new(vec![1; 30], "", 0).unwrap();
        let recs = encode_file(&fd, cb).unwrap();
        let mut dup = recs[0].clone();
        dup.payload_dna = recs[1].payload_dna.clone();
        let mut all = recs.clone();
        all.push(recs[0].clone());
        let parsed = parse_fasta(&emit_fasta(&all), 99).unwrap();
        let r = decode_file(&parsed, cb, &DecodeOptions::default()).unwrap();
        assert_eq!(r.duplicate_records.len(), 1);
        assert!(r.complete);

        all.pop();
        all.push(dup);
        let parsed = parse_fasta(&emit_fasta(&all), 99).unwrap();
        assert!(matches!(
            decode_file(&parsed, cb, &DecodeOptions::default()),
            Err(Error::ConflictingChunks { index: 0, .. })
        ));
    }

    #[test]
    fn broken_header_is_placed_by_elimination() {
        let cb = ByteCodebook::standard();
        let fd = FileDescriptor::new(vec![9; 40], "", 0).unwrap();
        let mut recs = encode_file(&fd, cb).unwrap();
        // Force a homopolymer into chunk 1's header.
        let h = recs[1].header_dna.as_mut_slice();
        h[1] = h[0];
        let parsed = parse_fasta(&emit_fasta(&recs), 99).unwrap();
        let r = decode_file(&parsed, cb, &DecodeOptions::default()).unwrap();
        let c1 = r.per_chunk.iter().find(|c| c.record == 1).unwrap();
        assert!(!c1.header_readable && c1.index_inferred);
        assert_eq!(r.content, fd.content);
        assert!(!r.complete);
    }

    #[test]
    fn picks_requested_file_id() {
        let cb = ByteCodebook::standard();
        let a = FileDescriptor::new(b"first".to_vec(), "a", 1).unwrap();
        let b = FileDescriptor::new(b"second".to_vec(), "b", 2).unwrap();
        let mut recs = encode_file(&a, cb).unwrap();
        recs.extend(encode_file(&b, cb).unwrap());
        let parsed = parse_fasta(&emit_fasta(&recs), 99).unwrap();
        let r = decode_file(&parsed, cb, &DecodeOptions { file_id: Some(2) }).unwrap();
        assert_eq!(r.content, b"second");
        assert_eq!(r.foreign_records.len(), 2);
    }

    #[test]
    fn trailer_parsing() {
        let t = parse_trailer(b"ab;c;12,ext;").unwrap();
        assert_eq!((t.content_end, t.size, t.extension.as_str()), (4, 12, "ext"));
        assert!(parse_trailer(b"abc").is_none());
        assert!(parse_trailer(b";x,;").is_none());
        assert!(parse_trailer(b"").is_none());
    }
}
