//! File -> payload trits -> DNA chunks with headers.
//!
//! Payload byte stream: `content ; size-digits , extension ;`, each byte
//! replaced by its codeword. The whole stream is transcoded as one run starting
//! from base A, then cut into fixed-size pieces. Every piece gets a header of
//! `file id (2 trits) | chunk index (mu trits) | parity`, transcoded on its own
//! from base A.

use rayon::prelude::*;
use serde::Serialize;

use crate::codebook::{ByteCodebook, CODEWORD_LEN};
use crate::error::{Error, Result};
use crate::ternary::{DnaSeq, Nucleotide, Trit, TritString};
use crate::transcoder::{encode_into, trits_to_dna, TranscodeContext};

pub const DEFAULT_CHUNK_BASES: usize = 99;
pub const FILE_ID_TRITS: usize = 2;
pub const MAX_FILE_ID: u8 = 8;
/// File id trits plus the parity trit.
pub const HEADER_FIXED_TRITS: usize = FILE_ID_TRITS + 1;

pub const FIELD_SEPARATOR: u8 = b',';
pub const RECORD_SEPARATOR: u8 = b';';

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FileDescriptor {
    pub content: Vec<u8>,
    pub extension: String,
    pub file_id: u8,
}

impl FileDescriptor {
    pub fn new(content: Vec<u8>, extension: impl Into<String>, file_id: u8) -> Result<Self> {
        let extension = extension.into();
        if file_id > MAX_FILE_ID {
            return Err(Error::FileIdRange(file_id as u32));
        }
        if let Some(c) = extension
            .chars()
            .find(|&c| c == FIELD_SEPARATOR as char || c == RECORD_SEPARATOR as char || c.is_control())
        {
            return Err(Error::ExtensionChar(c));
        }
        Ok(FileDescriptor {
            content,
            extension,
            file_id,
        })
    }

    pub fn size_bytes(&self) -> usize {
        self.content.len()
    }
}

/// Content followed by the metadata trailer.
pub fn payload_bytes(fd: &FileDescriptor) -> Vec<u8> {
    let size = fd.size_bytes().to_string();
    let mut out = Vec::with_capacity(fd.content.len() + size.len() + fd.extension.len() + 3);
    out.extend_from_slice(&fd.content);
    out.push(RECORD_SEPARATOR);
    out.extend_from_slice(size.as_bytes());
    out.push(FIELD_SEPARATOR);
    out.extend_from_slice(fd.extension.as_bytes());
    out.push(RECORD_SEPARATOR);
    out
}

fn trailer_len(size_bytes: usize, ext_len: usize) -> usize {
    size_bytes.to_string().len() + ext_len + 3
}

pub fn bytes_to_trits(bytes: &[u8], codebook: &ByteCodebook) -> TritString {
    let mut out = Vec::with_capacity(bytes.len() * CODEWORD_LEN);
    for &b in bytes {
        out.extend_from_slice(codebook.encode_byte(b).as_slice());
    }
    TritString::new(out)
}

pub fn build_payload_trits(fd: &FileDescriptor, codebook: &ByteCodebook) -> TritString {
    bytes_to_trits(&payload_bytes(fd), codebook)
}

fn check_chunk_bases(chunk_bases: usize) -> Result<()> {
    if chunk_bases == 0 || !chunk_bases.is_multiple_of(CODEWORD_LEN) {
        return Err(Error::ChunkSize(chunk_bases));
    }
    Ok(())
}

/// Cuts the payload into `chunk_bases`-long pieces; the last may be shorter.
pub fn segment_payload(payload: &DnaSeq, chunk_bases: usize) -> Result<Vec<&[Nucleotide]>> {
    check_chunk_bases(chunk_bases)?;
    if !payload.len().is_multiple_of(CODEWORD_LEN) {
        return Err(Error::PayloadAlignment(payload.len()));
    }
    Ok(payload.as_slice().chunks(chunk_bases).collect())
}

/// Mod-3 sum of the trits at odd 1-based positions.
pub fn parity_trit(id_and_index: &[Trit]) -> Trit {
    let sum: u32 = id_and_index.iter().step_by(2).map(|t| t.value() as u32).sum();
    Trit::new((sum % 3) as u8).unwrap()
}

/// Chunk-index width: `ceil(log3(segments))`, at least 1.
pub fn index_width(segments: usize) -> usize {
    let mut mu = 1;
    let mut cap = 3usize;
    while cap < segments {
        mu += 1;
        cap = cap.saturating_mul(3);
    }
    mu
}

pub fn header_trits(file_id: u8, chunk_index: usize, mu: usize) -> Result<TritString> {
    if file_id > MAX_FILE_ID {
        return Err(Error::FileIdRange(file_id as u32));
    }
    let index =
        TritString::from_index(chunk_index as u64, mu).ok_or(Error::ChunkIndexRange { index: chunk_index, mu })?;
    let mut trits = TritString::from_index(file_id as u64, FILE_ID_TRITS).unwrap();
    trits.extend_from(&index);
    let p = parity_trit(trits.as_slice());
    trits.push(p);
    Ok(trits)
}

pub fn make_header_dna(file_id: u8, chunk_index: usize, mu: usize) -> Result<DnaSeq> {
    Ok(trits_to_dna(
        &header_trits(file_id, chunk_index, mu)?,
        TranscodeContext::default(),
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChunkRecord {
    pub payload_dna: DnaSeq,
    pub header_dna: DnaSeq,
    pub chunk_index: usize,
    pub file_id: u8,
}

impl ChunkRecord {
    pub fn len(&self) -> usize {
        self.payload_dna.len() + self.header_dna.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Payload followed by header, as synthesized.
    pub fn sequence(&self) -> DnaSeq {
        let mut s = DnaSeq::with_capacity(self.len());
        s.extend_from_slice(self.payload_dna.as_slice());
        s.extend_from_slice(self.header_dna.as_slice());
        s
    }
}

/// Transcodes `payload` as one continuous run and splits it into chunks.
pub fn encode_payload(payload: &TritString, file_id: u8, chunk_bases: usize) -> Result<Vec<ChunkRecord>> {
    check_chunk_bases(chunk_bases)?;
    if file_id > MAX_FILE_ID {
        return Err(Error::FileIdRange(file_id as u32));
    }
    let mut dna = Vec::with_capacity(payload.len());
    encode_into(payload.as_slice(), TranscodeContext::default().prev_base, &mut dna);
    let dna = DnaSeq::new(dna);
    let pieces = segment_payload(&dna, chunk_bases)?;
    let mu = index_width(pieces.len());
    pieces
        .into_par_iter()
        .enumerate()
        .map(|(i, piece)| {
            Ok(ChunkRecord {
                payload_dna: DnaSeq::from(piece),
                header_dna: make_header_dna(file_id, i, mu)?,
                chunk_index: i,
                file_id,
            })
        })
        .collect()
}

pub fn encode_file(fd: &FileDescriptor, codebook: &ByteCodebook) -> Result<Vec<ChunkRecord>> {
    encode_file_with(fd, codebook, DEFAULT_CHUNK_BASES)
}

pub fn encode_file_with(fd: &FileDescriptor, codebook: &ByteCodebook, chunk_bases: usize) -> Result<Vec<ChunkRecord>> {
    encode_payload(&build_payload_trits(fd, codebook), fd.file_id, chunk_bases)
}

/// Sizes of an encoding, computed without running it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EncodedLayout {
    pub payload_bytes: usize,
    pub payload_bases: usize,
    pub chunks: usize,
    pub mu: usize,
    pub total_bases: usize,
}

pub fn layout_for(size_bytes: usize, extension_len: usize, chunk_bases: usize) -> Result<EncodedLayout> {
    check_chunk_bases(chunk_bases)?;
    let payload_bytes = size_bytes + trailer_len(size_bytes, extension_len);
    let payload_bases = payload_bytes * CODEWORD_LEN;
    let chunks = payload_bases.div_ceil(chunk_bases);
    let mu = index_width(chunks);
    Ok(EncodedLayout {
        payload_bytes,
        payload_bases,
        chunks,
        mu,
        total_bases: payload_bases + chunks * (HEADER_FIXED_TRITS + mu),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> TritString {
        s.parse().unwrap()
    }

    fn d(s: &str) -> DnaSeq {
        s.parse().unwrap()
    }

    fn trits(v: &[u8]) -> Vec<Trit> {
        v.iter().map(|&x| Trit::new(x).unwrap()).collect()
    }

    fn cw(b: u8) -> String {
        ByteCodebook::standard().encode_byte(b).to_string()
    }

    #[test]
    fn payload_layout() {
        let cb = ByteCodebook::standard();
        let fd = FileDescriptor::new(b"DA".to_vec(), "txt", 0).unwrap();
        let expected = format!(
            "02221221120{}{}{}{}{}{}{}{}",
            "10111000101",
            cw(b';'),
            cw(b'2'),
            cw(b','),
            cw(b't'),
            cw(b'x'),
            cw(b't'),
            cw(b';')
        );
        assert_eq!(build_payload_trits(&fd, cb).to_string(), expected);

        let empty = FileDescriptor::new(vec![], "", 0).unwrap();
        let expected = format!("{}{}{}{}", cw(b';'), cw(b'0'), cw(b','), cw(b';'));
        assert_eq!(build_payload_trits(&empty, cb).to_string(), expected);

        let zero = FileDescriptor::new(vec![0], "", 0).unwrap();
        let p = build_payload_trits(&zero, cb);
        assert!(p.to_string().starts_with("00000000000"));
        assert_eq!(p.len(), 5 * 11);
    }

    #[test]
    fn descriptor_validation() {
        assert!(matches!(
            FileDescriptor::new(vec![], "bin", 9),
            Err(Error::FileIdRange(9))
        ));
        assert!(matches!(
            FileDescriptor::new(vec![], "a;b", 0),
            Err(Error::ExtensionChar(';'))
        ));
        assert!(matches!(
            FileDescriptor::new(vec![], "a,b", 0),
            Err(Error::ExtensionChar(','))
        ));
    }

    #[test]
    fn segmentation() {
        let p99 = DnaSeq::new(vec![Nucleotide::A; 99]);
        assert_eq!(segment_payload(&p99, 99).unwrap().len(), 1);
        let p110 = DnaSeq::new(vec![Nucleotide::A; 110]);
        let s = segment_payload(&p110, 99).unwrap();
        assert_eq!(s.iter().map(|x| x.len()).collect::<Vec<_>>(), vec![99, 11]);
        let p22 = DnaSeq::new(vec![Nucleotide::A; 22]);
        assert_eq!(segment_payload(&p22, 99).unwrap().len(), 1);
        assert!(matches!(
            segment_payload(&DnaSeq::new(vec![Nucleotide::A; 12]), 99),
            Err(Error::PayloadAlignment(12))
        ));
        assert!(matches!(segment_payload(&p99, 50), Err(Error::ChunkSize(50))));
    }

    #[test]
    fn parity_examples() {
        assert_eq!(parity_trit(&trits(&[0, 0, 0])), Trit::Zero);
        assert_eq!(parity_trit(&trits(&[0, 0, 1])), Trit::One);
        assert_eq!(parity_trit(&trits(&[1, 2, 2, 0])), Trit::Zero);
    }

    #[test]
    fn header_examples() {
        assert_eq!(make_header_dna(0, 0, 1).unwrap(), d("CGTA"));
        assert_eq!(make_header_dna(0, 1, 1).unwrap(), d("CGAG"));
        assert_eq!(header_trits(0, 2, 1).unwrap(), t("0022"));
        assert_eq!(make_header_dna(0, 2, 1).unwrap(), d("CGCA"));
        assert!(matches!(make_header_dna(9, 0, 1), Err(Error::FileIdRange(9))));
        assert!(matches!(
            make_header_dna(0, 3, 1),
            Err(Error::ChunkIndexRange { index: 3, mu: 1 })
        ));
    }

    #[test]
    fn index_widths() {
        let widths: Vec<usize> = [1, 2, 3, 4, 9, 10, 27, 28].iter().map(|&n| index_width(n)).collect();
        assert_eq!(widths, vec![1, 1, 1, 2, 2, 3, 3, 4]);
    }

    #[test]
    fn worked_example_with_11_base_chunks() {
        let cb = ByteCodebook::standard();
        let payload = bytes_to_trits(b"DA", cb);
        let recs = encode_payload(&payload, 0, 11).unwrap();
        assert_eq!(recs.len(), 2);
        // The rotation table applied to 02221221120 from A, then 10111000101 continuing from G.
        assert_eq!(recs[0].payload_dna, d("CATGATGAGCG"));
        assert_eq!(recs[1].payload_dna, d("ACTCTACGACT"));
        assert_eq!(recs[0].header_dna, d("CGTA"));
        assert_eq!(recs[1].header_dna, d("CGAG"));
    }

    #[test]
    fn encode_small_files() {
        let cb = ByteCodebook::standard();
        let empty = FileDescriptor::new(vec![], "", 0).unwrap();
        let recs = encode_file(&empty, cb).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].payload_dna.len(), 44);
        assert_eq!(recs[0].header_dna.len(), 4);

        let da = FileDescriptor::new(b"DA".to_vec(), "", 0).unwrap();
        let recs = encode_file(&da, cb).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].payload_dna.len(), 66);
    }

    #[test]
    fn thousand_byte_file_layout_matches_encoder() {
        let cb = ByteCodebook::standard();
        let fd = FileDescriptor::new(vec![7u8; 1000], "bin", 3).unwrap();
        let recs = encode_file(&fd, cb).unwrap();
        // 1000 content bytes + ";1000,bin;" = 1010 bytes = 11110 bases.
        assert_eq!(recs.len(), 11110usize.div_ceil(99));
        assert_eq!(recs.len(), 113);
        let mu = index_width(113);
        assert_eq!(mu, 5);
        let layout = layout_for(1000, 3, 99).unwrap();
        assert_eq!(layout.chunks, recs.len());
        assert_eq!(layout.mu, mu);
        assert_eq!(layout.total_bases, recs.iter().map(ChunkRecord::len).sum::<usize>());
        assert!(recs.iter().all(|r| r.header_dna.len() == 3 + mu && r.file_id == 3));
        assert!(recs[..112].iter().all(|r| r.len() == 99 + 3 + mu));
        assert_eq!(recs[112].payload_dna.len(), 11110 - 112 * 99);
    }

    #[test]
    fn payload_stream_has_no_homopolymer_across_chunks() {
        let cb = ByteCodebook::standard();
        let content: Vec<u8> = (0..2000u32).map(|i| (i * 37 % 251) as u8).collect();
        let fd = FileDescriptor::new(content, "dat", 1).unwrap();
        let recs = encode_file(&fd, cb).unwrap();
        let mut stream = DnaSeq::default();
        for r in &recs {
            stream.extend_from_slice(r.payload_dna.as_slice());
        }
        assert_eq!(stream.first_homopolymer(), None);
        assert_ne!(stream.as_slice()[0], Nucleotide::A);
    }
}
