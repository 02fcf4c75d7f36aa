//! Homopolymer-free DNA storage codec.
//!
//! Bytes map to 11-trit codewords from a 256-word subcode of the ternary
//! Golay code, trits map to bases through a rotation table that never repeats
//! the previous base, and the stream is cut into indexed chunks. Decoding is
//! nearest-neighbour over the DNA images of all codewords.

pub mod analysis;
pub mod chunk;
pub mod codebook;
pub mod decoder;
pub mod error;
pub mod fasta;
pub mod ternary;
pub mod transcoder;

pub use chunk::{encode_file, encode_file_with, encode_payload, ChunkRecord, FileDescriptor};
pub use codebook::{load_codebook, ByteCodebook, LoadReport, CODEWORD_LEN};
pub use decoder::{decode_codeword_ml, decode_file, DecodeOptions, DecodeResult, DecodedCodeword, MlDecoder};
pub use error::{Error, Result};
pub use fasta::{emit_fasta, parse_fasta};
pub use ternary::{dna_hamming, trit_hamming, weight, DnaSeq, Nucleotide, Trit, TritString};
pub use transcoder::{dna_to_trits, trits_to_dna, TranscodeContext};
