use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid trit character {ch:?} at position {pos}")]
    InvalidTrit { ch: char, pos: usize },

    #[error("invalid nucleotide character {ch:?} at position {pos}")]
    InvalidNucleotide { ch: char, pos: usize },

    /// Two equal adjacent bases (or a first base equal to the context base).
    /// `position` is 1-based.
    #[error("homopolymer corruption at position {position}")]
    Homopolymer { position: usize },

    #[error("codebook line {line}: {msg}")]
    CodebookSyntax { line: usize, msg: String },

    #[error("codebook is incomplete: byte values {missing:?} have no codeword")]
    CodebookIncomplete { missing: Vec<u8> },

    #[error("codeword {codeword} assigned to both byte {first} and byte {second}")]
    DuplicateCodeword { codeword: String, first: u8, second: u8 },

    #[error("codeword length must be {expected}, got {found}")]
    CodewordLength { expected: usize, found: usize },

    #[error("code verification needs at least one codeword")]
    EmptyCode,

    #[error("invalid code family: {0}")]
    InvalidFamily(String),

    #[error("payload length {0} is not a multiple of the codeword length")]
    PayloadAlignment(usize),

    #[error("file id {0} out of range (0..=8)")]
    FileIdRange(u32),

    #[error("chunk index {index} does not fit in {mu} trits")]
    ChunkIndexRange { index: usize, mu: usize },

    #[error("invalid chunk size {0}: must be a positive multiple of 11")]
    ChunkSize(usize),

    #[error("extension character {0:?} is not allowed")]
    ExtensionChar(char),

    #[error("FASTA line {line}: {msg}")]
    Fasta { line: usize, msg: String },

    #[error("inconsistent record lengths: {0}")]
    RecordLengths(String),

    #[error("chunk index {index} appears in records {first} and {second} with different payloads")]
    ConflictingChunks { index: usize, first: usize, second: usize },

    #[error("invalid channel: {0}")]
    Channel(String),

    #[error("invalid capacity parameters: {0}")]
    CapacityParams(String),

    #[error("fixed-point iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
}
