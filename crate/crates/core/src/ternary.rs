//! Trit and nucleotide alphabets, their strings, and Hamming metrics.
//!
//! Text forms: trits are written `'0' '1' '2'`, bases upper-case `A C G T`.
//! Parsing accepts lower-case bases and normalizes them.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Trit {
    Zero = 0,
    One = 1,
    Two = 2,
}

impl Trit {
    pub const ALL: [Trit; 3] = [Trit::Zero, Trit::One, Trit::Two];

    pub fn new(value: u8) -> Option<Self> {
        match value {
            0 => Some(Trit::Zero),
            1 => Some(Trit::One),
            2 => Some(Trit::Two),
            _ => None,
        }
    }

    #[inline]
    pub fn value(self) -> u8 {
        self as u8
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            '0' => Some(Trit::Zero),
            '1' => Some(Trit::One),
            '2' => Some(Trit::Two),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        (b'0' + self as u8) as char
    }
}

impl TryFrom<u8> for Trit {
    type Error = Error;

    fn try_from(value: u8) -> Result<Self> {
        Trit::new(value).ok_or(Error::InvalidTrit {
            ch: char::from(b'0'.wrapping_add(value)),
            pos: 0,
        })
    }
}

/// A sequence of trits of any length.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TritString(Vec<Trit>);

impl TritString {
    pub fn new(trits: Vec<Trit>) -> Self {
        TritString(trits)
    }

    pub fn zeros(len: usize) -> Self {
        TritString(vec![Trit::Zero; len])
    }

    /// Big-endian base-3 expansion of `value` in exactly `len` digits.
    /// Returns `None` when `value >= 3^len`.
    pub fn from_index(mut value: u64, len: usize) -> Option<Self> {
        let mut out = vec![Trit::Zero; len];
        for slot in out.iter_mut().rev() {
            *slot = Trit::new((value % 3) as u8).unwrap();
            value /= 3;
        }
        (value == 0).then_some(TritString(out))
    }

    /// Inverse of [`TritString::from_index`]. Saturates for strings longer than 40 trits.
    pub fn to_index(&self) -> u64 {
        self.0
            .iter()
            .fold(0u64, |acc, t| acc.saturating_mul(3).saturating_add(t.value() as u64))
    }

    pub fn as_slice(&self) -> &[Trit] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Trit> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Trit> + '_ {
        self.0.iter().copied()
    }

    pub fn push(&mut self, t: Trit) {
        self.0.push(t);
    }

    pub fn extend_from(&mut self, other: &TritString) {
        self.0.extend_from_slice(&other.0);
    }
}

impl From<Vec<Trit>> for TritString {
    fn from(v: Vec<Trit>) -> Self {
        TritString(v)
    }
}

impl FromIterator<Trit> for TritString {
    fn from_iter<I: IntoIterator<Item = Trit>>(iter: I) -> Self {
        TritString(iter.into_iter().collect())
    }
}

impl FromStr for TritString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .enumerate()
            .map(|(pos, ch)| Trit::from_char(ch).ok_or(Error::InvalidTrit { ch, pos }))
            .collect::<Result<Vec<_>>>()
            .map(TritString)
    }
}

impl fmt::Display for TritString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.0.iter().map(|t| t.to_char()).collect();
        f.write_str(&s)
    }
}

impl Serialize for TritString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Nucleotide {
    A = 0,
    C = 1,
    G = 2,
    T = 3,
}

impl Nucleotide {
    pub const ALL: [Nucleotide; 4] = [Nucleotide::A, Nucleotide::C, Nucleotide::G, Nucleotide::T];

    #[inline]
    pub fn index(self) -> u8 {
        self as u8
    }

    #[inline]
    pub fn from_index(i: u8) -> Self {
        Self::ALL[(i & 3) as usize]
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'A' => Some(Nucleotide::A),
            'C' => Some(Nucleotide::C),
            'G' => Some(Nucleotide::G),
            'T' => Some(Nucleotide::T),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Nucleotide::A => 'A',
            Nucleotide::C => 'C',
            Nucleotide::G => 'G',
            Nucleotide::T => 'T',
        }
    }
}

impl fmt::Display for Nucleotide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// A DNA string. No homopolymer invariant at this layer.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DnaSeq(Vec<Nucleotide>);

impl DnaSeq {
    pub fn new(bases: Vec<Nucleotide>) -> Self {
        DnaSeq(bases)
    }

    pub fn with_capacity(n: usize) -> Self {
        DnaSeq(Vec::with_capacity(n))
    }

    pub fn as_slice(&self) -> &[Nucleotide] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [Nucleotide] {
        &mut self.0
    }

    pub fn into_vec(self) -> Vec<Nucleotide> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<Nucleotide> {
        self.0.last().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = Nucleotide> + '_ {
        self.0.iter().copied()
    }

    pub fn push(&mut self, n: Nucleotide) {
        self.0.push(n);
    }

    pub fn extend_from_slice(&mut self, bases: &[Nucleotide]) {
        self.0.extend_from_slice(bases);
    }

    /// 1-based position of the first base equal to its predecessor.
    pub fn first_homopolymer(&self) -> Option<usize> {
        self.0.windows(2).position(|w| w[0] == w[1]).map(|i| i + 2)
    }
}

impl From<Vec<Nucleotide>> for DnaSeq {
    fn from(v: Vec<Nucleotide>) -> Self {
        DnaSeq(v)
    }
}

impl From<&[Nucleotide]> for DnaSeq {
    fn from(v: &[Nucleotide]) -> Self {
        DnaSeq(v.to_vec())
    }
}

impl FromIterator<Nucleotide> for DnaSeq {
    fn from_iter<I: IntoIterator<Item = Nucleotide>>(iter: I) -> Self {
        DnaSeq(iter.into_iter().collect())
    }
}

impl FromStr for DnaSeq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .enumerate()
            .map(|(pos, ch)| Nucleotide::from_char(ch).ok_or(Error::InvalidNucleotide { ch, pos }))
            .collect::<Result<Vec<_>>>()
            .map(DnaSeq)
    }
}

impl fmt::Display for DnaSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.0.iter().map(|n| n.to_char()).collect();
        f.write_str(&s)
    }
}

impl Serialize for DnaSeq {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

fn mismatches<T: PartialEq>(a: &[T], b: &[T]) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.iter().zip(b).filter(|(x, y)| x != y).count())
}

pub fn trit_hamming(a: &TritString, b: &TritString) -> Result<usize> {
    mismatches(a.as_slice(), b.as_slice())
}

pub fn dna_hamming(a: &DnaSeq, b: &DnaSeq) -> Result<usize> {
    mismatches(a.as_slice(), b.as_slice())
}

/// Number of nonzero trits.
pub fn weight(c: &TritString) -> usize {
    c.iter().filter(|&t| t != Trit::Zero).count()
}

/// Bit-plane packing of a trit string of up to 64 symbols: trit 1 sets a bit
/// in `lo`, trit 2 sets it in `hi`. Position 0 maps to the most significant
/// used bit so that integer order on `index` matches lexicographic order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct PackedTrits {
    pub lo: u64,
    pub hi: u64,
}

impl PackedTrits {
    pub fn pack(t: &[Trit]) -> Self {
        assert!(t.len() <= 64, "packed trit strings hold at most 64 symbols");
        let mut p = PackedTrits::default();
        for (i, &tr) in t.iter().enumerate() {
            let bit = 1u64 << (t.len() - 1 - i);
            match tr {
                Trit::Zero => {}
                Trit::One => p.lo |= bit,
                Trit::Two => p.hi |= bit,
            }
        }
        p
    }

    #[inline]
    pub fn distance(self, other: PackedTrits) -> u32 {
        ((self.lo ^ other.lo) | (self.hi ^ other.hi)).count_ones()
    }

    #[inline]
    pub fn weight(self) -> u32 {
        (self.lo | self.hi).count_ones()
    }
}
