//! Occurrence bitstrings, trit-strings, the weighted Hamming norm and the
//! all-equal indicator.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::{Error, Rational, Result};

/// Fixed-length bitstring; position `l` is bit `l` of `bits`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    len: u8,
    bits: u64,
}

impl BitString {
    pub const MAX_LEN: usize = 64;

    pub fn new(len: usize, bits: u64) -> Result<Self> {
        if len > Self::MAX_LEN || (len < 64 && bits >> len != 0) {
            return Err(Error::LengthMismatch {
                expected: len,
                found: 64 - bits.leading_zeros() as usize,
            });
        }
        Ok(BitString { len: len as u8, bits })
    }

    pub fn zeros(len: usize) -> Self {
        BitString::new(len, 0).expect("length within bounds")
    }

    pub fn from_bools(bools: &[bool]) -> Result<Self> {
        let bits = bools
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | ((b as u64) << i));
        BitString::new(bools.len(), bits)
    }

    pub fn len(self) -> usize {
        self.len as usize
    }

    pub fn is_empty(self) -> bool {
        self.len == 0
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn get(self, position: usize) -> bool {
        self.bits >> position & 1 == 1
    }

    pub fn to_bools(self) -> Vec<bool> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }

    /// Entrywise difference `self - other` as a vector over `{-1, 0, 1}`.
    pub fn difference(self, other: BitString) -> Vec<i64> {
        (0..self.len())
            .map(|i| self.get(i) as i64 - other.get(i) as i64)
            .collect()
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bools = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse(format!("invalid bitstring '{s}'"))),
            })
            .collect::<Result<Vec<_>>>()?;
        BitString::from_bools(&bools)
    }
}

/// A string over `{-1, 0, 1}`; ordered lexicographically with `-1 < 0 < 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TritString(Vec<i8>);

impl TritString {
    pub fn new(trits: Vec<i8>) -> Result<Self> {
        if let Some(t) = trits.iter().find(|t| !(-1..=1).contains(*t)) {
            return Err(Error::Parse(format!("{t} is not a trit")));
        }
        Ok(TritString(trits))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, position: usize) -> i8 {
        self.0[position]
    }

    pub fn trits(&self) -> &[i8] {
        &self.0
    }

    pub fn has_zero(&self) -> bool {
        self.0.contains(&0)
    }
}

impl fmt::Display for TritString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for TritString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return Ok(TritString(Vec::new()));
        }
        let trits = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i8>()
                    .map_err(|_| Error::Parse(format!("invalid trit-string '{s}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        TritString::new(trits)
    }
}

/// `‖x‖_γ = Σ_j γ_j |x_j|`.
pub fn weighted_hamming_norm(x: &[i64], gamma: &[Rational]) -> Result<Rational> {
    if x.len() != gamma.len() {
        return Err(Error::LengthMismatch {
            expected: gamma.len(),
            found: x.len(),
        });
    }
    Ok(x.iter()
        .zip(gamma)
        .filter(|(xj, _)| **xj != 0)
        .fold(Rational::zero(), |acc, (xj, g)| {
            acc + g * Rational::from_integer(xj.abs().into())
        }))
}

/// `i^k`: 0 when every bit is equal, 1 otherwise.
pub fn indicator_ik(bits: &[bool]) -> u8 {
    match bits.split_first() {
        Some((first, rest)) => rest.iter().any(|b| b != first) as u8,
        None => 0,
    }
}
