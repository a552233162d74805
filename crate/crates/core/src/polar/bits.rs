use std::fmt;
use std::ops::BitXor;

use crate::error::{Error, Result};

/// Fixed-length word over GF(2). Each symbol is stored as a `u8` holding 0 or 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    bits: Vec<u8>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector { bits: vec![0; len] }
    }

    pub fn ones(len: usize) -> Self {
        BitVector { bits: vec![1; len] }
    }

    /// Builds a vector from 0/1 symbols, rejecting anything else.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if let Some(bad) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::invalid(format!("binary symbol expected, got {bad}")));
        }
        Ok(BitVector {
            bits: bits.to_vec(),
        })
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        BitVector {
            bits: bits.iter().map(|&b| b as u8).collect(),
        }
    }

    pub(crate) fn from_vec_unchecked(bits: Vec<u8>) -> Self {
        debug_assert!(bits.iter().all(|&b| b <= 1));
        BitVector { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    pub fn get(&self, pos: usize) -> u8 {
        self.bits[pos]
    }

    pub fn set(&mut self, pos: usize, bit: u8) {
        assert!(bit <= 1, "binary symbol expected");
        self.bits[pos] = bit;
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.bits
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [u8] {
        &mut self.bits
    }

    pub fn into_vec(self) -> Vec<u8> {
        self.bits
    }

    /// Symbols at the given 0-based positions, in order.
    pub fn select(&self, positions: &[usize]) -> BitVector {
        BitVector {
            bits: positions.iter().map(|&p| self.bits[p]).collect(),
        }
    }

    pub fn hamming_distance(&self, other: &BitVector) -> usize {
        assert_eq!(self.len(), other.len(), "length mismatch");
        self.bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count()
    }

    /// Cyclic shift by one position to the right: `(c_N, c_1, ..., c_{N-1})`.
    pub fn cyclic_shift(&self) -> BitVector {
        let mut bits = Vec::with_capacity(self.len());
        if let Some(&last) = self.bits.last() {
            bits.push(last);
            bits.extend_from_slice(&self.bits[..self.len() - 1]);
        }
        BitVector { bits }
    }
}

impl BitXor for &BitVector {
    type Output = BitVector;

    fn bitxor(self, rhs: &BitVector) -> BitVector {
        assert_eq!(self.len(), rhs.len(), "length mismatch");
        BitVector {
            bits: self
                .bits
                .iter()
                .zip(&rhs.bits)
                .map(|(a, b)| a ^ b)
                .collect(),
        }
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector(")?;
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}
