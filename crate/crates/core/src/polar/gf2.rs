//! Dense bit matrices over GF(2), just enough for systematic encoding.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64);
        BitMatrix {
            rows,
            cols,
            words_per_row,
            data: vec![0; rows * words_per_row],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.set(i, i, true);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        let w = self.data[r * self.words_per_row + c / 64];
        (w >> (c % 64)) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        let w = &mut self.data[r * self.words_per_row + c / 64];
        if value {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.words_per_row {
            self.data
                .swap(a * self.words_per_row + k, b * self.words_per_row + k);
        }
    }

    /// `row[dst] ^= row[src]`
    fn xor_row(&mut self, dst: usize, src: usize) {
        let wpr = self.words_per_row;
        for k in 0..wpr {
            let s = self.data[src * wpr + k];
            self.data[dst * wpr + k] ^= s;
        }
    }

    /// Inverse by Gauss-Jordan elimination on `[self | I]`.
    pub fn inverse(&self) -> Result<BitMatrix> {
        if self.rows != self.cols {
            return Err(Error::invalid("only square matrices are invertible"));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = BitMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| a.get(r, col))
                .ok_or_else(|| Error::invalid("matrix is singular over GF(2)"))?;
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            for r in 0..n {
                if r != col && a.get(r, col) {
                    a.xor_row(r, col);
                    inv.xor_row(r, col);
                }
            }
        }
        Ok(inv)
    }

    /// Row vector times matrix: XOR of the rows selected by `v`.
    pub fn left_mul(&self, v: &[u8]) -> Vec<u8> {
        assert_eq!(v.len(), self.rows, "dimension mismatch");
        let mut acc = vec![0u64; self.words_per_row];
        for (r, &bit) in v.iter().enumerate() {
            if bit == 1 {
                for (a, w) in acc.iter_mut().zip(self.row_words(r)) {
                    *a ^= w;
                }
            }
        }
        (0..self.cols)
            .map(|c| ((acc[c / 64] >> (c % 64)) & 1) as u8)
            .collect()
    }

    pub fn mul(&self, rhs: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = BitMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) {
                    let wpr = out.words_per_row;
                    for w in 0..wpr {
                        out.data[r * wpr + w] ^= rhs.data[k * wpr + w];
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_identity_is_identity() {
        let id = BitMatrix::identity(70);
        assert_eq!(id.inverse().unwrap(), id);
    }

    #[test]
    fn inverse_round_trip() {
        // upper-triangular unit-diagonal with a dense pattern above the diagonal
        let n = 67;
        let mut m = BitMatrix::identity(n);
        for r in 0..n {
            for c in r + 1..n {
                m.set(r, c, (r * 7 + c * 3) % 5 == 0);
            }
        }
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), BitMatrix::identity(n));
        assert_eq!(inv.mul(&m), BitMatrix::identity(n));
    }

    #[test]
    fn singular_matrix_rejected() {
        let mut m = BitMatrix::zeros(2, 2);
        m.set(0, 0, true);
        m.set(0, 1, true);
        m.set(1, 0, true);
        m.set(1, 1, true);
        assert!(m.inverse().is_err());
    }
}
