//! Krawtchouk matrices and a multiplication-free transform.
//!
//! `K^{(M)}_{xy} = Σ_z (−1)^z C(y,z) C(M−y,x−z)` is the coefficient of `z^x` in
//! `(1−z)^y (1+z)^{M−y}`. The fast transform rewrites
//! `Σ_y a_y (1−z)^y (1+z)^{M−y}` through two Taylor shifts so that only
//! additions and shifts by powers of two are needed.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::numeric::binomial;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KrawtchoukMatrix {
    order: usize,
    entries: Vec<BigInt>,
}

impl KrawtchoukMatrix {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, x: usize, y: usize) -> &BigInt {
        &self.entries[x * (self.order + 1) + y]
    }

    pub fn mul(&self, rhs: &KrawtchoukMatrix) -> Vec<BigInt> {
        assert_eq!(self.order, rhs.order);
        let m = self.order + 1;
        let mut out = vec![BigInt::zero(); m * m];
        for x in 0..m {
            for k in 0..m {
                let a = self.get(x, k);
                if a.is_zero() {
                    continue;
                }
                for y in 0..m {
                    out[x * m + y] += a * rhs.get(k, y);
                }
            }
        }
        out
    }

    /// `b = K·a` by direct multiplication.
    pub fn apply(&self, a: &[BigInt]) -> Vec<BigInt> {
        let m = self.order + 1;
        assert_eq!(a.len(), m);
        (0..m)
            .map(|x| (0..m).map(|y| self.get(x, y) * &a[y]).sum())
            .collect()
    }
}

/// The order-`M` Krawtchouk matrix from its closed form.
pub fn krawtchouk(order: usize) -> KrawtchoukMatrix {
    let m = order + 1;
    let mut entries = Vec::with_capacity(m * m);
    for x in 0..m {
        for y in 0..m {
            let mut acc = BigInt::zero();
            for z in 0..=x.min(y) {
                let term = BigInt::from(binomial(y, z) * binomial(order - y, x - z));
                if z % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            entries.push(acc);
        }
    }
    KrawtchoukMatrix { order, entries }
}

fn add_row_into(data: &mut [BigInt], dst: usize, src: usize, batch: usize) {
    debug_assert!(dst < src);
    let (lo, hi) = data.split_at_mut(src * batch);
    for (a, b) in lo[dst * batch..(dst + 1) * batch]
        .iter_mut()
        .zip(&hi[..batch])
    {
        *a += b;
    }
}

/// `p(t) -> p(t+1)` on coefficient rows `0..=order`.
fn taylor_shift(data: &mut [BigInt], order: usize, batch: usize) {
    for i in 0..order {
        for j in (i..order).rev() {
            add_row_into(data, j, j + 1, batch);
        }
    }
}

fn reverse_rows(data: &mut [BigInt], order: usize, batch: usize) {
    for r in 0..(order + 1) / 2 {
        let s = order - r;
        let (lo, hi) = data.split_at_mut(s * batch);
        lo[r * batch..(r + 1) * batch].swap_with_slice(&mut hi[..batch]);
    }
}

/// In-place `b = K^{(order)} a` for `batch` vectors stored as `data[y*batch + b]`.
pub fn transform_in_place(data: &mut [BigInt], order: usize, batch: usize) {
    assert_eq!(data.len(), (order + 1) * batch);
    if order == 0 {
        return;
    }
    taylor_shift(data, order, batch);
    for k in 1..=order {
        for v in &mut data[k * batch..(k + 1) * batch] {
            if v.is_zero() {
                continue;
            }
            *v <<= k;
            if k % 2 == 1 {
                *v = -std::mem::take(v);
            }
        }
    }
    reverse_rows(data, order, batch);
    taylor_shift(data, order, batch);
    reverse_rows(data, order, batch);
}

/// Applies the transform of matching order along one axis of a row-major tensor.
pub fn transform_axis(data: &mut [BigInt], dims: &[usize], axis: usize) {
    let len = dims[axis];
    let inner: usize = dims[axis + 1..].iter().product();
    let block = len * inner;
    for chunk in data.chunks_mut(block) {
        transform_in_place(chunk, len - 1, inner);
    }
}

/// `2^order · I`, for involution checks.
pub fn scaled_identity(order: usize) -> Vec<BigInt> {
    let m = order + 1;
    let scale = BigInt::one() << order;
    let mut out = vec![BigInt::zero(); m * m];
    for x in 0..m {
        out[x * m + x] = scale.clone();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_orders() {
        assert_eq!(krawtchouk(1).entries, ints(&[1, 1, 1, -1]));
        assert_eq!(krawtchouk(2).entries, ints(&[1, 1, 1, 2, 0, -2, 1, -1, 1]));
        assert_eq!(krawtchouk(0).entries, ints(&[1]));
    }

    #[test]
    fn first_row_and_column() {
        for m in 0..20 {
            let k = krawtchouk(m);
            for y in 0..=m {
                assert_eq!(k.get(0, y), &BigInt::one());
                assert_eq!(k.get(y, 0), &BigInt::from(binomial(m, y)));
            }
        }
    }

    #[test]
    fn involution_small() {
        for m in 0..=12 {
            let k = krawtchouk(m);
            assert_eq!(k.mul(&k), scaled_identity(m));
        }
    }

    #[test]
    fn fast_transform_matches_matrix() {
        for m in 0..=20 {
            let k = krawtchouk(m);
            let batch = 3;
            let mut data = Vec::new();
            for y in 0..=m {
                for b in 0..batch {
                    data.push(BigInt::from((y as i64 * 7 + b as i64 * 13) % 11 - 5));
                }
            }
            let columns: Vec<Vec<BigInt>> = (0..batch)
                .map(|b| (0..=m).map(|y| data[y * batch + b].clone()).collect())
                .collect();
            transform_in_place(&mut data, m, batch);
            for (b, col) in columns.iter().enumerate() {
                let expect = k.apply(col);
                for x in 0..=m {
                    assert_eq!(data[x * batch + b], expect[x], "M = {m}, x = {x}");
                }
            }
        }
    }

    #[test]
    fn axis_transform_on_tensor() {
        let dims = [2usize, 4, 3];
        let mut data: Vec<BigInt> = (0..24).map(|v| BigInt::from(v * v - 7)).collect();
        let orig = data.clone();
        transform_axis(&mut data, &dims, 1);
        let k = krawtchouk(3);
        for a in 0..2 {
            for c in 0..3 {
                let col: Vec<BigInt> = (0..4).map(|b| orig[(a * 4 + b) * 3 + c].clone()).collect();
                let expect = k.apply(&col);
                for b in 0..4 {
                    assert_eq!(data[(a * 4 + b) * 3 + c], expect[b]);
                }
            }
        }
    }
}
