//! Polar transform, information sets and systematic encoding.
//!
//! Bit-channel indices are 1-based in the public API. The generator is
//! `G_N = F_2^{⊗n}` with no bit-reversal permutation.

mod bits;
pub mod gf2;

use std::sync::{Arc, OnceLock};

pub use bits::BitVector;
use gf2::BitMatrix;

use crate::error::{Error, Result};

/// `log2(len)` if `len` is a power of two.
pub fn log2_exact(len: usize) -> Result<u32> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::invalid(format!(
            "codelength {len} is not a power of two"
        )));
    }
    Ok(len.trailing_zeros())
}

/// In-place `x <- x·G_N` on 0/1 symbols.
pub fn polar_transform_in_place(x: &mut [u8]) {
    let len = x.len();
    let mut half = 1;
    while half < len {
        for block in (0..len).step_by(2 * half) {
            for j in block..block + half {
                x[j] ^= x[j + half];
            }
        }
        half *= 2;
    }
}

/// `x = u·G_N` via the butterfly network.
pub fn polar_encode(u: &BitVector) -> Result<BitVector> {
    log2_exact(u.len())?;
    let mut x = u.clone();
    polar_transform_in_place(x.as_mut_slice());
    Ok(x)
}

/// Entry `(r, c)` of `G_N`, both 0-based.
#[inline]
pub fn generator_entry(r: usize, c: usize) -> bool {
    c & r == c
}

/// Row `i` (1-based) of `G_N`, built directly from the Kronecker structure.
pub fn generator_row(i: usize, len: usize) -> Result<BitVector> {
    check_index(i, len)?;
    let r = i - 1;
    Ok(BitVector::from_vec_unchecked(
        (0..len).map(|c| generator_entry(r, c) as u8).collect(),
    ))
}

/// Hamming weight of row `i` of `G_N`.
pub fn row_weight(i: usize, len: usize) -> Result<usize> {
    check_index(i, len)?;
    Ok(1usize << (i - 1).count_ones())
}

pub(crate) fn check_index(i: usize, len: usize) -> Result<()> {
    log2_exact(len)?;
    if i == 0 || i > len {
        return Err(Error::invalid(format!(
            "bit-channel index {i} outside 1..={len}"
        )));
    }
    Ok(())
}

/// Code parameters: length, information set and encoding style.
#[derive(Clone)]
pub struct CodeSpec {
    n: u32,
    len: usize,
    info_set: Vec<usize>,
    systematic: bool,
    positions: Vec<usize>,
    frozen_mask: Vec<bool>,
    sys_inverse: Arc<OnceLock<BitMatrix>>,
}

impl CodeSpec {
    /// `info_set` holds 1-based indices; order and duplicates are checked, not repaired.
    pub fn new(len: usize, info_set: Vec<usize>, systematic: bool) -> Result<Self> {
        let n = log2_exact(len)?;
        if info_set.is_empty() {
            return Err(Error::invalid("information set is empty"));
        }
        if info_set.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid(
                "information set must be strictly increasing",
            ));
        }
        if info_set[0] == 0 || *info_set.last().unwrap() > len {
            return Err(Error::invalid(format!(
                "information index outside 1..={len}"
            )));
        }
        let positions: Vec<usize> = info_set.iter().map(|&i| i - 1).collect();
        let mut frozen_mask = vec![true; len];
        for &p in &positions {
            frozen_mask[p] = false;
        }
        Ok(CodeSpec {
            n,
            len,
            info_set,
            systematic,
            positions,
            frozen_mask,
            sys_inverse: Arc::new(OnceLock::new()),
        })
    }

    /// Sorts and deduplicates before validating.
    pub fn from_unsorted(len: usize, mut info_set: Vec<usize>, systematic: bool) -> Result<Self> {
        info_set.sort_unstable();
        info_set.dedup();
        Self::new(len, info_set, systematic)
    }

    pub fn with_systematic(&self, systematic: bool) -> CodeSpec {
        let mut s = self.clone();
        s.systematic = systematic;
        s
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn dimension(&self) -> usize {
        self.info_set.len()
    }

    pub fn info_set(&self) -> &[usize] {
        &self.info_set
    }

    /// 0-based information positions.
    pub fn info_positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn frozen_set(&self) -> Vec<usize> {
        (1..=self.len)
            .filter(|&i| self.frozen_mask[i - 1])
            .collect()
    }

    /// `true` at frozen 0-based positions.
    pub fn frozen_mask(&self) -> &[bool] {
        &self.frozen_mask
    }

    pub fn is_systematic(&self) -> bool {
        self.systematic
    }

    pub fn rate(&self) -> f64 {
        self.dimension() as f64 / self.len as f64
    }

    pub fn info_subset(&self, i: usize) -> Result<InfoSubset> {
        check_index(i, self.len)?;
        let indices: Vec<usize> = self.info_set.iter().copied().filter(|&a| a >= i).collect();
        Ok(InfoSubset { i, indices })
    }

    /// Places `b` on the information positions of an otherwise zero source word.
    pub fn source_word(&self, b: &BitVector) -> Result<BitVector> {
        self.check_dimension(b)?;
        let mut u = vec![0u8; self.len];
        for (&p, &bit) in self.positions.iter().zip(b.as_slice()) {
            u[p] = bit;
        }
        Ok(BitVector::from_vec_unchecked(u))
    }

    /// Encodes `b` non-systematically or systematically according to the spec.
    pub fn encode(&self, b: &BitVector) -> Result<BitVector> {
        if self.systematic {
            systematic_encode(b, self)
        } else {
            polar_encode(&self.source_word(b)?)
        }
    }

    /// Recovers the information bits from a decoded source word.
    pub fn extract_info(&self, u_hat: &BitVector) -> BitVector {
        if self.systematic {
            let mut x = u_hat.clone();
            polar_transform_in_place(x.as_mut_slice());
            x.select(&self.positions)
        } else {
            u_hat.select(&self.positions)
        }
    }

    fn check_dimension(&self, b: &BitVector) -> Result<()> {
        if b.len() != self.dimension() {
            return Err(Error::invalid(format!(
                "expected {} information bits, got {}",
                self.dimension(),
                b.len()
            )));
        }
        Ok(())
    }

    fn systematic_inverse(&self) -> &BitMatrix {
        self.sys_inverse.get_or_init(|| {
            let k = self.dimension();
            let mut g = BitMatrix::zeros(k, k);
            for (r, &pr) in self.positions.iter().enumerate() {
                for (c, &pc) in self.positions.iter().enumerate() {
                    g.set(r, c, generator_entry(pr, pc));
                }
            }
            // unit lower-triangular, hence always invertible
            g.inverse().expect("G_AA is unit lower-triangular")
        })
    }
}

impl PartialEq for CodeSpec {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len
            && self.systematic == other.systematic
            && self.info_set == other.info_set
    }
}

impl Eq for CodeSpec {}

impl std::fmt::Debug for CodeSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CodeSpec")
            .field("len", &self.len)
            .field("dimension", &self.dimension())
            .field("systematic", &self.systematic)
            .field("info_set", &self.info_set)
            .finish()
    }
}

/// Information indices not smaller than a given bit-channel index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfoSubset {
    pub i: usize,
    pub indices: Vec<usize>,
}

impl InfoSubset {
    pub fn count(&self) -> usize {
        self.indices.len()
    }
}

/// Codeword with `b` on the information positions and a source word that is
/// zero on every frozen position.
pub fn systematic_encode(b: &BitVector, spec: &CodeSpec) -> Result<BitVector> {
    if !spec.systematic {
        return Err(Error::invalid("code spec is not systematic"));
    }
    spec.check_dimension(b)?;
    let u_a = spec.systematic_inverse().left_mul(b.as_slice());
    let mut u = vec![0u8; spec.len];
    for (&p, bit) in spec.positions.iter().zip(u_a) {
        u[p] = bit;
    }
    polar_transform_in_place(&mut u);
    Ok(BitVector::from_vec_unchecked(u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bv(bits: &[u8]) -> BitVector {
        BitVector::from_bits(bits).unwrap()
    }

    /// `u·F^{⊗n}` by building the Kronecker power explicitly.
    fn encode_by_matrix(u: &[u8]) -> Vec<u8> {
        let mut g: Vec<Vec<u8>> = vec![vec![1]];
        while g.len() < u.len() {
            let m = g.len();
            let mut next = vec![vec![0u8; 2 * m]; 2 * m];
            for r in 0..m {
                for c in 0..m {
                    next[r][c] = g[r][c];
                    next[m + r][c] = g[r][c];
                    next[m + r][m + c] = g[r][c];
                }
            }
            g = next;
        }
        (0..u.len())
            .map(|c| (0..u.len()).fold(0, |acc, r| acc ^ (u[r] & g[r][c])))
            .collect()
    }

    #[test]
    fn encode_examples() {
        assert_eq!(polar_encode(&bv(&[0, 0, 0, 0])).unwrap(), bv(&[0, 0, 0, 0]));
        assert_eq!(polar_encode(&bv(&[0, 0, 0, 1])).unwrap(), bv(&[1, 1, 1, 1]));
        let x = encode_by_matrix(&[1, 1, 1, 1]);
        assert_eq!(x, vec![0, 0, 0, 1]);
        assert_eq!(polar_encode(&bv(&[1, 1, 1, 1])).unwrap(), bv(&x));
    }

    #[test]
    fn encode_rejects_bad_length() {
        assert!(polar_encode(&bv(&[0, 1, 1])).is_err());
        assert!(polar_encode(&BitVector::zeros(0)).is_err());
    }

    #[test]
    fn row_weight_examples() {
        assert_eq!(row_weight(1, 8).unwrap(), 1);
        assert_eq!(row_weight(8, 8).unwrap(), 8);
        assert_eq!(row_weight(4, 4).unwrap(), 4);
        assert_eq!(row_weight(3, 4).unwrap(), 2);
        assert!(row_weight(0, 4).is_err());
        assert!(row_weight(5, 4).is_err());
    }

    #[test]
    fn row_weight_matches_explicit_rows() {
        let mut len = 1;
        while len <= 256 {
            for i in 1..=len {
                let mut e = vec![0u8; len];
                e[i - 1] = 1;
                let row = encode_by_matrix(&e);
                let w = row.iter().filter(|&&b| b == 1).count();
                assert_eq!(row_weight(i, len).unwrap(), w);
                assert_eq!(generator_row(i, len).unwrap().as_slice(), &row[..]);
            }
            len *= 2;
        }
    }

    #[test]
    fn systematic_examples() {
        let spec = CodeSpec::new(2, vec![2], true).unwrap();
        assert_eq!(systematic_encode(&bv(&[1]), &spec).unwrap(), bv(&[1, 1]));
        let spec = CodeSpec::new(8, vec![4, 6, 7, 8], true).unwrap();
        assert_eq!(
            systematic_encode(&BitVector::zeros(4), &spec).unwrap(),
            BitVector::zeros(8)
        );
        assert!(systematic_encode(&BitVector::zeros(3), &spec).is_err());
        assert!(systematic_encode(&bv(&[1, 0, 1, 1]), &spec.with_systematic(false)).is_err());
    }

    #[test]
    fn code_spec_validation() {
        assert!(CodeSpec::new(6, vec![1], false).is_err());
        assert!(CodeSpec::new(8, vec![], false).is_err());
        assert!(CodeSpec::new(8, vec![3, 2], false).is_err());
        assert!(CodeSpec::new(8, vec![2, 2], false).is_err());
        assert!(CodeSpec::new(8, vec![0, 2], false).is_err());
        assert!(CodeSpec::new(8, vec![2, 9], false).is_err());
        let s = CodeSpec::new(8, vec![4, 6, 7, 8], false).unwrap();
        assert_eq!(s.frozen_set(), vec![1, 2, 3, 5]);
        let sub = s.info_subset(6).unwrap();
        assert_eq!(sub.indices, vec![6, 7, 8]);
        assert_eq!(sub.count(), 3);
    }

    fn arb_word() -> impl Strategy<Value = (Vec<u8>, Vec<u8>)> {
        (1u32..=10).prop_flat_map(|n| {
            let len = 1usize << n;
            (
                proptest::collection::vec(0u8..=1, len),
                proptest::collection::vec(0u8..=1, len),
            )
        })
    }

    fn arb_spec_and_bits() -> impl Strategy<Value = (CodeSpec, Vec<u8>)> {
        (1u32..=8)
            .prop_flat_map(|n| {
                let len = 1usize << n;
                proptest::collection::vec(any::<bool>(), len)
            })
            .prop_filter("nonempty", |mask| mask.iter().any(|&b| b))
            .prop_flat_map(|mask| {
                let len = mask.len();
                let info: Vec<usize> = (1..=len).filter(|&i| mask[i - 1]).collect();
                let k = info.len();
                (
                    Just(CodeSpec::new(len, info, true).unwrap()),
                    proptest::collection::vec(0u8..=1, k),
                )
            })
    }

    proptest! {
        #[test]
        fn encode_is_an_involution((u, _) in arb_word()) {
            let u = bv(&u);
            let x = polar_encode(&u).unwrap();
            prop_assert_eq!(polar_encode(&x).unwrap(), u);
        }

        #[test]
        fn encode_is_linear((u, v) in arb_word()) {
            let (u, v) = (bv(&u), bv(&v));
            let lhs = polar_encode(&(&u ^ &v)).unwrap();
            let rhs = &polar_encode(&u).unwrap() ^ &polar_encode(&v).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn butterfly_matches_matrix(u in proptest::collection::vec(0u8..=1, 32)) {
            prop_assert_eq!(polar_encode(&bv(&u)).unwrap().into_vec(), encode_by_matrix(&u));
        }

        #[test]
        fn systematic_round_trip((spec, b) in arb_spec_and_bits()) {
            let b = bv(&b);
            let x = systematic_encode(&b, &spec).unwrap();
            prop_assert_eq!(x.select(spec.info_positions()), b.clone());
            let u = polar_encode(&x).unwrap();
            for (p, &frozen) in spec.frozen_mask().iter().enumerate() {
                if frozen {
                    prop_assert_eq!(u.get(p), 0);
                }
            }
            prop_assert_eq!(polar_encode(&u).unwrap(), x.clone());
            prop_assert_eq!(spec.extract_info(&u), b);
        }
    }
}
