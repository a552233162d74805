//! Exhaustive enumeration of `ℂ^{(i)}` and `𝔻^{(i)}`.
//!
//! The suffix `u_i^N` is walked in Gray-code order so each step costs one
//! row XOR. This is the ground truth for every recursive computation.

use num_bigint::BigUint;

use super::{Counts, FourSplitSpectrum, Iowef, Mode};
use crate::error::{Error, Result};
use crate::polar::{check_index, generator_entry, BitVector};

/// Limits on exhaustive enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Every channel is enumerated when `N` is at most this.
    pub full_up_to: usize,
    /// Otherwise `ℂ^{(i)}` may hold at most `2^max_log2_size` words.
    pub max_log2_size: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            full_up_to: 32,
            max_log2_size: 21,
        }
    }
}

impl Budget {
    pub fn check(&self, len: usize, index: usize) -> Result<()> {
        let dim = len - index + 1;
        if len <= self.full_up_to || dim as u32 <= self.max_log2_size {
            Ok(())
        } else {
            Err(Error::Budget(format!(
                "subcode of bit-channel {index} at N = {len} has 2^{dim} codewords; \
                 limit is 2^{} above N = {}",
                self.max_log2_size, self.full_up_to
            )))
        }
    }
}

/// Every weight statistic of one bit-channel, under both input-weight conventions.
#[derive(Clone, Debug, PartialEq)]
pub struct SubcodeTallies {
    pub len: usize,
    pub index: usize,
    pub sys_polar: Iowef,
    pub sys_subcode: Iowef,
    pub nsys_polar: Iowef,
    pub nsys_subcode: Iowef,
    pub four_split: FourSplitSpectrum,
}

impl SubcodeTallies {
    /// Enumerator of `𝔻^{(i)}` under `mode`.
    pub fn polar(&self, mode: Mode) -> &Iowef {
        match mode {
            Mode::Systematic => &self.sys_polar,
            Mode::NonSystematic => &self.nsys_polar,
        }
    }

    /// Enumerator of `ℂ^{(i)}` under `mode`.
    pub fn subcode(&self, mode: Mode) -> &Iowef {
        match mode {
            Mode::Systematic => &self.sys_subcode,
            Mode::NonSystematic => &self.nsys_subcode,
        }
    }
}

fn row_words<const W: usize>(r: usize, len: usize) -> [u64; W] {
    let mut out = [0u64; W];
    for c in 0..len {
        if generator_entry(r, c) {
            out[c / 64] |= 1 << (c % 64);
        }
    }
    out
}

fn range_mask<const W: usize>(lo: usize, hi_exclusive: usize) -> [u64; W] {
    let mut out = [0u64; W];
    for c in lo..hi_exclusive {
        out[c / 64] |= 1 << (c % 64);
    }
    out
}

#[inline(always)]
fn masked_weight<const W: usize>(x: &[u64; W], mask: &[u64; W]) -> usize {
    let mut acc = 0;
    for k in 0..W {
        acc += (x[k] & mask[k]).count_ones() as usize;
    }
    acc
}

/// Visits every word of `ℂ^{(i)}` with the weight of its source suffix and `u_i`.
fn walk<const W: usize>(len: usize, index: usize, mut visit: impl FnMut(&[u64; W], usize, bool)) {
    let dim = len - index + 1;
    let rows: Vec<[u64; W]> = (0..dim)
        .map(|b| row_words::<W>(index - 1 + b, len))
        .collect();
    let mut x = [0u64; W];
    let mut g: u64 = 0;
    visit(&x, 0, false);
    for t in 1u64..(1u64 << dim) {
        let b = t.trailing_zeros() as usize;
        let row = &rows[b];
        for k in 0..W {
            x[k] ^= row[k];
        }
        g ^= 1 << b;
        visit(&x, g.count_ones() as usize, g & 1 == 1);
    }
}

fn tally<const W: usize>(len: usize, index: usize) -> SubcodeTallies {
    let l_len = len - index + 1;
    let n_len = (index - 1).max(1);
    let w_len = Iowef::w_len(len, index);
    let stride = len + 1;
    let grid = w_len * stride;

    let k_mask = range_mask::<W>(len - 1, len);
    let l_mask = range_mask::<W>(index - 1, len - 1);
    let m_mask = if index >= 2 {
        range_mask::<W>(index - 2, index - 1)
    } else {
        [0; W]
    };
    let n_mask = if index >= 3 {
        range_mask::<W>(0, index - 2)
    } else {
        [0; W]
    };

    // 4-split counts kept apart for u_i = 0 and u_i = 1; the systematic
    // enumerators follow from them since w = k+l and d = k+l+m+n
    let four_size = 2 * l_len * 2 * n_len;
    let mut four = vec![0u64; 2 * four_size];
    let mut nsys = vec![0u64; 2 * grid];
    walk::<W>(len, index, |x, wu, ui| {
        let k = masked_weight(x, &k_mask);
        let l = masked_weight(x, &l_mask);
        let m = masked_weight(x, &m_mask);
        let n = masked_weight(x, &n_mask);
        let d = k + l + m + n;
        four[ui as usize * four_size + ((k * l_len + l) * 2 + m) * n_len + n] += 1;
        nsys[ui as usize * grid + wu * stride + d] += 1;
    });

    let mut sys = vec![0u64; 2 * grid];
    for half in 0..2 {
        for k in 0..2 {
            for l in 0..l_len {
                for m in 0..2 {
                    for n in 0..n_len {
                        let c = four[half * four_size + ((k * l_len + l) * 2 + m) * n_len + n];
                        if c == 0 {
                            continue;
                        }
                        sys[half * grid + (k + l) * stride + k + l + m + n] += c;
                    }
                }
            }
        }
    }
    let four: Vec<BigUint> = four[..four_size]
        .iter()
        .zip(&four[four_size..])
        .map(|(&a, &b)| BigUint::from(a) + b)
        .collect();

    let split = |t: &[u64]| -> (Iowef, Iowef) {
        let polar: Vec<BigUint> = t[grid..].iter().map(|&c| BigUint::from(c)).collect();
        let subcode: Vec<BigUint> = t[..grid]
            .iter()
            .zip(&t[grid..])
            .map(|(&a, &b)| BigUint::from(a) + b)
            .collect();
        (
            Iowef::from_counts(len, index, Mode::Systematic, Counts::Exact(polar)).unwrap(),
            Iowef::from_counts(len, index, Mode::Systematic, Counts::Exact(subcode)).unwrap(),
        )
    };
    let (sys_polar, sys_subcode) = split(&sys);
    let (mut nsys_polar, mut nsys_subcode) = split(&nsys);
    nsys_polar.mode = Mode::NonSystematic;
    nsys_subcode.mode = Mode::NonSystematic;

    SubcodeTallies {
        len,
        index,
        sys_polar,
        sys_subcode,
        nsys_polar,
        nsys_subcode,
        four_split: FourSplitSpectrum::from_counts(len, index, four),
    }
}

/// Enumerates `ℂ_N^{(i)}` and tallies all of its weight statistics.
pub fn brute_force_subcode(len: usize, index: usize, budget: &Budget) -> Result<SubcodeTallies> {
    check_index(index, len)?;
    budget.check(len, index)?;
    Ok(match len.div_ceil(64) {
        1 => tally::<1>(len, index),
        2 => tally::<2>(len, index),
        4 => tally::<4>(len, index),
        8 => tally::<8>(len, index),
        16 => tally::<16>(len, index),
        _ => return Err(Error::invalid(format!("codelength {len} above 1024"))),
    })
}

/// Brute-force tallies for every bit-channel at codelength `len`.
pub fn brute_force_all(len: usize, budget: &Budget) -> Result<Vec<SubcodeTallies>> {
    (1..=len)
        .map(|i| brute_force_subcode(len, i, budget))
        .collect()
}

fn collect_words<const W: usize>(len: usize, index: usize, polar_only: bool) -> Vec<BitVector> {
    let mut out = Vec::new();
    walk::<W>(len, index, |x, _, ui| {
        if polar_only && !ui {
            return;
        }
        let bits: Vec<u8> = (0..len)
            .map(|c| ((x[c / 64] >> (c % 64)) & 1) as u8)
            .collect();
        out.push(BitVector::from_vec_unchecked(bits));
    });
    out
}

/// All codewords of `𝔻^{(i)}` (`polar_only`) or `ℂ^{(i)}`.
pub fn subcode_codewords(
    len: usize,
    index: usize,
    polar_only: bool,
    budget: &Budget,
) -> Result<Vec<BitVector>> {
    check_index(index, len)?;
    budget.check(len, index)?;
    Ok(match len.div_ceil(64) {
        1 => collect_words::<1>(len, index, polar_only),
        2 => collect_words::<2>(len, index, polar_only),
        4 => collect_words::<4>(len, index, polar_only),
        8 => collect_words::<8>(len, index, polar_only),
        16 => collect_words::<16>(len, index, polar_only),
        _ => return Err(Error::invalid(format!("codelength {len} above 1024"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polar::polar_encode;
    use crate::spectra::extract_polar_spectrum;
    use std::collections::HashMap;

    fn spectrum(len: usize, i: usize) -> Vec<(usize, u64)> {
        let t = brute_force_subcode(len, i, &Budget::default()).unwrap();
        let s = extract_polar_spectrum(t.polar(Mode::Systematic)).unwrap();
        s.nonzero()
            .map(|(d, c)| (d, c.try_into().unwrap()))
            .collect()
    }

    #[test]
    fn small_spectra() {
        assert_eq!(spectrum(4, 4), vec![(4, 1)]);
        assert_eq!(spectrum(4, 1), vec![(1, 4), (3, 4)]);
    }

    #[test]
    fn nonsystematic_enumerator_n4_i3() {
        let t = brute_force_subcode(4, 3, &Budget::default()).unwrap();
        let e: Vec<(usize, usize, u64)> = t
            .polar(Mode::NonSystematic)
            .exact_entries()
            .unwrap()
            .into_iter()
            .map(|(w, d, c)| (w, d, c.try_into().unwrap()))
            .collect();
        assert_eq!(e, vec![(1, 2, 1), (2, 2, 1)]);
    }

    /// Independent tally: encode every suffix directly, no Gray code.
    #[test]
    fn matches_direct_encoding() {
        for len in [2usize, 4, 8] {
            for i in 1..=len {
                let t = brute_force_subcode(len, i, &Budget::default()).unwrap();
                let mut sys: HashMap<(usize, usize), u64> = HashMap::new();
                let mut nsys: HashMap<(usize, usize), u64> = HashMap::new();
                let dim = len - i + 1;
                for s in 0u32..(1 << dim) {
                    if s & 1 == 0 {
                        continue;
                    }
                    let mut u = vec![0u8; len];
                    for b in 0..dim {
                        u[i - 1 + b] = ((s >> b) & 1) as u8;
                    }
                    let x = polar_encode(&BitVector::from_bits(&u).unwrap()).unwrap();
                    let d = x.weight();
                    let ws = x.as_slice()[i - 1..].iter().filter(|&&b| b == 1).count();
                    *sys.entry((ws, d)).or_default() += 1;
                    *nsys.entry((s.count_ones() as usize, d)).or_default() += 1;
                }
                for (mode, expect) in [(Mode::Systematic, &sys), (Mode::NonSystematic, &nsys)] {
                    let got: HashMap<(usize, usize), u64> = t
                        .polar(mode)
                        .exact_entries()
                        .unwrap()
                        .into_iter()
                        .map(|(w, d, c)| ((w, d), c.try_into().unwrap()))
                        .collect();
                    assert_eq!(&got, expect, "N = {len}, i = {i}, {mode}");
                }
            }
        }
    }

    #[test]
    fn budget_refuses_large_subcodes() {
        let err = brute_force_subcode(64, 2, &Budget::default()).unwrap_err();
        assert!(matches!(err, Error::Budget(_)));
        assert!(brute_force_subcode(64, 44, &Budget::default()).is_ok());
    }

    #[test]
    fn multiword_lengths() {
        let t = brute_force_subcode(128, 120, &Budget::default()).unwrap();
        let s = extract_polar_spectrum(t.polar(Mode::Systematic)).unwrap();
        assert_eq!(s.total(), BigUint::from(1u32 << 8));
        assert_eq!(s.counts[0], BigUint::from(0u32));
        let words = subcode_codewords(128, 127, true, &Budget::default()).unwrap();
        assert_eq!(words.len(), 2);
    }
}
