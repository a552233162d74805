//! 4-split spectra and the maps that build them at doubled length.
//!
//! For `ℂ_N^{(i)}` a codeword is split into four coordinate groups:
//! `k` is the weight of bit `N`, `l` of bits `i..N−1`, `m` of bit `i−1` and
//! `n` of bits `1..i−2`. For `i = 1` the last two groups are empty and the
//! tensor keeps a single slot `m = n = 0`.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::krawtchouk::transform_axis;
use super::numeric::binomial_row;
use super::{Counts, Iowef, Mode};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourSplitSpectrum {
    len: usize,
    index: usize,
    l_len: usize,
    n_len: usize,
    data: Vec<BigUint>,
}

impl FourSplitSpectrum {
    pub fn zeros(len: usize, index: usize) -> Self {
        let l_len = len - index + 1;
        let n_len = (index - 1).max(1);
        FourSplitSpectrum {
            len,
            index,
            l_len,
            n_len,
            data: vec![BigUint::zero(); 4 * l_len * n_len],
        }
    }

    pub(crate) fn from_counts(len: usize, index: usize, data: Vec<BigUint>) -> Self {
        let mut s = Self::zeros(len, index);
        assert_eq!(s.data.len(), data.len());
        s.data = data;
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn index(&self) -> usize {
        self.index
    }

    /// Extent of the `l` axis, `N−i+1`.
    pub fn l_len(&self) -> usize {
        self.l_len
    }

    /// Extent of the `n` axis, `max(i−1, 1)`.
    pub fn n_len(&self) -> usize {
        self.n_len
    }

    pub fn dims(&self) -> [usize; 4] {
        [2, self.l_len, 2, self.n_len]
    }

    #[inline]
    fn at(&self, k: usize, l: usize, m: usize, n: usize) -> usize {
        ((k * self.l_len + l) * 2 + m) * self.n_len + n
    }

    pub fn get(&self, k: usize, l: usize, m: usize, n: usize) -> &BigUint {
        &self.data[self.at(k, l, m, n)]
    }

    fn add(&mut self, k: usize, l: usize, m: usize, n: usize, v: &BigUint) {
        let c = self.at(k, l, m, n);
        self.data[c] += v;
    }

    pub fn raw(&self) -> &[BigUint] {
        &self.data
    }

    /// Nonzero entries as `((k, l, m, n), count)`.
    pub fn entries(&self) -> impl Iterator<Item = ([usize; 4], &BigUint)> {
        let (ll, nl) = (self.l_len, self.n_len);
        self.data
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(c, v)| {
                let n = c % nl;
                let m = (c / nl) % 2;
                let l = (c / nl / 2) % ll;
                let k = c / nl / 2 / ll;
                ([k, l, m, n], v)
            })
    }

    pub fn total(&self) -> BigUint {
        self.data.iter().sum()
    }

    /// Totals, parity and complement symmetry.
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |what: &str| {
            Err(Error::consistency(format!(
                "4-split spectrum at N = {}, i = {}: {what}",
                self.len, self.index
            )))
        };
        if self.total() != BigUint::one() << (self.len - self.index + 1) {
            return fail("total is not 2^(N-i+1)");
        }
        let i = self.index;
        for k in 0..2 {
            for l in 0..self.l_len {
                for m in 0..2 {
                    for n in 0..self.n_len {
                        let v = self.get(k, l, m, n);
                        if i == 1 {
                            if m == 1 || n > 0 {
                                if !v.is_zero() {
                                    return fail("collapsed axes carry mass");
                                }
                                continue;
                            }
                            if v != self.get(1 - k, self.len - 1 - l, 0, 0) {
                                return fail("symmetry");
                            }
                            continue;
                        }
                        if (k + l + m + n) % 2 == 1 && !v.is_zero() {
                            return fail("odd-weight codeword");
                        }
                        if v != self.get(1 - k, self.len - i - l, 1 - m, i - 2 - n) {
                            return fail("symmetry");
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Counts of `ℂ^{(i+1)}` by `p` (weight of the last `N−i+1` bits) and `q` (the rest).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoSplitSpectrum {
    pub len: usize,
    pub index: usize,
    pub p_len: usize,
    pub q_len: usize,
    pub data: Vec<BigUint>,
}

impl TwoSplitSpectrum {
    pub fn get(&self, p: usize, q: usize) -> &BigUint {
        &self.data[p * self.q_len + q]
    }

    pub fn total(&self) -> BigUint {
        self.data.iter().sum()
    }
}

/// Repetition map for channel `N+i` at length `2N`, valid for `i ≥ 2`.
pub fn lift_upper(half: &FourSplitSpectrum) -> FourSplitSpectrum {
    assert!(half.index >= 2);
    let len = 2 * half.len;
    let mut out = FourSplitSpectrum::zeros(len, half.len + half.index);
    for ([k, l, m, n], v) in half.entries() {
        out.add(k, l, m, k + l + m + 2 * n, v);
    }
    out
}

/// Channel `N+1` at length `2N` from the full space at length `N`.
pub fn lift_middle(half_first: &FourSplitSpectrum) -> FourSplitSpectrum {
    assert_eq!(half_first.index, 1);
    let mut out = FourSplitSpectrum::zeros(2 * half_first.len, half_first.len + 1);
    for ([k, l, _, _], v) in half_first.entries() {
        out.add(k, l, k, l, v);
    }
    out
}

/// Channel 1 (the whole space) at length `len`.
pub fn full_space(len: usize) -> FourSplitSpectrum {
    let mut out = FourSplitSpectrum::zeros(len, 1);
    for (f, c) in binomial_row(len - 1).iter().enumerate() {
        out.add(0, f, 0, 0, c);
        out.add(1, f, 0, 0, c);
    }
    out
}

/// Spectrum of channel `j` from that of its dual channel `len+2−j`.
pub fn macwilliams_4split(dual: &FourSplitSpectrum, j: usize) -> Result<FourSplitSpectrum> {
    let len = dual.len;
    if j < 2 || j > len || dual.index != len + 2 - j {
        return Err(Error::invalid(format!(
            "dual of channel {j} at N = {len} must be channel {}",
            len + 2 - j
        )));
    }
    let f_len = len - j + 1;
    let h_len = j - 1;
    debug_assert_eq!(dual.l_len, h_len);
    debug_assert_eq!(dual.n_len, f_len);

    // P(a,b,c,d) = U'(k'=c, l'=d, m'=a, n'=b)
    let dims = [2, f_len, 2, h_len];
    let mut t = vec![BigInt::zero(); 4 * f_len * h_len];
    for a in 0..2 {
        for b in 0..f_len {
            for c in 0..2 {
                for d in 0..h_len {
                    let v = dual.get(c, d, a, b);
                    if !v.is_zero() {
                        t[((a * f_len + b) * 2 + c) * h_len + d] =
                            BigInt::from_biguint(Sign::Plus, v.clone());
                    }
                }
            }
        }
    }
    for axis in 0..4 {
        transform_axis(&mut t, &dims, axis);
    }

    let shift = (j - 1) as u64;
    let mut out = FourSplitSpectrum::zeros(len, j);
    for (slot, v) in out.data.iter_mut().zip(t) {
        if v.is_zero() {
            continue;
        }
        if v.sign() == Sign::Minus || v.trailing_zeros().unwrap_or(0) < shift {
            return Err(Error::consistency(format!(
                "MacWilliams transform for channel {j} at N = {len} gave {v}, \
                 not a nonnegative multiple of 2^{shift}"
            )));
        }
        *slot = (v >> shift).into_parts().1;
    }
    Ok(out)
}

/// `V^{(i+1)→(i)}` from the 4-split spectrum of channel `i+1`.
pub fn two_split(next: &FourSplitSpectrum) -> TwoSplitSpectrum {
    assert!(next.index >= 2);
    let i = next.index - 1;
    let len = next.len;
    let p_len = len - i + 2;
    let q_len = i;
    let mut data = vec![BigUint::zero(); p_len * q_len];
    for ([k, l, m, n], v) in next.entries() {
        data[(k + l + m) * q_len + n] += v;
    }
    TwoSplitSpectrum {
        len,
        index: i,
        p_len,
        q_len,
        data,
    }
}

/// Systematic enumerator of `ℂ^{(i)}`: `T(w, d−w)` with `w = k+l` and `d−w = m+n`.
pub fn subcode_iowef(u: &FourSplitSpectrum) -> Iowef {
    let mut out = Iowef::zeros(u.len, u.index, Mode::Systematic);
    for ([k, l, m, n], v) in u.entries() {
        let c = out.cell(k + l, k + l + m + n);
        out.exact_mut()[c] += v;
    }
    out
}

/// Systematic enumerator of `𝔻^{(i)}` as `T^{(i)} − V^{(i+1)→(i)}`.
pub fn polar_iowef_from_splits(
    u: &FourSplitSpectrum,
    next: Option<&FourSplitSpectrum>,
) -> Result<Iowef> {
    let len = u.len;
    let i = u.index;
    let Some(next) = next else {
        if i != len {
            return Err(Error::invalid("next 4-split spectrum missing"));
        }
        let mut out = Iowef::zeros(len, len, Mode::Systematic);
        let c = out.cell(1, len);
        out.exact_mut()[c] = BigUint::one();
        return Ok(out);
    };
    assert_eq!(next.index, i + 1);
    let t = subcode_iowef(u);
    let v = two_split(next);
    let mut counts = match t.counts {
        Counts::Exact(c) => c,
        _ => unreachable!(),
    };
    for p in 0..v.p_len {
        for q in 0..v.q_len {
            let sub = v.get(p, q);
            if sub.is_zero() {
                continue;
            }
            let c = p * (len + 1) + p + q;
            if counts[c] < *sub {
                return Err(Error::consistency(format!(
                    "negative polar enumerator entry at N = {len}, i = {i}, (w, d) = ({p}, {})",
                    p + q
                )));
            }
            counts[c] -= sub;
        }
    }
    Iowef::from_counts(len, i, Mode::Systematic, Counts::Exact(counts))
}

/// Polar enumerators for every channel from a complete list of 4-split spectra.
pub fn polar_iowefs(splits: &[FourSplitSpectrum]) -> Result<Vec<Iowef>> {
    (0..splits.len())
        .into_par_iter()
        .map(|j| polar_iowef_from_splits(&splits[j], splits.get(j + 1)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::oracle::{brute_force_subcode, Budget};

    fn oracle(len: usize, i: usize) -> FourSplitSpectrum {
        brute_force_subcode(len, i, &Budget::default())
            .unwrap()
            .four_split
    }

    #[test]
    fn lifts_match_enumeration() {
        for half in [2usize, 4, 8] {
            let len = 2 * half;
            for i in 2..=half {
                assert_eq!(lift_upper(&oracle(half, i)), oracle(len, half + i));
            }
            assert_eq!(lift_middle(&oracle(half, 1)), oracle(len, half + 1));
            assert_eq!(full_space(len), oracle(len, 1));
        }
    }

    #[test]
    fn macwilliams_matches_enumeration() {
        for len in [4usize, 8, 16] {
            for j in 2..=len {
                let got = macwilliams_4split(&oracle(len, len + 2 - j), j).unwrap();
                assert_eq!(got, oracle(len, j), "N = {len}, j = {j}");
            }
        }
    }

    #[test]
    fn macwilliams_is_an_involution() {
        let len = 8;
        for j in 2..=len {
            let dual = oracle(len, len + 2 - j);
            let there = macwilliams_4split(&dual, j).unwrap();
            let back = macwilliams_4split(&there, len + 2 - j).unwrap();
            assert_eq!(back, dual);
        }
    }

    #[test]
    fn macwilliams_rejects_wrong_dual() {
        assert!(macwilliams_4split(&oracle(8, 3), 3).is_err());
        assert!(macwilliams_4split(&oracle(8, 3), 1).is_err());
    }

    #[test]
    fn macwilliams_flags_inconsistent_input() {
        let mut bad = oracle(8, 6);
        bad.data[1] += 1u32;
        assert!(matches!(
            macwilliams_4split(&bad, 4),
            Err(Error::Consistency(_))
        ));
    }

    #[test]
    fn polar_iowefs_match_enumeration() {
        let len = 16;
        let splits: Vec<_> = (1..=len).map(|i| oracle(len, i)).collect();
        let got = polar_iowefs(&splits).unwrap();
        for (i, a) in (1..=len).zip(&got) {
            let t = brute_force_subcode(len, i, &Budget::default()).unwrap();
            assert_eq!(a, t.polar(Mode::Systematic));
            assert_eq!(&subcode_iowef(&splits[i - 1]), t.subcode(Mode::Systematic));
            splits[i - 1].check_invariants().unwrap();
        }
        let v = two_split(&splits[5]);
        assert_eq!(v.total(), BigUint::one() << (len - 6 + 1));
    }
}
