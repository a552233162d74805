//! Exact systematic enumerators by repeated length doubling.

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;

use super::four_split::{
    full_space, lift_middle, lift_upper, macwilliams_4split, polar_iowefs, FourSplitSpectrum,
};
use super::oracle::{brute_force_subcode, Budget};
use super::{check_homogeneity, Iowef};
use crate::error::{Error, Result};
use crate::polar::log2_exact;

/// All channels at one codelength: 4-split spectra and polar enumerators, index `i` at `i−1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SystematicLevel {
    pub len: usize,
    pub base_len: usize,
    pub four_splits: Vec<FourSplitSpectrum>,
    pub iowefs: Vec<Iowef>,
}

impl SystematicLevel {
    /// Brute-force starting point.
    pub fn base(len: usize) -> Result<Self> {
        log2_exact(len)?;
        let budget = Budget::default();
        let mut four_splits = Vec::with_capacity(len);
        let mut iowefs = Vec::with_capacity(len);
        for i in 1..=len {
            let t = brute_force_subcode(len, i, &budget)?;
            four_splits.push(t.four_split);
            iowefs.push(t.sys_polar);
        }
        Ok(SystematicLevel {
            len,
            base_len: len,
            four_splits,
            iowefs,
        })
    }

    pub fn iowef(&self, i: usize) -> &Iowef {
        &self.iowefs[i - 1]
    }

    /// Totals, homogeneity, parity and symmetry on every channel.
    pub fn check_invariants(&self) -> Result<()> {
        self.four_splits
            .par_iter()
            .try_for_each(|u| u.check_invariants())?;
        self.iowefs.par_iter().try_for_each(|a| {
            let total = a.total_exact().unwrap();
            if total != BigUint::one() << (self.len - a.index()) {
                return Err(Error::consistency(format!(
                    "polar enumerator total at N = {}, i = {}",
                    self.len,
                    a.index()
                )));
            }
            if a.index() >= 2 {
                for w in 0..=a.w_max() {
                    for d in (1..=self.len).step_by(2) {
                        if a.get(w, d).is_some_and(|c| c.bits() > 0) {
                            return Err(Error::consistency(format!(
                                "odd weight in 𝔻 at N = {}, i = {}",
                                self.len,
                                a.index()
                            )));
                        }
                    }
                }
            }
            check_homogeneity(a)
        })
    }
}

/// One doubling step: every 4-split spectrum and polar enumerator at `2N`.
pub fn systematic_doubling(level: &SystematicLevel) -> Result<SystematicLevel> {
    let half = level.len;
    let len = 2 * half;
    let mut splits: Vec<Option<FourSplitSpectrum>> = vec![None; len];

    for j in (half + 2..=len).rev() {
        splits[j - 1] = Some(lift_upper(&level.four_splits[j - half - 1]));
    }
    splits[half] = Some(lift_middle(&level.four_splits[0]));

    let lower: Vec<FourSplitSpectrum> = (2..=half)
        .into_par_iter()
        .map(|j| macwilliams_4split(splits[len + 1 - j].as_ref().unwrap(), j))
        .collect::<Result<_>>()?;
    for (j, u) in (2..=half).zip(lower) {
        splits[j - 1] = Some(u);
    }
    splits[0] = Some(full_space(len));

    let four_splits: Vec<FourSplitSpectrum> = splits.into_iter().map(Option::unwrap).collect();
    let iowefs = polar_iowefs(&four_splits)?;
    Ok(SystematicLevel {
        len,
        base_len: level.base_len,
        four_splits,
        iowefs,
    })
}

/// Exact systematic enumerators at `target` starting from brute force at `base`.
pub fn polar_iowef_systematic(target: usize, base: usize) -> Result<SystematicLevel> {
    polar_iowef_systematic_with(target, base, |_| Ok(()))
}

/// As [`polar_iowef_systematic`], calling `inspect` on every level produced.
pub fn polar_iowef_systematic_with(
    target: usize,
    base: usize,
    mut inspect: impl FnMut(&SystematicLevel) -> Result<()>,
) -> Result<SystematicLevel> {
    log2_exact(target)?;
    if base != 8 && base != 16 {
        return Err(Error::invalid(format!(
            "base codelength must be 8 or 16, got {base}"
        )));
    }
    if target < base {
        return Err(Error::invalid(format!(
            "target codelength {target} below base {base}"
        )));
    }
    let mut level = SystematicLevel::base(base)?;
    inspect(&level)?;
    while level.len < target {
        level = systematic_doubling(&level)?;
        inspect(&level)?;
    }
    Ok(level)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubling_from_8_matches_enumeration_at_16() {
        let l16 = systematic_doubling(&SystematicLevel::base(8).unwrap()).unwrap();
        let oracle = SystematicLevel::base(16).unwrap();
        assert_eq!(l16.four_splits, oracle.four_splits);
        assert_eq!(l16.iowefs, oracle.iowefs);
        l16.check_invariants().unwrap();
    }

    #[test]
    fn base_equals_target() {
        let a = polar_iowef_systematic(8, 8).unwrap();
        assert_eq!(a, SystematicLevel::base(8).unwrap());
        assert!(polar_iowef_systematic(8, 16).is_err());
        assert!(polar_iowef_systematic(64, 4).is_err());
    }

    #[test]
    fn last_channel_is_all_ones() {
        let l = polar_iowef_systematic(32, 8).unwrap();
        let e = l.iowef(32).exact_entries().unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!((e[0].0, e[0].1), (1, 32));
    }
}
