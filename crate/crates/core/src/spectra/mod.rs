//! Weight spectra of polar subcodes.
//!
//! For bit-channel `i` of a length-`N` code, `ℂ^{(i)}` is the span of rows
//! `i..=N` of `G_N` and `𝔻^{(i)}` is the coset `g_i + ℂ^{(i+1)}`.
//! Counts are indexed by input weight `w` and output weight `d`.

pub mod cache;
pub mod four_split;
pub mod krawtchouk;
pub mod nonsystematic;
pub mod numeric;
pub mod oracle;
pub mod systematic;

use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use numeric::{ln_biguint, ln_rational, log_sum_exp};

pub use four_split::{FourSplitSpectrum, TwoSplitSpectrum};
pub use krawtchouk::{krawtchouk, KrawtchoukMatrix};
pub use nonsystematic::{
    nonsystematic_doubling, nonsystematic_doubling_rational, polar_iowef_nonsystematic,
    polar_iowef_nonsystematic_rational, polar_iowef_nonsystematic_with, NonsystematicLevel,
    OverlapRule,
};
pub use oracle::{brute_force_subcode, Budget, SubcodeTallies};
pub use systematic::{
    polar_iowef_systematic, polar_iowef_systematic_with, systematic_doubling, SystematicLevel,
};

/// Input-weight convention.
///
/// `Systematic` counts the weight of the last `N−i+1` codeword bits;
/// `NonSystematic` counts the weight of `u_i^N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Systematic,
    NonSystematic,
}

impl Mode {
    pub fn tag(self) -> &'static str {
        match self {
            Mode::Systematic => "sys",
            Mode::NonSystematic => "nsys",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Mode> {
        match tag {
            "sys" => Some(Mode::Systematic),
            "nsys" => Some(Mode::NonSystematic),
            _ => None,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Count storage, row-major over `(w, d)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Counts {
    Exact(Vec<BigUint>),
    /// Natural-log magnitudes; `-inf` marks a zero count.
    Approx(Vec<f64>),
    Rational(Vec<BigRational>),
}

/// Input-output weight enumerator of `𝔻^{(i)}` or `ℂ^{(i)}`.
///
/// `w` ranges over `0..=N−i+1` and `d` over `0..=N`.
#[derive(Clone, Debug, PartialEq)]
pub struct Iowef {
    len: usize,
    index: usize,
    mode: Mode,
    counts: Counts,
}

impl Iowef {
    pub fn w_len(len: usize, index: usize) -> usize {
        len - index + 2
    }

    pub fn zeros(len: usize, index: usize, mode: Mode) -> Self {
        let size = Self::w_len(len, index) * (len + 1);
        Iowef {
            len,
            index,
            mode,
            counts: Counts::Exact(vec![BigUint::zero(); size]),
        }
    }

    pub fn from_counts(len: usize, index: usize, mode: Mode, counts: Counts) -> Result<Self> {
        let size = Self::w_len(len, index) * (len + 1);
        let got = match &counts {
            Counts::Exact(v) => v.len(),
            Counts::Approx(v) => v.len(),
            Counts::Rational(v) => v.len(),
        };
        if got != size {
            return Err(Error::invalid(format!(
                "count grid has {got} cells, expected {size}"
            )));
        }
        Ok(Iowef {
            len,
            index,
            mode,
            counts,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn counts(&self) -> &Counts {
        &self.counts
    }

    /// Largest admissible input weight, `N−i+1`.
    pub fn w_max(&self) -> usize {
        self.len - self.index + 1
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.counts, Counts::Exact(_))
    }

    #[inline]
    pub(crate) fn cell(&self, w: usize, d: usize) -> usize {
        w * (self.len + 1) + d
    }

    /// Exact count, `None` outside exact mode.
    pub fn get(&self, w: usize, d: usize) -> Option<&BigUint> {
        match &self.counts {
            Counts::Exact(v) => Some(&v[self.cell(w, d)]),
            _ => None,
        }
    }

    pub(crate) fn exact_mut(&mut self) -> &mut Vec<BigUint> {
        match &mut self.counts {
            Counts::Exact(v) => v,
            _ => panic!("exact counts expected"),
        }
    }

    pub fn ln_count(&self, w: usize, d: usize) -> f64 {
        let c = self.cell(w, d);
        match &self.counts {
            Counts::Exact(v) => ln_biguint(&v[c]),
            Counts::Approx(v) => v[c],
            Counts::Rational(v) => ln_rational(&v[c]),
        }
    }

    /// Nonzero entries as `(w, d, ln count)`, ascending in `w` then `d`.
    pub fn ln_entries(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for w in 0..=self.w_max() {
            for d in 0..=self.len {
                let x = self.ln_count(w, d);
                if x > f64::NEG_INFINITY {
                    out.push((w, d, x));
                }
            }
        }
        out
    }

    /// Nonzero exact entries as `(w, d, count)`.
    pub fn exact_entries(&self) -> Result<Vec<(usize, usize, &BigUint)>> {
        let v = match &self.counts {
            Counts::Exact(v) => v,
            _ => return Err(Error::invalid("exact counts required")),
        };
        let mut out = Vec::new();
        for w in 0..=self.w_max() {
            for d in 0..=self.len {
                let c = &v[self.cell(w, d)];
                if !c.is_zero() {
                    out.push((w, d, c));
                }
            }
        }
        Ok(out)
    }

    pub fn total_exact(&self) -> Option<BigUint> {
        match &self.counts {
            Counts::Exact(v) => Some(v.iter().sum()),
            _ => None,
        }
    }

    /// `ln Σ count` in any representation.
    pub fn ln_total(&self) -> f64 {
        match &self.counts {
            Counts::Exact(v) => ln_biguint(&v.iter().sum()),
            Counts::Approx(v) => log_sum_exp(v),
            Counts::Rational(v) => ln_rational(&v.iter().sum()),
        }
    }

    /// Same counts, converted to log magnitudes.
    pub fn to_approx(&self) -> Iowef {
        let counts = match &self.counts {
            Counts::Exact(v) => Counts::Approx(v.iter().map(ln_biguint).collect()),
            Counts::Approx(v) => Counts::Approx(v.clone()),
            Counts::Rational(v) => Counts::Approx(v.iter().map(ln_rational).collect()),
        };
        Iowef {
            counts,
            ..self.clone()
        }
    }

    /// `Σ_w w·A(w,d)` per output weight, as `f64`.
    pub fn input_weighted_by_d(&self) -> Vec<f64> {
        (0..=self.len)
            .map(|d| {
                (1..=self.w_max())
                    .map(|w| {
                        let x = self.ln_count(w, d);
                        if x == f64::NEG_INFINITY {
                            0.0
                        } else {
                            w as f64 * x.exp()
                        }
                    })
                    .sum()
            })
            .collect()
    }

    /// Largest `ln count` over the grid.
    pub fn ln_max(&self) -> f64 {
        (0..=self.w_max())
            .flat_map(|w| (0..=self.len).map(move |d| (w, d)))
            .map(|(w, d)| self.ln_count(w, d))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Weight distribution of `𝔻^{(i)}`, indexed by `d` in `0..=N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarSpectrum {
    pub len: usize,
    pub index: usize,
    pub counts: Vec<BigUint>,
}

impl PolarSpectrum {
    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// Smallest output weight with a nonzero count.
    pub fn d_min(&self) -> Option<usize> {
        self.counts.iter().position(|c| !c.is_zero())
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (usize, &BigUint)> {
        self.counts.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::INFINITY))
            .collect()
    }
}

/// Marginalizes an exact IOWEF over the input weight.
pub fn extract_polar_spectrum(iowef: &Iowef) -> Result<PolarSpectrum> {
    let v = match &iowef.counts {
        Counts::Exact(v) => v,
        _ => {
            return Err(Error::invalid(
                "polar spectra are only extracted from exact enumerators",
            ))
        }
    };
    let mut counts = vec![BigUint::zero(); iowef.len + 1];
    for w in 0..=iowef.w_max() {
        for (d, c) in counts.iter_mut().enumerate() {
            *c += &v[iowef.cell(w, d)];
        }
    }
    Ok(PolarSpectrum {
        len: iowef.len,
        index: iowef.index,
        counts,
    })
}

/// Exact identity `Σ_w w·A(w,d)·N = d·(N−i+1)·A(d)` for a systematic enumerator.
pub fn check_homogeneity(iowef: &Iowef) -> Result<()> {
    let spectrum = extract_polar_spectrum(iowef)?;
    let n = iowef.len;
    let span = iowef.w_max();
    for d in 0..=n {
        let mut lhs = BigUint::zero();
        for w in 1..=span {
            lhs += iowef.get(w, d).unwrap() * w;
        }
        lhs *= n;
        let rhs = &spectrum.counts[d] * (d * span);
        if lhs != rhs {
            return Err(Error::consistency(format!(
                "homogeneity fails at N = {n}, i = {}, d = {d}",
                iowef.index
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extraction_marginalizes() {
        let mut a = Iowef::zeros(4, 3, Mode::NonSystematic);
        let c1 = a.cell(1, 2);
        let c2 = a.cell(2, 2);
        a.exact_mut()[c1] = BigUint::from(1u32);
        a.exact_mut()[c2] = BigUint::from(1u32);
        let s = extract_polar_spectrum(&a).unwrap();
        assert_eq!(s.counts[2], BigUint::from(2u32));
        assert_eq!(s.total(), BigUint::from(2u32));
        assert_eq!(s.d_min(), Some(2));
        assert!(extract_polar_spectrum(&a.to_approx()).is_err());
    }
}
