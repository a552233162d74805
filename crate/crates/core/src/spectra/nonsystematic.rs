//! Non-systematic enumerators by length doubling.
//!
//! Channels `j > N` of the doubled code repeat a length-`N` codeword, so
//! their enumerators follow exactly. Channels `j ≤ N` combine `a ∈ 𝔻_N^{(j)}`
//! with an independent `b ∈ ℂ_N^{(1)}` into `(a⊕b, b)`; the overlap `t` of
//! the two supports is modelled as hypergeometric, which makes the result an
//! approximation. Weight `d₁+2d₂−2t` is assigned to each combination.

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::numeric::{binomial_row, log_add_exp, LnFactorial};
use super::oracle::{brute_force_subcode, Budget};
use super::{Counts, Iowef, Mode};
use crate::error::{Error, Result};
use crate::polar::{log2_exact, row_weight};

/// Output weight assigned to a pair with `t` overlapping ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum OverlapRule {
    /// `d₁ + 2d₂ − 2t`, the weight of `(a⊕b, b)`.
    #[default]
    Cancelling,
    /// `d₁ + 2d₂` regardless of overlap. Terms heavier than `2N` are dropped.
    Literal,
}

impl OverlapRule {
    pub fn tag(self) -> &'static str {
        match self {
            OverlapRule::Cancelling => "cancelling",
            OverlapRule::Literal => "literal",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "cancelling" => Some(OverlapRule::Cancelling),
            "literal" => Some(OverlapRule::Literal),
            _ => None,
        }
    }

    #[inline]
    fn extra_weight(self, d2: usize, t: usize) -> usize {
        match self {
            OverlapRule::Cancelling => 2 * (d2 - t),
            OverlapRule::Literal => 2 * d2,
        }
    }
}

/// Polar enumerators of `𝔻^{(i)}` and subcode enumerators of `ℂ^{(i)}`, index `i` at `i−1`.
#[derive(Clone, Debug, PartialEq)]
pub struct NonsystematicLevel {
    pub len: usize,
    pub base_len: usize,
    pub rule: OverlapRule,
    pub iowefs: Vec<Iowef>,
    pub subcodes: Vec<Iowef>,
}

impl NonsystematicLevel {
    pub fn base(len: usize) -> Result<Self> {
        log2_exact(len)?;
        let budget = Budget::default();
        let mut iowefs = Vec::with_capacity(len);
        let mut subcodes = Vec::with_capacity(len);
        for i in 1..=len {
            let t = brute_force_subcode(len, i, &budget)?;
            iowefs.push(t.nsys_polar);
            subcodes.push(t.nsys_subcode);
        }
        Ok(NonsystematicLevel {
            len,
            base_len: len,
            rule: OverlapRule::default(),
            iowefs,
            subcodes,
        })
    }

    pub fn iowef(&self, i: usize) -> &Iowef {
        &self.iowefs[i - 1]
    }

    pub fn is_exact(&self, i: usize) -> bool {
        self.iowefs[i - 1].is_exact()
    }

    /// Row `w = N−i+1` holds exactly one word, of weight `2^{popcount(i−1)}`.
    pub fn check_max_input_row(&self) -> Result<()> {
        for a in &self.iowefs {
            let i = a.index();
            let w = a.w_max();
            let rw = row_weight(i, self.len)?;
            for d in 0..=self.len {
                let x = a.ln_count(w, d);
                let ok = if d == rw {
                    x.abs() < 1e-9
                } else {
                    x == f64::NEG_INFINITY
                };
                if !ok {
                    return Err(Error::consistency(format!(
                        "maximum-input-weight row of channel {i} at N = {} has ln count {x} at d = {d}",
                        self.len
                    )));
                }
            }
        }
        Ok(())
    }
}

fn grid_len(len: usize, index: usize) -> usize {
    Iowef::w_len(len, index) * (len + 1)
}

/// `A_{2N}^{(N+i)}(w, 2d) = A_N^{(i)}(w, d)`.
fn repeat(a: &Iowef) -> Iowef {
    let half = a.len();
    let len = 2 * half;
    let index = half + a.index();
    let size = grid_len(len, index);
    let w_len = Iowef::w_len(len, index);
    let map = |w: usize, d: usize| w * (len + 1) + 2 * d;
    let counts = match a.counts() {
        Counts::Exact(v) => {
            let mut out = vec![BigUint::zero(); size];
            for w in 0..w_len {
                for d in 0..=half {
                    out[map(w, d)] = v[w * (half + 1) + d].clone();
                }
            }
            Counts::Exact(out)
        }
        Counts::Approx(v) => {
            let mut out = vec![f64::NEG_INFINITY; size];
            for w in 0..w_len {
                for d in 0..=half {
                    out[map(w, d)] = v[w * (half + 1) + d];
                }
            }
            Counts::Approx(out)
        }
        Counts::Rational(v) => {
            let mut out = vec![BigRational::zero(); size];
            for w in 0..w_len {
                for d in 0..=half {
                    out[map(w, d)] = v[w * (half + 1) + d].clone();
                }
            }
            Counts::Rational(out)
        }
    };
    Iowef::from_counts(len, index, Mode::NonSystematic, counts).unwrap()
}

/// Replaces row `w = N−i+1` by its single known word.
fn revise_max_row(a: &mut Iowef) {
    let len = a.len();
    let i = a.index();
    let w = a.w_max();
    let rw = row_weight(i, len).unwrap();
    let start = w * (len + 1);
    match &mut a.counts {
        Counts::Exact(v) => {
            v[start..start + len + 1]
                .iter_mut()
                .for_each(|c| c.set_zero());
            v[start + rw] = BigUint::one();
        }
        Counts::Approx(v) => {
            v[start..start + len + 1].fill(f64::NEG_INFINITY);
            v[start + rw] = 0.0;
        }
        Counts::Rational(v) => {
            v[start..start + len + 1]
                .iter_mut()
                .for_each(|c| c.set_zero());
            v[start + rw] = BigRational::one();
        }
    }
}

/// `S^{(j)} = S^{(j+1)} + A^{(j)}`; `next` has one fewer input-weight row.
fn accumulate_subcode(next: &Iowef, a: &Iowef) -> Iowef {
    let len = a.len();
    let size = grid_len(len, a.index());
    let next_size = grid_len(len, next.index());
    let counts = match (next.counts(), a.counts()) {
        (Counts::Exact(s), Counts::Exact(v)) => {
            let mut out = v.clone();
            for (o, x) in out[..next_size].iter_mut().zip(s) {
                *o += x;
            }
            Counts::Exact(out)
        }
        (Counts::Approx(_), _) | (_, Counts::Approx(_)) => {
            let mut out = vec![f64::NEG_INFINITY; size];
            for (c, o) in out.iter_mut().enumerate() {
                let (w, d) = (c / (len + 1), c % (len + 1));
                let mut x = a.ln_count(w, d);
                if c < next_size {
                    x = log_add_exp(x, next.ln_count(w, d));
                }
                *o = x;
            }
            Counts::Approx(out)
        }
        (s, v) => {
            let s = rationals(s);
            let mut out = rationals(v);
            for (o, x) in out[..next_size].iter_mut().zip(s) {
                *o += x;
            }
            Counts::Rational(out)
        }
    };
    Iowef::from_counts(len, a.index(), Mode::NonSystematic, counts).unwrap()
}

fn rationals(c: &Counts) -> Vec<BigRational> {
    match c {
        Counts::Exact(v) => v
            .iter()
            .map(|x| BigRational::from_integer(x.clone().into()))
            .collect(),
        Counts::Rational(v) => v.clone(),
        Counts::Approx(_) => panic!("log-domain counts have no rational form"),
    }
}

fn finish(
    len: usize,
    base_len: usize,
    rule: OverlapRule,
    iowefs: Vec<Iowef>,
) -> NonsystematicLevel {
    let mut seed = Iowef::zeros(len, len, Mode::NonSystematic);
    let (c0, c1) = (seed.cell(0, 0), seed.cell(1, len));
    seed.exact_mut()[c0] = BigUint::one();
    seed.exact_mut()[c1] = BigUint::one();
    let mut subcodes = vec![seed];
    for j in (1..len).rev() {
        let next = subcodes.last().unwrap();
        subcodes.push(accumulate_subcode(next, &iowefs[j - 1]));
    }
    subcodes.reverse();
    NonsystematicLevel {
        len,
        base_len,
        rule,
        iowefs,
        subcodes,
    }
}

/// Combination kernel `B_{d₁}(w₂, e) = Σ S_N^{(1)}(w₂, d₂)·H(t | d₁, d₂)` over pairs with
/// extra weight `e`, stored per `(d₁, e)` as a scale `ln max` and a linear row over `w₂`.
struct Kernel {
    half: usize,
    scale: Vec<f64>,
    lin: Vec<f64>,
}

impl Kernel {
    fn e_len(&self) -> usize {
        2 * self.half + 1
    }

    fn w_len(&self) -> usize {
        self.half + 1
    }

    fn row(&self, d1: usize, e: usize) -> &[f64] {
        let w = self.w_len();
        let c = (d1 * self.e_len() + e) * w;
        &self.lin[c..c + w]
    }

    fn new(s1: &Iowef, rule: OverlapRule) -> Kernel {
        let half = s1.len();
        let e_len = 2 * half + 1;
        let w_len = half + 1;
        let lf = LnFactorial::new(half);
        let ln_s: Vec<f64> = (0..w_len)
            .flat_map(|w| (0..=half).map(move |d| (w, d)))
            .map(|(w, d)| s1.ln_count(w, d))
            .collect();
        let live_d2: Vec<usize> = (0..=half)
            .filter(|&d2| (0..w_len).any(|w| ln_s[w * (half + 1) + d2] > f64::NEG_INFINITY))
            .collect();

        let per_d1: Vec<(Vec<f64>, Vec<f64>)> = (0..=half)
            .into_par_iter()
            .map(|d1| {
                let mut ln_b = vec![f64::NEG_INFINITY; e_len * w_len];
                for &d2 in &live_d2 {
                    let lo = (d1 + d2).saturating_sub(half);
                    for t in lo..=d1.min(d2) {
                        let ln_h = lf.ln_binomial(d2, t) + lf.ln_binomial(half - d2, d1 - t)
                            - lf.ln_binomial(half, d1);
                        let e = rule.extra_weight(d2, t);
                        if e >= e_len {
                            continue;
                        }
                        let row = &mut ln_b[e * w_len..(e + 1) * w_len];
                        for (w2, slot) in row.iter_mut().enumerate() {
                            let s = ln_s[w2 * (half + 1) + d2];
                            if s > f64::NEG_INFINITY {
                                *slot = log_add_exp(*slot, s + ln_h);
                            }
                        }
                    }
                }
                let mut scale = vec![f64::NEG_INFINITY; e_len];
                let mut lin = vec![0.0; e_len * w_len];
                for e in 0..e_len {
                    let row = &ln_b[e * w_len..(e + 1) * w_len];
                    let m = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    scale[e] = m;
                    if m > f64::NEG_INFINITY {
                        for (o, &x) in lin[e * w_len..(e + 1) * w_len].iter_mut().zip(row) {
                            *o = (x - m).exp();
                        }
                    }
                }
                (scale, lin)
            })
            .collect();

        let mut scale = Vec::with_capacity(w_len * e_len);
        let mut lin = Vec::with_capacity(w_len * e_len * w_len);
        for (s, l) in per_d1 {
            scale.extend(s);
            lin.extend(l);
        }
        Kernel { half, scale, lin }
    }
}

/// Approximate enumerator of channel `j ≤ N` at `2N` in the log domain.
///
/// Contributions to one output weight `d` are summed linearly after scaling by
/// the largest contribution to that `d`; anything below `1e-300` of it is dropped.
fn combine_float(a: &Iowef, kernel: &Kernel) -> Iowef {
    let half = a.len();
    let len = 2 * half;
    let j = a.index();
    let w1_len = a.w_max() + 1;
    let out_w_len = Iowef::w_len(len, j);
    let e_len = kernel.e_len();

    let mut a_scale = vec![f64::NEG_INFINITY; half + 1];
    let mut a_lin = vec![0.0; (half + 1) * w1_len];
    for d1 in 0..=half {
        let col: Vec<f64> = (0..w1_len).map(|w| a.ln_count(w, d1)).collect();
        let m = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        a_scale[d1] = m;
        if m > f64::NEG_INFINITY {
            for (w, x) in col.into_iter().enumerate() {
                a_lin[d1 * w1_len + w] = (x - m).exp();
            }
        }
    }

    let mut d_scale = vec![f64::NEG_INFINITY; len + 1];
    for d1 in 0..=half {
        if a_scale[d1] == f64::NEG_INFINITY {
            continue;
        }
        for e in 0..e_len.min(len + 1 - d1) {
            let s = a_scale[d1] + kernel.scale[d1 * e_len + e];
            if s > d_scale[d1 + e] {
                d_scale[d1 + e] = s;
            }
        }
    }

    let mut acc = vec![0.0f64; (len + 1) * out_w_len];
    for d1 in 0..=half {
        if a_scale[d1] == f64::NEG_INFINITY {
            continue;
        }
        let a_col = &a_lin[d1 * w1_len..(d1 + 1) * w1_len];
        for e in 0..e_len.min(len + 1 - d1) {
            let ks = kernel.scale[d1 * e_len + e];
            if ks == f64::NEG_INFINITY {
                continue;
            }
            let d = d1 + e;
            let factor = (a_scale[d1] + ks - d_scale[d]).exp();
            if factor < 1e-300 {
                continue;
            }
            let b_row = kernel.row(d1, e);
            let out = &mut acc[d * out_w_len..(d + 1) * out_w_len];
            for (w1, &av) in a_col.iter().enumerate() {
                if av == 0.0 {
                    continue;
                }
                let coef = factor * av;
                for (o, &bv) in out[w1..w1 + b_row.len()].iter_mut().zip(b_row) {
                    *o += coef * bv;
                }
            }
        }
    }

    let mut counts = vec![f64::NEG_INFINITY; out_w_len * (len + 1)];
    for d in 0..=len {
        for w in 0..out_w_len {
            let v = acc[d * out_w_len + w];
            if v > 0.0 {
                counts[w * (len + 1) + d] = v.ln() + d_scale[d];
            }
        }
    }
    let mut out = Iowef::from_counts(len, j, Mode::NonSystematic, Counts::Approx(counts)).unwrap();
    revise_max_row(&mut out);
    out
}

fn check_input(level: &NonsystematicLevel) -> Result<()> {
    if level.iowefs.len() != level.len || level.subcodes.len() != level.len {
        return Err(Error::invalid("incomplete non-systematic level"));
    }
    Ok(())
}

/// One doubling step with log-domain approximate channels.
pub fn nonsystematic_doubling(
    level: &NonsystematicLevel,
    rule: OverlapRule,
) -> Result<NonsystematicLevel> {
    check_input(level)?;
    let half = level.len;
    let kernel = Kernel::new(&level.subcodes[0], rule);
    let mut iowefs: Vec<Iowef> = level
        .iowefs
        .par_iter()
        .map(|a| combine_float(a, &kernel))
        .collect();
    iowefs.extend(level.iowefs.iter().map(repeat));
    debug_assert_eq!(iowefs.len(), 2 * half);
    Ok(finish(2 * half, level.base_len, rule, iowefs))
}

/// Numerators over a common denominator.
fn common_denominator(c: &Counts) -> (Vec<BigUint>, BigUint) {
    match c {
        Counts::Exact(v) => (v.clone(), BigUint::one()),
        Counts::Rational(v) => {
            let den = v
                .iter()
                .fold(BigUint::one(), |acc, x| acc.lcm(x.denom().magnitude()));
            let nums = v
                .iter()
                .map(|x| x.numer().magnitude() * (&den / x.denom().magnitude()))
                .collect();
            (nums, den)
        }
        Counts::Approx(_) => panic!("log-domain counts have no rational form"),
    }
}

/// One doubling step carried out in exact rational arithmetic.
///
/// The approximation is the same as in [`nonsystematic_doubling`]; only the
/// floating-point rounding is removed. Intended for `N ≤ 64`.
pub fn nonsystematic_doubling_rational(
    level: &NonsystematicLevel,
    rule: OverlapRule,
) -> Result<NonsystematicLevel> {
    check_input(level)?;
    if level
        .iowefs
        .iter()
        .any(|a| matches!(a.counts(), Counts::Approx(_)))
        || matches!(level.subcodes[0].counts(), Counts::Approx(_))
    {
        return Err(Error::invalid(
            "rational doubling needs exact or rational input",
        ));
    }
    let half = level.len;
    let len = 2 * half;
    let e_len = len + 1;
    let w2_len = half + 1;

    let (s_num, s_den) = common_denominator(level.subcodes[0].counts());
    let binom: Vec<Vec<BigUint>> = (0..=half).map(binomial_row).collect();
    let lcm_all = binom[half].iter().fold(BigUint::one(), |acc, c| acc.lcm(c));

    // B'_{d1}(w2, e) = Σ S_num(w2, d2)·C(d2, t)·C(N−d2, d1−t)
    let kernel: Vec<Vec<BigUint>> = (0..=half)
        .into_par_iter()
        .map(|d1| {
            let mut b = vec![BigUint::zero(); e_len * w2_len];
            for d2 in 0..=half {
                let lo = (d1 + d2).saturating_sub(half);
                for t in lo..=d1.min(d2) {
                    let h = &binom[d2][t] * &binom[half - d2][d1 - t];
                    let e = rule.extra_weight(d2, t);
                    if e >= e_len {
                        continue;
                    }
                    for w2 in 0..w2_len {
                        let s = &s_num[w2 * (half + 1) + d2];
                        if !s.is_zero() {
                            b[e * w2_len + w2] += s * &h;
                        }
                    }
                }
            }
            b
        })
        .collect();
    let mult: Vec<BigUint> = (0..=half).map(|d1| &lcm_all / &binom[half][d1]).collect();

    let lower: Vec<Iowef> = level
        .iowefs
        .par_iter()
        .map(|a| {
            let j = a.index();
            let (a_num, a_den) = common_denominator(a.counts());
            let w1_len = a.w_max() + 1;
            let out_w_len = Iowef::w_len(len, j);
            let mut num = vec![BigUint::zero(); out_w_len * (len + 1)];
            for d1 in 0..=half {
                let b = &kernel[d1];
                for w1 in 0..w1_len {
                    let av = &a_num[w1 * (half + 1) + d1];
                    if av.is_zero() {
                        continue;
                    }
                    let coef = av * &mult[d1];
                    for e in 0..e_len.min(len + 1 - d1) {
                        for w2 in 0..w2_len {
                            let bv = &b[e * w2_len + w2];
                            if !bv.is_zero() {
                                num[(w1 + w2) * (len + 1) + d1 + e] += &coef * bv;
                            }
                        }
                    }
                }
            }
            let den: num_bigint::BigInt = (&a_den * &s_den * &lcm_all).into();
            let counts = num
                .into_iter()
                .map(|x| BigRational::new(x.into(), den.clone()))
                .collect();
            let mut out =
                Iowef::from_counts(len, j, Mode::NonSystematic, Counts::Rational(counts)).unwrap();
            revise_max_row(&mut out);
            out
        })
        .collect();
    let mut iowefs = lower;
    iowefs.extend(level.iowefs.iter().map(repeat));
    Ok(finish(len, level.base_len, rule, iowefs))
}

fn drive(
    target: usize,
    base: usize,
    mut step: impl FnMut(&NonsystematicLevel) -> Result<NonsystematicLevel>,
    mut inspect: impl FnMut(&NonsystematicLevel) -> Result<()>,
) -> Result<NonsystematicLevel> {
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
    let mut level = NonsystematicLevel::base(base)?;
    inspect(&level)?;
    while level.len < target {
        level = step(&level)?;
        inspect(&level)?;
    }
    Ok(level)
}

/// Non-systematic enumerators at `target` from brute force at `base`.
pub fn polar_iowef_nonsystematic(
    target: usize,
    base: usize,
    rule: OverlapRule,
) -> Result<NonsystematicLevel> {
    polar_iowef_nonsystematic_with(target, base, rule, |_| Ok(()))
}

/// As [`polar_iowef_nonsystematic`], calling `inspect` on every level produced.
pub fn polar_iowef_nonsystematic_with(
    target: usize,
    base: usize,
    rule: OverlapRule,
    inspect: impl FnMut(&NonsystematicLevel) -> Result<()>,
) -> Result<NonsystematicLevel> {
    let mut level = drive(target, base, |l| nonsystematic_doubling(l, rule), inspect)?;
    level.rule = rule;
    Ok(level)
}

/// Rational-arithmetic variant of [`polar_iowef_nonsystematic`].
pub fn polar_iowef_nonsystematic_rational(
    target: usize,
    base: usize,
    rule: OverlapRule,
) -> Result<NonsystematicLevel> {
    if target > 64 {
        return Err(Error::invalid("rational mode is limited to N ≤ 64"));
    }
    let mut level = drive(
        target,
        base,
        |l| nonsystematic_doubling_rational(l, rule),
        |_| Ok(()),
    )?;
    level.rule = rule;
    Ok(level)
}
