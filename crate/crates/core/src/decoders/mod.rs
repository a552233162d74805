//! Successive cancellation decoding and its list variant.
//!
//! LLRs are positive when bit 0 is more likely. The decoding tree follows
//! `x = (u₁G ⊕ u₂G, u₂G)`: the first half of the source word is decoded
//! from the check-node combination of both codeword halves, the second half
//! from the variable-node combination given the re-encoded first half.

mod sc;
mod scl;

pub use sc::{sc_decode, ScDecoder};
pub use scl::{scl_decode, SclDecoder};

use crate::polar::BitVector;

/// Channel LLR magnitudes are clamped to this.
pub const LLR_CLAMP: f64 = 40.0;

#[derive(Clone, Debug, PartialEq)]
pub struct LlrVector {
    values: Vec<f64>,
}

impl LlrVector {
    /// Clamps every value to `[−40, 40]`; NaN is mapped to 0.
    pub fn new(values: Vec<f64>) -> Self {
        LlrVector {
            values: values
                .into_iter()
                .map(|v| {
                    if v.is_nan() {
                        0.0
                    } else {
                        v.clamp(-LLR_CLAMP, LLR_CLAMP)
                    }
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }
}

/// Check-node update rule.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CheckNode {
    /// `2·atanh(tanh(a/2)·tanh(b/2))`.
    #[default]
    Exact,
    MinSum,
}

impl CheckNode {
    pub fn tag(self) -> &'static str {
        match self {
            CheckNode::Exact => "exact",
            CheckNode::MinSum => "min-sum",
        }
    }

    #[inline]
    pub fn f(self, a: f64, b: f64) -> f64 {
        let m = a.abs().min(b.abs());
        let signed = if (a < 0.0) != (b < 0.0) { -m } else { m };
        match self {
            CheckNode::MinSum => signed,
            CheckNode::Exact => {
                // ln(1 + e^{-|a+b|}) − ln(1 + e^{-|a−b|}) as a single log
                let p = (-(a + b).abs()).exp();
                let q = (-(a - b).abs()).exp();
                signed + ((p - q) / (1.0 + q)).ln_1p()
            }
        }
    }
}

#[inline]
pub fn g(a: f64, b: f64, u: u8) -> f64 {
    if u == 0 {
        b + a
    } else {
        b - a
    }
}

/// Hard decision: bit 0 unless the LLR is negative.
#[inline]
pub fn hard_decision(llr: f64) -> u8 {
    (llr < 0.0) as u8
}

/// `ln(1 + e^{−(1−2u)·llr})`, the path-metric increment for deciding `u`.
#[inline]
pub fn path_penalty(llr: f64, u: u8) -> f64 {
    let z = if u == 0 { llr } else { -llr };
    if z > 40.0 {
        (-z).exp()
    } else if z >= 0.0 {
        (-z).exp().ln_1p()
    } else {
        -z + z.exp().ln_1p()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeResult {
    pub u_hat: BitVector,
    pub b_hat: BitVector,
    /// Accumulated path metric of the chosen path.
    pub path_metric: f64,
}
