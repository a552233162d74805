use std::cmp::Ordering;

use super::{g, hard_decision, path_penalty, CheckNode, DecodeResult, LlrVector};
use crate::error::{Error, Result};
use crate::polar::{BitVector, CodeSpec};

/// List decoder keeping the `list_size` best paths after every information bit.
///
/// Candidates are ranked by path metric, then by agreement with the hard
/// decision, then by parent path index, then by bit value. With
/// `list_size = 1` this reproduces SC decoding exactly.
#[derive(Clone, Debug)]
pub struct SclDecoder {
    spec: CodeSpec,
    check: CheckNode,
    list_size: usize,
}

/// Paths leaving a subtree.
struct Survivors {
    /// Index of the entering path each survivor descends from.
    origin: Vec<usize>,
    metric: Vec<f64>,
    /// Source bits of the subtree, `len` per survivor.
    u: Vec<u8>,
    /// Re-encoded subtree word, `len` per survivor.
    x: Vec<u8>,
}

impl SclDecoder {
    pub fn new(spec: &CodeSpec, list_size: usize, check: CheckNode) -> Result<Self> {
        if list_size == 0 {
            return Err(Error::invalid("list size must be at least 1"));
        }
        Ok(SclDecoder {
            spec: spec.clone(),
            check,
            list_size,
        })
    }

    pub fn list_size(&self) -> usize {
        self.list_size
    }

    pub fn decode(&mut self, llr: &LlrVector) -> Result<DecodeResult> {
        let len = self.spec.len();
        if llr.len() != len {
            return Err(Error::invalid(format!(
                "{} LLRs for a length-{len} code",
                llr.len()
            )));
        }
        let s = self.node(llr.as_slice(), &[0.0], self.spec.frozen_mask());
        let mut best = 0;
        for p in 1..s.metric.len() {
            if s.metric[p] < s.metric[best] {
                best = p;
            }
        }
        let u_hat = BitVector::from_bits(&s.u[best * len..(best + 1) * len]).expect("binary");
        let b_hat = self.spec.extract_info(&u_hat);
        Ok(DecodeResult {
            u_hat,
            b_hat,
            path_metric: s.metric[best],
        })
    }

    /// `llr` holds one block of `frozen.len()` LLRs per entering path.
    fn node(&self, llr: &[f64], metric: &[f64], frozen: &[bool]) -> Survivors {
        let len = frozen.len();
        let paths = metric.len();
        if len == 1 {
            return self.leaf(llr, metric, frozen[0]);
        }
        let h = len / 2;
        let mut child = vec![0.0; paths * h];
        for p in 0..paths {
            let l = &llr[p * len..(p + 1) * len];
            for j in 0..h {
                child[p * h + j] = self.check.f(l[j], l[h + j]);
            }
        }
        let left = self.node(&child, metric, &frozen[..h]);

        let mid = left.metric.len();
        let mut child = vec![0.0; mid * h];
        for s in 0..mid {
            let l = &llr[left.origin[s] * len..(left.origin[s] + 1) * len];
            let a = &left.x[s * h..(s + 1) * h];
            for j in 0..h {
                child[s * h + j] = g(l[j], l[h + j], a[j]);
            }
        }
        let right = self.node(&child, &left.metric, &frozen[h..]);

        let out = right.metric.len();
        let mut u = vec![0u8; out * len];
        let mut x = vec![0u8; out * len];
        let mut origin = Vec::with_capacity(out);
        for s in 0..out {
            let via = right.origin[s];
            origin.push(left.origin[via]);
            let (ul, ur) = (
                &left.u[via * h..(via + 1) * h],
                &right.u[s * h..(s + 1) * h],
            );
            let (xl, xr) = (
                &left.x[via * h..(via + 1) * h],
                &right.x[s * h..(s + 1) * h],
            );
            let uo = &mut u[s * len..(s + 1) * len];
            uo[..h].copy_from_slice(ul);
            uo[h..].copy_from_slice(ur);
            let xo = &mut x[s * len..(s + 1) * len];
            for j in 0..h {
                xo[j] = xl[j] ^ xr[j];
                xo[h + j] = xr[j];
            }
        }
        Survivors {
            origin,
            metric: right.metric,
            u,
            x,
        }
    }

    fn leaf(&self, llr: &[f64], metric: &[f64], frozen: bool) -> Survivors {
        let paths = metric.len();
        if frozen {
            return Survivors {
                origin: (0..paths).collect(),
                metric: (0..paths)
                    .map(|p| metric[p] + path_penalty(llr[p], 0))
                    .collect(),
                u: vec![0; paths],
                x: vec![0; paths],
            };
        }
        // (metric, disagrees with hard decision, parent, bit)
        let mut cand: Vec<(f64, bool, usize, u8)> = Vec::with_capacity(2 * paths);
        for p in 0..paths {
            let hd = hard_decision(llr[p]);
            for bit in 0..2u8 {
                cand.push((metric[p] + path_penalty(llr[p], bit), bit != hd, p, bit));
            }
        }
        if cand.len() > self.list_size {
            cand.sort_by(|a, b| {
                a.0.partial_cmp(&b.0)
                    .unwrap_or(Ordering::Equal)
                    .then(a.1.cmp(&b.1))
                    .then(a.2.cmp(&b.2))
                    .then(a.3.cmp(&b.3))
            });
            cand.truncate(self.list_size);
        }
        Survivors {
            origin: cand.iter().map(|c| c.2).collect(),
            metric: cand.iter().map(|c| c.0).collect(),
            u: cand.iter().map(|c| c.3).collect(),
            x: cand.iter().map(|c| c.3).collect(),
        }
    }
}

/// One-shot SCL decoding with the exact check-node rule.
pub fn scl_decode(llr: &LlrVector, spec: &CodeSpec, list_size: usize) -> Result<DecodeResult> {
    SclDecoder::new(spec, list_size, CheckNode::Exact)?.decode(llr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoders::sc_decode;

    /// Deterministic pseudo-noise without pulling in the simulator.
    fn llrs(seed: u64, len: usize, spread: f64) -> LlrVector {
        let mut s = seed
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        LlrVector::new(
            (0..len)
                .map(|_| {
                    s = s
                        .wrapping_mul(6364136223846793005)
                        .wrapping_add(1442695040888963407);
                    ((s >> 11) as f64 / (1u64 << 53) as f64 - 0.3) * spread
                })
                .collect(),
        )
    }

    #[test]
    fn list_of_one_is_sc() {
        let spec = CodeSpec::new(16, vec![6, 7, 8, 10, 11, 12, 13, 14, 15, 16], false).unwrap();
        let mut d = SclDecoder::new(&spec, 1, CheckNode::Exact).unwrap();
        for seed in 0..300 {
            let l = llrs(seed, 16, 8.0);
            assert_eq!(d.decode(&l).unwrap(), sc_decode(&l, &spec).unwrap());
        }
    }

    #[test]
    fn full_list_is_ml() {
        let spec = CodeSpec::new(8, vec![4, 6, 7, 8], true).unwrap();
        let words: Vec<(BitVector, BitVector)> = (0u8..16)
            .map(|v| {
                let b = BitVector::from_bits(&[(v >> 3) & 1, (v >> 2) & 1, (v >> 1) & 1, v & 1])
                    .unwrap();
                (b.clone(), spec.encode(&b).unwrap())
            })
            .collect();
        let mut d = SclDecoder::new(&spec, 16, CheckNode::Exact).unwrap();
        for seed in 0..300 {
            let l = llrs(seed, 8, 6.0);
            let corr = |x: &BitVector| -> f64 {
                x.as_slice()
                    .iter()
                    .zip(l.as_slice())
                    .map(|(&b, &v)| if b == 0 { v } else { -v })
                    .sum()
            };
            let best = words
                .iter()
                .max_by(|a, b| corr(&a.1).partial_cmp(&corr(&b.1)).unwrap())
                .unwrap();
            assert_eq!(d.decode(&l).unwrap().b_hat, best.0, "seed {seed}");
        }
    }

    #[test]
    fn zero_list_rejected() {
        let spec = CodeSpec::new(4, vec![4], false).unwrap();
        assert!(SclDecoder::new(&spec, 0, CheckNode::Exact).is_err());
    }
}
