use super::{g, hard_decision, path_penalty, CheckNode, DecodeResult, LlrVector};
use crate::error::{Error, Result};
use crate::polar::{BitVector, CodeSpec};

/// Reusable SC decoder holding its scratch buffers.
#[derive(Clone, Debug)]
pub struct ScDecoder {
    spec: CodeSpec,
    check: CheckNode,
    scratch: Vec<f64>,
    u: Vec<u8>,
    x: Vec<u8>,
}

impl ScDecoder {
    pub fn new(spec: &CodeSpec, check: CheckNode) -> Self {
        let len = spec.len();
        ScDecoder {
            spec: spec.clone(),
            check,
            scratch: vec![0.0; len],
            u: vec![0; len],
            x: vec![0; len],
        }
    }

    pub fn decode(&mut self, llr: &LlrVector) -> Result<DecodeResult> {
        if llr.len() != self.spec.len() {
            return Err(Error::invalid(format!(
                "{} LLRs for a length-{} code",
                llr.len(),
                self.spec.len()
            )));
        }
        let mut metric = 0.0;
        node(
            self.check,
            llr.as_slice(),
            self.spec.frozen_mask(),
            &mut self.u,
            &mut self.x,
            &mut self.scratch,
            &mut metric,
        );
        let u_hat = BitVector::from_bits(&self.u).expect("binary decisions");
        let b_hat = self.spec.extract_info(&u_hat);
        Ok(DecodeResult {
            u_hat,
            b_hat,
            path_metric: metric,
        })
    }
}

/// Decodes one subtree; writes source bits to `u`, the re-encoded word to `x`,
/// and adds leaf penalties to `metric` in decoding order.
fn node(
    check: CheckNode,
    llr: &[f64],
    frozen: &[bool],
    u: &mut [u8],
    x: &mut [u8],
    scratch: &mut [f64],
    metric: &mut f64,
) {
    let len = llr.len();
    if len == 1 {
        let bit = if frozen[0] { 0 } else { hard_decision(llr[0]) };
        u[0] = bit;
        x[0] = bit;
        *metric += path_penalty(llr[0], bit);
        return;
    }
    let h = len / 2;
    let (child, rest) = scratch.split_at_mut(h);
    for j in 0..h {
        child[j] = check.f(llr[j], llr[h + j]);
    }
    let (u_left, u_right) = u.split_at_mut(h);
    let (x_left, x_right) = x.split_at_mut(h);
    node(check, child, &frozen[..h], u_left, x_left, rest, metric);
    for j in 0..h {
        child[j] = g(llr[j], llr[h + j], x_left[j]);
    }
    node(check, child, &frozen[h..], u_right, x_right, rest, metric);
    for j in 0..h {
        x_left[j] ^= x_right[j];
    }
}

/// One-shot SC decoding with the exact check-node rule.
pub fn sc_decode(llr: &LlrVector, spec: &CodeSpec) -> Result<DecodeResult> {
    ScDecoder::new(spec, CheckNode::Exact).decode(llr)
}
