//! Gaussian approximation of SC decoding on the BI-AWGN channel.
//!
//! Mean LLRs evolve as `m ↦ 2m` on the upper branch and
//! `m ↦ φ⁻¹(1 − (1 − φ(m))²)` on the lower branch.

use super::{Metric, Order, ReliabilityVector};
use crate::bounds::{q_function, SnrPoint};
use crate::error::Result;
use crate::polar::log2_exact;

const ALPHA: f64 = -0.4527;
const BETA: f64 = 0.86;
const GAMMA: f64 = 0.0218;
const SWITCH: f64 = 10.0;

/// `ln φ(x)` for `x ≥ 0` under the two-segment approximation.
fn ln_phi(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x < SWITCH {
        ALPHA * x.powf(BETA) + GAMMA
    } else {
        0.5 * (std::f64::consts::PI / x).ln() - x / 4.0 + (1.0 - 10.0 / (7.0 * x)).ln()
    }
}

pub fn phi(x: f64) -> f64 {
    ln_phi(x).exp()
}

/// Inverse of `φ` given `ln y`, by bisection.
fn phi_inverse_ln(ln_y: f64) -> f64 {
    if ln_y >= 0.0 {
        return 0.0;
    }
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    while ln_phi(hi) > ln_y {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if ln_phi(mid) > ln_y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn phi_inverse(y: f64) -> f64 {
    phi_inverse_ln(y.ln())
}

fn check_node(m: f64) -> f64 {
    // 1 − (1 − p)² = p(2 − p), kept in the log domain
    let ln_p = ln_phi(m);
    let p = ln_p.exp();
    phi_inverse_ln(ln_p + (2.0 - p).ln())
}

/// Mean LLR of every bit-channel; larger means more reliable.
pub fn ga_reliability(len: usize, snr: SnrPoint) -> Result<ReliabilityVector> {
    log2_exact(len)?;
    let mut m = vec![4.0 * snr.es_n0];
    while m.len() < len {
        let mut next = Vec::with_capacity(2 * m.len());
        for &x in &m {
            next.push(check_node(x));
            next.push(2.0 * x);
        }
        m = next;
    }
    Ok(ReliabilityVector {
        len,
        metric_name: Metric::Ga.tag().to_string(),
        design_snr: Some(snr),
        values: m,
        order: Order::HigherIsBetter,
    })
}

/// Error probability proxy `Q(√(m/2))` of a channel with mean LLR `m`.
pub fn ga_error_proxy(mean_llr: f64) -> f64 {
    q_function((mean_llr / 2.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_channel_mean() {
        let snr = SnrPoint::from_db(1.5).unwrap();
        let v = ga_reliability(1, snr).unwrap();
        assert!((v.values[0] - 4.0 * snr.es_n0).abs() < 1e-15);
    }

    #[test]
    fn two_channels_polarize() {
        let v = ga_reliability(2, SnrPoint::from_db(0.0).unwrap()).unwrap();
        assert!(v.values[0] < 4.0 && v.values[1] == 8.0);
    }

    #[test]
    fn phi_inverse_round_trip() {
        for x in [0.2, 0.5, 3.0, 9.9, 10.5, 40.0, 400.0, 4000.0] {
            let back = phi_inverse_ln(ln_phi(x));
            assert!(
                (back - x).abs() < 1e-9 * x.max(1.0),
                "x = {x}, back = {back}"
            );
        }
        assert_eq!(phi(0.0), 1.0);
    }

    #[test]
    fn extremes_ranked_correctly() {
        let v = ga_reliability(32, SnrPoint::from_db(2.0).unwrap()).unwrap();
        let r = v.ranking().unwrap();
        assert_eq!(r[0], 32);
        assert_eq!(r[31], 1);
        for &m in &v.values {
            assert!(m.is_finite() && m > 0.0);
        }
    }
}
