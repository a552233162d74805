use std::f64::consts::LN_2;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// Natural log of a nonnegative big integer; `-inf` for zero.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 64 {
        return (x.to_u64().unwrap() as f64).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap();
    (top as f64).ln() + shift as f64 * LN_2
}

/// Natural log of a nonnegative rational; `-inf` for zero.
pub fn ln_rational(x: &BigRational) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    assert!(x.numer().sign() == Sign::Plus && x.denom().sign() == Sign::Plus);
    ln_biguint(x.numer().magnitude()) - ln_biguint(x.denom().magnitude())
}

pub fn to_biguint(x: &BigInt) -> Option<BigUint> {
    x.to_biguint()
}

/// `ln(e^a + e^b)` without overflow.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln Σ e^{x}` over a slice.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// Table of `ln k!` for `k ≤ max`.
#[derive(Clone, Debug)]
pub struct LnFactorial {
    table: Vec<f64>,
}

impl LnFactorial {
    pub fn new(max: usize) -> Self {
        let mut table = Vec::with_capacity(max + 1);
        table.push(0.0);
        let mut acc = 0.0f64;
        for k in 1..=max {
            acc += (k as f64).ln();
            table.push(acc);
        }
        LnFactorial { table }
    }

    pub fn ln_fact(&self, k: usize) -> f64 {
        self.table[k]
    }

    pub fn ln_binomial(&self, n: usize, k: usize) -> f64 {
        if k > n {
            return f64::NEG_INFINITY;
        }
        self.table[n] - self.table[k] - self.table[n - k]
    }
}

/// Exact binomial coefficient.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for t in 0..k {
        acc *= n - t;
        acc /= t + 1;
    }
    acc
}

/// All binomials `C(n, 0..=n)`.
pub fn binomial_row(n: usize) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(n + 1);
    let mut acc = BigUint::from(1u32);
    row.push(acc.clone());
    for k in 1..=n {
        acc = acc * (n - k + 1) / k;
        row.push(acc.clone());
    }
    row
}

/// Compensated (Neumaier) summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_of_big_integers() {
        assert_eq!(ln_biguint(&BigUint::zero()), f64::NEG_INFINITY);
        assert!((ln_biguint(&BigUint::from(12345u32)) - 12345f64.ln()).abs() < 1e-15);
        let big = BigUint::from(1u32) << 300u32;
        let expect = 300.0 * LN_2;
        assert!((ln_biguint(&big) - expect).abs() / expect < 1e-15);
        let big = (BigUint::from(3u32) << 200u32) + 7u32;
        let expect = 3f64.ln() + 200.0 * LN_2;
        assert!((ln_biguint(&big) - expect).abs() / expect < 1e-15);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 3), BigUint::from(120u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
        let row = binomial_row(64);
        for (k, c) in row.iter().enumerate() {
            assert_eq!(c, &binomial(64, k));
        }
        let lf = LnFactorial::new(200);
        let exact = ln_biguint(&binomial(200, 77));
        assert!((lf.ln_binomial(200, 77) - exact).abs() < 1e-10);
    }

    #[test]
    fn log_sums() {
        let v = [1.0f64.ln(), 2.0f64.ln(), 3.0f64.ln()];
        assert!((log_sum_exp(&v) - 6.0f64.ln()).abs() < 1e-15);
        assert!((log_add_exp(1000.0, 1000.0) - (1000.0 + LN_2)).abs() < 1e-12);
        assert_eq!(log_add_exp(f64::NEG_INFINITY, 2.0), 2.0);
    }

    #[test]
    fn compensated_sum() {
        let mut s = NeumaierSum::default();
        for x in [1.0, 1e100, 1.0, -1e100] {
            s.add(x);
        }
        assert_eq!(s.value(), 2.0);
    }
}
