//! Shared numerics: base-2 entropies, log-space sums and big-integer helpers.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Shannon entropy in bits with `0 log 0 = 0`.
pub fn shannon(probs: impl IntoIterator<Item = f64>) -> f64 {
    probs
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| p * (1.0 / p).log2())
        .sum::<f64>()
        .max(0.0)
}

/// `log2(n)`, exact to double precision for integers of any size. `-inf` for zero.
pub fn log2_big(n: &BigUint) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().expect("finite below 2^1000").log2();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().expect("64-bit mantissa");
    top.log2() + shift as f64
}

/// Converts to `f64`, saturating at infinity.
pub fn big_to_f64(n: &BigUint) -> f64 {
    n.to_f64().unwrap_or(f64::INFINITY)
}

/// `log2(sum_i 2^{x_i})` without overflow or underflow.
pub fn log2_sum_exp2(xs: impl IntoIterator<Item = f64>) -> f64 {
    let xs: Vec<f64> = xs.into_iter().collect();
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + xs.iter().map(|x| (x - max).exp2()).sum::<f64>().log2()
}

/// `n! / prod_i k_i!` for `n = sum_i k_i`, built from exact binomials.
pub fn multinomial(counts: &[u64]) -> BigUint {
    let mut acc = BigUint::one();
    let mut total: u64 = 0;
    for &k in counts {
        for j in 1..=k {
            acc *= total + j;
            acc /= j;
        }
        total += k;
    }
    acc
}
