//! Seeded Monte Carlo estimation of constrained ordered-simplex volumes.
//!
//! All regions live inside the ordered simplex
//! `0 <= xi_1 <= ... <= xi_k <= 1`, which has volume `1/k!`. Sampling draws
//! `k` independent uniforms and sorts them - that has density `k!` on the
//! simplex - so for any integrand `f`,
//!
//! ```text
//! integral over the ordered simplex of f  =  E[f(sorted uniforms)] / k!
//! ```
//!
//! Every estimate carries that `1/k!` normalization explicitly, plus a
//! standard error. The generator is ChaCha8 seeded from a user-supplied
//! `u64`; samples are drawn in fixed-size chunks with one ChaCha stream per
//! chunk index, so a run is reproducible bit-for-bit from `(params, seed,
//! samples)` regardless of how chunks would be scheduled.
//!
//! Exponential quantities (`2^(v xi + u)` and friends) are combined in
//! log2 space with max-factoring, so constraint tests cannot overflow no
//! matter the parameters; on moderate inputs this agrees with direct
//! evaluation to full precision (tested).

use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Samples per ChaCha stream.
const CHUNK: u64 = 1 << 16;

/// A Monte Carlo volume (or integral) estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeEstimate {
    /// Estimate of the integral over the ordered simplex (1/k!-normalized).
    pub mean: f64,
    /// Standard error of `mean` (sample standard deviation / sqrt(samples)).
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
    /// Samples where the integrand was nonzero.
    pub hit_count: u64,
}

/// One point of the ordered simplex: `k` uniforms in `[0, 1)`, sorted.
pub fn sample_ordered_simplex<R: Rng>(k: usize, rng: &mut R) -> Vec<f64> {
    let mut xs: Vec<f64> = (0..k).map(|_| rng.random::<f64>()).collect();
    xs.sort_unstable_by(f64::total_cmp);
    xs
}

/// `log2` of `sum 2^(e_i)`, max-factored so it never overflows.
pub fn log2_sum_exp2(exponents: &[f64]) -> f64 {
    let max = exponents.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let sum: f64 = exponents.iter().map(|&e| (e - max).exp2()).sum();
    max + sum.log2()
}

fn run<F: FnMut(&[f64]) -> f64>(
    k: usize,
    samples: u64,
    seed: u64,
    mut integrand: F,
) -> VolumeEstimate {
    let kfact: f64 = (1..=k as u64).map(|i| i as f64).product();
    let mut sum = 0.0f64;
    let mut sumsq = 0.0f64;
    let mut hits = 0u64;
    let mut buf = vec![0.0f64; k];
    let chunks = samples.div_ceil(CHUNK);
    let mut done = 0u64;
    for chunk in 0..chunks {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(chunk);
        let todo = CHUNK.min(samples - done);
        let mut csum = 0.0f64;
        let mut csq = 0.0f64;
        for _ in 0..todo {
            for x in buf.iter_mut() {
                *x = rng.random::<f64>();
            }
            buf.sort_unstable_by(f64::total_cmp);
            let f = integrand(&buf);
            if f != 0.0 {
                hits += 1;
            }
            csum += f;
            csq += f * f;
        }
        sum += csum;
        sumsq += csq;
        done += todo;
    }
    let n = samples as f64;
    let mean = sum / n / kfact;
    let var = if samples > 1 {
        ((sumsq - sum * sum / n) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    let stderr = (var / n).sqrt() / kfact;
    VolumeEstimate {
        mean,
        stderr,
        samples,
        seed,
        hit_count: hits,
    }
}

/// Volume of the region `Y_k(s, v)` inside the ordered simplex:
///
/// 1. `0 <= xi_1 <= ... <= xi_k < 1`;
/// 2. for each `i >= 1` with `M + i^2 <= k`: `xi_{M+i^2} > i/v` and
///    `xi_{k+1-(M+i^2)} < 1 - i/v`;
/// 3. `sum_{j=1..k} 2^(j - v xi_j) <= 2^s`.
///
/// This is the region whose volume lower-bounds the count of admissible
/// block vectors; under mild hypotheses its volume is at least of order
/// `(k - v + 1)/(k + 1)!`.
pub fn vol_yk(
    k: usize,
    s: i64,
    v: u32,
    m: u32,
    samples: u64,
    seed: u64,
) -> Result<VolumeEstimate> {
    check_common(k, samples)?;
    if v < 1 {
        return Err(Error::domain("need v >= 1".to_string()));
    }
    let vf = v as f64;
    let mut expbuf = vec![0.0f64; k];
    Ok(run(k, samples, seed, move |xi| {
        // (2) order-statistic constraints
        let mut i = 1usize;
        while m as usize + i * i <= k {
            let idx = m as usize + i * i;
            if !(xi[idx - 1] > i as f64 / vf) {
                return 0.0;
            }
            let upper = k + 1 - idx;
            if !(xi[upper - 1] < 1.0 - i as f64 / vf) {
                return 0.0;
            }
            i += 1;
        }
        // (3) dyadic-sum constraint, in log2 space
        for (j, x) in xi.iter().enumerate() {
            expbuf[j] = (j + 1) as f64 - vf * x;
        }
        if log2_sum_exp2(&expbuf) <= s as f64 {
            1.0
        } else {
            0.0
        }
    }))
}

/// Volume of `T(k, v, gamma)`: the ordered-simplex points whose dyadic
/// prefix sums grow, i.e. `2^(v xi_1) + ... + 2^(v xi_j) >= 2^(j - gamma)`
/// for every `1 <= j <= k`.
pub fn vol_t(
    k: usize,
    v: u32,
    gamma: u32,
    samples: u64,
    seed: u64,
) -> Result<VolumeEstimate> {
    check_common(k, samples)?;
    if v < 1 {
        return Err(Error::domain("need v >= 1".to_string()));
    }
    let vf = v as f64;
    Ok(run(k, samples, seed, move |xi| {
        // incremental log2 of the prefix sum
        let mut log2_prefix = f64::NEG_INFINITY;
        for (j, x) in xi.iter().enumerate() {
            log2_prefix = log2_add_exp2(log2_prefix, vf * x);
            if log2_prefix < (j + 1) as f64 - gamma as f64 {
                return 0.0;
            }
        }
        1.0
    }))
}

/// The integral `U_k(v, u)` over the ordered simplex of
///
/// ```text
/// min over 0 <= j <= k of 2^(-j) (2^(v xi_1 + u) + ... + 2^(v xi_j + u) + 1)
/// ```
///
/// The `j = 0` term is 1, so the integrand lies in `(0, 1]` and `U_k <= 1/k!`.
pub fn u_k(k: usize, v: u32, u: u32, samples: u64, seed: u64) -> Result<VolumeEstimate> {
    check_common(k, samples)?;
    if v < 1 || u < 1 {
        return Err(Error::domain("need v >= 1 and u >= 1".to_string()));
    }
    let vf = v as f64;
    let uf = u as f64;
    Ok(run(k, samples, seed, move |xi| {
        // log2 of (prefix sum + 1), built incrementally; j = 0 term is 2^0
        let mut log2_a = 0.0f64;
        let mut best = 0.0f64;
        for (j, x) in xi.iter().enumerate() {
            log2_a = log2_add_exp2(log2_a, vf * x + uf);
            let term = -((j + 1) as f64) + log2_a;
            if term < best {
                best = term;
            }
        }
        best.exp2()
    }))
}

/// `log2(2^a + 2^b)`, stable for any magnitudes.
fn log2_add_exp2(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (1.0 + (lo - hi).exp2()).log2()
}

fn check_common(k: usize, samples: u64) -> Result<()> {
    if k < 1 {
        return Err(Error::domain("need k >= 1".to_string()));
    }
    if samples < 1 {
        return Err(Error::domain("need at least one sample".to_string()));
    }
    Ok(())
}

/// Exact `k!` as f64 (`k <= 20`), for normalization checks.
pub fn factorial(k: u64) -> f64 {
    (1..=k).map(|i| i as f64).product()
}
