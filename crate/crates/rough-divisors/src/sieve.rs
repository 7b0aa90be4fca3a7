//! Prime generation, smallest-prime-factor tables, factorization,
//! roughness tests, Mertens sums, and the prime-block ladder.
//!
//! Throughout the crate, `P^-(n)` denotes the smallest prime factor of `n`
//! and `P^+(n)` the largest, with the conventions `P^-(1) = infinity` and
//! `P^+(1) = 0`. An integer is *w-rough* when `P^-(n) > w`, i.e. it has no
//! prime factor `<= w`.

use crate::bits::BitVec64;
use crate::error::{Error, Result};

/// Hard cap on SPF table size: entries fit in `u32` and the table stays
/// within a desk-scale memory budget.
pub const SPF_LIMIT_MAX: u64 = 1 << 31;

/// Segment length for the segmented prime sieve (cache-friendly).
const SEGMENT_LEN: u64 = 1 << 20;

/// Smallest-prime-factor table for every `2 <= n <= limit`.
///
/// `spf(n)` is prime, divides `n`, and equals `n` exactly when `n` is prime.
/// The table is immutable after construction and cheap to share.
pub struct SpfTable {
    limit: u64,
    spf: Vec<u32>,
}

impl SpfTable {
    /// Sieve the table up to `limit`.
    pub fn build(limit: u64) -> Result<SpfTable> {
        if limit < 2 {
            return Err(Error::domain(format!("spf limit {limit} < 2")));
        }
        if limit > SPF_LIMIT_MAX {
            return Err(Error::resource(format!(
                "spf limit {limit} exceeds budget {SPF_LIMIT_MAX}"
            )));
        }
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                if i <= n / i {
                    for m in ((i * i)..=n).step_by(i) {
                        if spf[m] == 0 {
                            spf[m] = i as u32;
                        }
                    }
                }
            }
        }
        Ok(SpfTable { limit, spf })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Smallest prime factor of `n` (`2 <= n <= limit`).
    pub fn smallest_prime_factor(&self, n: u64) -> Result<u64> {
        self.check_range(n, 2)?;
        Ok(self.spf[n as usize] as u64)
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && n <= self.limit && self.spf[n as usize] as u64 == n
    }

    /// True iff `n` has no prime factor `<= w`. `n = 1` is rough for every
    /// `w` (the `P^-(1) = infinity` convention).
    pub fn is_rough(&self, n: u64, w: u64) -> Result<bool> {
        self.check_range(n, 1)?;
        if n == 1 {
            return Ok(true);
        }
        Ok(self.spf[n as usize] as u64 > w)
    }

    /// Factor `n` by walking the SPF chain.
    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        self.check_range(n, 2)?;
        let mut factors: Vec<(u64, u32)> = Vec::new();
        let mut m = n as usize;
        while m > 1 {
            let p = self.spf[m] as u64;
            let mut e = 0u32;
            while m as u64 % p == 0 {
                m /= p as usize;
                e += 1;
            }
            factors.push((p, e));
        }
        Ok(Factorization { n, factors })
    }

    fn check_range(&self, n: u64, min: u64) -> Result<()> {
        if n < min || n > self.limit {
            return Err(Error::domain(format!(
                "n = {n} outside table range [{min}, {}]",
                self.limit
            )));
        }
        Ok(())
    }
}

/// Prime factorization `n = prod p^e`, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Assemble a factorization from `(prime, exponent)` pairs; primes must
    /// be strictly increasing, actually prime, and the product must fit u64.
    pub fn new(factors: Vec<(u64, u32)>) -> Result<Factorization> {
        let mut n = 1u64;
        let mut prev = 1u64;
        for &(p, e) in &factors {
            if p <= prev {
                return Err(Error::domain(format!("primes not increasing at {p}")));
            }
            if e == 0 {
                return Err(Error::domain(format!("zero exponent for prime {p}")));
            }
            if !is_rough_trial(p, p.isqrt()) {
                return Err(Error::domain(format!("{p} is not prime")));
            }
            prev = p;
            for _ in 0..e {
                n = n
                    .checked_mul(p)
                    .ok_or_else(|| Error::resource("factorization exceeds 64 bits".to_string()))?;
            }
        }
        Ok(Factorization { n, factors })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Number of distinct prime factors, `omega(n)`.
    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    /// Number of divisors, `tau(n)`.
    pub fn tau(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(_, e)| e as u64 + 1)
            .product()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }
}

/// Roughness by trial division, for `n` beyond any table. `O(w)`.
pub fn is_rough_trial(n: u64, w: u64) -> bool {
    if n <= 1 {
        return true;
    }
    let mut d = 2u64;
    while d <= w && d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// All primes `<= limit`, via a segmented sieve with `2^20` segments.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut iter = PrimeStream::new();
    while let Some(p) = iter.next() {
        if p > limit {
            break;
        }
        out.push(p);
    }
    out
}

/// Primes in `(lo, hi]`, in increasing order.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut iter = PrimeStream::new();
    while let Some(p) = iter.next() {
        if p > hi {
            break;
        }
        if p > lo {
            out.push(p);
        }
    }
    out
}

/// Unbounded prime iterator backed by a segmented sieve.
///
/// Base primes are grown on demand, so memory stays at one segment plus
/// the primes below the square root of the current position.
pub struct PrimeStream {
    base: Vec<u64>,     // primes found so far below `base_limit`
    base_limit: u64,    // base primes cover [2, base_limit]
    segment_lo: u64,    // next segment is [segment_lo, segment_lo + len)
    buffer: Vec<u64>,   // primes of the current segment, reversed for pop()
}

impl PrimeStream {
    pub fn new() -> Self {
        PrimeStream {
            base: Vec::new(),
            base_limit: 1,
            segment_lo: 2,
            buffer: Vec::new(),
        }
    }

    fn refill(&mut self) {
        let lo = self.segment_lo;
        let hi = lo + SEGMENT_LEN.min(u64::MAX - lo);
        // grow base primes to cover sqrt(hi)
        let need = hi.isqrt() + 1;
        if need > self.base_limit {
            self.grow_base(need.max(self.base_limit * 2).max(64));
        }
        let mut mask = BitVec64::zeros(hi - lo);
        for &p in &self.base {
            if p.saturating_mul(p) >= hi {
                break;
            }
            let start = p.saturating_mul(p).max(lo.div_ceil(p) * p);
            let mut m = start;
            while m < hi {
                mask.set(m - lo);
                m += p;
            }
        }
        let mut fresh: Vec<u64> = Vec::new();
        for off in 0..(hi - lo) {
            let n = lo + off;
            if n >= 2 && !mask.get(off) {
                fresh.push(n);
            }
        }
        fresh.reverse();
        self.buffer = fresh;
        self.segment_lo = hi;
    }

    fn grow_base(&mut self, new_limit: u64) {
        // plain sieve; base primes only reach the square root of the stream
        let n = new_limit as usize;
        let mut composite = BitVec64::zeros(new_limit + 1);
        let mut base = Vec::new();
        for i in 2..=n {
            if !composite.get(i as u64) {
                base.push(i as u64);
                let mut m = i * i;
                while m <= n {
                    composite.set(m as u64);
                    m += i;
                }
            }
        }
        self.base = base;
        self.base_limit = new_limit;
    }
}

impl Default for PrimeStream {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for PrimeStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        while self.buffer.is_empty() {
            self.refill();
        }
        self.buffer.pop()
    }
}

/// `sum of 1/p` over primes `a < p <= b`, accumulated in increasing order.
pub fn mertens_sum(a: u64, b: u64) -> f64 {
    if a >= b {
        return 0.0;
    }
    primes_in(a, b).iter().map(|&p| 1.0 / p as f64).sum()
}

/// `sum of (log p)/p` over primes `a < p <= b`.
pub fn log_weighted_prime_sum(a: u64, b: u64) -> f64 {
    if a >= b {
        return 0.0;
    }
    primes_in(a, b)
        .iter()
        .map(|&p| (p as f64).ln() / p as f64)
        .sum()
}

/// Greedy partition of the primes into blocks `D_j = (lambda_{j-1}, lambda_j]`
/// whose reciprocal sums stay `<= log 2`.
///
/// `lambda_j` is the largest prime keeping the block-`j` reciprocal sum at or
/// below `log 2`; the blocks therefore satisfy `log lambda_j ~ 2^j`. Blocks
/// are 1-indexed to match that scaling; `lambdas[0]` is a placeholder `1`
/// (the first block starts its scan at `p = 2`).
#[derive(Debug, Clone)]
pub struct LambdaLadder {
    lambdas: Vec<u64>,
    blocks: Vec<Vec<u64>>,
}

impl LambdaLadder {
    /// `lambda_j`; index 0 returns the placeholder 1.
    pub fn lambda(&self, j: usize) -> u64 {
        self.lambdas[j]
    }

    pub fn lambdas(&self) -> &[u64] {
        &self.lambdas
    }

    /// Primes of block `D_j` (1-indexed, `1 <= j <= num_blocks`).
    pub fn block(&self, j: usize) -> &[u64] {
        &self.blocks[j - 1]
    }

    /// Number of completed blocks.
    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Largest deviation `|log2(log lambda_j) - j|` over `j >= 1`; the
    /// ladder satisfies `2^(j-K) <= log lambda_j <= 2^(j+K)` with `K`
    /// equal to this measured value.
    pub fn dyadic_deviation(&self) -> f64 {
        self.lambdas
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, &l)| ((l as f64).ln().log2() - j as f64).abs())
            .fold(0.0, f64::max)
    }
}

/// Build every ladder block whose closing prime is `<= limit`.
///
/// A block is emitted only once the next prime would push its reciprocal
/// sum past `log 2`, so each emitted `lambda_j` is certified maximal. The
/// trailing partial block (still open when primes pass `limit`) is dropped.
pub fn lambda_ladder(limit: u64) -> Result<LambdaLadder> {
    if limit < 2 {
        return Err(Error::domain(format!("ladder limit {limit} < 2")));
    }
    let ln2 = std::f64::consts::LN_2;
    let mut lambdas = vec![1u64];
    let mut blocks: Vec<Vec<u64>> = Vec::new();
    let mut current: Vec<u64> = Vec::new();
    let mut sum = 0.0f64;
    for p in PrimeStream::new() {
        if sum + 1.0 / p as f64 <= ln2 {
            if p > limit {
                // block would close beyond the limit; drop it
                break;
            }
            sum += 1.0 / p as f64;
            current.push(p);
        } else {
            let lam = *current.last().expect("1/p <= log 2 for every prime");
            lambdas.push(lam);
            blocks.push(std::mem::take(&mut current));
            if p > limit {
                break;
            }
            sum = 1.0 / p as f64;
            current.push(p);
        }
    }
    Ok(LambdaLadder { lambdas, blocks })
}
