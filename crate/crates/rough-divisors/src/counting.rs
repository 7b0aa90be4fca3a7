//! Exact counters: `H(x, y, z)` restricted to rough integers, rough-integer
//! counts, multiplication-table and Farey-product cardinalities, and exact
//! sums over squarefree integers with constrained prime support.
//!
//! Everything in this module is exact. Counting uses bitset marking (linear
//! memory, near-linear time); the sums use depth-first enumeration with
//! hard budgets that fail fast with a resource error instead of
//! approximating.

use crate::bits::BitVec64;
use crate::divisors::{close_divisor_pairs_u128, l_measure_of_logs_buf};
use crate::error::{Error, Result};
use crate::formulas::BlockVector;
use crate::sieve::{primes_in, primes_up_to, LambdaLadder};

/// Default cap on `x` for the marking passes (bits allocated = `x + 1`).
pub const MARK_BUDGET: u64 = 1 << 33;

/// Cap on `N` for the multiplication-table bitset (`N^2` bits).
pub const MULT_TABLE_MAX_N: u64 = 1 << 16;

/// Cap on `N` for Farey product-set enumeration.
pub const FAREY_MAX_N: u64 = 200;

/// Cap on the number of primes a subset enumeration may range over.
pub const SUBSET_PRIME_CAP: usize = 24;

/// Cap on the number of tuples a block-vector enumeration may touch.
pub const BLOCK_COMBINATION_CAP: u64 = 10_000_000;

/// Parameters for `count_h`: count `n <= x` with `P^-(n) > w` and a divisor
/// in `(y, z]`, optionally restricted to squarefree `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountQuery {
    pub x: u64,
    pub y: u64,
    pub z: u64,
    pub w: u64,
    pub squarefree_only: bool,
}

impl CountQuery {
    pub fn new(x: u64, y: u64, z: u64, w: u64) -> Result<CountQuery> {
        let q = CountQuery {
            x,
            y,
            z,
            w,
            squarefree_only: false,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn squarefree(mut self, on: bool) -> CountQuery {
        self.squarefree_only = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(1 <= self.y && self.y < self.z && self.z <= self.x) {
            return Err(Error::domain(format!(
                "need 1 <= y < z <= x, got x={} y={} z={}",
                self.x, self.y, self.z
            )));
        }
        if self.w < 1 {
            return Err(Error::domain("need w >= 1".to_string()));
        }
        Ok(())
    }
}

/// Exact `H(x, y, z)` over `w`-rough integers, by bitset marking.
///
/// Marks the multiples of every rough `d` in `(y, z]`, then removes
/// integers with a prime factor `<= w` (and non-squarefree ones when
/// requested) in place, and popcounts. Memory is `x + 1` bits; work is
/// about `x log(z/y)` for the marking plus a sieve pass.
pub fn count_h(q: &CountQuery) -> Result<u64> {
    count_h_with_budget(q, MARK_BUDGET)
}

pub fn count_h_with_budget(q: &CountQuery, budget: u64) -> Result<u64> {
    q.validate()?;
    if q.x > budget {
        return Err(Error::resource(format!(
            "x = {} exceeds marking budget {budget}",
            q.x
        )));
    }
    let (x, y, z, w) = (q.x, q.y, q.z, q.w);

    // roughness of the candidate divisors, sieved over the window (y, z]
    let window_len = z - y;
    let mut window_smooth = BitVec64::zeros(window_len); // offset i = divisor y+1+i
    if w >= 2 {
        for p in primes_up_to(w.min(z)) {
            let first = (y + 1).div_ceil(p) * p;
            let mut m = first;
            while m <= z {
                window_smooth.set(m - y - 1);
                m += p;
            }
        }
    }

    let mut marked = BitVec64::zeros(x + 1);
    for off in 0..window_len {
        if !window_smooth.get(off) {
            let d = y + 1 + off;
            marked.set_multiples(d, d);
        }
    }

    // strip integers that are not w-rough
    if w >= 2 {
        for p in primes_up_to(w.min(x)) {
            marked.clear_multiples(p, p);
        }
    }
    if q.squarefree_only {
        for p in primes_up_to(x.isqrt()) {
            marked.clear_multiples(p * p, p * p);
        }
    }
    Ok(marked.count_ones())
}

/// Naive reference counter: per-`n` divisor scan. Intended for
/// cross-checking `count_h` at small `x`.
pub fn count_h_naive(q: &CountQuery) -> Result<u64> {
    q.validate()?;
    let mut count = 0u64;
    'outer: for n in 1..=q.x {
        for p in 2..=q.w.min(n) {
            if n % p == 0 && n > 1 {
                continue 'outer;
            }
        }
        if q.squarefree_only {
            let mut d = 2u64;
            while d * d <= n {
                if n % (d * d) == 0 {
                    continue 'outer;
                }
                d += 1;
            }
        }
        let mut has = false;
        let mut d = 1u64;
        while d * d <= n {
            if n % d == 0 {
                let e = n / d;
                if (d > q.y && d <= q.z) || (e > q.y && e <= q.z) {
                    has = true;
                    break;
                }
            }
            d += 1;
        }
        if has {
            count += 1;
        }
    }
    Ok(count)
}

/// `|{n <= x : P^-(n) > z}|`, or the same restricted to `(x/2, x]`.
///
/// Includes `n = 1` (rough for every `z`).
pub fn rough_count(x: u64, z: u64, half: bool) -> Result<u64> {
    if x < 1 || z < 1 {
        return Err(Error::domain("need x >= 1 and z >= 1".to_string()));
    }
    if x > MARK_BUDGET {
        return Err(Error::resource(format!(
            "x = {x} exceeds marking budget {MARK_BUDGET}"
        )));
    }
    let mut bits = BitVec64::ones(x + 1);
    bits.clear(0);
    for p in primes_up_to(z.min(x)) {
        bits.clear_multiples(p, p);
    }
    if half {
        Ok(bits.count_range(x / 2 + 1, x))
    } else {
        Ok(bits.count_ones())
    }
}

/// Distinct products `a * b` with `1 <= a, b <= N` and `P^-(ab) > w`.
///
/// A product is rough exactly when both factors are, so rough factors are
/// enumerated directly; dedup is a flat bitset over `[1, N^2]`.
pub fn mult_table_count(n: u64, w: u64) -> Result<u64> {
    mult_table_count_with_budget(n, w, MULT_TABLE_MAX_N)
}

pub fn mult_table_count_with_budget(n: u64, w: u64, max_n: u64) -> Result<u64> {
    if n < 1 || w < 1 {
        return Err(Error::domain("need N >= 1 and w >= 1".to_string()));
    }
    if n > max_n || n > MULT_TABLE_MAX_N {
        return Err(Error::resource(format!(
            "N = {n} exceeds bitset budget (max {})",
            max_n.min(MULT_TABLE_MAX_N)
        )));
    }
    // rough flags over [1, N]
    let mut smooth = BitVec64::zeros(n + 1);
    if w >= 2 {
        for p in primes_up_to(w.min(n)) {
            smooth.set_multiples(p, p);
        }
    }
    let rough: Vec<u64> = (1..=n).filter(|&a| !smooth.get(a)).collect();

    let mut products = BitVec64::zeros(n * n + 1);
    for (i, &a) in rough.iter().enumerate() {
        for &b in &rough[..=i] {
            products.set(a * b);
        }
    }
    Ok(products.count_ones())
}

/// Size of the product set `F_N * F_N` of Farey fractions of order `N`
/// (reduced fractions `a/b`, `1 <= a <= b <= N`), counting distinct
/// reduced values `a1 a2 / (b1 b2)`.
pub fn farey_product_count(n: u64) -> Result<u64> {
    if n < 1 {
        return Err(Error::domain("need N >= 1".to_string()));
    }
    if n > FAREY_MAX_N {
        return Err(Error::resource(format!(
            "N = {n} exceeds Farey budget {FAREY_MAX_N}"
        )));
    }
    let mut fractions: Vec<(u64, u64)> = Vec::new();
    for b in 1..=n {
        for a in 1..=b {
            if gcd(a, b) == 1 {
                fractions.push((a, b));
            }
        }
    }
    // dedup products by reduced (num, den) in a bitset indexed
    // (num - 1) * N^2 + (den - 1); num <= den <= N^2 since fractions are <= 1
    let n2 = n * n;
    let mut seen = BitVec64::zeros(n2 * n2);
    let mut count = 0u64;
    for (i, &(a1, b1)) in fractions.iter().enumerate() {
        for &(a2, b2) in &fractions[..=i] {
            let (mut num, mut den) = (a1 * a2, b1 * b2);
            let g = gcd(num, den);
            num /= g;
            den /= g;
            let idx = (num - 1) * n2 + (den - 1);
            if !seen.get(idx) {
                seen.set(idx);
                count += 1;
            }
        }
    }
    Ok(count)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Weight attached to each squarefree `a` in the exact sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    /// `1/a`
    Reciprocal,
    /// `(log a)/a`
    LogOverA,
    /// `L(a)/a` - the clustering measure
    LOverA,
    /// `tau(a)/a = 2^omega(a)/a`
    TauOverA,
    /// `W*(a)/a` - close divisor pairs
    WstarOverA,
}

impl Weight {
    /// Does evaluating this weight require the divisor structure of `a`?
    fn needs_divisors(&self) -> bool {
        matches!(self, Weight::LOverA | Weight::WstarOverA)
    }
}

/// Query for [`sum_over_p`]: sum a weight over the set `P(w, t)` of
/// squarefree integers composed only of primes in `(w, t]`, with `1`
/// included by convention, optionally restricted to `omega(a) = k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PSumQuery {
    pub w: u64,
    pub t: u64,
    /// `None` sums over all of `P(w, t)`.
    pub k: Option<u32>,
    pub weight: Weight,
}

impl PSumQuery {
    pub fn validate(&self) -> Result<()> {
        if !(2 <= self.w && self.w <= self.t) {
            return Err(Error::domain(format!(
                "need 2 <= w <= t, got w={} t={}",
                self.w, self.t
            )));
        }
        Ok(())
    }
}

/// Exact weighted sum over `P(w, t)` by depth-first subset enumeration.
///
/// At most [`SUBSET_PRIME_CAP`] primes may lie in `(w, t]`. The plain
/// weights cost `O(2^m)`; the divisor-structure weights (`L`, `W*`) carry
/// the divisor list through the recursion and cost `O(3^m)`.
pub fn sum_over_p(q: &PSumQuery) -> Result<f64> {
    q.validate()?;
    let primes = primes_in(q.w, q.t);
    if primes.len() > SUBSET_PRIME_CAP {
        return Err(Error::resource(format!(
            "{} primes in ({}, {}] exceeds subset cap {SUBSET_PRIME_CAP}",
            primes.len(),
            q.w,
            q.t
        )));
    }
    let mut acc = 0.0f64;
    if q.weight.needs_divisors() {
        let mut divs: Vec<u128> = vec![1];
        let mut logbuf: Vec<f64> = Vec::new();
        dfs_divisors(
            &primes,
            0,
            1u128,
            &mut divs,
            q.k,
            0,
            q.weight,
            &mut logbuf,
            &mut acc,
        )?;
    } else {
        dfs_plain(&primes, 0, 1u128, q.k, 0, q.weight, &mut acc)?;
    }
    Ok(acc)
}

fn weight_plain(weight: Weight, a: u128, omega: u32) -> f64 {
    let af = a as f64;
    match weight {
        Weight::Reciprocal => 1.0 / af,
        Weight::LogOverA => af.ln() / af,
        Weight::TauOverA => 2f64.powi(omega as i32) / af,
        _ => unreachable!("divisor weights use the divisor DFS"),
    }
}

#[allow(clippy::too_many_arguments)]
fn dfs_plain(
    primes: &[u64],
    idx: usize,
    a: u128,
    k: Option<u32>,
    omega: u32,
    weight: Weight,
    acc: &mut f64,
) -> Result<()> {
    if idx == primes.len() {
        if k.map_or(true, |k| k == omega) {
            *acc += weight_plain(weight, a, omega);
        }
        return Ok(());
    }
    if let Some(k) = k {
        if omega > k {
            return Ok(());
        }
    }
    // include-first keeps leaves in increasing-prime order, so fixed-omega
    // sums accumulate exactly like the corresponding prime sums
    let p = primes[idx] as u128;
    let next = a
        .checked_mul(p)
        .ok_or_else(|| Error::resource("subset product exceeds 128 bits".to_string()))?;
    dfs_plain(primes, idx + 1, next, k, omega + 1, weight, acc)?;
    dfs_plain(primes, idx + 1, a, k, omega, weight, acc)
}

fn weight_divisors(weight: Weight, a: u128, divs: &[u128], logbuf: &mut Vec<f64>) -> f64 {
    let af = a as f64;
    match weight {
        Weight::LOverA => {
            logbuf.clear();
            logbuf.extend(divs.iter().map(|&d| (d as f64).ln()));
            l_measure_of_logs_buf(logbuf) / af
        }
        Weight::WstarOverA => close_divisor_pairs_u128(divs) as f64 / af,
        _ => unreachable!(),
    }
}

#[allow(clippy::too_many_arguments)]
fn dfs_divisors(
    primes: &[u64],
    idx: usize,
    a: u128,
    divs: &mut Vec<u128>,
    k: Option<u32>,
    omega: u32,
    weight: Weight,
    logbuf: &mut Vec<f64>,
    acc: &mut f64,
) -> Result<()> {
    if idx == primes.len() {
        if k.map_or(true, |k| k == omega) {
            *acc += weight_divisors(weight, a, divs, logbuf);
        }
        return Ok(());
    }
    if let Some(k) = k {
        if omega > k {
            return Ok(());
        }
    }
    let p = primes[idx] as u128;
    let next = a
        .checked_mul(p)
        .ok_or_else(|| Error::resource("subset product exceeds 128 bits".to_string()))?;
    let merged = merge_with_scaled(divs, p)?;
    let mut saved = std::mem::replace(divs, merged);
    dfs_divisors(primes, idx + 1, next, divs, k, omega + 1, weight, logbuf, acc)?;
    std::mem::swap(divs, &mut saved);
    dfs_divisors(primes, idx + 1, a, divs, k, omega, weight, logbuf, acc)
}

/// Divisors of `a * p` from the sorted divisors of `a` (with `p` prime,
/// not dividing `a`): merge `divs` with `p * divs`.
fn merge_with_scaled(divs: &[u128], p: u128) -> Result<Vec<u128>> {
    let mut scaled = Vec::with_capacity(divs.len());
    for &d in divs {
        scaled.push(d.checked_mul(p).ok_or_else(|| {
            Error::resource("divisor product exceeds 128 bits".to_string())
        })?);
    }
    let mut merged = Vec::with_capacity(divs.len() * 2);
    let (mut i, mut j) = (0usize, 0usize);
    while i < divs.len() && j < scaled.len() {
        if divs[i] < scaled[j] {
            merged.push(divs[i]);
            i += 1;
        } else {
            merged.push(scaled[j]);
            j += 1;
        }
    }
    merged.extend_from_slice(&divs[i..]);
    merged.extend_from_slice(&scaled[j..]);
    Ok(merged)
}

/// Exact weighted sum over `A(b)`: squarefree integers with exactly `b_j`
/// prime factors drawn from ladder block `D_j`, for `j` in the vector's
/// block range.
///
/// The total number of prime-tuple combinations must stay within
/// [`BLOCK_COMBINATION_CAP`].
pub fn sum_over_block_vector(
    bv: &BlockVector,
    ladder: &LambdaLadder,
    weight: Weight,
) -> Result<f64> {
    if bv.j2 as usize > ladder.num_blocks() {
        return Err(Error::domain(format!(
            "block {} beyond ladder ({} blocks)",
            bv.j2,
            ladder.num_blocks()
        )));
    }
    if bv.j1 < 1 {
        return Err(Error::domain("blocks are 1-indexed".to_string()));
    }
    // combination budget: prod over j of C(|D_j|, b_j)
    let mut combos = 1f64;
    for (off, &bj) in bv.counts.iter().enumerate() {
        let j = bv.j1 as usize + off;
        let size = ladder.block(j).len() as u64;
        if bj as u64 > size {
            return Ok(0.0); // A(b) is empty
        }
        combos *= binomial_f64(size, bj as u64);
        if combos > BLOCK_COMBINATION_CAP as f64 {
            return Err(Error::resource(format!(
                "block combination count exceeds {BLOCK_COMBINATION_CAP}"
            )));
        }
    }

    let blocks: Vec<&[u64]> = (bv.j1 as usize..=bv.j2 as usize)
        .map(|j| ladder.block(j))
        .collect();
    let mut chosen: Vec<u64> = Vec::new();
    let mut acc = 0.0f64;
    let mut logbuf: Vec<f64> = Vec::new();
    block_dfs(
        &blocks,
        &bv.counts,
        0,
        &mut chosen,
        weight,
        &mut logbuf,
        &mut acc,
    )?;
    Ok(acc)
}

fn binomial_f64(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

fn block_dfs(
    blocks: &[&[u64]],
    counts: &[u32],
    bi: usize,
    chosen: &mut Vec<u64>,
    weight: Weight,
    logbuf: &mut Vec<f64>,
    acc: &mut f64,
) -> Result<()> {
    if bi == blocks.len() {
        *acc += weight_of_prime_set(chosen, weight, logbuf)?;
        return Ok(());
    }
    let need = counts[bi] as usize;
    let pool = blocks[bi];
    let mut picked: Vec<usize> = Vec::with_capacity(need);
    combo_dfs(
        pool, need, 0, &mut picked, blocks, counts, bi, chosen, weight, logbuf, acc,
    )
}

#[allow(clippy::too_many_arguments)]
fn combo_dfs(
    pool: &[u64],
    need: usize,
    start: usize,
    picked: &mut Vec<usize>,
    blocks: &[&[u64]],
    counts: &[u32],
    bi: usize,
    chosen: &mut Vec<u64>,
    weight: Weight,
    logbuf: &mut Vec<f64>,
    acc: &mut f64,
) -> Result<()> {
    if picked.len() == need {
        let base = chosen.len();
        chosen.extend(picked.iter().map(|&i| pool[i]));
        block_dfs(blocks, counts, bi + 1, chosen, weight, logbuf, acc)?;
        chosen.truncate(base);
        return Ok(());
    }
    let remaining = need - picked.len();
    for i in start..=pool.len().saturating_sub(remaining) {
        picked.push(i);
        combo_dfs(
            pool, need, i + 1, picked, blocks, counts, bi, chosen, weight, logbuf, acc,
        )?;
        picked.pop();
    }
    Ok(())
}

/// Evaluate a weight on the squarefree integer with the given prime set.
fn weight_of_prime_set(primes: &[u64], weight: Weight, logbuf: &mut Vec<f64>) -> Result<f64> {
    let mut a = 1u128;
    for &p in primes {
        a = a
            .checked_mul(p as u128)
            .ok_or_else(|| Error::resource("product exceeds 128 bits".to_string()))?;
    }
    if weight.needs_divisors() {
        let mut divs: Vec<u128> = vec![1];
        for &p in primes {
            divs = merge_with_scaled(&divs, p as u128)?;
        }
        Ok(weight_divisors(weight, a, &divs, logbuf))
    } else {
        Ok(weight_plain(weight, a, primes.len() as u32))
    }
}
