//! Closed-form evaluators: the regime parameter `delta`, the density
//! exponent `E`, order-of-magnitude expressions for the counting function
//! `H(x, y, 2y)` over rough integers, the Poisson heuristic, partial sums
//! of `x^k/k!` with their two-sided comparator, and the admissible
//! block-count vectors used by the lower-bound machinery.
//!
//! Order expressions are positive reals defined up to multiplicative
//! constants: none of them claims an implied constant, and the test suites
//! only ever compare them to exact counts by bounded ratios.

use crate::error::{Error, Result};

/// The exponent governing the density of integers with a divisor in a
/// dyadic interval:
///
/// ```text
/// E = 1 - (1 + log log 2)/log 2 = 0.086071332...
/// ```
///
/// `H(x, y, 2y)` is of order `x / ((log y)^E (log log y)^{3/2})`.
pub fn multiplication_table_exponent() -> f64 {
    let ln2 = std::f64::consts::LN_2;
    1.0 - (1.0 + ln2.ln()) / ln2
}

/// Which side of `delta = 1 - 1/log 4` the parameters fall on.
///
/// `HighDelta` (`delta >= 1 - 1/log 4`): `w` is large enough relative to
/// `y` that the count is of order `x / log^2 w` - the Poisson peak is
/// inside the admissible range. `LowDelta`: the left-tail regime where
/// divisor clustering bites and the `B(w, y)` factor appears.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    HighDelta,
    LowDelta,
}

/// Derived parameters for the pair `(w, y)` (with `x` carried along).
#[derive(Debug, Clone, Copy)]
pub struct RegimeParams {
    pub x: u64,
    pub y: u64,
    pub w: u64,
    /// `delta = log log w / log log y`
    pub delta: f64,
    /// the density exponent `E`
    pub e: f64,
    /// `B(w, y) = min(1, (log log y)^{-1/2} ((1 - delta) log 4 - 1)^{-1})`,
    /// taken as 1 outside the low-delta regime where the expression is
    /// meaningful.
    pub b: f64,
    pub regime: Regime,
    /// Set when the comfortable bounds `w <= y/8`, `y^2 <= x` are violated
    /// (the values are still computed).
    pub relaxed: bool,
}

/// The regime boundary `1 - 1/log 4`.
pub fn delta_boundary() -> f64 {
    1.0 - 1.0 / 4f64.ln()
}

/// Compute [`RegimeParams`]. Requires `w >= 4` and `y >= 4`; the wider
/// preconditions `w <= y/8` and `y <= sqrt(x)` only set the `relaxed` flag.
pub fn regime(x: u64, y: u64, w: u64) -> Result<RegimeParams> {
    if y < 4 || w < 4 {
        return Err(Error::domain(format!("need w >= 4 and y >= 4, got w={w} y={y}")));
    }
    let llw = (w as f64).ln().ln();
    let lly = (y as f64).ln().ln();
    let delta = llw / lly;
    let regime = if delta >= delta_boundary() {
        Regime::HighDelta
    } else {
        Regime::LowDelta
    };
    let gap = (1.0 - delta) * 4f64.ln() - 1.0;
    let b = if gap > 0.0 {
        (1.0 / (lly.sqrt() * gap)).min(1.0)
    } else {
        1.0
    };
    let relaxed = !(8 * w <= y && (y as u128) * (y as u128) <= x as u128);
    Ok(RegimeParams {
        x,
        y,
        w,
        delta,
        e: multiplication_table_exponent(),
        b,
        regime,
        relaxed,
    })
}

/// Order of `H(x, y, 2y)` over `w`-rough integers:
/// `x / log^2 w` in the high-delta regime, and
/// `x * delta * B(w,y) * (log y)^(-E + log(1-delta)/log 2)` otherwise.
pub fn rough_h_order(x: u64, y: u64, w: u64) -> Result<f64> {
    let p = regime(x, y, w)?;
    let xf = x as f64;
    Ok(match p.regime {
        Regime::HighDelta => {
            let lw = (w as f64).ln();
            xf / (lw * lw)
        }
        Regime::LowDelta => {
            let ly = (y as f64).ln();
            let expo = -p.e + (1.0 - p.delta).ln() / std::f64::consts::LN_2;
            xf * p.delta * p.b * ly.powf(expo)
        }
    })
}

/// Order of the unrestricted dyadic count:
/// `H(x, y, 2y) ~ x / ((log y)^E (log log y)^{3/2})` for `3 <= y <= sqrt(x)`.
pub fn h_dyadic_order(x: u64, y: u64) -> Result<f64> {
    if y < 3 {
        return Err(Error::domain(format!("need y >= 3, got {y}")));
    }
    let e = multiplication_table_exponent();
    let ly = (y as f64).ln();
    let lly = ly.ln();
    Ok(x as f64 / (ly.powf(e) * lly.powf(1.5)))
}

/// `k0 = floor(log log y / log 2)`, where the heuristic's Poisson sum
/// changes behavior.
pub fn k0(y: u64) -> u64 {
    ((y as f64).ln().ln() / std::f64::consts::LN_2).floor().max(0.0) as u64
}

/// The uniform-divisor heuristic for the rough dyadic count:
///
/// ```text
/// (x/log^2 y) [ sum_{k <= k0} (2 log2 y - 2 log2 w)^k / k!
///             + (log y) sum_{k >= k0} (log2 y - log2 w)^k / k! ]
/// ```
///
/// (`log2` here is `log log`). The second sum is truncated once terms drop
/// below `1e-15` of the running partial sum. The heuristic overshoots the
/// truth by about `1/delta`: it assumes divisor logs are uniformly spread,
/// which fails on all but a `delta` proportion of integers.
pub fn heuristic_h_estimate(x: u64, y: u64, w: u64) -> Result<f64> {
    let (first, second) = heuristic_bracket_sums(y, w)?;
    let ly = (y as f64).ln();
    Ok(x as f64 / (ly * ly) * (first + ly * second))
}

/// The two bracket sums of the heuristic, separately:
/// `sum_{k <= k0} (2 alpha)^k / k!` and `sum_{k >= k0} alpha^k / k!`
/// with `alpha = log log y - log log w`. The first bracket (times 1) always
/// dominates the second (times `log y`) once `k0` sits well above
/// `2 alpha`.
pub fn heuristic_bracket_sums(y: u64, w: u64) -> Result<(f64, f64)> {
    if !(4 <= w && w <= y) {
        return Err(Error::domain(format!("need 4 <= w <= y, got w={w} y={y}")));
    }
    let alpha = (y as f64).ln().ln() - (w as f64).ln().ln();
    let k0 = k0(y);

    let mut first = 0.0f64;
    let mut term = 1.0f64; // (2 alpha)^0 / 0! with 0^0 = 1
    for k in 0..=k0 {
        if k > 0 {
            term *= 2.0 * alpha / k as f64;
        }
        first += term;
    }

    let mut second = 0.0f64;
    let mut term = 1.0f64; // alpha^k0 / k0!
    for k in 1..=k0 {
        term *= alpha / k as f64;
    }
    let mut k = k0;
    loop {
        second += term;
        if term <= 1e-15 * second || term == 0.0 {
            break;
        }
        k += 1;
        term *= alpha / k as f64;
    }
    Ok((first, second))
}

/// Natural log of `k!`, exact summation below 171 and Stirling above.
pub fn ln_factorial(k: u64) -> f64 {
    if k < 171 {
        (2..=k).map(|i| (i as f64).ln()).sum()
    } else {
        let kf = k as f64;
        kf * kf.ln() - kf + 0.5 * (2.0 * std::f64::consts::PI * kf).ln() + 1.0 / (12.0 * kf)
            - 1.0 / (360.0 * kf.powi(3))
            + 1.0 / (1260.0 * kf.powi(5))
    }
}

/// Partial sum `sum_{h <= k <= m} x^k / k!`, accumulated outward from the
/// largest term for stability; the largest term is carried as a log-space
/// scale factor so intermediate values cannot overflow.
pub fn poisson_partial_sum(x: f64, h: u64, m: u64) -> Result<f64> {
    if !(h <= m) || !(x > 0.0) {
        return Err(Error::domain(format!("need h <= m and x > 0, got x={x} h={h} m={m}")));
    }
    let kstar = (x.floor() as u64).clamp(h, m);
    let ln_peak = kstar as f64 * x.ln() - ln_factorial(kstar);
    // scaled terms relative to the peak term
    let mut sum = 1.0f64;
    let mut t = 1.0f64;
    let mut k = kstar;
    while k > h {
        t *= k as f64 / x; // term(k-1) = term(k) * k / x
        sum += t;
        k -= 1;
    }
    t = 1.0;
    k = kstar;
    while k < m {
        k += 1;
        t *= x / k as f64;
        sum += t;
    }
    Ok((ln_peak + sum.ln()).exp())
}

/// The two-sided comparator for the Poisson partial sum:
///
/// ```text
/// min(sqrt(x), x/(x - m), m - h + 1) * x^m / m!
/// ```
///
/// When `x = m` the middle term is infinite and drops out of the minimum.
/// The partial sum and this bound agree up to absolute constants,
/// uniformly in `h <= m <= x`.
pub fn norton_bound(x: f64, h: u64, m: u64) -> Result<f64> {
    if !(h <= m) || !(m as f64 <= x) || !(x > 0.0) {
        return Err(Error::domain(format!(
            "need h <= m <= x and x > 0, got x={x} h={h} m={m}"
        )));
    }
    let middle = if x > m as f64 {
        x / (x - m as f64)
    } else {
        f64::INFINITY
    };
    let comp = x.sqrt().min(middle).min((m - h + 1) as f64);
    let ln_term = m as f64 * x.ln() - ln_factorial(m);
    Ok(comp * ln_term.exp())
}

/// Diagnostic slack scales derived from a measured ladder deviation `K'`:
/// `M = (log log w0)/200` and `eps = 2^(-200 M - 2 K' - 4)`.
///
/// These report where the proof-scale slack parameters would sit for a
/// given anchor `w0`; nothing in the test suites is gated on them, since
/// desk-scale enumerations need the configurable small `M` instead.
pub fn slack_scales(w0: u64, ladder_deviation: f64) -> Result<(f64, f64)> {
    if w0 < 3 {
        return Err(Error::domain("need w0 >= 3 for a positive log log".to_string()));
    }
    let m = (w0 as f64).ln().ln() / 200.0;
    let eps = (-200.0 * m - 2.0 * ladder_deviation - 4.0).exp2();
    Ok((m, eps))
}

/// `u = floor(log log w / log 2)` - the block index scale of `w`.
pub fn block_scale_u(w: u64) -> Result<i64> {
    if w < 3 {
        return Err(Error::domain("need w >= 3 for a positive log log".to_string()));
    }
    Ok(((w as f64).ln().ln() / std::f64::consts::LN_2).floor() as i64)
}

/// `v = floor((log log y - log log w) / log 2)` - how many dyadic block
/// scales separate `w` from `y`.
pub fn block_span_v(y: u64, w: u64) -> Result<i64> {
    if w < 3 || y < w {
        return Err(Error::domain(format!("need 3 <= w <= y, got w={w} y={y}")));
    }
    let lly = (y as f64).ln().ln();
    let llw = (w as f64).ln().ln();
    Ok(((lly - llw) / std::f64::consts::LN_2).floor() as i64)
}

/// `k2 = floor(min(log2 y / log 2, 2(log2 y - log2 w)) - 2M)`: the top of
/// the useful range of prime-factor counts.
pub fn k2(y: u64, w: u64, m: u32) -> Result<i64> {
    if w < 4 || y < 4 {
        return Err(Error::domain(format!("need w >= 4 and y >= 4, got w={w} y={y}")));
    }
    let lly = (y as f64).ln().ln();
    let llw = (w as f64).ln().ln();
    let a = lly / std::f64::consts::LN_2;
    let b = 2.0 * (lly - llw);
    Ok((a.min(b) - 2.0 * m as f64).floor() as i64)
}

/// Which of the three lower-bound cases `(delta, k2)` falls in, and the
/// matching choice of `k1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KRangeCase {
    /// `delta >= 1 - 1/log 4`: take `k1 = floor(0.9 k2)`.
    HighDelta,
    /// `1/5 <= delta < 1 - 1/log 4`: take `k1 = floor(0.9 k2)`.
    MidDelta,
    /// `delta < 1/5`: the last summand dominates; take `k1 = k2`.
    SmallDelta,
}

/// Select `k1` from `(delta, k2)`.
pub fn k1_select(delta: f64, k2: i64) -> (KRangeCase, i64) {
    if delta >= delta_boundary() {
        (KRangeCase::HighDelta, (0.9 * k2 as f64).floor() as i64)
    } else if delta >= 0.2 {
        (KRangeCase::MidDelta, (0.9 * k2 as f64).floor() as i64)
    } else {
        (KRangeCase::SmallDelta, k2)
    }
}

/// A vector of block counts `(b_{J1}, ..., b_{J2})`: `b_j` prime factors
/// are to be drawn from ladder block `D_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockVector {
    pub j1: u32,
    pub j2: u32,
    /// The slack parameter `M` of the admissibility conditions.
    pub m: u32,
    pub counts: Vec<u32>,
}

impl BlockVector {
    pub fn new(j1: u32, j2: u32, m: u32, counts: Vec<u32>) -> Result<BlockVector> {
        if j1 < 1 || j2 < j1 {
            return Err(Error::domain(format!("need 1 <= j1 <= j2, got {j1}..{j2}")));
        }
        if counts.len() != (j2 - j1 + 1) as usize {
            return Err(Error::domain(format!(
                "counts length {} != block span {}",
                counts.len(),
                j2 - j1 + 1
            )));
        }
        Ok(BlockVector { j1, j2, m, counts })
    }

    /// `k = sum of b_j`.
    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&b| b as u64).sum()
    }

    /// Condition (b): `sum_j 2^(-j + b_{J1} + ... + b_j) <= 2^(-M)`,
    /// decided exactly in dyadic arithmetic.
    pub fn dyadic_condition(&self) -> bool {
        let mut prefix = 0i64;
        let exponents: Vec<i64> = self
            .counts
            .iter()
            .enumerate()
            .map(|(off, &b)| {
                prefix += b as i64;
                -(self.j1 as i64 + off as i64) + prefix
            })
            .collect();
        dyadic_sum_le(&exponents, -(self.m as i64))
    }

    /// Growth caps (c) and (d): `b_{J1+i-1} <= M + i^2` and
    /// `b_{J2-i+1} <= M + i^2` for all `i >= 1`.
    pub fn growth_caps(&self) -> bool {
        let n = self.counts.len();
        self.counts.iter().enumerate().all(|(off, &b)| {
            let i_left = off as u64 + 1;
            let i_right = (n - off) as u64;
            let cap = (self.m as u64 + i_left * i_left).min(self.m as u64 + i_right * i_right);
            b as u64 <= cap
        })
    }

    /// Full admissibility: (a) `sum = k`, (b) the dyadic condition,
    /// (c)+(d) the growth caps.
    pub fn is_admissible(&self, k: u64) -> bool {
        self.total() == k && self.growth_caps() && self.dyadic_condition()
    }
}

/// Exact test of `sum_i 2^(e_i) <= 2^bound` for integer exponents.
///
/// Carry-normalizes the exponent multiset (two `2^e` make one `2^(e+1)`);
/// the sum is `<= 2^bound` iff afterwards either every exponent is below
/// `bound`, or the sum collapsed to exactly `2^bound`.
pub fn dyadic_sum_le(exponents: &[i64], bound: i64) -> bool {
    use std::collections::BTreeMap;
    if exponents.is_empty() {
        return true;
    }
    let mut counts: BTreeMap<i64, u64> = BTreeMap::new();
    for &e in exponents {
        *counts.entry(e).or_insert(0) += 1;
    }
    loop {
        let carry: Option<(i64, u64)> = counts
            .iter()
            .find(|&(_, &c)| c >= 2)
            .map(|(&e, &c)| (e, c));
        match carry {
            None => break,
            Some((e, c)) => {
                *counts.entry(e + 1).or_insert(0) += c / 2;
                if c % 2 == 0 {
                    counts.remove(&e);
                } else {
                    counts.insert(e, 1);
                }
            }
        }
    }
    let max = *counts.keys().next_back().expect("nonempty");
    max < bound || (max == bound && counts.len() == 1)
}

/// Exhaustively list the admissible vectors with `sum = k` over blocks
/// `J1..=J2` and slack `M`. Errors if more than `10^6` candidates satisfy
/// the growth caps.
pub fn enumerate_admissible(j1: u32, j2: u32, m: u32, k: u64) -> Result<Vec<BlockVector>> {
    const CANDIDATE_CAP: u64 = 1_000_000;
    if j1 < 1 || j2 < j1 {
        return Err(Error::domain(format!("need 1 <= j1 <= j2, got {j1}..{j2}")));
    }
    let span = (j2 - j1 + 1) as usize;
    let caps: Vec<u64> = (0..span)
        .map(|off| {
            let i_left = off as u64 + 1;
            let i_right = (span - off) as u64;
            (m as u64 + i_left * i_left).min(m as u64 + i_right * i_right)
        })
        .collect();
    let mut out = Vec::new();
    let mut counts = vec![0u32; span];
    let mut visited = 0u64;
    fn rec(
        caps: &[u64],
        off: usize,
        remaining: u64,
        counts: &mut Vec<u32>,
        j1: u32,
        j2: u32,
        m: u32,
        k: u64,
        visited: &mut u64,
        out: &mut Vec<BlockVector>,
    ) -> Result<()> {
        if off == caps.len() {
            if remaining == 0 {
                *visited += 1;
                if *visited > CANDIDATE_CAP {
                    return Err(Error::resource(format!(
                        "more than {CANDIDATE_CAP} candidate vectors"
                    )));
                }
                let bv = BlockVector::new(j1, j2, m, counts.clone())?;
                if bv.dyadic_condition() {
                    out.push(bv);
                }
            }
            return Ok(());
        }
        let top = caps[off].min(remaining);
        for b in 0..=top {
            counts[off] = b as u32;
            rec(caps, off + 1, remaining - b, counts, j1, j2, m, k, visited, out)?;
        }
        counts[off] = 0;
        Ok(())
    }
    rec(&caps, 0, k, &mut counts, j1, j2, m, k, &mut visited, &mut out)?;
    Ok(out)
}
