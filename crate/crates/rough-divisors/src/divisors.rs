//! Divisor enumeration and the divisor-clustering functionals.
//!
//! For an integer `a`, write `D(a) = { log d : d | a }`. The central object
//! here is the union of half-open intervals
//!
//! ```text
//! script_L(a) = union over d | a of [log d - log 2, log d)
//! ```
//!
//! and its Lebesgue measure `L(a)`. `L(a)` is large exactly when the
//! divisors of `a` are well spread out on a logarithmic scale: every
//! divisor contributes an interval of length `log 2`, and clustering makes
//! the intervals overlap. Two companion statistics quantify the clustering
//! directly: `close_divisor_pairs(a)` counts ordered pairs `d < d' <= 2d`
//! of divisors, and `isolated_divisor_count(a)` counts divisors with no
//! companion in `(d, 2d]`.

use crate::error::{Error, Result};
use crate::sieve::Factorization;

/// Cap on how many divisors an enumeration may produce.
pub const DIVISOR_CAP: u64 = 1 << 20;

/// All divisors of `n`, sorted increasing. Errors when `tau(n)` exceeds
/// [`DIVISOR_CAP`].
pub fn divisors(f: &Factorization) -> Result<Vec<u64>> {
    let tau = f.tau();
    if tau > DIVISOR_CAP {
        return Err(Error::resource(format!(
            "tau({}) = {tau} exceeds divisor cap {DIVISOR_CAP}",
            f.n()
        )));
    }
    let mut divs: Vec<u64> = vec![1];
    for &(p, e) in f.factors() {
        let prev_len = divs.len();
        let mut pe = 1u64;
        for _ in 0..e {
            pe *= p;
            for i in 0..prev_len {
                divs.push(divs[i] * pe);
            }
        }
    }
    divs.sort_unstable();
    Ok(divs)
}

/// `tau(n; y, z)`: how many divisors fall in `(y, z]`.
pub fn tau_interval(divs: &[u64], y: f64, z: f64) -> usize {
    divs.iter()
        .filter(|&&d| {
            let d = d as f64;
            d > y && d <= z
        })
        .count()
}

/// Disjoint, sorted, half-open real intervals `[lo, hi)`.
///
/// Construction merges overlapping *and* touching inputs, so the
/// representation is canonical: the measure and the interval list do not
/// depend on insertion order.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalUnion {
    intervals: Vec<(f64, f64)>,
}

impl IntervalUnion {
    pub fn from_intervals<I: IntoIterator<Item = (f64, f64)>>(iter: I) -> IntervalUnion {
        let mut raw: Vec<(f64, f64)> = iter.into_iter().filter(|&(lo, hi)| lo < hi).collect();
        raw.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite endpoints"));
        let mut intervals: Vec<(f64, f64)> = Vec::new();
        for (lo, hi) in raw {
            match intervals.last_mut() {
                Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
                _ => intervals.push((lo, hi)),
            }
        }
        IntervalUnion { intervals }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    /// Total length.
    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(lo, hi)| hi - lo).sum()
    }
}

/// The union `script_L(a)` of `[log d - log 2, log d)` over the given
/// divisors.
pub fn l_intervals(divs: &[u64]) -> IntervalUnion {
    l_intervals_of_logs(divs.iter().map(|&d| (d as f64).ln()))
}

/// Same as [`l_intervals`], but from divisor logarithms directly (used when
/// the divisors themselves would overflow 64 bits).
pub fn l_intervals_of_logs<I: IntoIterator<Item = f64>>(logs: I) -> IntervalUnion {
    let ln2 = std::f64::consts::LN_2;
    IntervalUnion::from_intervals(logs.into_iter().map(|t| (t - ln2, t)))
}

/// The clustering measure `L(a) = meas script_L(a)`.
///
/// `L(1) = log 2` exactly, and `log 2 <= L(a) <= tau(a) log 2` always.
pub fn l_measure(divs: &[u64]) -> f64 {
    l_intervals(divs).measure()
}

/// Ordered pairs of divisors `d < d' <= 2d` (the close-pair count `W*`).
///
/// Two-pointer scan over the sorted list, `O(tau(a))`.
pub fn close_divisor_pairs(divs: &[u64]) -> u64 {
    let mut count = 0u64;
    let mut j = 0usize;
    for i in 0..divs.len() {
        if j < i + 1 {
            j = i + 1;
        }
        while j < divs.len() && divs[j] <= 2 * divs[i] {
            j += 1;
        }
        count += (j - i - 1) as u64;
    }
    count
}

/// [`close_divisor_pairs`] for divisor lists too large for 64 bits.
pub fn close_divisor_pairs_u128(divs: &[u128]) -> u64 {
    let mut count = 0u64;
    let mut j = 0usize;
    for i in 0..divs.len() {
        if j < i + 1 {
            j = i + 1;
        }
        while j < divs.len() && divs[j] <= 2 * divs[i] {
            j += 1;
        }
        count += (j - i - 1) as u64;
    }
    count
}

/// `L(a)` from divisor logarithms; sorts the buffer in place.
///
/// The intervals all have length `log 2`, so after sorting the measure is
/// the sum of `min(next - t, log 2)` over consecutive logs, plus `log 2`
/// for the last. Agrees with [`l_intervals`] + [`IntervalUnion::measure`],
/// which the tests cross-check.
pub fn l_measure_of_logs_buf(logs: &mut [f64]) -> f64 {
    let ln2 = std::f64::consts::LN_2;
    logs.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite logs"));
    let mut total = 0.0;
    for i in 0..logs.len() {
        total += match logs.get(i + 1) {
            Some(&next) => (next - logs[i]).min(ln2),
            None => ln2,
        };
    }
    total
}

/// Divisors `d` of `a` with no other divisor in `(d, 2d]`.
///
/// Lower-bounds the clustering measure: `L(a) >= log 2 * isolated_count`,
/// and `isolated_count >= tau(a) - close_divisor_pairs(a)`.
pub fn isolated_divisor_count(divs: &[u64]) -> u64 {
    let mut count = 0u64;
    for i in 0..divs.len() {
        let next_in_range = divs.get(i + 1).map_or(false, |&d| d <= 2 * divs[i]);
        if !next_in_range {
            count += 1;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::SpfTable;
    use std::f64::consts::LN_2;

    fn divs_of(n: u64, t: &SpfTable) -> Vec<u64> {
        if n == 1 {
            return vec![1];
        }
        divisors(&t.factorize(n).unwrap()).unwrap()
    }

    fn brute_divisors(n: u64) -> Vec<u64> {
        (1..=n).filter(|d| n % d == 0).collect()
    }

    /// Independent measure oracle: split the line at every endpoint and
    /// test each elementary segment's midpoint for membership.
    fn measure_by_segments(divs: &[u64]) -> f64 {
        let mut cuts: Vec<f64> = divs
            .iter()
            .flat_map(|&d| {
                let t = (d as f64).ln();
                [t - LN_2, t]
            })
            .collect();
        cuts.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.dedup();
        let mut total = 0.0;
        for w in cuts.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            let inside = divs.iter().any(|&d| {
                let t = (d as f64).ln();
                t - LN_2 <= mid && mid < t
            });
            if inside {
                total += w[1] - w[0];
            }
        }
        total
    }

    #[test]
    fn divisor_examples() {
        let t = SpfTable::build(1000).unwrap();
        assert_eq!(divs_of(6, &t), vec![1, 2, 3, 6]);
        assert_eq!(divs_of(1, &t), vec![1]);
        assert_eq!(divs_of(36, &t), vec![1, 2, 3, 4, 6, 9, 12, 18, 36]);
    }

    #[test]
    fn divisors_match_brute_force() {
        let t = SpfTable::build(3000).unwrap();
        for n in 1..=3000 {
            assert_eq!(divs_of(n, &t), brute_divisors(n), "n = {n}");
        }
    }

    #[test]
    fn tau_interval_examples() {
        let t = SpfTable::build(1000).unwrap();
        assert_eq!(tau_interval(&divs_of(12, &t), 2.0, 4.0), 2); // 3, 4
        assert_eq!(tau_interval(&divs_of(7, &t), 8.0, 100.0), 0);
        for n in 1..=1000u64 {
            let d = divs_of(n, &t);
            assert_eq!(tau_interval(&d, 0.0, n as f64), d.len());
        }
    }

    #[test]
    fn l_measure_small_values() {
        let t = SpfTable::build(100).unwrap();
        // L(1) = log 2 exactly (one interval [-log 2, 0))
        assert_eq!(l_measure(&divs_of(1, &t)), LN_2);
        // L(2): [-log2, 0) and [0, log2) touch; measure 2 log 2
        assert!((l_measure(&divs_of(2, &t)) - 2.0 * LN_2).abs() < 1e-15);
        // L(6) = log 12, the cap log 2 + log 6
        assert!((l_measure(&divs_of(6, &t)) - 12f64.ln()).abs() < 1e-12);
        assert!((l_measure(&divs_of(6, &t)) - measure_by_segments(&divs_of(6, &t))).abs() < 1e-12);
    }

    #[test]
    fn l_measure_matches_segment_oracle() {
        let t = SpfTable::build(5000).unwrap();
        for n in 1..=2000u64 {
            let d = divs_of(n, &t);
            let got = l_measure(&d);
            let want = measure_by_segments(&d);
            assert!((got - want).abs() < 1e-10, "n = {n}: {got} vs {want}");
            // the sorted-logs fast path is a distinct algorithm; keep it honest
            let mut logs: Vec<f64> = d.iter().map(|&x| (x as f64).ln()).collect();
            let fast = l_measure_of_logs_buf(&mut logs);
            assert!((fast - want).abs() < 1e-10, "n = {n} fast path");
        }
    }

    #[test]
    fn merge_is_canonical_under_order() {
        let t = SpfTable::build(10_000).unwrap();
        let d = divs_of(7560, &t); // 64 divisors, heavy overlap
        let base = l_intervals(&d);
        let mut rev: Vec<u64> = d.clone();
        rev.reverse();
        assert_eq!(l_intervals(&rev), base);
        // interleaved order
        let mut mixed = Vec::new();
        let half = d.len() / 2;
        for i in 0..half {
            mixed.push(d[half + i]);
            mixed.push(d[i]);
        }
        if d.len() % 2 == 1 {
            mixed.push(*d.last().unwrap());
        }
        assert_eq!(l_intervals(&mixed), base);
    }

    #[test]
    fn close_pairs_examples() {
        let t = SpfTable::build(1000).unwrap();
        assert_eq!(close_divisor_pairs(&divs_of(1, &t)), 0);
        assert_eq!(close_divisor_pairs(&divs_of(6, &t)), 3); // (1,2),(2,3),(3,6)
        for p in [3u64, 5, 7, 11, 97] {
            assert_eq!(close_divisor_pairs(&divs_of(p, &t)), 0);
        }
        // pair count agrees with the quadratic scan
        for n in 1..=800u64 {
            let d = divs_of(n, &t);
            let brute = (0..d.len())
                .map(|i| {
                    ((i + 1)..d.len())
                        .filter(|&j| d[j] <= 2 * d[i])
                        .count() as u64
                })
                .sum::<u64>();
            assert_eq!(close_divisor_pairs(&d), brute, "n = {n}");
        }
    }

    #[test]
    fn isolated_examples() {
        let t = SpfTable::build(1000).unwrap();
        assert_eq!(isolated_divisor_count(&divs_of(6, &t)), 1); // only d = 6
        assert_eq!(isolated_divisor_count(&divs_of(1, &t)), 1);
        for p in [3u64, 5, 7, 11, 97] {
            assert_eq!(isolated_divisor_count(&divs_of(p, &t)), 2);
        }
    }

    #[test]
    fn clustering_inequalities_to_1e5() {
        let t = SpfTable::build(100_000).unwrap();
        for n in 1..=100_000u64 {
            let d = divs_of(n, &t);
            let l = l_measure(&d);
            let iso = isolated_divisor_count(&d);
            let tau = d.len() as u64;
            let wstar = close_divisor_pairs(&d);
            assert!(
                l >= LN_2 * iso as f64 - 1e-9,
                "L({n}) = {l} < log2 * {iso}"
            );
            assert!(iso + wstar >= tau, "n = {n}");
        }
    }

    #[test]
    fn factorization_constructor_validates() {
        let f = crate::sieve::Factorization::new(vec![(2, 2), (3, 1)]).unwrap();
        assert_eq!(f.n(), 12);
        assert_eq!(divisors(&f).unwrap(), vec![1, 2, 3, 4, 6, 12]);
        assert!(crate::sieve::Factorization::new(vec![(3, 1), (2, 1)]).is_err());
        assert!(crate::sieve::Factorization::new(vec![(4, 1)]).is_err());
    }
}
