//! Experiment runner behind the `roughdiv` binary.
//!
//! Each runner produces a [`Csv`] table: a header row, one data row per
//! grid point in grid order, and optional trailing summary rows prefixed
//! `#summary`. Output is byte-stable for a fixed configuration and seed.

use rough_divisors::counting::{
    count_h_with_budget, farey_product_count, mult_table_count, rough_count, sum_over_p,
    CountQuery, PSumQuery, Weight, MARK_BUDGET,
};
use rough_divisors::divisors::{
    close_divisor_pairs, divisors, isolated_divisor_count, l_measure,
};
use rough_divisors::formulas::{h_dyadic_order, heuristic_h_estimate, norton_bound, poisson_partial_sum};
use rough_divisors::mc::{u_k, vol_t, vol_yk, VolumeEstimate};
use rough_divisors::sieve::{lambda_ladder, SpfTable};
use rough_divisors::Result;

/// A CSV table: header, rows, and `#summary` key/value rows.
#[derive(Debug, Clone, Default)]
pub struct Csv {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub summary: Vec<(String, String)>,
}

impl Csv {
    pub fn new<S: Into<String>>(header: Vec<S>) -> Csv {
        Csv {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            summary: Vec::new(),
        }
    }

    pub fn push_row<S: ToString>(&mut self, row: Vec<S>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row.iter().map(ToString::to_string).collect());
    }

    pub fn push_summary(&mut self, key: &str, value: impl ToString) {
        self.summary.push((key.to_string(), value.to_string()));
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        for (k, v) in &self.summary {
            out.push_str(&format!("#summary,{k},{v}\n"));
        }
        out
    }
}

fn ratio_summary(csv: &mut Csv, ratios: &[f64]) {
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let max = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    csv.push_summary("min_ratio", min);
    csv.push_summary("max_ratio", max);
}

// ---------------------------------------------------------------------------
// one-shot runners

pub fn run_count_h(x: u64, y: u64, z: u64, w: u64, squarefree: bool, budget: u64) -> Result<Csv> {
    let q = CountQuery::new(x, y, z, w)?.squarefree(squarefree);
    let count = count_h_with_budget(&q, budget)?;
    let mut csv = Csv::new(vec!["x", "y", "z", "w", "squarefree", "count"]);
    csv.push_row(vec![
        x.to_string(),
        y.to_string(),
        z.to_string(),
        w.to_string(),
        squarefree.to_string(),
        count.to_string(),
    ]);
    Ok(csv)
}

pub fn run_rough_count(x: u64, z: u64, half: bool) -> Result<Csv> {
    let count = rough_count(x, z, half)?;
    let mut csv = Csv::new(vec!["x", "z", "half", "count"]);
    csv.push_row(vec![x.to_string(), z.to_string(), half.to_string(), count.to_string()]);
    Ok(csv)
}

pub fn run_mult_table(n: u64, w: u64) -> Result<Csv> {
    let count = mult_table_count(n, w)?;
    let mut csv = Csv::new(vec!["n", "w", "count"]);
    csv.push_row(vec![n.to_string(), w.to_string(), count.to_string()]);
    Ok(csv)
}

pub fn run_farey(n: u64) -> Result<Csv> {
    let count = farey_product_count(n)?;
    let mut csv = Csv::new(vec!["n", "count"]);
    csv.push_row(vec![n.to_string(), count.to_string()]);
    Ok(csv)
}

pub fn run_lambda_ladder(limit: u64) -> Result<Csv> {
    let ladder = lambda_ladder(limit)?;
    let mut csv = Csv::new(vec!["j", "lambda", "block_len", "recip_sum"]);
    for j in 1..=ladder.num_blocks() {
        let block = ladder.block(j);
        let sum: f64 = block.iter().map(|&p| 1.0 / p as f64).sum();
        csv.push_row(vec![
            j.to_string(),
            ladder.lambda(j).to_string(),
            block.len().to_string(),
            sum.to_string(),
        ]);
    }
    csv.push_summary("dyadic_deviation", ladder.dyadic_deviation());
    Ok(csv)
}

pub fn run_l_of_a(values: impl Iterator<Item = u64>, table_limit: u64) -> Result<Csv> {
    let table = SpfTable::build(table_limit.max(2))?;
    let mut csv = Csv::new(vec!["a", "tau", "l", "wstar", "isolated"]);
    for a in values {
        let divs = if a == 1 {
            vec![1]
        } else {
            divisors(&table.factorize(a)?)?
        };
        csv.push_row(vec![
            a.to_string(),
            divs.len().to_string(),
            l_measure(&divs).to_string(),
            close_divisor_pairs(&divs).to_string(),
            isolated_divisor_count(&divs).to_string(),
        ]);
    }
    Ok(csv)
}

pub fn run_sum_p(w: u64, t: u64, k: Option<u32>, weight: Weight) -> Result<Csv> {
    let q = PSumQuery { w, t, k, weight };
    let sum = sum_over_p(&q)?;
    let mut csv = Csv::new(vec!["w", "t", "k", "weight", "sum"]);
    csv.push_row(vec![
        w.to_string(),
        t.to_string(),
        k.map_or("all".to_string(), |k| k.to_string()),
        format!("{weight:?}"),
        sum.to_string(),
    ]);
    Ok(csv)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VolumeKind {
    Yk,
    T,
    Uk,
}

#[allow(clippy::too_many_arguments)]
pub fn run_volume(
    kind: VolumeKind,
    k: usize,
    v: u32,
    s: i64,
    m: u32,
    gamma: u32,
    u: u32,
    samples: u64,
    seed: u64,
) -> Result<Csv> {
    let est: VolumeEstimate = match kind {
        VolumeKind::Yk => vol_yk(k, s, v, m, samples, seed)?,
        VolumeKind::T => vol_t(k, v, gamma, samples, seed)?,
        VolumeKind::Uk => u_k(k, v, u, samples, seed)?,
    };
    let mut csv = Csv::new(vec![
        "kind", "k", "v", "s", "m", "gamma", "u", "samples", "seed", "mean", "stderr", "hits",
    ]);
    csv.push_row(vec![
        format!("{kind:?}").to_lowercase(),
        k.to_string(),
        v.to_string(),
        s.to_string(),
        m.to_string(),
        gamma.to_string(),
        u.to_string(),
        est.samples.to_string(),
        est.seed.to_string(),
        est.mean.to_string(),
        est.stderr.to_string(),
        est.hit_count.to_string(),
    ]);
    Ok(csv)
}

// ---------------------------------------------------------------------------
// ratio sweeps

/// Exact dyadic count against the order formula
/// `x/((log y)^E (log log y)^{3/2})`, at `x = 10 y^2`, `w = 1`.
pub fn sweep_h_vs_order(ys: &[u64]) -> Result<Csv> {
    let mut csv = Csv::new(vec!["x", "y", "w", "count", "order", "ratio"]);
    let mut ratios = Vec::new();
    for &y in ys {
        let x = 10 * y * y;
        let q = CountQuery::new(x, y, 2 * y, 1)?;
        let count = count_h_with_budget(&q, MARK_BUDGET)?;
        let order = h_dyadic_order(x, y)?;
        let ratio = count as f64 / order;
        ratios.push(ratio);
        csv.push_row(vec![
            x.to_string(),
            y.to_string(),
            "1".to_string(),
            count.to_string(),
            order.to_string(),
            ratio.to_string(),
        ]);
    }
    ratio_summary(&mut csv, &ratios);
    Ok(csv)
}

/// The uniform-divisor heuristic against the exact rough dyadic count.
pub fn sweep_heuristic_vs_exact(x: u64, ys: &[u64], ws: &[u64]) -> Result<Csv> {
    let mut csv = Csv::new(vec!["x", "y", "w", "heuristic", "count", "ratio"]);
    let mut ratios = Vec::new();
    for &y in ys {
        for &w in ws {
            if w > y {
                continue;
            }
            let q = CountQuery::new(x, y, 2 * y, w)?;
            let count = count_h_with_budget(&q, MARK_BUDGET)?;
            let heuristic = heuristic_h_estimate(x, y, w)?;
            let ratio = heuristic / count.max(1) as f64;
            ratios.push(ratio);
            csv.push_row(vec![
                x.to_string(),
                y.to_string(),
                w.to_string(),
                heuristic.to_string(),
                count.to_string(),
                ratio.to_string(),
            ]);
        }
    }
    ratio_summary(&mut csv, &ratios);
    Ok(csv)
}

/// Poisson partial sums against their two-sided comparator over the
/// exhaustive integer grid `1 <= x <= max_x`, `0 <= h <= m <= x`.
pub fn sweep_norton(max_x: u64) -> Result<Csv> {
    let mut csv = Csv::new(vec!["x", "h", "m", "partial_sum", "bound", "ratio"]);
    let mut ratios = Vec::new();
    for x in 1..=max_x {
        for h in 0..=x {
            for m in h..=x {
                let sum = poisson_partial_sum(x as f64, h, m)?;
                let bound = norton_bound(x as f64, h, m)?;
                let ratio = sum / bound;
                ratios.push(ratio);
                csv.push_row(vec![
                    x.to_string(),
                    h.to_string(),
                    m.to_string(),
                    sum.to_string(),
                    bound.to_string(),
                    ratio.to_string(),
                ]);
            }
        }
    }
    ratio_summary(&mut csv, &ratios);
    Ok(csv)
}

/// Local-to-global check: the dyadic increment `(H(x) - H(x/2)) log^2 y / x`
/// against the exact clustering sum `sum over P(w, y) of L(a)/a`.
pub fn sweep_hl_ratio(points: &[(u64, u64, u64)]) -> Result<Csv> {
    let mut csv = Csv::new(vec!["x", "y", "w", "lhs", "rhs", "ratio"]);
    let mut ratios = Vec::new();
    for &(x, y, w) in points {
        let hi = count_h_with_budget(&CountQuery::new(x, y, 2 * y, w)?, MARK_BUDGET)?;
        let lo = count_h_with_budget(&CountQuery::new(x / 2, y, 2 * y, w)?, MARK_BUDGET)?;
        let ly = (y as f64).ln();
        let lhs = (hi - lo) as f64 * ly * ly / x as f64;
        let rhs = sum_over_p(&PSumQuery {
            w,
            t: y,
            k: None,
            weight: Weight::LOverA,
        })?;
        let ratio = lhs / rhs;
        ratios.push(ratio);
        csv.push_row(vec![
            x.to_string(),
            y.to_string(),
            w.to_string(),
            lhs.to_string(),
            rhs.to_string(),
            ratio.to_string(),
        ]);
    }
    ratio_summary(&mut csv, &ratios);
    Ok(csv)
}

/// Default grids for the ratio sweeps.
pub mod defaults {
    /// `y` grid for [`super::sweep_h_vs_order`]: log-spaced across `[10^3, 10^4]`.
    pub const H_VS_ORDER_YS: [u64; 5] = [1000, 1778, 3162, 5623, 10000];
    pub const HEURISTIC_X: u64 = 100_000_000;
    pub const HEURISTIC_YS: [u64; 3] = [100, 200, 400];
    pub const HEURISTIC_WS: [u64; 2] = [4, 10];
    pub const NORTON_MAX_X: u64 = 60;
    /// `(x, y, w)` points for [`super::sweep_hl_ratio`].
    pub const HL_POINTS: [(u64, u64, u64); 6] = [
        (100_000_000, 30, 4),
        (100_000_000, 30, 5),
        (100_000_000, 40, 4),
        (100_000_000, 40, 5),
        (100_000_000, 60, 4),
        (100_000_000, 60, 5),
    ];
}
