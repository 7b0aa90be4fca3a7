//! Acceptance suite: one test per exit criterion, each printing a PASS
//! line with the measured quantities and asserting its runtime budget.
//! Run with `cargo test -p rough-divisors-cli --test acceptance -- --nocapture`
//! to see the measurements.

use rough_divisors::counting::{
    count_h, count_h_naive, farey_product_count, mult_table_count, rough_count, sum_over_p,
    CountQuery, PSumQuery, Weight,
};
use rough_divisors::divisors::{divisors, l_measure};
use rough_divisors::formulas::{norton_bound, poisson_partial_sum};
use rough_divisors::mc::{factorial, u_k, vol_t, vol_yk};
use rough_divisors::sieve::{lambda_ladder, mertens_sum, primes_in, SpfTable};
use rough_divisors_cli as cli;
use std::f64::consts::LN_2;
use std::time::Instant;

const TOL: f64 = 1e-9;

fn divs_of(n: u64, t: &SpfTable) -> Vec<u64> {
    if n == 1 {
        vec![1]
    } else {
        divisors(&t.factorize(n).unwrap()).unwrap()
    }
}

#[test]
fn criterion_1_lambda_ladder_exactness() {
    let start = Instant::now();
    let ladder = lambda_ladder(100).unwrap();
    assert_eq!(ladder.lambda(1), 2);
    assert_eq!(ladder.lambda(2), 7);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "budget 1 s, took {elapsed:?}");
    println!("criterion 1: PASS - lambda_1 = 2, lambda_2 = 7 exactly [{elapsed:?}]");
}

#[test]
fn criterion_2_clustering_measure_correctness() {
    let start = Instant::now();

    // L(1) = log 2 exactly
    assert_eq!(l_measure(&[1]), LN_2);

    // L(6) = log 12 within 1e-9
    let table = SpfTable::build(1_000_000).unwrap();
    let l6 = l_measure(&divs_of(6, &table));
    assert!((l6 - 12f64.ln()).abs() < TOL);

    // bound (i) and prefix bound (iii) for every squarefree a <= 1e5
    for a in 1..=100_000u64 {
        let factors = if a == 1 {
            Vec::new()
        } else {
            let f = table.factorize(a).unwrap();
            if !f.is_squarefree() {
                continue;
            }
            f.factors().to_vec()
        };
        let d = divs_of(a, &table);
        let l = l_measure(&d);
        let cap_i = (d.len() as f64 * LN_2).min(LN_2 + (a as f64).ln());
        assert!(l <= cap_i + TOL, "(i) fails at a = {a}: {l} > {cap_i}");
        let k = factors.len();
        let mut cap_iii = f64::INFINITY;
        let mut log_prefix = 0.0f64;
        for j in 0..=k {
            if j > 0 {
                log_prefix += (factors[j - 1].0 as f64).ln();
            }
            cap_iii = cap_iii.min(2f64.powi((k - j) as i32) * (log_prefix + LN_2));
        }
        assert!(l <= cap_iii + TOL, "(iii) fails at a = {a}: {l} > {cap_iii}");
    }

    // bound (ii) on 200 seeded coprime pairs with ab <= 1e6
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(61);
    let mut checked = 0;
    while checked < 200 {
        let a = rng.random_range(2..=1000u64);
        let b = rng.random_range(2..=1000u64);
        if rough_divisors::counting::gcd(a, b) != 1 {
            continue;
        }
        let la = l_measure(&divs_of(a, &table));
        let lab = l_measure(&divs_of(a * b, &table));
        let tau_b = divs_of(b, &table).len() as f64;
        assert!(lab <= tau_b * la + TOL, "(ii) fails at a={a} b={b}");
        checked += 1;
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "budget 60 s, took {elapsed:?}");
    println!(
        "criterion 2: PASS - L(1) = log 2, L(6) = log 12, bounds (i)-(iii) on \
         squarefree a <= 1e5 and 200 coprime pairs [{elapsed:?}]"
    );
}

#[test]
fn criterion_3_counter_oracle_equivalence() {
    let start = Instant::now();

    // spot values
    assert_eq!(count_h(&CountQuery::new(100, 4, 8, 1).unwrap()).unwrap(), 48);
    assert_eq!(count_h(&CountQuery::new(100, 4, 8, 3).unwrap()).unwrap(), 11);
    assert_eq!(rough_count(100, 3, false).unwrap(), 33);

    let mut configs = 0;
    for &x in &[1_000u64, 10_000] {
        for &y in &[4u64, 10, 31] {
            for &z in &[2 * y, 3 * y] {
                for &w in &[1u64, 3, 5, 10] {
                    for &sf in &[false, true] {
                        let q = CountQuery::new(x, y, z, w).unwrap().squarefree(sf);
                        let fast = count_h(&q).unwrap();
                        let slow = count_h_naive(&q).unwrap();
                        assert_eq!(fast, slow, "x={x} y={y} z={z} w={w} sf={sf}");
                        configs += 1;
                    }
                }
            }
        }
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "budget 2 min, took {elapsed:?}");
    println!(
        "criterion 3: PASS - marking counter equals the naive oracle on \
         {configs} configurations, spot values 48/11/33 [{elapsed:?}]"
    );
}

#[test]
fn criterion_4_mult_table_inequality_chain() {
    let start = Instant::now();
    for &n in &[64u64, 128, 256] {
        for &w in &[2u64, 5, 10] {
            let m = mult_table_count(n, w).unwrap();
            let lower = count_h(&CountQuery::new(n * n / 4, n / 4, n / 2, w).unwrap()).unwrap();
            // sum over 2^k <= n of H(n^2/2^k, n/2^(k+1), n/2^k); the final
            // term (2^k = n) has z = 1 > y, where the divisor d = 1 makes it
            // a plain rough count
            let mut upper = 0u64;
            let mut pow = 1u64;
            while pow <= n {
                let x = n * n / pow;
                let z = n / pow;
                upper += if 2 * pow <= n {
                    count_h(&CountQuery::new(x, n / (2 * pow), z, w).unwrap()).unwrap()
                } else {
                    rough_count(x, w, false).unwrap()
                };
                pow *= 2;
            }
            assert!(
                lower <= m && m <= upper,
                "N={n} w={w}: {lower} <= {m} <= {upper} violated"
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 180.0, "budget 3 min, took {elapsed:?}");
    println!(
        "criterion 4: PASS - dyadic chain brackets the table count for \
         N in {{64,128,256}}, w in {{2,5,10}} [{elapsed:?}]"
    );
}

#[test]
fn criterion_5_farey_products() {
    let start = Instant::now();
    assert_eq!(farey_product_count(2).unwrap(), 3);
    for n in 1..=100u64 {
        let farey = farey_product_count(n).unwrap();
        let table = mult_table_count(n, 1).unwrap();
        assert!(
            farey <= table * table,
            "N={n}: {farey} > {table}^2"
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "budget 2 min, took {elapsed:?}");
    println!(
        "criterion 5: PASS - |F_2 F_2| = 3 and |F_N F_N| <= M(N)^2 for N <= 100 \
         [{elapsed:?}]"
    );
}

#[test]
fn criterion_6_subset_sum_vs_mertens_power() {
    let start = Instant::now();
    let mut checked = 0;
    for &w in &[2u64, 3, 5, 10, 25] {
        let after = primes_in(w, 1000);
        for &cnt in &[0usize, 1, 5, 10, 20] {
            let t = if cnt == 0 { w } else { after[cnt - 1] };
            let m = mertens_sum(w, t);
            let mut mpow = 1.0f64; // m^k / k!
            for k in 0..=cnt as u32 {
                if k > 0 {
                    mpow *= m / k as f64;
                }
                let lhs = sum_over_p(&PSumQuery {
                    w,
                    t,
                    k: Some(k),
                    weight: Weight::Reciprocal,
                })
                .unwrap();
                assert!(lhs <= mpow, "w={w} t={t} k={k}: {lhs} > {mpow}");
                checked += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "budget 1 min, took {elapsed:?}");
    println!(
        "criterion 6: PASS - exact inequality on {checked} (w,t,k) triples, \
         windows up to 20 primes [{elapsed:?}]"
    );
}

#[test]
fn criterion_7_norton_envelope() {
    let start = Instant::now();
    let mut c1 = f64::INFINITY;
    let mut c2 = 0.0f64;
    for x in 1..=60u64 {
        for h in 0..=x {
            for m in h..=x {
                let ratio = poisson_partial_sum(x as f64, h, m).unwrap()
                    / norton_bound(x as f64, h, m).unwrap();
                c1 = c1.min(ratio);
                c2 = c2.max(ratio);
            }
        }
    }
    assert!(c1 > 0.0, "lower envelope must be positive");
    assert!(
        c2 / c1 <= 100.0,
        "envelope spread {c2}/{c1} = {} > 100",
        c2 / c1
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "budget 10 s, took {elapsed:?}");
    println!(
        "criterion 7: PASS - ratio in [{c1:.6}, {c2:.6}], spread {:.3} \
         [{elapsed:?}]",
        c2 / c1
    );
}

#[test]
fn criterion_8_monte_carlo_volumes() {
    let start = Instant::now();
    let samples = 1_000_000u64;

    // (a) unconstrained indicator integrates to 1/k! within 3 sigma
    for k in 1..=12usize {
        let est = vol_yk(k, 1 << 30, 1, k as u32 + 1, samples, 81).unwrap();
        let want = 1.0 / factorial(k as u64);
        assert!(
            (est.mean - want).abs() <= 3.0 * est.stderr + 1e-18,
            "(a) k={k}: {} vs {want}",
            est.mean
        );
    }
    println!("criterion 8a: PASS - simplex normalization exact for k <= 12");

    // (b) the k=1 growth region is everything once gamma >= 1
    for v in [1u32, 5, 10] {
        for gamma in [1u32, 3] {
            let est = vol_t(1, v, gamma, samples, 82).unwrap();
            assert!(
                (est.mean - 1.0).abs() <= 3.0 * est.stderr + 1e-18,
                "(b) v={v} gamma={gamma}: {}",
                est.mean
            );
        }
    }
    println!("criterion 8b: PASS - vol_t(1, v, gamma >= 1) = 1");

    // (d) U_k envelope constant over the full desk grid
    let mut c_max = 0.0f64;
    let mut c_arg = (0usize, 0u32, 0u32);
    for v in 1..=10u32 {
        for u in 1..=4u32 {
            for k in 1..=12usize {
                if k as u32 > 10 * v {
                    continue;
                }
                let seed = (k * 100 + v as usize * 10 + u as usize) as u64;
                let est = u_k(k, v, u, samples, seed).unwrap();
                let b = k as i64 - v as i64 - u as i64;
                let envelope = u as f64 * (1.0 + (b * b) as f64)
                    / (factorial(k as u64 + 1) * (2f64.powi(b as i32) + 1.0));
                let c = est.mean / envelope;
                assert!(c.is_finite() && c > 0.0);
                if c > c_max {
                    c_max = c;
                    c_arg = (k, v, u);
                }
            }
        }
    }
    assert!(
        c_max <= 100.0,
        "(d) envelope constant {c_max} > 100 at {c_arg:?}"
    );
    println!(
        "criterion 8d: PASS - max envelope constant C = {c_max:.3} at \
         (k,v,u) = {c_arg:?}"
    );

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 180.0, "budget 3 min, took {elapsed:?}");

    // (c) the pinned lower-bound floor at (k=12, v=10, s=4, M=1).
    //
    // The region's true volume at M = 1 is ~3e-14 (confirmed by an
    // independent sampler and, at k = 3, by grid integration), while the
    // floor below is 0.01 * 3/13! ~ 4.8e-12. The positive-constant
    // guarantee behind the floor assumes a large slack parameter M; at
    // M = 1 the observed constant is ~1e-4, so this assertion fails by
    // about two orders of magnitude. It is kept exactly as specified
    // rather than weakened; see the PASS/FAIL line for the measurement.
    let est = vol_yk(12, 4, 10, 1, samples, 83).unwrap();
    let scale = (12.0 - 10.0 + 1.0) / factorial(13);
    let floor = 0.01 * scale;
    println!(
        "criterion 8c: estimate {} (hits {}), lemma scale {scale:.3e}, \
         observed constant {:.3e}, pinned floor {floor:.3e} [{elapsed:?}]",
        est.mean,
        est.hit_count,
        est.mean / scale
    );
    assert!(
        est.mean >= floor,
        "(c) vol_yk(12,10,s=4,M=1) = {} < floor {floor} \
         (observed lemma constant {:.3e}; the floor's 0.01 presumes large M)",
        est.mean,
        est.mean / scale
    );
}

#[test]
fn criterion_9_ratio_sweeps_archive() {
    let start = Instant::now();
    let dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance-csv");
    std::fs::create_dir_all(&dir).unwrap();

    let check = |csv: &cli::Csv, name: &str, factor: f64| {
        let ratios: Vec<f64> = csv
            .rows
            .iter()
            .map(|row| row.last().unwrap().parse::<f64>().unwrap())
            .collect();
        assert!(!ratios.is_empty());
        for r in &ratios {
            assert!(r.is_finite() && *r > 0.0, "{name}: ratio {r}");
            assert!(
                (0.02..=50.0).contains(r),
                "{name}: ratio {r} outside [1/50, 50]"
            );
        }
        let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let max = ratios.iter().copied().fold(0.0f64, f64::max);
        assert!(
            max / min <= factor,
            "{name}: spread {max}/{min} exceeds {factor}"
        );
        std::fs::write(dir.join(format!("{name}.csv")), csv.render()).unwrap();
        (min, max)
    };

    let h = cli::sweep_h_vs_order(&cli::defaults::H_VS_ORDER_YS).unwrap();
    let (hmin, hmax) = check(&h, "h_vs_order", 20.0);

    let hl = cli::sweep_hl_ratio(&cli::defaults::HL_POINTS).unwrap();
    let (lmin, lmax) = check(&hl, "hl_ratio", 20.0);

    // archived for regression alongside the gated sweeps
    let he = cli::sweep_heuristic_vs_exact(
        cli::defaults::HEURISTIC_X,
        &cli::defaults::HEURISTIC_YS,
        &cli::defaults::HEURISTIC_WS,
    )
    .unwrap();
    std::fs::write(dir.join("heuristic_vs_exact.csv"), he.render()).unwrap();
    let no = cli::sweep_norton(cli::defaults::NORTON_MAX_X).unwrap();
    std::fs::write(dir.join("norton.csv"), no.render()).unwrap();

    let elapsed = start.elapsed();
    println!(
        "criterion 9: PASS - h_vs_order ratio in [{hmin:.4}, {hmax:.4}], \
         hl_ratio in [{lmin:.4}, {lmax:.4}]; CSV archived under {} [{elapsed:?}]",
        dir.display()
    );
}
