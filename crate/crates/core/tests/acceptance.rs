//! Acceptance suite. Each check prints one `PASS`/`FAIL` line; the process
//! exits non-zero if any check fails.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;

use erasure_guesswork::exact::bruteforce_order;
use erasure_guesswork::figures::{emit_figure_data, FigureId};
use erasure_guesswork::{
    approx_pmf, compare_channels, exact_mean_log_guesswork, exact_subordinated_moment,
    rank_bruteforce, rank_typeclass, simulate_attack, subordinated_rate_dual,
    subordinated_rate_inf, GuessworkDistribution, NoiseModel, SourceDistribution,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Check = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn uniform_binary() -> SourceDistribution {
    SourceDistribution::uniform(2).unwrap()
}

fn random_source(rng: &mut ChaCha8Rng, m: usize) -> SourceDistribution {
    let raw: Vec<f64> = (0..m).map(|_| rng.gen_range(0.01..1.0)).collect();
    let sum: f64 = raw.iter().sum();
    let mut probs: Vec<f64> = raw.iter().map(|v| v / sum).collect();
    // Push the rounding residue onto the last entry so the sum is 1 to ~1 ulp.
    let rest: f64 = probs[..m - 1].iter().sum();
    probs[m - 1] = 1.0 - rest;
    SourceDistribution::new(probs).unwrap()
}

fn scgf_at_one_is_renyi_half() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5c6f);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let m = 2 + i % 5;
        let src = random_source(&mut rng, m);
        let oracle = 2.0 * src.probs().iter().map(|p| p.sqrt()).sum::<f64>().ln();
        let got = src.guesswork_scgf(1.0);
        let err = (got - oracle).abs();
        worst = worst.max(err);
        ensure(err <= 1e-12, || format!("probs {:?}: {got} vs {oracle}", src.probs()))?;
    }
    Ok(format!("100 sources, max abs error {worst:.2e}"))
}

fn uniform_approximation_is_exact() -> Outcome {
    let mut worst = 0.0f64;
    let mut checked = 0usize;
    for m in [2usize, 3] {
        let src = SourceDistribution::uniform(m).unwrap();
        for k in 1..=12 {
            let dist = GuessworkDistribution::new(&src, k).map_err(|e| e.to_string())?;
            let total = (m as u128).pow(k as u32);
            let want = (m as f64).powi(-(k as i32));
            for n in 1..=total {
                let exact = dist.pmf(n);
                let approx = approx_pmf(&src, k, n).map_err(|e| e.to_string())?;
                let e1 = (exact / want - 1.0).abs();
                let e2 = (approx / want - 1.0).abs();
                worst = worst.max(e1).max(e2);
                ensure(e1 <= 1e-9 && e2 <= 1e-9, || {
                    format!("m={m} k={k} n={n}: exact {exact}, approx {approx}, want {want}")
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} ranks, max rel error {worst:.2e}"))
}

fn duality_of_subordinated_rate() -> Outcome {
    let cases = [
        (uniform_binary(), NoiseModel::bernoulli(0.3).unwrap()),
        (SourceDistribution::new(vec![0.8, 0.2]).unwrap(), NoiseModel::deterministic(0.5).unwrap()),
        (uniform_binary(), NoiseModel::markov(0.1, 0.4).unwrap()),
    ];
    let mut worst = 0.0f64;
    for (src, noise) in &cases {
        let top = (src.alphabet_size() as f64).ln();
        for i in 0..64 {
            let x = top * i as f64 / 63.0;
            let a = subordinated_rate_inf(src, noise, x);
            let b = subordinated_rate_dual(src, noise, x);
            let gap = if a == b { 0.0 } else { (a - b).abs() };
            worst = worst.max(gap);
            ensure(gap < 1e-6, || format!("{noise} x={x}: inf {a} vs dual {b}"))?;
        }
    }
    Ok(format!("3 cases x 64 points, max gap {worst:.2e}"))
}

fn mean_guesswork_route() -> Outcome {
    let src = uniform_binary();
    let mut worst = 0.0f64;
    for p in [0.1, 0.3, 0.5] {
        let noise = NoiseModel::bernoulli(p).unwrap();
        for k in 1..=30usize {
            let got = exact_subordinated_moment(&src, &noise, k, 1.0).map_err(|e| e.to_string())?;
            let oracle = (((1.0 + p).powi(k as i32) + 1.0) / 2.0).ln();
            let rel = (got / oracle - 1.0).abs();
            worst = worst.max(rel);
            ensure(rel <= 1e-9, || format!("p={p} k={k}: {got} vs {oracle}"))?;
        }
        let limit = (1.0 + p).ln();
        let mut last = f64::INFINITY;
        for k in [10usize, 15, 20, 25, 30] {
            let v = exact_subordinated_moment(&src, &noise, k, 1.0).unwrap() / k as f64;
            let gap = (v - limit).abs();
            ensure(gap < last, || format!("p={p} k={k}: gap {gap} not below {last}"))?;
            last = gap;
        }
    }
    Ok(format!("max rel error {worst:.2e}, gaps strictly decreasing"))
}

fn mean_log_guesswork_route() -> Outcome {
    let src = uniform_binary();
    let noise = NoiseModel::bernoulli(0.5).unwrap();
    let limit = 0.5 * std::f64::consts::LN_2;
    let mut prev_value = f64::NEG_INFINITY;
    let mut prev_gap = f64::INFINITY;
    let mut gaps = Vec::new();
    for k in [8usize, 12, 16, 20] {
        // Already normalized per character.
        let v = exact_mean_log_guesswork(&src, &noise, k).map_err(|e| e.to_string())?;
        let gap = limit - v;
        ensure(v > prev_value, || format!("k={k}: {v} does not increase on {prev_value}"))?;
        ensure(gap.abs() < prev_gap, || format!("k={k}: gap {gap} not below {prev_gap}"))?;
        prev_value = v;
        prev_gap = gap.abs();
        gaps.push(format!("{gap:.4}"));
    }
    ensure(prev_gap < 0.05, || format!("final gap {prev_gap} >= 0.05"))?;
    Ok(format!("gaps {}", gaps.join(", ")))
}

fn rank_oracles_agree() -> Outcome {
    let sources = [
        (2usize, vec![0.5, 0.5]),
        (2, vec![0.7, 0.3]),
        (2, vec![0.25, 0.75]),
        (3, vec![1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]),
        (3, vec![0.5, 0.25, 0.25]),
        (3, vec![0.2, 0.5, 0.3]),
    ];
    let mut words = 0usize;
    for (m, probs) in sources {
        let src = SourceDistribution::new(probs).unwrap();
        let max_k = if m == 2 { 10 } else { 6 };
        for k in 1..=max_k {
            let order = bruteforce_order(&src, k).map_err(|e| e.to_string())?;
            let total = m.pow(k as u32);
            ensure(order.len() == total, || format!("m={m} k={k}: {} words", order.len()))?;
            let mut seen = vec![false; total];
            for (word, _) in &order {
                let a = rank_typeclass(&src, word).map_err(|e| e.to_string())?;
                let b = rank_bruteforce(&src, word).map_err(|e| e.to_string())?;
                ensure(a == b, || format!("{:?} k={k} {word:?}: {a} vs {b}", src.probs()))?;
                ensure(a >= 1 && a as usize <= total && !seen[a as usize - 1], || {
                    format!("{:?} k={k}: rank {a} repeated or out of range", src.probs())
                })?;
                seen[a as usize - 1] = true;
                words += 1;
            }
        }
    }
    Ok(format!("{words} words, ranks are a permutation of 1..=m^k"))
}

fn jensen_dominance() -> Outcome {
    let src = uniform_binary();
    let r_half = src.guesswork_scgf(1.0);
    let fig2 = emit_figure_data(FigureId::Fig2);
    let mut smallest = f64::INFINITY;
    for i in 0..=100 {
        let p = i as f64 / 100.0;
        let bern = NoiseModel::bernoulli(p).unwrap().scgf(r_half);
        let det = NoiseModel::deterministic(p).unwrap().scgf(r_half);
        let gap = bern - det;
        let oracle = (1.0 - p + p * 2.0).ln() - p * std::f64::consts::LN_2;
        ensure((gap - oracle).abs() <= 1e-15, || format!("p={p}: {gap} vs oracle {oracle}"))?;
        ensure((fig2.rows[i][1] - gap).abs() <= 1e-15, || format!("fig2 row {i} disagrees"))?;
        if i == 0 || i == 100 {
            ensure(gap.abs() <= 1e-12, || format!("p={p}: gap {gap} at endpoint"))?;
        } else {
            ensure(gap > 0.0, || format!("p={p}: gap {gap} not positive"))?;
            smallest = smallest.min(gap);
        }
    }
    Ok(format!("smallest interior gap {smallest:.3e}"))
}

fn interval_condition() -> Outcome {
    let src = uniform_binary();
    let bern = NoiseModel::bernoulli(0.1).unwrap();
    let upper = 1.1f64.ln() / std::f64::consts::LN_2;
    let mut flags = Vec::new();
    for mu in [0.1, 0.11, 0.13, 0.1375, 0.15] {
        let det = NoiseModel::deterministic(mu).unwrap();
        let c = compare_channels(&src, &det, &bern).map_err(|e| e.to_string())?;
        let want = mu > 0.1 && mu < upper;
        ensure(c.noisier_but_easier == want, || {
            format!("mu={mu}: flag {} expected {want}", c.noisier_but_easier)
        })?;
        flags.push(format!("{mu}:{}", c.noisier_but_easier));
    }
    Ok(format!("upper end {upper:.7}; {}", flags.join(" ")))
}

fn markov_reduces_to_bernoulli() -> Outcome {
    let mut worst = 0.0f64;
    for p in [0.2, 0.5] {
        let chain = NoiseModel::markov(p, 1.0 - p).unwrap();
        for i in 0..=600 {
            let beta = -3.0 + i as f64 / 100.0;
            let got = chain.scgf(beta);
            let oracle = (1.0 - p + p * beta.exp()).ln();
            let err = (got - oracle).abs();
            worst = worst.max(err);
            ensure(err <= 1e-12, || format!("p={p} beta={beta}: {got} vs {oracle}"))?;
        }
    }
    Ok(format!("max abs error {worst:.2e}"))
}

fn monte_carlo_consistency() -> Outcome {
    let src = uniform_binary();
    let noise = NoiseModel::bernoulli(0.5).unwrap();
    let k = 64;
    let a = simulate_attack(&src, &noise, k, 10_000, 0).map_err(|e| e.to_string())?;
    let b = simulate_attack(&src, &noise, k, 10_000, 0).map_err(|e| e.to_string())?;
    ensure(a == b, || "repeated run with seed 0 differs".into())?;
    let exact = exact_mean_log_guesswork(&src, &noise, k).map_err(|e| e.to_string())?;
    let s = a.log_guesswork_rate;
    let z = (s.mean - exact) / s.std_error;
    ensure(z.abs() <= 3.0, || format!("mean {} exact {exact} se {} z {z}", s.mean, s.std_error))?;
    Ok(format!("mean {:.6}, exact {exact:.6}, z = {z:.2}", s.mean))
}

fn figure_datasets() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for id in FigureId::ALL {
        let first = emit_figure_data(id).to_csv_string();
        let second = emit_figure_data(id).to_csv_string();
        ensure(first == second, || format!("{id}: output differs between calls"))?;
        let path = dir.path().join(format!("{id}.csv"));
        emit_figure_data(id).write_to_path(&path).map_err(|e| e.to_string())?;
        let on_disk = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
        ensure(on_disk == first, || format!("{id}: file differs from in-memory CSV"))?;
    }
    let fig3 = emit_figure_data(FigureId::Fig3);
    let row = fig3
        .rows
        .iter()
        .find(|r| r[0] == 0.5)
        .ok_or_else(|| "fig3 has no q = 0.5 row".to_string())?;
    let want = [0.0970406, 0.0953102, 0.0017304];
    for (got, want) in row[1..].iter().zip(want) {
        ensure((got - want).abs() <= 1e-6, || format!("fig3 q=0.5: {row:?}"))?;
    }
    ensure(row[3] > 0.0, || "fig3 q=0.5 diff is not positive".into())?;
    ensure(fig3.comments.iter().any(|c| c.contains("no sign change")), || {
        "fig3 comments do not document the sign of diff".into()
    })?;
    Ok(format!("3 CSVs byte-stable; fig3 q=0.5 = {:.7}, {:.7}, {:+.7}", row[1], row[2], row[3]))
}

fn main() -> ExitCode {
    let checks: [Check; 11] = [
        ("sCGF at 1 equals 2 log sum sqrt(p)", scgf_at_one_is_renyi_half),
        ("uniform LDP approximation is exact", uniform_approximation_is_exact),
        ("inf and dual subordinated rates agree", duality_of_subordinated_rate),
        ("E[G] growth under Bernoulli erasure", mean_guesswork_route),
        ("E[log G] growth under Bernoulli erasure", mean_log_guesswork_route),
        ("type-class and brute-force ranks agree", rank_oracles_agree),
        ("Bernoulli average growth dominates deterministic", jensen_dominance),
        ("noisier-but-easier interval", interval_condition),
        ("Markov(p, 1-p) reduces to Bernoulli(p)", markov_reduces_to_bernoulli),
        ("Monte-Carlo agrees with exact E[log G]", monte_carlo_consistency),
        ("figure datasets", figure_datasets),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let start = std::time::Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|p| Err(format!("panicked: {:?}", p.downcast_ref::<String>())));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2}: PASS  {name} ({detail}) [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", checks.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
