use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::noise::NoiseModel;
use crate::source::SourceDistribution;

use super::{GuessworkDistribution, Word};

const Z_95: f64 = 1.959_963_984_540_054;

/// One simulated attack: how many characters were erased and the log of the
/// number of guesses needed to recover them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialSample {
    pub erased: usize,
    pub log_guesswork: f64,
}

/// Sample mean and variance with a 95% normal confidence interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SummaryStat {
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl SummaryStat {
    fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let variance = if xs.len() > 1 {
            xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        let std_error = (variance / n).sqrt();
        Self {
            mean,
            variance,
            std_error,
            ci_low: mean - Z_95 * std_error,
            ci_high: mean + Z_95 * std_error,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub k: usize,
    pub trials: usize,
    pub seed: u64,
    pub noise: NoiseModel,
    /// Statistics of `(1/k)·log G(W_{N_k})`.
    pub log_guesswork_rate: SummaryStat,
    /// Statistics of `N_k / k`.
    pub erasure_fraction: SummaryStat,
    #[serde(skip)]
    pub samples: Vec<TrialSample>,
}

/// Simulates `trials` attacks on length-`k` strings.
///
/// Trial `i` draws from its own ChaCha stream `(seed, i)`, so the report is
/// the same whatever the number of worker threads.
pub fn simulate_attack(
    src: &SourceDistribution,
    noise: &NoiseModel,
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<SimulationReport> {
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    if k == 0 {
        return Err(Error::ZeroLength);
    }
    let counts = noise.erasure_count_distribution(k)?;
    let mut tables: Vec<Option<GuessworkDistribution>> = vec![None; k + 1];
    for (n, _) in counts.support() {
        tables[n] = Some(GuessworkDistribution::new(src, n)?);
    }
    let chars = WeightedIndex::new(src.probs()).expect("validated distribution");

    let samples = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial as u64);
            let word: Vec<usize> = (0..k).map(|_| chars.sample(&mut rng)).collect();
            let pattern = noise.sample_erasure_pattern(k, &mut rng);
            let erased: Vec<usize> = word
                .iter()
                .zip(&pattern)
                .filter_map(|(&c, &e)| e.then_some(c))
                .collect();
            let n = erased.len();
            let table = match &tables[n] {
                Some(t) => t,
                None => unreachable!("sampled an erasure count of probability zero"),
            };
            let rank = table.rank(&Word::new(erased))?;
            Ok(TrialSample { erased: n, log_guesswork: (rank as f64).ln() })
        })
        .collect::<Result<Vec<_>>>()?;

    let kf = k as f64;
    let rates: Vec<f64> = samples.iter().map(|s| s.log_guesswork / kf).collect();
    let fractions: Vec<f64> = samples.iter().map(|s| s.erased as f64 / kf).collect();
    Ok(SimulationReport {
        k,
        trials,
        seed,
        noise: *noise,
        log_guesswork_rate: SummaryStat::from_samples(&rates),
        erasure_fraction: SummaryStat::from_samples(&fractions),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_erasures_means_one_guess() {
        let src = SourceDistribution::new(vec![0.3, 0.7]).unwrap();
        let r = simulate_attack(&src, &NoiseModel::bernoulli(0.0).unwrap(), 20, 200, 5).unwrap();
        assert!(r.samples.iter().all(|s| s.log_guesswork == 0.0 && s.erased == 0));
        assert_eq!(r.log_guesswork_rate.mean, 0.0);
    }

    #[test]
    fn same_seed_same_report() {
        let src = SourceDistribution::new(vec![0.5, 0.3, 0.2]).unwrap();
        let noise = NoiseModel::markov(0.2, 0.5).unwrap();
        let a = simulate_attack(&src, &noise, 12, 500, 77).unwrap();
        let b = simulate_attack(&src, &noise, 12, 500, 77).unwrap();
        assert_eq!(a, b);
        let c = simulate_attack(&src, &noise, 12, 500, 78).unwrap();
        assert_ne!(a.samples, c.samples);
    }

    #[test]
    fn independent_of_thread_count() {
        let src = SourceDistribution::uniform(2).unwrap();
        let noise = NoiseModel::bernoulli(0.4).unwrap();
        let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let a = single.install(|| simulate_attack(&src, &noise, 16, 300, 1).unwrap());
        let many = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let b = many.install(|| simulate_attack(&src, &noise, 16, 300, 1).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn deterministic_channel_erases_fixed_count() {
        let src = SourceDistribution::uniform(3).unwrap();
        let r = simulate_attack(&src, &NoiseModel::deterministic(0.25).unwrap(), 8, 50, 0).unwrap();
        assert!(r.samples.iter().all(|s| s.erased == 2));
        assert_eq!(r.erasure_fraction.variance, 0.0);
    }

    #[test]
    fn rejects_empty_runs() {
        let src = SourceDistribution::uniform(2).unwrap();
        let noise = NoiseModel::bernoulli(0.5).unwrap();
        assert_eq!(simulate_attack(&src, &noise, 8, 0, 0), Err(Error::NoTrials));
        assert_eq!(simulate_attack(&src, &noise, 0, 10, 0), Err(Error::ZeroLength));
    }
}
