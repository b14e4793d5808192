//! Direct approximation of the guesswork pmf from the rate function,
//! `P(G = n) ≈ (1/n)·exp(−k·I((1/k)·log n))`, and its comparison with the
//! exact law.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{GuessworkDistribution, BRUTE_FORCE_LIMIT};
use crate::noise::NoiseModel;
use crate::source::SourceDistribution;
use crate::subordination::subordinated_rate_inf;

/// Number of log-spaced ranks used by [`compare_exact_vs_approx`].
pub const GRID_POINTS: usize = 64;

fn max_rank(src: &SourceDistribution, k: usize) -> u128 {
    (src.alphabet_size() as u128)
        .checked_pow(k as u32)
        .unwrap_or(u128::MAX)
}

fn check_rank(src: &SourceDistribution, k: usize, n: u128) -> Result<()> {
    if k == 0 {
        return Err(Error::ZeroLength);
    }
    let max = max_rank(src, k);
    if n == 0 || n > max {
        return Err(Error::RankOutOfRange { rank: n, max });
    }
    Ok(())
}

fn from_rate(k: usize, n: u128, rate: impl Fn(f64) -> f64) -> f64 {
    let log_n = (n as f64).ln();
    let kf = k as f64;
    (-log_n - kf * rate(log_n / kf)).exp()
}

/// LDP approximation to `P(G(W_k) = n)`.
pub fn approx_pmf(src: &SourceDistribution, k: usize, n: u128) -> Result<f64> {
    check_rank(src, k, n)?;
    Ok(from_rate(k, n, |x| src.guesswork_rate_function(x)))
}

/// The same template with the subordinated rate function, approximating
/// `P(G(W_{N_k}) = n)`.
pub fn approx_subordinated_pmf(
    src: &SourceDistribution,
    noise: &NoiseModel,
    k: usize,
    n: u128,
) -> Result<f64> {
    check_rank(src, k, n)?;
    Ok(from_rate(k, n, |x| subordinated_rate_inf(src, noise, x)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ApproxPoint {
    pub rank: u128,
    pub exact: f64,
    pub approx: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxComparison {
    pub k: usize,
    /// `max_n |log(approx/exact)|` over the grid.
    pub max_abs_log_ratio: f64,
    pub grid: Vec<ApproxPoint>,
}

/// Up to `points` distinct ranks, log-spaced over `1..=max`, both ends kept.
pub fn log_spaced_ranks(max: u128, points: usize) -> Vec<u128> {
    let top = (max as f64).ln();
    let mut out: Vec<u128> = (0..points)
        .map(|i| {
            if i + 1 == points {
                max
            } else {
                let r = (top * i as f64 / (points - 1) as f64).exp().round() as u128;
                r.clamp(1, max)
            }
        })
        .collect();
    out.dedup();
    out
}

/// Compares the exact pmf with [`approx_pmf`] on [`GRID_POINTS`] log-spaced
/// ranks of the positive-probability words.
pub fn compare_exact_vs_approx(src: &SourceDistribution, k: usize) -> Result<ApproxComparison> {
    if k == 0 {
        return Err(Error::ZeroLength);
    }
    let m = src.alphabet_size();
    if max_rank(src, k) > BRUTE_FORCE_LIMIT as u128 {
        return Err(Error::EnumerationTooLarge { alphabet: m, length: k });
    }
    let dist = GuessworkDistribution::new(src, k)?;
    let grid: Vec<ApproxPoint> = log_spaced_ranks(dist.total_words(), GRID_POINTS)
        .into_iter()
        .map(|rank| {
            Ok(ApproxPoint { rank, exact: dist.pmf(rank), approx: approx_pmf(src, k, rank)? })
        })
        .collect::<Result<_>>()?;
    let max_abs_log_ratio = grid
        .iter()
        .map(|p| (p.approx.ln() - p.exact.ln()).abs())
        .fold(0.0, f64::max);
    Ok(ApproxComparison { k, max_abs_log_ratio, grid })
}
