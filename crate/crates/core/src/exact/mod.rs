//! Exact finite-length ground truth: the optimal guessing order, ranks,
//! the exact law of `G(W_k)` and its moments, exact subordinated moments
//! and a Monte-Carlo attack simulator.

mod brute;
mod distribution;
mod moments;
mod simulate;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::source::SourceDistribution;

pub use brute::{bruteforce_order, rank_bruteforce, BRUTE_FORCE_LIMIT};
pub use distribution::{GuessworkDistribution, Stratum, TypeClass, STRATUM_TOL};
pub use moments::{
    exact_guesswork_moment, exact_mean_log_guesswork, exact_subordinated_moment, log_power_sum,
    sum_log_range,
};
pub use simulate::{simulate_attack, SimulationReport, SummaryStat, TrialSample};

/// A string of character indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(chars: Vec<usize>) -> Self {
        Self(chars)
    }

    /// Checks every index against the alphabet size.
    pub fn checked(chars: Vec<usize>, alphabet: usize) -> Result<Self> {
        match chars.iter().find(|&&c| c >= alphabet) {
            Some(&symbol) => Err(Error::SymbolOutOfRange { symbol, alphabet }),
            None => Ok(Self(chars)),
        }
    }

    /// `"0120"` → `[0, 1, 2, 0]`; only for alphabets of at most 10 characters.
    pub fn from_digits(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as usize)
                    .ok_or(Error::SymbolOutOfRange { symbol: usize::MAX, alphabet: 10 })
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    pub fn chars(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Rank of `word` computed combinatorially from the type classes.
pub fn rank_typeclass(src: &SourceDistribution, word: &Word) -> Result<u128> {
    GuessworkDistribution::new(src, word.len())?.rank(word)
}
