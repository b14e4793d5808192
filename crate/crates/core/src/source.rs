//! The i.i.d. character source: Rényi and Shannon entropies, the guesswork
//! scaled cumulant generating function and its rate function.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{self, log_sum_exp_iter, ARG_TOL};

/// Probabilities must sum to one within this tolerance.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Within this distance of `α = 1` the Rényi entropy uses the Shannon limit.
const SHANNON_SWITCH: f64 = 1e-6;

/// Relative slack when testing `x` against the right edge `log |support|`
/// of the guesswork rate function's domain.
const DOMAIN_EDGE_TOL: f64 = 1e-12;

/// Character distribution `P(W_1 = i)` over an alphabet of size `m`.
///
/// Zero-probability characters stay addressable by index but take no part in
/// support-dependent quantities (`R(0)`, ranking).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SourceDistribution {
    probs: Vec<f64>,
    #[serde(skip)]
    support: Vec<usize>,
    #[serde(skip)]
    support_log_probs: Vec<f64>,
}

impl SourceDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        for (index, &value) in probs.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidProbability { index, value });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized(sum));
        }
        let support: Vec<usize> = (0..probs.len()).filter(|&i| probs[i] > 0.0).collect();
        let support_log_probs = support.iter().map(|&i| probs[i].ln()).collect();
        Ok(Self { probs, support, support_log_probs })
    }

    /// Uniform distribution on `m` characters.
    pub fn uniform(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::EmptyDistribution);
        }
        Self::new(vec![1.0 / m as f64; m])
    }

    /// Binary source with `P(W_1 = 1) = q` (character index 0 carries `q`).
    pub fn binary(q: f64) -> Result<Self> {
        Self::new(vec![q, 1.0 - q])
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn alphabet_size(&self) -> usize {
        self.probs.len()
    }

    pub fn support_size(&self) -> usize {
        self.support.len()
    }

    /// Indices of the characters with positive probability, ascending.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// Natural logs of the support probabilities, aligned with [`Self::support`].
    pub fn support_log_probs(&self) -> &[f64] {
        &self.support_log_probs
    }

    pub fn max_prob(&self) -> f64 {
        self.probs.iter().copied().fold(0.0, f64::max)
    }

    pub fn is_uniform_on_support(&self) -> bool {
        let first = self.support_log_probs[0];
        self.support_log_probs.iter().all(|&l| (l - first).abs() < 1e-15)
    }

    /// `log Σ p_i^s` over the support.
    fn log_power_sum(&self, s: f64) -> f64 {
        log_sum_exp_iter(self.support_log_probs.iter().map(|&l| s * l))
    }

    /// Rényi entropy `R(α)` in nats for `α ∈ [0, ∞]`.
    pub fn renyi_entropy(&self, alpha: f64) -> f64 {
        if alpha == f64::INFINITY {
            return self.min_entropy();
        }
        if (alpha - 1.0).abs() < SHANNON_SWITCH {
            return self.shannon_entropy();
        }
        self.log_power_sum(alpha) / (1.0 - alpha)
    }

    pub fn shannon_entropy(&self) -> f64 {
        -self
            .support_log_probs
            .iter()
            .map(|&l| l.exp() * l)
            .sum::<f64>()
    }

    /// `R(∞) = −log max_i p_i`.
    pub fn min_entropy(&self) -> f64 {
        -self.max_prob().ln()
    }

    /// Right edge of the rate function's effective domain, `log |support|`.
    pub fn log_support_size(&self) -> f64 {
        (self.support_size() as f64).ln()
    }

    /// `Λ_G(α)`: `α·R(1/(1+α))` for `α > −1`, `−R(∞)` otherwise.
    ///
    /// The first branch is evaluated as `(1+α)·log Σ p_i^{1/(1+α)}`, which is
    /// the same quantity without the `α/(1 − 1/(1+α))` cancellation.
    pub fn guesswork_scgf(&self, alpha: f64) -> f64 {
        if alpha <= -1.0 {
            return -self.min_entropy();
        }
        if alpha == 0.0 {
            return 0.0;
        }
        let t = 1.0 + alpha;
        t * self.log_power_sum(1.0 / t)
    }

    /// `Λ_G*(x) = sup_α (xα − Λ_G(α))`, `+∞` outside `[0, log |support|]`.
    ///
    /// `Λ_G` is constant on `α ≤ −1`, so for `x ≥ 0` the search runs over
    /// `[−1, ∞)` with the right edge grown geometrically.
    pub fn guesswork_rate_function(&self, x: f64) -> f64 {
        let edge = self.log_support_size();
        if x.is_nan() || x < 0.0 || x > edge * (1.0 + DOMAIN_EDGE_TOL) + f64::MIN_POSITIVE {
            return f64::INFINITY;
        }
        if x >= edge {
            // The supremum is only approached as α → ∞; its limit is
            // −log|S| − mean of log p_i over the support.
            let mean_log = self.support_log_probs.iter().sum::<f64>() / self.support_size() as f64;
            let v = -edge - mean_log;
            return if v > 0.0 { v } else { 0.0 };
        }
        numerics::legendre_conjugate(|a| self.guesswork_scgf(a), x, -1.0, f64::INFINITY, ARG_TOL)
            .expect("guesswork sCGF is finite everywhere")
    }
}
