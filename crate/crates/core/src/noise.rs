//! Erasure processes: sCGF `Λ_N`, rate function `Λ_N*`, mean erasure rate,
//! exact finite-length law of the erasure count and pattern sampling.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{self, larger_eigenvalue, log_add_exp, ARG_TOL};

/// Tolerance used when matching `y` against the point mass of a
/// deterministic channel.
const POINT_MASS_TOL: f64 = 1e-12;

/// Slack added before flooring `μk`, so that e.g. `0.29 * 100` gives 29.
const FLOOR_SLACK: f64 = 1e-9;

/// How characters of a length-`k` string get erased.
///
/// For the Markov chain, state 1 is "kept" and state 2 is "erased";
/// `a = P(kept → erased)`, `b = P(erased → kept)`, and the chain starts in
/// its stationary distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseModel {
    Deterministic { mu: f64 },
    BernoulliIid { p: f64 },
    MarkovTwoState { a: f64, b: f64 },
}

fn unit_interval(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::InvalidParameter { name, value })
    }
}

fn open_unit_interval(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value < 1.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter { name, value })
    }
}

/// `y·log(y/p)` with `0·log 0 = 0`.
fn relative_entropy_term(y: f64, p: f64) -> f64 {
    if y == 0.0 {
        0.0
    } else if p == 0.0 {
        f64::INFINITY
    } else {
        y * (y / p).ln()
    }
}

fn ln_choose(ln_fact: &[f64], n: usize, r: usize) -> f64 {
    ln_fact[n] - ln_fact[r] - ln_fact[n - r]
}

/// `ln i!` for `i = 0..=n`.
pub(crate) fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for i in 1..=n {
        acc += (i as f64).ln();
        out.push(acc);
    }
    out
}

impl NoiseModel {
    pub fn deterministic(mu: f64) -> Result<Self> {
        Ok(Self::Deterministic { mu: unit_interval("mu", mu)? })
    }

    pub fn bernoulli(p: f64) -> Result<Self> {
        Ok(Self::BernoulliIid { p: unit_interval("p", p)? })
    }

    pub fn markov(a: f64, b: f64) -> Result<Self> {
        Ok(Self::MarkovTwoState {
            a: open_unit_interval("a", a)?,
            b: open_unit_interval("b", b)?,
        })
    }

    /// Re-checks the parameter ranges (useful for values built by hand).
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Deterministic { mu } => Self::deterministic(mu).map(drop),
            Self::BernoulliIid { p } => Self::bernoulli(p).map(drop),
            Self::MarkovTwoState { a, b } => Self::markov(a, b).map(drop),
        }
    }

    /// `Λ_N(β)`.
    pub fn scgf(&self, beta: f64) -> f64 {
        if beta == 0.0 {
            // The Markov Perron root of a stochastic matrix can round to 1 − ε.
            return 0.0;
        }
        match *self {
            Self::Deterministic { mu } => mu * beta,
            Self::BernoulliIid { p } => {
                if p == 0.0 {
                    0.0
                } else if p == 1.0 {
                    beta
                } else if beta <= 30.0 {
                    (p * beta.exp_m1()).ln_1p()
                } else {
                    beta + (p + (1.0 - p) * (-beta).exp()).ln()
                }
            }
            Self::MarkovTwoState { a, b } => {
                // Tilted matrix P·diag(1, e^β); factor e^β out for β > 0.
                if beta <= 0.0 {
                    let e = beta.exp();
                    larger_eigenvalue(1.0 - a, a * e, b, (1.0 - b) * e).ln()
                } else {
                    let e = (-beta).exp();
                    beta + larger_eigenvalue((1.0 - a) * e, a, b * e, 1.0 - b).ln()
                }
            }
        }
    }

    /// `Λ_N*(y)`; `+∞` outside `[0, 1]`.
    pub fn rate_function(&self, y: f64) -> f64 {
        if !(0.0..=1.0).contains(&y) {
            return f64::INFINITY;
        }
        match *self {
            Self::Deterministic { mu } => {
                if (y - mu).abs() <= POINT_MASS_TOL {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            Self::BernoulliIid { p } => {
                relative_entropy_term(y, p) + relative_entropy_term(1.0 - y, 1.0 - p)
            }
            Self::MarkovTwoState { .. } => numerics::legendre_conjugate(
                |b| self.scgf(b),
                y,
                f64::NEG_INFINITY,
                f64::INFINITY,
                ARG_TOL,
            )
            .expect("Markov sCGF is finite everywhere"),
        }
    }

    /// Smallest interval containing the effective domain of `Λ_N*`.
    pub fn rate_domain(&self) -> (f64, f64) {
        match *self {
            Self::Deterministic { mu } => (mu, mu),
            Self::BernoulliIid { p: 0.0 } => (0.0, 0.0),
            Self::BernoulliIid { p: 1.0 } => (1.0, 1.0),
            _ => (0.0, 1.0),
        }
    }

    /// `μ_N = lim E[N_k]/k`.
    pub fn mean_erasure_rate(&self) -> f64 {
        match *self {
            Self::Deterministic { mu } => mu,
            Self::BernoulliIid { p } => p,
            Self::MarkovTwoState { a, b } => a / (a + b),
        }
    }

    /// Exact law of `N_k`.
    pub fn erasure_count_distribution(&self, k: usize) -> Result<ErasureCountPmf> {
        if k == 0 {
            return Err(Error::ZeroLength);
        }
        let mut log_pmf = vec![f64::NEG_INFINITY; k + 1];
        match *self {
            Self::Deterministic { mu } => {
                log_pmf[Self::deterministic_count(mu, k)] = 0.0;
            }
            Self::BernoulliIid { p } => {
                if p == 0.0 {
                    log_pmf[0] = 0.0;
                } else if p == 1.0 {
                    log_pmf[k] = 0.0;
                } else {
                    let ln_fact = ln_factorials(k);
                    let (lp, lq) = (p.ln(), (-p).ln_1p());
                    for (n, slot) in log_pmf.iter_mut().enumerate() {
                        *slot = ln_choose(&ln_fact, k, n) + n as f64 * lp + (k - n) as f64 * lq;
                    }
                }
            }
            Self::MarkovTwoState { a, b } => {
                let pi = a / (a + b);
                let (stay_kept, to_erased) = ((-a).ln_1p(), a.ln());
                let (to_kept, stay_erased) = (b.ln(), (-b).ln_1p());
                // kept[n] / erased[n]: log P(n erasures so far, current state).
                let mut kept = vec![f64::NEG_INFINITY; k + 1];
                let mut erased = vec![f64::NEG_INFINITY; k + 1];
                kept[0] = (-pi).ln_1p();
                erased[1] = pi.ln();
                for t in 1..k {
                    let mut next_kept = vec![f64::NEG_INFINITY; k + 1];
                    let mut next_erased = vec![f64::NEG_INFINITY; k + 1];
                    for n in 0..=t {
                        next_kept[n] = log_add_exp(kept[n] + stay_kept, erased[n] + to_kept);
                        next_erased[n + 1] =
                            log_add_exp(kept[n] + to_erased, erased[n] + stay_erased);
                    }
                    kept = next_kept;
                    erased = next_erased;
                }
                for n in 0..=k {
                    log_pmf[n] = log_add_exp(kept[n], erased[n]);
                }
            }
        }
        Ok(ErasureCountPmf { k, log_pmf })
    }

    fn deterministic_count(mu: f64, k: usize) -> usize {
        ((mu * k as f64 + FLOOR_SLACK).floor() as usize).min(k)
    }

    /// Per-position erasure indicators for a string of length `k`.
    ///
    /// A deterministic channel erases the first `⌊μk⌋` positions.
    pub fn sample_erasure_pattern<R: Rng + ?Sized>(&self, k: usize, rng: &mut R) -> Vec<bool> {
        match *self {
            Self::Deterministic { mu } => {
                let n = Self::deterministic_count(mu, k);
                (0..k).map(|i| i < n).collect()
            }
            Self::BernoulliIid { p } => (0..k).map(|_| rng.gen::<f64>() < p).collect(),
            Self::MarkovTwoState { a, b } => {
                let mut out = Vec::with_capacity(k);
                let mut erased = rng.gen::<f64>() < a / (a + b);
                for i in 0..k {
                    if i > 0 {
                        let u = rng.gen::<f64>();
                        erased = if erased { u >= b } else { u < a };
                    }
                    out.push(erased);
                }
                out
            }
        }
    }
}

impl fmt::Display for NoiseModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Deterministic { mu } => write!(f, "det:{mu}"),
            Self::BernoulliIid { p } => write!(f, "bern:{p}"),
            Self::MarkovTwoState { a, b } => write!(f, "markov:{a},{b}"),
        }
    }
}

impl FromStr for NoiseModel {
    type Err = Error;

    /// Parses `det:<mu>`, `bern:<p>` or `markov:<a>,<b>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ChannelSpec(s.to_string());
        let (kind, params) = s.trim().split_once(':').ok_or_else(bad)?;
        let values = params
            .split(',')
            .map(|v| v.trim().parse::<f64>().ok().filter(|x| x.is_finite()))
            .collect::<Option<Vec<f64>>>()
            .ok_or_else(bad)?;
        match (kind.trim(), values.as_slice()) {
            ("det", [mu]) => Self::deterministic(*mu),
            ("bern", [p]) => Self::bernoulli(*p),
            ("markov", [a, b]) => Self::markov(*a, *b),
            _ => Err(bad()),
        }
    }
}

/// Law of the erasure count `N_k`, stored as log-probabilities for `n = 0..=k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErasureCountPmf {
    k: usize,
    log_pmf: Vec<f64>,
}

impl ErasureCountPmf {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn log_pmf(&self) -> &[f64] {
        &self.log_pmf
    }

    pub fn pmf(&self) -> Vec<f64> {
        self.log_pmf.iter().map(|l| l.exp()).collect()
    }

    pub fn mean(&self) -> f64 {
        self.log_pmf
            .iter()
            .enumerate()
            .map(|(n, l)| n as f64 * l.exp())
            .sum()
    }

    /// `(n, log P(N_k = n))` for the counts with positive mass.
    pub fn support(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.log_pmf
            .iter()
            .copied()
            .enumerate()
            .filter(|(_, l)| *l > f64::NEG_INFINITY)
    }
}
