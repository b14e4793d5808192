//! Exact moments of `G(W_k)` and of the subordinated guesswork.
//!
//! Each stratum of `c` equiprobable words occupies ranks `r+1 ..= r+c`, so
//! its contribution needs `Σ j^α` or `Σ log j` over that run. Short runs are
//! summed term by term; long runs sum a head directly and the tail by
//! Euler-Maclaurin, which is accurate to double precision once the terms
//! start past a few thousand.

use crate::error::{Error, Result};
use crate::noise::NoiseModel;
use crate::numerics::{log_sum_exp_iter, LogSumExp};
use crate::source::SourceDistribution;

use super::GuessworkDistribution;

/// Runs up to this length are always summed directly.
const DIRECT_LEN: u128 = 4096;

/// The Euler-Maclaurin tail never starts below this index.
const TAIL_START: u128 = 1024;

// B_2/2!, B_4/4!, B_6/6!
const EM_COEFFS: [f64; 3] = [1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0];

/// `log Σ_{j=r+1}^{r+c} j^α`; `−∞` for an empty run.
pub fn log_power_sum(r: u128, c: u128, alpha: f64) -> f64 {
    if c == 0 {
        return f64::NEG_INFINITY;
    }
    if alpha == 0.0 {
        return (c as f64).ln();
    }
    let (rf, cf) = (r as f64, c as f64);
    if alpha == 1.0 {
        // c·(2r + c + 1)/2
        return cf.ln() + (2.0 * rf + cf + 1.0).ln() - std::f64::consts::LN_2;
    }
    if alpha == 2.0 {
        // c·r² + r·c(c+1) + c(c+1)(2c+1)/6, all terms positive
        let v = cf * rf * rf + rf * cf * (cf + 1.0) + cf * (cf + 1.0) * (2.0 * cf + 1.0) / 6.0;
        return v.ln();
    }
    let first = r + 1;
    let last = r + c;
    if c <= DIRECT_LEN {
        return log_sum_exp_iter((first..=last).map(|j| alpha * (j as f64).ln()));
    }
    let head_end = TAIL_START
        .max((64.0 * alpha.abs()).ceil() as u128)
        .max(first - 1)
        .min(last);
    let mut acc = LogSumExp::default();
    for j in first..=head_end {
        acc.add(alpha * (j as f64).ln());
    }
    if head_end < last {
        acc.add(log_power_tail(head_end + 1, last - head_end - 1, alpha));
    }
    acc.value()
}

/// Euler-Maclaurin for `log Σ_{j=a}^{a+d} j^α` with `a` large.
fn log_power_tail(a: u128, d: u128, alpha: f64) -> f64 {
    let af = a as f64;
    let bf = (a + d) as f64;
    let (la, lb) = (af.ln(), bf.ln());
    // log(b/a) without the cancellation of lb − la
    let span = (d as f64 / af).ln_1p();
    let e = alpha + 1.0;
    let log_integral = if e.abs() < 1e-300 {
        span.ln()
    } else if e > 0.0 {
        e * lb + (-(-e * span).exp_m1()).ln() - e.ln()
    } else {
        e * la + (-(e * span).exp_m1()).ln() - (-e).ln()
    };
    // Corrections relative to the integral: (f(a)+f(b))/2 and the odd
    // derivative differences f^(2i-1)(b) − f^(2i-1)(a).
    let rel = |pow: f64, x_ln: f64| ((alpha - pow) * x_ln - log_integral).exp();
    let mut ratio = 0.5 * (rel(0.0, la) + rel(0.0, lb));
    let mut falling = alpha; // α(α−1)…(α−2i+2)
    for (i, coeff) in EM_COEFFS.iter().enumerate() {
        let order = (2 * i + 1) as f64;
        ratio += coeff * falling * (rel(order, lb) - rel(order, la));
        falling *= (alpha - order) * (alpha - order - 1.0);
    }
    log_integral + ratio.ln_1p()
}

/// `Σ_{j=r+1}^{r+c} log j`.
pub fn sum_log_range(r: u128, c: u128) -> f64 {
    if c == 0 {
        return 0.0;
    }
    let first = r + 1;
    let last = r + c;
    if c <= DIRECT_LEN {
        return (first..=last).map(|j| (j as f64).ln()).sum();
    }
    let head_end = TAIL_START.max(first - 1).min(last);
    let head: f64 = (first..=head_end).map(|j| (j as f64).ln()).sum();
    if head_end == last {
        return head;
    }
    head + sum_log_tail(head_end + 1, last - head_end - 1)
}

/// Euler-Maclaurin for `Σ_{j=a}^{a+d} log j` with `a` large.
fn sum_log_tail(a: u128, d: u128) -> f64 {
    let af = a as f64;
    let bf = (a + d) as f64;
    let df = d as f64;
    let lb = bf.ln();
    // ∫_a^b log x dx = d·log b + a·log(b/a) − d
    let integral = df * lb + af * (df / af).ln_1p() - df;
    let ends = 0.5 * (af.ln() + lb);
    // f' = 1/x, f''' = 2/x³, f^(5) = 24/x⁵
    let derivs = |x: f64| [1.0 / x, 2.0 / x.powi(3), 24.0 / x.powi(5)];
    let (db, da) = (derivs(bf), derivs(af));
    let corr: f64 = (0..3).map(|i| EM_COEFFS[i] * (db[i] - da[i])).sum();
    integral + ends + corr
}

impl GuessworkDistribution {
    /// `log E[G(W_k)^α]`.
    pub fn log_moment(&self, alpha: f64) -> f64 {
        log_sum_exp_iter(
            self.strata()
                .iter()
                .map(|s| s.per_word_log_prob + log_power_sum(s.offset, s.word_count, alpha)),
        )
    }

    /// `E[log G(W_k)]`.
    pub fn mean_log(&self) -> f64 {
        self.strata()
            .iter()
            .map(|s| {
                let total = sum_log_range(s.offset, s.word_count);
                if total > 0.0 {
                    (s.per_word_log_prob + total.ln()).exp()
                } else {
                    0.0
                }
            })
            .sum()
    }
}

/// `log E[G(W_k)^α]`, with `G(empty word) = 1`.
pub fn exact_guesswork_moment(src: &SourceDistribution, k: usize, alpha: f64) -> Result<f64> {
    if k == 0 {
        return Ok(0.0);
    }
    Ok(GuessworkDistribution::new(src, k)?.log_moment(alpha))
}

/// `log E[G(W_{N_k})^α] = log Σ_n P(N_k = n)·E[G(W_n)^α]`.
pub fn exact_subordinated_moment(
    src: &SourceDistribution,
    noise: &NoiseModel,
    k: usize,
    alpha: f64,
) -> Result<f64> {
    if k == 0 {
        return Err(Error::ZeroLength);
    }
    let counts = noise.erasure_count_distribution(k)?;
    let mut acc = LogSumExp::default();
    for (n, lp) in counts.support() {
        acc.add(lp + exact_guesswork_moment(src, n, alpha)?);
    }
    Ok(acc.value())
}

/// `(1/k)·E[log G(W_{N_k})]`.
pub fn exact_mean_log_guesswork(
    src: &SourceDistribution,
    noise: &NoiseModel,
    k: usize,
) -> Result<f64> {
    if k == 0 {
        return Err(Error::ZeroLength);
    }
    let counts = noise.erasure_count_distribution(k)?;
    let mut total = 0.0;
    for (n, lp) in counts.support() {
        if n > 0 {
            total += lp.exp() * GuessworkDistribution::new(src, n)?.mean_log();
        }
    }
    Ok(total / k as f64)
}
