//! Guesswork of the erased substring: the composed sCGF `Λ_N(Λ_G(α))`, its
//! rate function by two independent routes, and the two growth rates of the
//! average subordinated guesswork.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::noise::NoiseModel;
use crate::numerics::{self, minimize_convex_1d, ARG_TOL};
use crate::source::SourceDistribution;

/// Lower end of the golden-section search over the erased fraction; `y = 0`
/// itself is handled by its own convention.
const Y_FLOOR: f64 = 1e-12;

/// Step for the finite-difference slope check at `α = 0`.
const SLOPE_STEP: f64 = 1e-5;
const SLOPE_TOL: f64 = 1e-6;

/// `Λ_NG(α) = Λ_N(Λ_G(α))`.
pub fn subordinated_scgf(src: &SourceDistribution, noise: &NoiseModel, alpha: f64) -> f64 {
    noise.scgf(src.guesswork_scgf(alpha))
}

/// `y·Λ_G*(x/y) + Λ_N*(y)` with the `y = 0` term read as `0` for `x = 0`
/// and `+∞` for `x > 0`.
fn inf_objective(src: &SourceDistribution, noise: &NoiseModel, x: f64, y: f64) -> f64 {
    let guess = if y == 0.0 {
        if x == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        y * src.guesswork_rate_function(x / y)
    };
    guess + noise.rate_function(y)
}

/// Rate function of `(1/k) log G(W_{N_k})` as the infimum over the erased
/// fraction `y ∈ [0, 1]` of `y·Λ_G*(x/y) + Λ_N*(y)`.
pub fn subordinated_rate_inf(src: &SourceDistribution, noise: &NoiseModel, x: f64) -> f64 {
    if x.is_nan() || x < 0.0 {
        return f64::INFINITY;
    }
    let (dom_lo, dom_hi) = noise.rate_domain();
    if dom_lo == dom_hi {
        return inf_objective(src, noise, x, dom_lo);
    }

    let at_zero = if dom_lo == 0.0 {
        inf_objective(src, noise, x, 0.0)
    } else {
        f64::INFINITY
    };

    // y·Λ_G*(x/y) is finite only when x/y ≤ log |support|.
    let edge = src.log_support_size();
    let y_needed = if x == 0.0 {
        0.0
    } else if edge > 0.0 {
        x / edge
    } else {
        f64::INFINITY
    };
    let y_lo = dom_lo.max(Y_FLOOR).max(y_needed);
    if y_lo > dom_hi * (1.0 + 1e-12) {
        return at_zero;
    }
    let y_lo = y_lo.min(dom_hi);

    let interior = minimize_convex_1d(|y| inf_objective(src, noise, x, y), y_lo, dom_hi, ARG_TOL)
        .map(|e| e.value)
        .unwrap_or(f64::INFINITY);
    interior.min(at_zero)
}

/// Rate function of `(1/k) log G(W_{N_k})` as the Legendre-Fenchel conjugate
/// of [`subordinated_scgf`].
pub fn subordinated_rate_dual(src: &SourceDistribution, noise: &NoiseModel, x: f64) -> f64 {
    if x.is_nan() || x < 0.0 {
        return f64::INFINITY;
    }
    // Λ_NG is constant on α ≤ −1, so for x ≥ 0 nothing is lost below −1.
    let phi = |a: f64| x * a - subordinated_scgf(src, noise, a);
    let best = numerics::legendre_conjugate_point(
        |a| subordinated_scgf(src, noise, a),
        x,
        -1.0,
        f64::INFINITY,
        ARG_TOL,
    )
    .expect("subordinated sCGF is finite everywhere");
    match best {
        None => f64::INFINITY,
        // When x is the limiting slope of Λ_NG the supremum is only
        // approached as α → ∞, with φ(α) = L − c/(1+α) + O(α⁻²). One
        // Richardson step removes the 1/α term.
        Some(e) if e.arg >= 0.5 * numerics::BRACKET_CAP => {
            let a = e.arg;
            let limit = 2.0 * phi(2.0 * a + 1.0) - phi(a);
            if limit.is_finite() && limit > e.value {
                limit
            } else {
                e.value
            }
        }
        Some(e) => e.value,
    }
}

/// Exponential growth rates, per character, of the subordinated guesswork.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthRates {
    /// `lim (1/k) E[log G(W_{N_k})] = μ_N·H_G`.
    pub mean_log_growth: f64,
    /// `lim (1/k) log E[G(W_{N_k})] = Λ_N(Λ_G(1))`.
    pub log_mean_growth: f64,
}

/// Both growth rates. Fails if the slope of `Λ_NG` at zero disagrees with
/// `μ_N·H_G`, which would mean one of the sCGFs is wrong.
pub fn growth_rates(src: &SourceDistribution, noise: &NoiseModel) -> Result<GrowthRates> {
    let mean_log_growth = noise.mean_erasure_rate() * src.shannon_entropy();
    let log_mean_growth = noise.scgf(src.guesswork_scgf(1.0));
    let slope =
        numerics::central_difference(|a| subordinated_scgf(src, noise, a), 0.0, SLOPE_STEP);
    if (slope - mean_log_growth).abs() > SLOPE_TOL {
        return Err(Error::SlopeMismatch { slope, expected: mean_log_growth });
    }
    Ok(GrowthRates { mean_log_growth, log_mean_growth })
}

/// Side-by-side growth rates of two channels over the same source.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChannelComparison {
    pub first: NoiseModel,
    pub second: NoiseModel,
    pub first_mean_erasure_rate: f64,
    pub second_mean_erasure_rate: f64,
    pub first_rates: GrowthRates,
    pub second_rates: GrowthRates,
    /// `first − second`.
    pub mean_log_growth_difference: f64,
    /// `first − second`.
    pub log_mean_growth_difference: f64,
    /// The channel erasing more on average has strictly smaller average
    /// guesswork growth.
    pub noisier_but_easier: bool,
}

pub fn compare_channels(
    src: &SourceDistribution,
    first: &NoiseModel,
    second: &NoiseModel,
) -> Result<ChannelComparison> {
    let first_rates = growth_rates(src, first)?;
    let second_rates = growth_rates(src, second)?;
    let (mu1, mu2) = (first.mean_erasure_rate(), second.mean_erasure_rate());
    let (g1, g2) = (first_rates.log_mean_growth, second_rates.log_mean_growth);
    let noisier_but_easier = (mu1 > mu2 && g1 < g2) || (mu2 > mu1 && g2 < g1);
    Ok(ChannelComparison {
        first: *first,
        second: *second,
        first_mean_erasure_rate: mu1,
        second_mean_erasure_rate: mu2,
        first_rates,
        second_rates,
        mean_log_growth_difference: first_rates.mean_log_growth - second_rates.mean_log_growth,
        log_mean_growth_difference: g1 - g2,
        noisier_but_easier,
    })
}
