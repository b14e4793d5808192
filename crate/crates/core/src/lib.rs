//! Large-deviation analysis of guesswork for strings whose characters are
//! partly erased by a noisy channel.
//!
//! A listener who sees a string with some characters erased must guess the
//! missing substring. For i.i.d. characters and an erasure process obeying a
//! large deviation principle, the number of guesses `G(W_{N_k})` grows
//! exponentially in the string length `k` with rates controlled by the
//! character source's Rényi entropies and the erasure process's scaled
//! cumulant generating function (sCGF).
//!
//! - [`source`]: character source, entropies, guesswork sCGF `Λ_G` and rate `Λ_G*`.
//! - [`noise`]: erasure models, `Λ_N`, `Λ_N*`, exact law of the erasure count.
//! - [`subordination`]: `Λ_N(Λ_G(α))`, its rate function by two routes, growth rates.
//! - [`exact`]: exact finite-`k` ranks and moments, Monte-Carlo attacks.
//! - [`ldp_approx`]: pmf approximation from the rate function.
//! - [`figures`]: CSV datasets comparing deterministic and Bernoulli erasure.
//! - [`cli`]: the `guesswork` command line.
//!
//! All logarithms are natural; quantities are in nats unless stated.

pub mod cli;
pub mod error;
pub mod exact;
pub mod figures;
pub mod ldp_approx;
pub mod noise;
pub mod numerics;
pub mod source;
pub mod subordination;

pub use error::{Error, Result};
pub use exact::{
    exact_guesswork_moment, exact_mean_log_guesswork, exact_subordinated_moment,
    rank_bruteforce, rank_typeclass, simulate_attack, GuessworkDistribution, SimulationReport,
    Word,
};
pub use ldp_approx::{approx_pmf, approx_subordinated_pmf, compare_exact_vs_approx};
pub use noise::{ErasureCountPmf, NoiseModel};
pub use source::SourceDistribution;
pub use subordination::{
    compare_channels, growth_rates, subordinated_rate_dual, subordinated_rate_inf,
    subordinated_scgf, ChannelComparison, GrowthRates,
};
