use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("probability vector is empty")]
    EmptyDistribution,

    #[error("invalid probability {value} at index {index}")]
    InvalidProbability { index: usize, value: f64 },

    #[error("probabilities sum to {0}, expected 1")]
    NotNormalized(f64),

    #[error("invalid {name} parameter: {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("string length must be at least 1")]
    ZeroLength,

    #[error("character {symbol} is outside the alphabet of size {alphabet}")]
    SymbolOutOfRange { symbol: usize, alphabet: usize },

    #[error("character {0} has zero probability and cannot be ranked")]
    ZeroProbabilitySymbol(usize),

    #[error("word length {found} does not match distribution length {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("enumeration of {alphabet}^{length} words exceeds the brute-force limit of 2^24")]
    EnumerationTooLarge { alphabet: usize, length: usize },

    #[error("{alphabet}^{length} ranks do not fit in 128-bit integers")]
    RankOverflow { alphabet: usize, length: usize },

    #[error("rank {rank} is outside 1..={max}")]
    RankOutOfRange { rank: u128, max: u128 },

    #[error("matrix is not irreducible (off-diagonal entries must be positive)")]
    Reducible,

    #[error("matrix entries must be finite and nonnegative")]
    NegativeEntry,

    #[error("objective is not finite at {at}")]
    NonFinite { at: f64 },

    #[error("invalid bracket [{lo}, {hi}]")]
    InvalidBracket { lo: f64, hi: f64 },

    #[error("trial count must be at least 1")]
    NoTrials,

    #[error("derivative check failed: slope {slope} vs mean log growth {expected}")]
    SlopeMismatch { slope: f64, expected: f64 },

    #[error("malformed channel spec {0:?}, expected det:<mu>, bern:<p> or markov:<a>,<b>")]
    ChannelSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
