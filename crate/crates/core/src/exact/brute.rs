use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::source::SourceDistribution;

use super::{Word, STRATUM_TOL};

/// Brute-force enumeration refuses alphabets with `m^k` above this.
pub const BRUTE_FORCE_LIMIT: u64 = 1 << 24;

/// Every positive-probability word of length `k` with its log-probability,
/// in guessing order (probability descending, lexicographic on ties).
pub fn bruteforce_order(src: &SourceDistribution, k: usize) -> Result<Vec<(Word, f64)>> {
    let m = src.alphabet_size();
    let too_large = Error::EnumerationTooLarge { alphabet: m, length: k };
    let size = (m as u64).checked_pow(k as u32).ok_or(too_large.clone())?;
    if size > BRUTE_FORCE_LIMIT {
        return Err(too_large);
    }
    let probs = src.probs();
    let mut words = Vec::new();
    let mut chars = vec![0usize; k];
    for _ in 0..size {
        if chars.iter().all(|&c| probs[c] > 0.0) {
            let lp = chars.iter().map(|&c| probs[c].ln()).sum::<f64>();
            words.push((Word::new(chars.clone()), lp));
        }
        // Odometer increment, last position fastest.
        for slot in chars.iter_mut().rev() {
            *slot += 1;
            if *slot < m {
                break;
            }
            *slot = 0;
        }
    }
    words.sort_by(|a, b| {
        if (a.1 - b.1).abs() <= STRATUM_TOL {
            a.0.cmp(&b.0)
        } else if a.1 > b.1 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    });
    Ok(words)
}

/// Rank of `word` by enumerating and sorting every word of its length.
pub fn rank_bruteforce(src: &SourceDistribution, word: &Word) -> Result<u128> {
    let m = src.alphabet_size();
    for &c in word.chars() {
        if c >= m {
            return Err(Error::SymbolOutOfRange { symbol: c, alphabet: m });
        }
        if src.probs()[c] == 0.0 {
            return Err(Error::ZeroProbabilitySymbol(c));
        }
    }
    let order = bruteforce_order(src, word.len())?;
    let pos = order
        .iter()
        .position(|(w, _)| w == word)
        .expect("every positive-probability word is enumerated");
    Ok(pos as u128 + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let src = SourceDistribution::new(vec![0.75, 0.25]).unwrap();
        assert_eq!(rank_bruteforce(&src, &Word::from_digits("00").unwrap()).unwrap(), 1);
        assert_eq!(rank_bruteforce(&src, &Word::from_digits("11").unwrap()).unwrap(), 4);
        let u = SourceDistribution::uniform(2).unwrap();
        for i in 0..8usize {
            let w = Word::new(vec![(i >> 2) & 1, (i >> 1) & 1, i & 1]);
            assert_eq!(rank_bruteforce(&u, &w).unwrap(), i as u128 + 1);
        }
    }

    #[test]
    fn guard() {
        let src = SourceDistribution::uniform(2).unwrap();
        assert!(matches!(
            rank_bruteforce(&src, &Word::new(vec![0; 25])),
            Err(Error::EnumerationTooLarge { .. })
        ));
    }
}
