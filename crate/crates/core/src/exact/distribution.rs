use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::source::SourceDistribution;

use super::Word;

/// Type classes whose per-word log-probabilities differ by at most this much
/// share a stratum of equal-probability ranks.
pub const STRATUM_TOL: f64 = 1e-12;

/// All words with the same character counts. Under an i.i.d. source they are
/// equiprobable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypeClass {
    /// Occupancy over the full alphabet; zero-probability characters are 0.
    pub counts: Vec<usize>,
    pub per_word_log_prob: f64,
    /// `k! / Π n_i!`.
    pub word_count: u128,
    /// Ranks of this class within its stratum start after this offset.
    pub rank_offset: u128,
}

/// A run of consecutive ranks `offset+1 ..= offset+word_count` sharing one
/// per-word probability, ordered lexicographically inside.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stratum {
    pub per_word_log_prob: f64,
    pub word_count: u128,
    pub offset: u128,
    pub classes: Vec<TypeClass>,
    #[serde(skip)]
    slot_counts: Vec<Vec<usize>>,
}

impl Stratum {
    pub fn first_rank(&self) -> u128 {
        self.offset + 1
    }

    pub fn last_rank(&self) -> u128 {
        self.offset + self.word_count
    }
}

/// Exact law of the optimal guessing rank `G(W_k)` for an i.i.d. source,
/// grouped into equal-probability strata sorted by descending probability.
#[derive(Debug, Clone)]
pub struct GuessworkDistribution {
    k: usize,
    alphabet: usize,
    /// Full-alphabet index → position in the support, if any.
    slot_of: Vec<Option<usize>>,
    support_size: usize,
    strata: Vec<Stratum>,
    stratum_of: HashMap<Vec<usize>, usize>,
    binom: Vec<Vec<u128>>,
    total: u128,
}

/// Calls `visit` with every vector of `parts` nonnegative integers summing
/// to `total`, in lexicographically descending order of the first entries.
fn for_each_composition<F: FnMut(&[usize])>(total: usize, parts: usize, visit: &mut F) {
    fn go<F: FnMut(&[usize])>(rest: usize, idx: usize, buf: &mut [usize], visit: &mut F) {
        if idx + 1 == buf.len() {
            buf[idx] = rest;
            visit(buf);
            return;
        }
        for n in (0..=rest).rev() {
            buf[idx] = n;
            go(rest - n, idx + 1, buf, visit);
        }
    }
    let mut buf = vec![0; parts];
    go(total, 0, &mut buf, visit);
}

fn pascal(n: usize) -> Vec<Vec<u128>> {
    let mut rows: Vec<Vec<u128>> = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut row = vec![1u128; i + 1];
        for j in 1..i {
            row[j] = rows[i - 1][j - 1] + rows[i - 1][j];
        }
        rows.push(row);
    }
    rows
}

impl GuessworkDistribution {
    pub fn new(src: &SourceDistribution, k: usize) -> Result<Self> {
        let s = src.support_size();
        let alphabet = src.alphabet_size();
        let total = (s as u128)
            .checked_pow(k as u32)
            .filter(|_| k <= u32::MAX as usize)
            .ok_or(Error::RankOverflow { alphabet: s, length: k })?;
        // Every binomial needed is at most s^k, which fits; Pascal rows up to
        // k only overflow when s = 1 and then no binomial is needed.
        let binom = if s >= 2 { pascal(k) } else { Vec::new() };

        let mut slot_of = vec![None; alphabet];
        for (slot, &c) in src.support().iter().enumerate() {
            slot_of[c] = Some(slot);
        }
        let log_probs = src.support_log_probs();

        let mut classes: Vec<(Vec<usize>, f64)> = Vec::new();
        for_each_composition(k, s, &mut |counts: &[usize]| {
            let lp = counts
                .iter()
                .zip(log_probs)
                .filter(|(n, _)| **n > 0)
                .map(|(&n, &l)| n as f64 * l)
                .sum::<f64>();
            classes.push((counts.to_vec(), lp));
        });
        // Stable: equal probabilities keep the enumeration order.
        classes.sort_by(|a, b| b.1.total_cmp(&a.1));

        let mut this = Self {
            k,
            alphabet,
            slot_of,
            support_size: s,
            strata: Vec::new(),
            stratum_of: HashMap::new(),
            binom,
            total,
        };

        let mut offset = 0u128;
        let mut prev_lp = f64::NAN;
        for (slot_counts, lp) in classes {
            let word_count = this.multinomial(&slot_counts);
            let new_stratum = this.strata.is_empty() || (prev_lp - lp).abs() > STRATUM_TOL;
            if new_stratum {
                this.strata.push(Stratum {
                    per_word_log_prob: lp,
                    word_count: 0,
                    offset,
                    classes: Vec::new(),
                    slot_counts: Vec::new(),
                });
            }
            prev_lp = lp;
            let idx = this.strata.len() - 1;
            let mut counts = vec![0; alphabet];
            for (slot, &c) in src.support().iter().enumerate() {
                counts[c] = slot_counts[slot];
            }
            let stratum = &mut this.strata[idx];
            stratum.classes.push(TypeClass {
                counts,
                per_word_log_prob: lp,
                word_count,
                rank_offset: stratum.word_count,
            });
            stratum.word_count += word_count;
            this.stratum_of.insert(slot_counts.clone(), idx);
            stratum.slot_counts.push(slot_counts);
            offset += word_count;
        }
        debug_assert_eq!(offset, total);
        Ok(this)
    }

    fn multinomial(&self, parts: &[usize]) -> u128 {
        let mut acc = 1u128;
        let mut n = 0usize;
        for &p in parts {
            n += p;
            if p > 0 && p < n {
                acc *= self.binom[n][p];
            }
        }
        acc
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of words with positive probability, `|support|^k`.
    pub fn total_words(&self) -> u128 {
        self.total
    }

    pub fn strata(&self) -> &[Stratum] {
        &self.strata
    }

    /// All type classes in descending per-word probability.
    pub fn classes(&self) -> impl Iterator<Item = &TypeClass> {
        self.strata.iter().flat_map(|s| s.classes.iter())
    }

    fn slots(&self, word: &Word) -> Result<Vec<usize>> {
        if word.len() != self.k {
            return Err(Error::LengthMismatch { expected: self.k, found: word.len() });
        }
        word.chars()
            .iter()
            .map(|&c| {
                if c >= self.alphabet {
                    Err(Error::SymbolOutOfRange { symbol: c, alphabet: self.alphabet })
                } else {
                    self.slot_of[c].ok_or(Error::ZeroProbabilitySymbol(c))
                }
            })
            .collect()
    }

    /// Position of `word` in the optimal guessing order: probability
    /// descending, lexicographic among equal probabilities.
    pub fn rank(&self, word: &Word) -> Result<u128> {
        let slots = self.slots(word)?;
        let mut counts = vec![0usize; self.support_size];
        for &s in &slots {
            counts[s] += 1;
        }
        let stratum = &self.strata[self.stratum_of[&counts]];

        let mut below = 0u128;
        if self.strata.len() == 1 {
            // One stratum is the whole space: plain base-s numbering.
            let base = self.support_size as u128;
            for &s in &slots {
                below = below * base + s as u128;
            }
        } else {
            let mut prefix = vec![0usize; self.support_size];
            let mut remaining = self.k;
            for &s in &slots {
                remaining -= 1;
                for smaller in 0..s {
                    prefix[smaller] += 1;
                    below += self.completions(stratum, &prefix, remaining);
                    prefix[smaller] -= 1;
                }
                prefix[s] += 1;
            }
        }
        Ok(stratum.offset + below + 1)
    }

    /// Number of ways to finish a word whose prefix has counts `prefix` so
    /// that its type lands in `stratum`.
    fn completions(&self, stratum: &Stratum, prefix: &[usize], remaining: usize) -> u128 {
        let mut rest = vec![0usize; prefix.len()];
        stratum
            .slot_counts
            .iter()
            .filter_map(|t| {
                for ((r, &n), &p) in rest.iter_mut().zip(t).zip(prefix) {
                    *r = n.checked_sub(p)?;
                }
                debug_assert_eq!(rest.iter().sum::<usize>(), remaining);
                Some(self.multinomial(&rest))
            })
            .sum()
    }

    /// Stratum holding `rank`, if `1 ≤ rank ≤ total_words()`.
    pub fn stratum_at(&self, rank: u128) -> Option<&Stratum> {
        if rank == 0 || rank > self.total {
            return None;
        }
        let idx = self.strata.partition_point(|s| s.last_rank() < rank);
        self.strata.get(idx)
    }

    /// `log P(G(W_k) = rank)`; ranks past the support words have probability 0.
    pub fn log_pmf(&self, rank: u128) -> f64 {
        self.stratum_at(rank)
            .map_or(f64::NEG_INFINITY, |s| s.per_word_log_prob)
    }

    pub fn pmf(&self, rank: u128) -> f64 {
        self.log_pmf(rank).exp()
    }
}
