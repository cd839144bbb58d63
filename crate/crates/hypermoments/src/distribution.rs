//! Parameters, support enumeration, and exact probability mass function of
//! the multivariate hypergeometric distribution.
//!
//! A population of `N` units is split into `d + 1` categories: explicit
//! counts `N_1, ..., N_d` plus an implied remainder
//! `N_{d+1} = N - (N_1 + ... + N_d)`. Drawing `n` units without replacement
//! and counting how many fall in each explicit category gives the random
//! vector this crate is about. The pmf at a support point `k` is
//!
//! ```text
//! P(k) = C(N, n)^-1 * prod_{i=1}^{d+1} C(N_i, k_i),   k_{d+1} = n - |k|
//! ```
//!
//! The implied category is never stored in a [`MultiIndex`]; it is always
//! derived from `N` and the explicit counts, which keeps redundant state
//! impossible.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::combinatorics::binomial;

/// Why a parameter set was rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamsError {
    /// Sample size exceeds the population.
    SampleExceedsPopulation { sample_size: u64, population: u64 },
    /// The explicit category counts sum to more than the population.
    CountsExceedPopulation { counts_total: u128, population: u64 },
    /// No explicit categories were given.
    ZeroDimension,
    /// `N * p_i` is not an integer, so `(N, p)` does not describe a finite
    /// population.
    NonIntegralCount { index: usize },
    /// A probability entry is negative.
    NegativeProbability { index: usize },
    /// The probability entries sum to more than one.
    ProbabilitiesExceedOne,
}

impl fmt::Display for ParamsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamsError::SampleExceedsPopulation {
                sample_size,
                population,
            } => write!(
                f,
                "sample size {sample_size} exceeds population {population}"
            ),
            ParamsError::CountsExceedPopulation {
                counts_total,
                population,
            } => write!(
                f,
                "subpopulation counts sum to {counts_total}, exceeding population {population}"
            ),
            ParamsError::ZeroDimension => write!(f, "dimension must be at least 1"),
            ParamsError::NonIntegralCount { index } => {
                write!(f, "N*p is not an integer for category {}", index + 1)
            }
            ParamsError::NegativeProbability { index } => {
                write!(f, "probability of category {} is negative", index + 1)
            }
            ParamsError::ProbabilitiesExceedOne => {
                write!(f, "probabilities sum to more than one")
            }
        }
    }
}

impl std::error::Error for ParamsError {}

/// An index vector's dimension did not match the distribution's.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DimensionError {
    pub expected: usize,
    pub actual: usize,
}

impl fmt::Display for DimensionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "index has dimension {} but the distribution has dimension {}",
            self.actual, self.expected
        )
    }
}

impl std::error::Error for DimensionError {}

/// A vector of nonnegative integers: either a support point `k` or an
/// exponent vector `alpha`. Ordering is lexicographic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    entries: Vec<u64>,
}

impl MultiIndex {
    pub fn new(entries: Vec<u64>) -> Self {
        MultiIndex { entries }
    }

    /// The zero vector of the given dimension.
    pub fn zeros(dimension: usize) -> Self {
        MultiIndex {
            entries: vec![0; dimension],
        }
    }

    /// The standard basis vector `e_axis`.
    pub fn unit(dimension: usize, axis: usize) -> Self {
        let mut entries = vec![0; dimension];
        entries[axis] += 1;
        MultiIndex { entries }
    }

    pub fn dimension(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> u64 {
        self.entries[i]
    }

    /// The l1 norm: the sum of the entries.
    pub fn norm1(&self) -> u128 {
        self.entries.iter().map(|&e| e as u128).sum()
    }
}

impl From<Vec<u64>> for MultiIndex {
    fn from(entries: Vec<u64>) -> Self {
        MultiIndex::new(entries)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Exact category probabilities `p_1, ..., p_d` with every `p_i >= 0` and
/// `p_1 + ... + p_d <= 1`; the implied last probability is `1 - sum`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbabilityVector {
    probs: Vec<BigRational>,
}

impl ProbabilityVector {
    pub fn new(probs: Vec<BigRational>) -> Result<Self, ParamsError> {
        if probs.is_empty() {
            return Err(ParamsError::ZeroDimension);
        }
        if let Some(index) = probs.iter().position(|p| p.is_negative()) {
            return Err(ParamsError::NegativeProbability { index });
        }
        let total: BigRational = probs.iter().sum();
        if total > BigRational::one() {
            return Err(ParamsError::ProbabilitiesExceedOne);
        }
        Ok(ProbabilityVector { probs })
    }

    pub fn probs(&self) -> &[BigRational] {
        &self.probs
    }

    pub fn dimension(&self) -> usize {
        self.probs.len()
    }

    /// The implied last probability `1 - (p_1 + ... + p_d)`.
    pub fn implied(&self) -> BigRational {
        BigRational::one() - self.probs.iter().sum::<BigRational>()
    }
}

/// Validated parameters `(N, n, N_1..N_d)` of a multivariate hypergeometric
/// distribution.
///
/// Invariants established at construction: `n <= N`, the explicit counts sum
/// to at most `N` (so the implied count is nonnegative), and there is at
/// least one explicit category. An empty population (`N = 0`, hence `n = 0`)
/// is valid and describes the single empty sample.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DistributionParams {
    population: u64,
    sample_size: u64,
    counts: Vec<u64>,
}

impl DistributionParams {
    /// Validate and build from explicit category counts.
    pub fn from_counts(
        population: u64,
        sample_size: u64,
        counts: Vec<u64>,
    ) -> Result<Self, ParamsError> {
        if counts.is_empty() {
            return Err(ParamsError::ZeroDimension);
        }
        if sample_size > population {
            return Err(ParamsError::SampleExceedsPopulation {
                sample_size,
                population,
            });
        }
        let counts_total: u128 = counts.iter().map(|&c| c as u128).sum();
        if counts_total > population as u128 {
            return Err(ParamsError::CountsExceedPopulation {
                counts_total,
                population,
            });
        }
        Ok(DistributionParams {
            population,
            sample_size,
            counts,
        })
    }

    /// Build from exact probabilities: each `N * p_i` must be an integer
    /// (the category sizes of a finite population), and the result is
    /// identical to [`Self::from_counts`] on those integers.
    pub fn from_probs(
        population: u64,
        sample_size: u64,
        probs: &ProbabilityVector,
    ) -> Result<Self, ParamsError> {
        let scale = BigInt::from(population);
        let mut counts = Vec::with_capacity(probs.dimension());
        for (index, p) in probs.probs().iter().enumerate() {
            let scaled = p * BigRational::from_integer(scale.clone());
            if !scaled.is_integer() {
                return Err(ParamsError::NonIntegralCount { index });
            }
            let count = u64::try_from(scaled.to_integer())
                .expect("category count is between 0 and the population");
            counts.push(count);
        }
        Self::from_counts(population, sample_size, counts)
    }

    /// Total population size `N`.
    pub fn population(&self) -> u64 {
        self.population
    }

    /// Sample size `n`.
    pub fn sample_size(&self) -> u64 {
        self.sample_size
    }

    /// Explicit category counts `N_1..N_d`.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Number of explicit categories `d`.
    pub fn dimension(&self) -> usize {
        self.counts.len()
    }

    /// Size of the implied category, `N_{d+1} = N - (N_1 + ... + N_d)`.
    pub fn implied_count(&self) -> u64 {
        let total: u128 = self.counts.iter().map(|&c| c as u128).sum();
        (self.population as u128 - total) as u64
    }

    /// Exact category proportions `p_i = N_i / N`, or `None` for an empty
    /// population.
    pub fn probabilities(&self) -> Option<ProbabilityVector> {
        if self.population == 0 {
            return None;
        }
        let population = BigInt::from(self.population);
        let probs = self
            .counts
            .iter()
            .map(|&c| BigRational::new(BigInt::from(c), population.clone()))
            .collect();
        Some(ProbabilityVector { probs })
    }

    pub(crate) fn check_dimension(&self, index: &MultiIndex) -> Result<(), DimensionError> {
        if index.dimension() != self.dimension() {
            return Err(DimensionError {
                expected: self.dimension(),
                actual: index.dimension(),
            });
        }
        Ok(())
    }

    /// All support points, in lexicographic order.
    ///
    /// A point `k` is in the support exactly when `0 <= k_i <= N_i`,
    /// `|k| <= n`, and the implied count `n - |k|` fits the implied
    /// category: `0 <= n - |k| <= N_{d+1}`. The pmf is zero everywhere else,
    /// so enumeration and pmf agree on where the mass lives.
    pub fn support(&self) -> Vec<MultiIndex> {
        let d = self.dimension();
        // tail_capacity[i]: how many sample units categories i.. (explicit
        // and implied) can still absorb.
        let mut tail_capacity = vec![0u128; d + 1];
        tail_capacity[d] = self.implied_count() as u128;
        for i in (0..d).rev() {
            tail_capacity[i] = tail_capacity[i + 1] + self.counts[i] as u128;
        }
        let mut out = Vec::new();
        let mut current = vec![0u64; d];
        self.fill_support(0, self.sample_size, &tail_capacity, &mut current, &mut out);
        out
    }

    fn fill_support(
        &self,
        depth: usize,
        remaining: u64,
        tail_capacity: &[u128],
        current: &mut Vec<u64>,
        out: &mut Vec<MultiIndex>,
    ) {
        if depth == self.dimension() {
            // `remaining` is the implied count; the loop bounds below have
            // already forced it into [0, N_{d+1}].
            out.push(MultiIndex::new(current.clone()));
            return;
        }
        let rest = tail_capacity[depth + 1];
        let lo = if (remaining as u128) > rest {
            remaining - rest as u64
        } else {
            0
        };
        let hi = self.counts[depth].min(remaining);
        for k in lo..=hi {
            current[depth] = k;
            self.fill_support(depth + 1, remaining - k, tail_capacity, current, out);
        }
        current[depth] = 0;
    }

    /// Exact pmf at `k`; exactly zero outside the support.
    pub fn pmf(&self, k: &MultiIndex) -> Result<BigRational, DimensionError> {
        self.check_dimension(k)?;
        Ok(self.pmf_unchecked(k))
    }

    pub(crate) fn pmf_unchecked(&self, k: &MultiIndex) -> BigRational {
        let norm = k.norm1();
        if norm > self.sample_size as u128 {
            return BigRational::zero();
        }
        let implied_k = self.sample_size - norm as u64;
        let mut numerator = binomial(self.implied_count(), implied_k as i128);
        if numerator.is_zero() {
            return BigRational::zero();
        }
        for (&count, &ki) in self.counts.iter().zip(k.entries()) {
            numerator *= binomial(count, ki as i128);
            if numerator.is_zero() {
                return BigRational::zero();
            }
        }
        BigRational::new(
            numerator,
            binomial(self.population, self.sample_size as i128),
        )
    }
}

/// All multi-indices of the given dimension with l1 norm at most
/// `max_norm`, in lexicographic order. There are `C(max_norm + d, d)` of
/// them.
pub fn multi_indices_up_to_norm(dimension: usize, max_norm: u64) -> Vec<MultiIndex> {
    fn recurse(
        dimension: usize,
        remaining: u64,
        current: &mut Vec<u64>,
        out: &mut Vec<MultiIndex>,
    ) {
        if current.len() == dimension {
            out.push(MultiIndex::new(current.clone()));
            return;
        }
        for e in 0..=remaining {
            current.push(e);
            recurse(dimension, remaining - e, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    recurse(dimension, max_norm, &mut Vec::new(), &mut out);
    out
}
