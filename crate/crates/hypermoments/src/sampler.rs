//! Sampling without replacement, and Monte Carlo moment estimates built on
//! it.
//!
//! The sampler materializes the population as a multiset of category labels
//! and draws each sample by a partial Fisher-Yates shuffle, which is a
//! transparent implementation of "n units removed uniformly at random" —
//! deliberately independent of the pmf, so sampler statistics cross-check
//! the distribution model itself.
//!
//! Randomness comes from [`ChaCha8Rng`] seeded with a caller-supplied
//! `u64`; every draw sequence is reproducible from its seed.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::distribution::{DistributionParams, MultiIndex};
use crate::moments::MomentKind;
use crate::oracle::{moment_weight, Oracle};

/// Seeded urn sampler for one parameter set.
///
/// A single instance draws sequentially and is not safe for concurrent
/// draws; run one instance per thread with distinct seeds instead.
pub struct Sampler {
    params: DistributionParams,
    labels: Vec<usize>,
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(params: &DistributionParams, seed: u64) -> Self {
        let population = usize::try_from(params.population())
            .expect("population too large to materialize as a multiset");
        let mut labels = Vec::with_capacity(population);
        for (category, &count) in params.counts().iter().enumerate() {
            labels.extend(std::iter::repeat_n(category, count as usize));
        }
        let implied_category = params.dimension();
        labels.extend(std::iter::repeat_n(implied_category, params.implied_count() as usize));
        Sampler {
            params: params.clone(),
            labels,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Draw one sample of `n` units and return the explicit category
    /// counts. The result always lies in the support.
    pub fn draw(&mut self) -> MultiIndex {
        let n = self.params.sample_size() as usize;
        for j in 0..n {
            let swap_with = self.rng.gen_range(j..self.labels.len());
            self.labels.swap(j, swap_with);
        }
        let mut counts = vec![0u64; self.params.dimension()];
        for &label in &self.labels[..n] {
            if label < counts.len() {
                counts[label] += 1;
            }
        }
        MultiIndex::new(counts)
    }
}

/// One seeded draw. For repeated draws build a [`Sampler`] and reuse it.
pub fn sample(params: &DistributionParams, seed: u64) -> MultiIndex {
    Sampler::new(params, seed).draw()
}

/// A Monte Carlo estimate with its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub num_samples: u64,
}

/// Estimate a moment as the sample mean of the exact integrand over seeded
/// draws.
///
/// Each draw's integrand value is computed exactly and only then converted;
/// the estimate and its standard error are the one place in this crate
/// where floating point appears, because Monte Carlo output is approximate
/// by nature. The standard error uses the (n-1)-denominator sample variance
/// and is 0 for a single draw.
///
/// Panics if `num_samples` is zero or the exponent dimension mismatches.
pub fn mc_moment_estimate(
    params: &DistributionParams,
    alpha: &MultiIndex,
    kind: MomentKind,
    num_samples: u64,
    seed: u64,
) -> McEstimate {
    assert!(num_samples >= 1, "at least one sample is required");
    assert_eq!(
        alpha.dimension(),
        params.dimension(),
        "exponent dimension must match the distribution"
    );
    // Central weights need the mean; take it from the oracle's direct
    // summation so the estimator stays independent of the closed forms.
    let mean: Vec<BigRational> = if kind == MomentKind::Central {
        Oracle::new(params).mean().to_vec()
    } else {
        Vec::new()
    };
    let mut sampler = Sampler::new(params, seed);
    let mut running_mean = 0.0f64;
    let mut sum_sq_diff = 0.0f64;
    for i in 1..=num_samples {
        let draw = sampler.draw();
        let value = moment_weight(kind, &draw, alpha, &mean)
            .to_f64()
            .expect("moment weight representable as f64");
        let delta = value - running_mean;
        running_mean += delta / i as f64;
        sum_sq_diff += delta * (value - running_mean);
    }
    let std_error = if num_samples >= 2 {
        (sum_sq_diff / ((num_samples - 1) as f64 * num_samples as f64)).sqrt()
    } else {
        0.0
    };
    McEstimate {
        estimate: running_mean,
        std_error,
        num_samples,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(population: u64, sample_size: u64, counts: &[u64]) -> DistributionParams {
        DistributionParams::from_counts(population, sample_size, counts.to_vec()).unwrap()
    }

    #[test]
    fn exhaustive_sample_is_deterministic() {
        let p = params(6, 6, &[3, 2]);
        for seed in 0..20 {
            assert_eq!(sample(&p, seed), MultiIndex::new(vec![3, 2]));
        }
        let estimate = mc_moment_estimate(
            &p,
            &MultiIndex::new(vec![1, 1]),
            MomentKind::Noncentral,
            500,
            7,
        );
        assert_eq!(estimate.estimate, 6.0);
        assert_eq!(estimate.std_error, 0.0);
    }

    #[test]
    fn empty_sample_is_the_zero_vector() {
        let p = params(6, 0, &[3, 2]);
        assert_eq!(sample(&p, 123), MultiIndex::zeros(2));
    }

    #[test]
    fn single_sample_estimate_is_the_single_weight() {
        let p = params(6, 3, &[3, 2]);
        let alpha = MultiIndex::new(vec![1, 1]);
        let draw = sample(&p, 42);
        let estimate = mc_moment_estimate(&p, &alpha, MomentKind::Noncentral, 1, 42);
        assert_eq!(estimate.estimate, (draw.get(0) * draw.get(1)) as f64);
        assert_eq!(estimate.std_error, 0.0);
    }

    #[test]
    fn binary_frequency_is_close_to_a_half() {
        // One urn of two units: the drawn unit is category 0 with
        // probability 1/2. Over 10^5 independent seeds the empirical
        // frequency must land within 5 binomial standard errors.
        let p = params(2, 1, &[1]);
        let draws = 100_000u64;
        let mut ones = 0u64;
        for seed in 0..draws {
            if sample(&p, seed).get(0) == 1 {
                ones += 1;
            }
        }
        let frequency = ones as f64 / draws as f64;
        let std_error = (0.25f64 / draws as f64).sqrt();
        assert!(
            (frequency - 0.5).abs() < 5.0 * std_error,
            "frequency {frequency} strays from 1/2"
        );
    }

    #[test]
    fn label_relabeling_leaves_the_distribution_invariant() {
        // Swap the explicit categories: empirical frequencies on matched
        // support points must agree within sampling error.
        let p = params(6, 3, &[3, 2]);
        let swapped = params(6, 3, &[2, 3]);
        let draws = 50_000u64;
        let mut frequencies = std::collections::HashMap::new();
        let mut swapped_frequencies = std::collections::HashMap::new();
        let mut sampler = Sampler::new(&p, 2024);
        let mut swapped_sampler = Sampler::new(&swapped, 4048);
        for _ in 0..draws {
            *frequencies.entry(sampler.draw()).or_insert(0u64) += 1;
            *swapped_frequencies
                .entry(swapped_sampler.draw())
                .or_insert(0u64) += 1;
        }
        // Two-sample tolerance: 5 * sqrt(p(1-p)(1/m + 1/m)) <= 5 * sqrt(1/(2m)).
        let tolerance = 5.0 * (0.5 / draws as f64).sqrt();
        for k in p.support() {
            let mirrored = MultiIndex::new(vec![k.get(1), k.get(0)]);
            let f = *frequencies.get(&k).unwrap_or(&0) as f64 / draws as f64;
            let g = *swapped_frequencies.get(&mirrored).unwrap_or(&0) as f64 / draws as f64;
            assert!(
                (f - g).abs() < tolerance,
                "frequencies diverge at {k}: {f} vs {g}"
            );
        }
    }

    proptest! {
        #[test]
        fn draws_lie_in_the_support(
            (population, sample_size) in (0u64..=7).prop_flat_map(|n| (Just(n), 0..=n)),
            counts in proptest::collection::vec(0u64..=3, 1..=3),
            seed in 0u64..1000,
        ) {
            let total: u64 = counts.iter().sum();
            prop_assume!(total <= population);
            let p = DistributionParams::from_counts(population, sample_size, counts).unwrap();
            let draw = sample(&p, seed);
            prop_assert!(p.support().contains(&draw), "draw {} outside support", draw);
        }
    }
}
