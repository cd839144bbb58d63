//! With-replacement (multinomial) counterparts of the factorial and
//! noncentral moments, and the finite-population correction factor that
//! separates sampling without replacement from its infinite-population
//! limit.
//!
//! For fixed probabilities the hypergeometric factorial moment splits
//! exactly into `correction_factor * multinomial_factorial_moment`; the
//! correction tends to one as the population grows.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combinatorics::{falling_factorial_u64, int_pow, rat_pow, with_stirling_table};
use crate::distribution::{DistributionParams, MultiIndex, ProbabilityVector};

use super::{index_box, max_entry, MomentError};

/// Multinomial (with-replacement) factorial moment
/// `n^(|a|) * prod_i p_i^{a_i}`.
///
/// Panics if `alpha` and `probs` dimensions differ; otherwise total, with
/// the value vanishing exactly when `|a| > n`.
pub fn multinomial_factorial_moment(
    sample_size: u64,
    probs: &ProbabilityVector,
    alpha: &MultiIndex,
) -> BigRational {
    assert_eq!(
        alpha.dimension(),
        probs.dimension(),
        "exponent dimension must match probability dimension"
    );
    let norm = alpha.norm1();
    if norm > sample_size as u128 {
        return BigRational::zero();
    }
    let mut result = BigRational::from_integer(falling_factorial_u64(sample_size, norm as u64));
    for (p, &a) in probs.probs().iter().zip(alpha.entries()) {
        if result.is_zero() {
            break;
        }
        result *= rat_pow(p, a);
    }
    result
}

/// Multinomial noncentral moment via the same Stirling expansion the
/// finite-population formula uses:
/// `sum_{0 <= k <= a} n^(|k|) * prod_i S(a_i, k_i) p_i^{k_i}`.
///
/// This is the limit target the finite-population noncentral moment
/// converges to as `N` grows with `p` fixed.
pub fn multinomial_noncentral_moment(
    sample_size: u64,
    probs: &ProbabilityVector,
    alpha: &MultiIndex,
) -> BigRational {
    assert_eq!(
        alpha.dimension(),
        probs.dimension(),
        "exponent dimension must match probability dimension"
    );
    let alpha = alpha.entries();
    with_stirling_table(max_entry(alpha), |table| {
        let mut total = BigRational::zero();
        'terms: for k in index_box(alpha) {
            let norm: u128 = k.iter().map(|&e| e as u128).sum();
            if norm > sample_size as u128 {
                continue;
            }
            let mut stirling_product = BigInt::one();
            for (i, &ki) in k.iter().enumerate() {
                stirling_product *= table.value(alpha[i] as usize, ki as usize);
                if stirling_product.is_zero() {
                    continue 'terms;
                }
            }
            let mut term = BigRational::from_integer(
                stirling_product * falling_factorial_u64(sample_size, norm as u64),
            );
            for (p, &ki) in probs.probs().iter().zip(&k) {
                term *= rat_pow(p, ki);
            }
            total += term;
        }
        total
    })
}

/// Finite-population correction factor
/// `prod_i (N p_i)^(k_i) / (N^(|k|) * prod_i p_i^{k_i})` with `p_i = N_i / N`:
/// the exact ratio between the without-replacement factorial moment and its
/// multinomial limit.
///
/// Requires every explicit category to be nonempty (the expression divides
/// by `p_i`); a zero-count category should be dropped from the
/// parametrization instead. The factor is 1 whenever `|k| <= 1`. When some
/// `k_i` exceeds `N_i`, numerator and moment both vanish and the factor is
/// defined as 0, which keeps the decomposition identity
/// `factorial = correction * multinomial` exact everywhere.
pub fn correction_factor(
    params: &DistributionParams,
    k: &MultiIndex,
) -> Result<BigRational, MomentError> {
    params.check_dimension(k)?;
    if let Some(index) = params.counts().iter().position(|&c| c == 0) {
        return Err(MomentError::ZeroCountCategory { index });
    }
    let mut numerator = BigInt::one();
    for (&count, &ki) in params.counts().iter().zip(k.entries()) {
        numerator *= falling_factorial_u64(count, ki);
        if numerator.is_zero() {
            return Ok(BigRational::zero());
        }
    }
    // All k_i <= N_i here, so |k| <= N and the denominator is positive.
    let norm = k.norm1() as u64;
    let population = BigInt::from(params.population());
    let mut denominator = falling_factorial_u64(params.population(), norm);
    for (&count, &ki) in params.counts().iter().zip(k.entries()) {
        denominator *= int_pow(&BigInt::from(count), ki);
    }
    Ok(BigRational::new(
        numerator * int_pow(&population, norm),
        denominator,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::{factorial_moment, noncentral_moment};
    use num_traits::Signed;
    use proptest::prelude::*;

    fn rational(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn probs(entries: &[(i64, i64)]) -> ProbabilityVector {
        ProbabilityVector::new(entries.iter().map(|&(n, d)| rational(n, d)).collect()).unwrap()
    }

    fn alpha(entries: &[u64]) -> MultiIndex {
        MultiIndex::new(entries.to_vec())
    }

    #[test]
    fn multinomial_factorial_small_cases() {
        let p = probs(&[(1, 2), (1, 3)]);
        assert_eq!(
            multinomial_factorial_moment(3, &p, &alpha(&[0, 0])),
            BigRational::one()
        );
        // n^(2) p1 p2 = 6 * 1/6 = 1.
        assert_eq!(
            multinomial_factorial_moment(3, &p, &alpha(&[1, 1])),
            BigRational::one()
        );
        assert_eq!(
            multinomial_factorial_moment(3, &p, &alpha(&[3, 1])),
            BigRational::zero()
        );
    }

    #[test]
    fn multinomial_noncentral_small_cases() {
        let p = probs(&[(1, 2), (1, 3)]);
        assert_eq!(
            multinomial_noncentral_moment(3, &p, &alpha(&[0, 0])),
            BigRational::one()
        );
        // alpha = e_1: reduces to n p_1.
        assert_eq!(
            multinomial_noncentral_moment(3, &p, &alpha(&[1, 0])),
            rational(3, 2)
        );
        // S(2,1) n p1 + S(2,2) n^(2) p1^2 = 3/2 + 6/4 = 3.
        assert_eq!(
            multinomial_noncentral_moment(3, &p, &alpha(&[2, 0])),
            rational(3, 1)
        );
    }

    #[test]
    fn correction_factor_is_one_at_low_order() {
        let p = DistributionParams::from_counts(6, 3, vec![3, 2]).unwrap();
        assert_eq!(
            correction_factor(&p, &alpha(&[0, 0])).unwrap(),
            BigRational::one()
        );
        assert_eq!(
            correction_factor(&p, &alpha(&[1, 0])).unwrap(),
            BigRational::one()
        );
        assert_eq!(
            correction_factor(&p, &alpha(&[0, 1])).unwrap(),
            BigRational::one()
        );
    }

    #[test]
    fn correction_factor_small_case() {
        // (3 * 2) / (6 * 5 * (1/2)(1/3)) = 6/5.
        let p = DistributionParams::from_counts(6, 3, vec![3, 2]).unwrap();
        assert_eq!(
            correction_factor(&p, &alpha(&[1, 1])).unwrap(),
            rational(6, 5)
        );
    }

    #[test]
    fn correction_factor_rejects_empty_category() {
        let p = DistributionParams::from_counts(6, 3, vec![3, 0]).unwrap();
        assert_eq!(
            correction_factor(&p, &alpha(&[1, 1])),
            Err(MomentError::ZeroCountCategory { index: 1 })
        );
    }

    #[test]
    fn correction_factor_vanishes_past_category_size() {
        let p = DistributionParams::from_counts(6, 3, vec![3, 2]).unwrap();
        assert_eq!(
            correction_factor(&p, &alpha(&[0, 3])).unwrap(),
            BigRational::zero()
        );
    }

    #[test]
    fn correction_shrinks_toward_one_for_large_populations() {
        // Fixed p = (1/2, 1/3): at N = 60000 the correction is within 1e-4
        // of 1 for every k in the box below (the exponents the convergence
        // test sweeps).
        let p = probs(&[(1, 2), (1, 3)]);
        let params = DistributionParams::from_probs(60000, 3, &p).unwrap();
        let tolerance = rational(1, 10_000);
        for k in index_box(&[2, 1]) {
            let c = correction_factor(&params, &MultiIndex::new(k.clone())).unwrap();
            assert!((c - BigRational::one()).abs() <= tolerance, "k = {k:?}");
        }
    }

    #[test]
    fn noncentral_converges_to_multinomial_limit() {
        let p = probs(&[(1, 2), (1, 3)]);
        let a = alpha(&[2, 1]);
        let limit = multinomial_noncentral_moment(3, &p, &a);
        let mut previous_gap: Option<BigRational> = None;
        for population in [60u64, 600, 6_000, 60_000] {
            let params = DistributionParams::from_probs(population, 3, &p).unwrap();
            let gap = (noncentral_moment(&params, &a).unwrap() - &limit).abs();
            if let Some(prev) = previous_gap {
                assert!(gap < prev, "gap must shrink at N = {population}");
            }
            previous_gap = Some(gap);
        }
        let final_gap = previous_gap.unwrap();
        let relative = final_gap / limit.abs();
        assert!(relative < rational(1, 1_000));
    }

    fn nonempty_params_strategy() -> impl Strategy<Value = DistributionParams> {
        (1usize..=3)
            .prop_flat_map(|d| proptest::collection::vec(1u64..=4, d))
            .prop_flat_map(|counts| {
                let total: u64 = counts.iter().sum();
                (Just(counts), total..=total + 3)
            })
            .prop_flat_map(|(counts, population)| (Just(counts), Just(population), 0..=population))
            .prop_map(|(counts, population, sample_size)| {
                DistributionParams::from_counts(population, sample_size, counts).unwrap()
            })
    }

    proptest! {
        /// The two-factor split: without-replacement factorial moments are
        /// exactly the multinomial ones scaled by the correction factor,
        /// whenever every category is nonempty.
        #[test]
        fn factorial_decomposes_exactly(
            (p, a) in nonempty_params_strategy().prop_flat_map(|p| {
                let d = p.dimension();
                (Just(p), proptest::collection::vec(0u64..=4, d).prop_map(MultiIndex::new))
            })
        ) {
            let probs = p.probabilities().unwrap();
            let lhs = factorial_moment(&p, &a).unwrap();
            let rhs = correction_factor(&p, &a).unwrap()
                * multinomial_factorial_moment(p.sample_size(), &probs, &a);
            prop_assert_eq!(lhs, rhs);
        }

        /// Rewriting the noncentral sum in the probability parametrization
        /// (correction factor inside the sum) gives the same number.
        #[test]
        fn noncentral_agrees_with_probability_parametrization(
            (p, a) in nonempty_params_strategy().prop_flat_map(|p| {
                let d = p.dimension();
                (Just(p), proptest::collection::vec(0u64..=3, d).prop_map(MultiIndex::new))
            })
        ) {
            let probs = p.probabilities().unwrap();
            let mut total = BigRational::zero();
            for k in index_box(a.entries()) {
                let k = MultiIndex::new(k);
                let mut stirling_product = BigInt::one();
                for (i, &ki) in k.entries().iter().enumerate() {
                    stirling_product *= crate::combinatorics::stirling2(a.get(i), ki);
                }
                if stirling_product.is_zero() {
                    continue;
                }
                let norm = k.norm1();
                if norm > p.sample_size() as u128 {
                    continue;
                }
                let mut term = correction_factor(&p, &k).unwrap()
                    * BigRational::from_integer(
                        stirling_product
                            * falling_factorial_u64(p.sample_size(), norm as u64),
                    );
                for (prob, &ki) in probs.probs().iter().zip(k.entries()) {
                    term *= rat_pow(prob, ki);
                }
                total += term;
            }
            prop_assert_eq!(noncentral_moment(&p, &a).unwrap(), total);
        }
    }
}
