//! The built-in closed-form strategies: factorial, noncentral, and central
//! moments, plus the mean vector and covariance matrix assembled from them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combinatorics::{
    binomial, falling_factorial_u64, int_pow, rat_pow, with_stirling_table,
};
use crate::distribution::{DistributionParams, MultiIndex};

use super::{
    falling_ratios, index_box, max_entry, ratio_at, MomentError, MomentFormula, MomentKind,
};

/// Joint falling-factorial moments `E[prod_i X_i^(a_i)]`, in closed form:
///
/// ```text
/// n^(|a|) / N^(|a|) * prod_i N_i^(a_i)
/// ```
///
/// extended by zero whenever `|a| > n` (the sample-size falling factorial
/// vanishes there, and evaluating the raw ratio past `|a| > N` would hit
/// 0/0).
pub struct Factorial;

impl MomentFormula for Factorial {
    fn kind(&self) -> MomentKind {
        MomentKind::Factorial
    }

    fn moment(
        &self,
        params: &DistributionParams,
        alpha: &MultiIndex,
    ) -> Result<BigRational, MomentError> {
        params.check_dimension(alpha)?;
        Ok(factorial_moment_raw(params, alpha.entries()))
    }
}

pub(crate) fn factorial_moment_raw(params: &DistributionParams, alpha: &[u64]) -> BigRational {
    let norm: u128 = alpha.iter().map(|&a| a as u128).sum();
    if norm > params.sample_size() as u128 {
        return BigRational::zero();
    }
    let norm = norm as u64;
    let mut product = BigInt::one();
    for (&count, &a) in params.counts().iter().zip(alpha) {
        product *= falling_factorial_u64(count, a);
        if product.is_zero() {
            return BigRational::zero();
        }
    }
    let numerator = falling_factorial_u64(params.sample_size(), norm);
    let denominator = falling_factorial_u64(params.population(), norm);
    BigRational::new(numerator * product, denominator)
}

/// Noncentral moments `E[prod_i X_i^{a_i}]` via the Stirling expansion of
/// each power into falling factorials:
///
/// ```text
/// sum_{0 <= k <= a} n^(|k|) / N^(|k|) * prod_i S(a_i, k_i) N_i^(k_i)
/// ```
///
/// where the sum runs over the full rectangular box and out-of-range terms
/// vanish on their own.
pub struct Noncentral;

impl MomentFormula for Noncentral {
    fn kind(&self) -> MomentKind {
        MomentKind::Noncentral
    }

    fn moment(
        &self,
        params: &DistributionParams,
        alpha: &MultiIndex,
    ) -> Result<BigRational, MomentError> {
        params.check_dimension(alpha)?;
        let alpha = alpha.entries();
        let ratios = falling_ratios(params, alpha.iter().map(|&a| a as u128).sum());
        let total = with_stirling_table(max_entry(alpha), |table| {
            let mut total = BigRational::zero();
            'terms: for k in index_box(alpha) {
                let ratio = match ratio_at(&ratios, k.iter().map(|&e| e as u128).sum()) {
                    Some(r) => r,
                    None => continue,
                };
                let mut coefficient = BigInt::one();
                for (i, (&ki, &count)) in k.iter().zip(params.counts()).enumerate() {
                    coefficient *= table.value(alpha[i] as usize, ki as usize);
                    if coefficient.is_zero() {
                        continue 'terms;
                    }
                    coefficient *= falling_factorial_u64(count, ki);
                    if coefficient.is_zero() {
                        continue 'terms;
                    }
                }
                total += ratio * BigRational::from_integer(coefficient);
            }
            total
        });
        Ok(total)
    }
}

/// Central moments `E[prod_i (X_i - E[X_i])^{a_i}]` via a binomial
/// expansion of each mean-deviation followed by the Stirling expansion of
/// the remaining powers:
///
/// ```text
/// sum_{0 <= l <= a} sum_{0 <= k <= l}
///     n^(|k|) / N^(|k|) * (-n/N)^(|a| - |l|)
///     * prod_i C(a_i, l_i) S(l_i, k_i) N_i^{a_i - l_i} N_i^(k_i)
/// ```
///
/// The Stirling factor is indexed by the binomial-expansion order `l_i`,
/// not the outer exponent `a_i`: the inner sum is precisely the expansion
/// of `X_i^{l_i}`, and the verification suite rejects the other indexing.
pub struct Central;

impl MomentFormula for Central {
    fn kind(&self) -> MomentKind {
        MomentKind::Central
    }

    fn moment(
        &self,
        params: &DistributionParams,
        alpha: &MultiIndex,
    ) -> Result<BigRational, MomentError> {
        params.check_dimension(alpha)?;
        let alpha = alpha.entries();
        let norm: u128 = alpha.iter().map(|&a| a as u128).sum();
        if params.population() == 0 {
            // Empty population: the sample is empty and X is identically 0.
            return Ok(if norm == 0 {
                BigRational::one()
            } else {
                BigRational::zero()
            });
        }
        let ratios = falling_ratios(params, norm);
        let neg_sampling_fraction = BigRational::new(
            -BigInt::from(params.sample_size()),
            BigInt::from(params.population()),
        );
        let total = with_stirling_table(max_entry(alpha), |table| {
            let mut total = BigRational::zero();
            'outer: for ell in index_box(alpha) {
                let mut scale = BigInt::one();
                let mut dropped_order = 0u64;
                for (i, (&li, &count)) in ell.iter().zip(params.counts()).enumerate() {
                    dropped_order += alpha[i] - li;
                    scale *= binomial(alpha[i], li as i128);
                    scale *= int_pow(&BigInt::from(count), alpha[i] - li);
                    if scale.is_zero() {
                        continue 'outer;
                    }
                }
                let mut inner = BigRational::zero();
                'terms: for k in index_box(&ell) {
                    let ratio = match ratio_at(&ratios, k.iter().map(|&e| e as u128).sum()) {
                        Some(r) => r,
                        None => continue,
                    };
                    let mut coefficient = BigInt::one();
                    for (i, (&ki, &count)) in k.iter().zip(params.counts()).enumerate() {
                        coefficient *= table.value(ell[i] as usize, ki as usize);
                        if coefficient.is_zero() {
                            continue 'terms;
                        }
                        coefficient *= falling_factorial_u64(count, ki);
                        if coefficient.is_zero() {
                            continue 'terms;
                        }
                    }
                    inner += ratio * BigRational::from_integer(coefficient);
                }
                if inner.is_zero() {
                    continue;
                }
                total += rat_pow(&neg_sampling_fraction, dropped_order)
                    * BigRational::from_integer(scale)
                    * inner;
            }
            total
        });
        Ok(total)
    }
}

/// `E[prod_i X_i^(a_i)]`; see [`Factorial`].
pub fn factorial_moment(
    params: &DistributionParams,
    alpha: &MultiIndex,
) -> Result<BigRational, MomentError> {
    Factorial.moment(params, alpha)
}

/// `E[prod_i X_i^{a_i}]`; see [`Noncentral`].
pub fn noncentral_moment(
    params: &DistributionParams,
    alpha: &MultiIndex,
) -> Result<BigRational, MomentError> {
    Noncentral.moment(params, alpha)
}

/// `E[prod_i (X_i - E[X_i])^{a_i}]`; see [`Central`].
pub fn central_moment(
    params: &DistributionParams,
    alpha: &MultiIndex,
) -> Result<BigRational, MomentError> {
    Central.moment(params, alpha)
}

/// Mean vector, `E[X_i] = n N_i / N` (all zeros for an empty population).
pub fn mean_vector(params: &DistributionParams) -> Vec<BigRational> {
    if params.population() == 0 {
        return vec![BigRational::zero(); params.dimension()];
    }
    let population = BigInt::from(params.population());
    params
        .counts()
        .iter()
        .map(|&count| {
            BigRational::new(
                BigInt::from(params.sample_size()) * BigInt::from(count),
                population.clone(),
            )
        })
        .collect()
}

/// Covariance matrix: entry `(i, j)` is the central moment with exponent
/// `e_i + e_j`. Symmetric with nonnegative diagonal.
pub fn covariance_matrix(params: &DistributionParams) -> Vec<Vec<BigRational>> {
    let d = params.dimension();
    let mut matrix = vec![vec![BigRational::zero(); d]; d];
    for i in 0..d {
        for j in i..d {
            let mut entries = vec![0u64; d];
            entries[i] += 1;
            entries[j] += 1;
            let value = central_moment(params, &MultiIndex::new(entries))
                .expect("exponent dimension matches by construction");
            matrix[i][j] = value.clone();
            matrix[j][i] = value;
        }
    }
    matrix
}
