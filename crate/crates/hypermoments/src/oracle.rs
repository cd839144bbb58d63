//! Brute-force moments by exhaustive enumeration of the probability mass
//! function.
//!
//! This module is the independent side of every equivalence check. It never
//! calls the closed forms in [`crate::moments`] (only the [`MomentKind`]
//! enum is shared): moments are direct sums `sum_k g(k) pmf(k)` over the
//! enumerated support, and even the mean entering central weights is
//! recomputed here from the pmf rather than taken from a formula.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::combinatorics::{falling_factorial, int_pow, rat_pow};
use crate::distribution::{DimensionError, DistributionParams, MultiIndex};
use crate::moments::MomentKind;

/// The support of one parameter set with pmf values and the directly
/// summed mean vector, precomputed so sweeps over many exponents reuse the
/// enumeration.
pub struct Oracle {
    params: DistributionParams,
    support: Vec<(MultiIndex, BigRational)>,
    mean: Vec<BigRational>,
}

impl Oracle {
    pub fn new(params: &DistributionParams) -> Self {
        let support: Vec<(MultiIndex, BigRational)> = params
            .support()
            .into_iter()
            .map(|k| {
                let mass = params.pmf_unchecked(&k);
                (k, mass)
            })
            .collect();
        let mean = (0..params.dimension())
            .map(|i| {
                support
                    .iter()
                    .map(|(k, mass)| mass * BigRational::from_integer(BigInt::from(k.get(i))))
                    .sum()
            })
            .collect();
        Oracle {
            params: params.clone(),
            support,
            mean,
        }
    }

    pub fn params(&self) -> &DistributionParams {
        &self.params
    }

    /// Support points with their pmf values, in lexicographic order.
    pub fn support(&self) -> &[(MultiIndex, BigRational)] {
        &self.support
    }

    /// Mean vector obtained by direct summation over the support (not by
    /// any closed form).
    pub fn mean(&self) -> &[BigRational] {
        &self.mean
    }

    /// `sum_k g(k) pmf(k)` with the integrand `g` fixed by `kind`.
    pub fn moment(
        &self,
        alpha: &MultiIndex,
        kind: MomentKind,
    ) -> Result<BigRational, DimensionError> {
        self.params.check_dimension(alpha)?;
        let mut total = BigRational::zero();
        for (k, mass) in &self.support {
            let weight = moment_weight(kind, k, alpha, &self.mean);
            if weight.is_zero() {
                continue;
            }
            total += weight * mass;
        }
        Ok(total)
    }
}

/// The integrand of each moment kind: a product over coordinates of falling
/// factorials, plain powers, or centered powers.
pub(crate) fn moment_weight(
    kind: MomentKind,
    k: &MultiIndex,
    alpha: &MultiIndex,
    mean: &[BigRational],
) -> BigRational {
    match kind {
        MomentKind::Factorial => {
            let mut product = BigInt::from(1);
            for (&ki, &ai) in k.entries().iter().zip(alpha.entries()) {
                product *= falling_factorial(&BigInt::from(ki), ai);
                if product.is_zero() {
                    break;
                }
            }
            BigRational::from_integer(product)
        }
        MomentKind::Noncentral => {
            let mut product = BigInt::from(1);
            for (&ki, &ai) in k.entries().iter().zip(alpha.entries()) {
                product *= int_pow(&BigInt::from(ki), ai);
                if product.is_zero() {
                    break;
                }
            }
            BigRational::from_integer(product)
        }
        MomentKind::Central => {
            let mut product = BigRational::from_integer(BigInt::from(1));
            for (i, (&ki, &ai)) in k.entries().iter().zip(alpha.entries()).enumerate() {
                let deviation = BigRational::from_integer(BigInt::from(ki)) - &mean[i];
                product *= rat_pow(&deviation, ai);
                if product.is_zero() {
                    break;
                }
            }
            product
        }
    }
}

/// One-shot brute-force moment. For sweeps over many exponents build an
/// [`Oracle`] once instead.
pub fn brute_force_moment(
    params: &DistributionParams,
    alpha: &MultiIndex,
    kind: MomentKind,
) -> Result<BigRational, DimensionError> {
    Oracle::new(params).moment(alpha, kind)
}
