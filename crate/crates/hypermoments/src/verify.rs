//! Side-by-side comparison of closed-form moment strategies with the
//! brute-force oracle.
//!
//! A mismatch is data, not an error: [`OracleReport`] records both values
//! and whether they are exactly equal, so sweeps can keep going and report
//! everything they saw.

use num_rational::BigRational;

use crate::distribution::{DistributionParams, MultiIndex};
use crate::moments::{MomentError, MomentFormula, MomentKind, MomentRegistry};
use crate::oracle::Oracle;

/// Outcome of checking one formula value against the oracle.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    pub params: DistributionParams,
    pub alpha: MultiIndex,
    pub kind: MomentKind,
    pub formula_value: BigRational,
    pub oracle_value: BigRational,
    /// Exact equality of the two values.
    pub is_match: bool,
}

/// Compare the built-in formula for `kind` against a fresh oracle.
pub fn verify(
    params: &DistributionParams,
    alpha: &MultiIndex,
    kind: MomentKind,
) -> Result<OracleReport, MomentError> {
    let registry = MomentRegistry::builtin();
    let formula = registry
        .for_kind(kind)
        .expect("builtin registry covers every kind");
    verify_formula(formula, &Oracle::new(params), alpha)
}

/// Compare an arbitrary [`MomentFormula`] implementation against a
/// precomputed oracle.
pub fn verify_formula(
    formula: &dyn MomentFormula,
    oracle: &Oracle,
    alpha: &MultiIndex,
) -> Result<OracleReport, MomentError> {
    let formula_value = formula.moment(oracle.params(), alpha)?;
    let oracle_value = oracle.moment(alpha, formula.kind())?;
    let is_match = formula_value == oracle_value;
    Ok(OracleReport {
        params: oracle.params().clone(),
        alpha: alpha.clone(),
        kind: formula.kind(),
        formula_value,
        oracle_value,
        is_match,
    })
}

/// Verify every registered formula over a set of exponent vectors, reusing
/// one oracle. Reports come back with exponents in input order and formulas
/// in registration order within each exponent.
pub fn sweep(
    registry: &MomentRegistry,
    params: &DistributionParams,
    alphas: &[MultiIndex],
) -> Result<Vec<OracleReport>, MomentError> {
    let oracle = Oracle::new(params);
    let mut reports = Vec::with_capacity(alphas.len() * registry.len());
    for alpha in alphas {
        for formula in registry.iter() {
            reports.push(verify_formula(formula, &oracle, alpha)?);
        }
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::multi_indices_up_to_norm;

    fn params(population: u64, sample_size: u64, counts: &[u64]) -> DistributionParams {
        DistributionParams::from_counts(population, sample_size, counts.to_vec()).unwrap()
    }

    #[test]
    fn builtin_formulas_match_oracle_on_a_small_sweep() {
        let p = params(6, 3, &[3, 2]);
        let registry = MomentRegistry::builtin();
        let alphas = multi_indices_up_to_norm(2, 4);
        let reports = sweep(&registry, &p, &alphas).unwrap();
        assert_eq!(reports.len(), alphas.len() * 3);
        for report in &reports {
            assert!(
                report.is_match,
                "{} mismatch at alpha = {}: {} vs {}",
                report.kind, report.alpha, report.formula_value, report.oracle_value
            );
        }
    }

    #[test]
    fn verify_covers_exponents_outside_the_support_box() {
        // alpha entries larger than the category counts and |alpha| > n.
        let p = params(6, 3, &[3, 2]);
        for entries in [[4u64, 0], [0, 3], [4, 3]] {
            for kind in MomentKind::ALL {
                let report = verify(&p, &MultiIndex::new(entries.to_vec()), kind).unwrap();
                assert!(report.is_match, "kind {kind}, alpha {entries:?}");
            }
        }
    }

    #[test]
    fn a_wrong_formula_is_caught() {
        use num_traits::Zero;

        struct AlwaysZero;
        impl MomentFormula for AlwaysZero {
            fn kind(&self) -> MomentKind {
                MomentKind::Noncentral
            }
            fn name(&self) -> &'static str {
                "always-zero"
            }
            fn moment(
                &self,
                _params: &DistributionParams,
                _alpha: &MultiIndex,
            ) -> Result<BigRational, MomentError> {
                Ok(BigRational::zero())
            }
        }

        let p = params(6, 3, &[3, 2]);
        let oracle = Oracle::new(&p);
        let report = verify_formula(&AlwaysZero, &oracle, &MultiIndex::new(vec![1, 1])).unwrap();
        assert!(!report.is_match);
        assert_eq!(report.kind, MomentKind::Noncentral);
    }
}
