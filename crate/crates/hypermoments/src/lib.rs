//! Exact moments of the multivariate hypergeometric distribution.
//!
//! Draw `n` units without replacement from a population of `N` units split
//! into `d + 1` categories of sizes `N_1, ..., N_d` and an implied
//! remainder. The vector of explicit category counts in the sample is
//! multivariate hypergeometric; this crate computes its factorial,
//! noncentral, and central moments in exact big-rational arithmetic, using
//! closed forms that expand powers into falling factorials through Stirling
//! numbers of the second kind.
//!
//! Alongside the closed forms live their consistency checks:
//!
//! - [`oracle`]: brute-force moments by direct summation over the
//!   enumerated support, structurally independent of the formulas;
//! - [`verify`]: exact formula-vs-oracle comparison reports;
//! - [`sampler`]: a seeded without-replacement urn sampler and Monte Carlo
//!   estimates (the only floating-point corner of the crate);
//! - [`moments`]: also hosts the with-replacement (multinomial) limits and
//!   the finite-population correction factor relating the two regimes.
//!
//! ```
//! use hypermoments::moments::{central_moment, noncentral_moment};
//! use hypermoments::{DistributionParams, MultiIndex};
//!
//! let params = DistributionParams::from_counts(6, 3, vec![3, 2])?;
//! let alpha = MultiIndex::new(vec![1, 1]);
//! assert_eq!(noncentral_moment(&params, &alpha)?.to_string(), "6/5");
//! assert_eq!(central_moment(&params, &MultiIndex::new(vec![2, 0]))?.to_string(), "9/20");
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod combinatorics;
pub mod distribution;
pub mod exact;
pub mod moments;
pub mod oracle;
pub mod sampler;
pub mod verify;

pub use distribution::{
    multi_indices_up_to_norm, DimensionError, DistributionParams, MultiIndex, ParamsError,
    ProbabilityVector,
};
pub use exact::{BigInt, BigRational};
pub use moments::{MomentError, MomentFormula, MomentKind, MomentRegistry, MomentResult};
pub use oracle::{brute_force_moment, Oracle};
pub use sampler::{mc_moment_estimate, sample, McEstimate, Sampler};
pub use verify::{verify, verify_formula, OracleReport};
