//! Closed-form moments of the multivariate hypergeometric distribution:
//! factorial, noncentral, and central, plus the with-replacement
//! (multinomial) limits and the finite-population correction factor that
//! relates the two regimes.
//!
//! Each moment kind is a strategy behind the [`MomentFormula`] trait and can
//! be looked up by name in a [`MomentRegistry`]. That is what lets the CLI
//! pick a formula at runtime and lets the verification harness compare any
//! implementation of the trait — including deliberately broken test doubles
//! — against the brute-force oracle in [`crate::oracle`].
//!
//! Exponent vectors are *not* restricted to the support box: for exponents
//! that exceed the sample size or a category count, the defining expectation
//! vanishes term by term and the closed forms return exactly zero, so every
//! formula here is total over nonnegative exponents. The equivalence tests
//! exercise that extended regime as well.

mod formulas;
mod multinomial;

pub use formulas::{
    central_moment, covariance_matrix, factorial_moment, mean_vector, noncentral_moment, Central,
    Factorial, Noncentral,
};
pub use multinomial::{
    correction_factor, multinomial_factorial_moment, multinomial_noncentral_moment,
};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::distribution::{DimensionError, DistributionParams, MultiIndex};

/// Which expectation a moment value refers to: products of falling
/// factorials, of plain powers, or of powers of mean-deviations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MomentKind {
    Factorial,
    Noncentral,
    Central,
}

impl MomentKind {
    pub const ALL: [MomentKind; 3] = [
        MomentKind::Factorial,
        MomentKind::Noncentral,
        MomentKind::Central,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MomentKind::Factorial => "factorial",
            MomentKind::Noncentral => "noncentral",
            MomentKind::Central => "central",
        }
    }
}

impl fmt::Display for MomentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Error for an unrecognized moment-kind name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseMomentKindError(String);

impl fmt::Display for ParseMomentKindError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown moment kind `{}` (expected factorial, noncentral, or central)",
            self.0
        )
    }
}

impl std::error::Error for ParseMomentKindError {}

impl FromStr for MomentKind {
    type Err = ParseMomentKindError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "factorial" => Ok(MomentKind::Factorial),
            "noncentral" => Ok(MomentKind::Noncentral),
            "central" => Ok(MomentKind::Central),
            other => Err(ParseMomentKindError(other.to_string())),
        }
    }
}

/// Errors from moment evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MomentError {
    /// Exponent vector dimension does not match the distribution.
    Dimension(DimensionError),
    /// The finite-population correction divides by `p_i` and therefore
    /// needs every explicit category to be nonempty.
    ZeroCountCategory { index: usize },
}

impl fmt::Display for MomentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MomentError::Dimension(e) => e.fmt(f),
            MomentError::ZeroCountCategory { index } => write!(
                f,
                "category {} is empty; the correction factor divides by its proportion",
                index + 1
            ),
        }
    }
}

impl std::error::Error for MomentError {}

impl From<DimensionError> for MomentError {
    fn from(e: DimensionError) -> Self {
        MomentError::Dimension(e)
    }
}

/// A computed moment together with the inputs that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentResult {
    pub params: DistributionParams,
    pub alpha: MultiIndex,
    pub kind: MomentKind,
    pub value: BigRational,
}

/// A closed-form moment evaluation strategy.
///
/// An implementation must return, exactly, the expectation selected by its
/// [`kind`](MomentFormula::kind) for every valid parameter set and every
/// nonnegative exponent vector of matching dimension.
pub trait MomentFormula: Send + Sync {
    fn kind(&self) -> MomentKind;

    /// Registry lookup key; defaults to the kind name.
    fn name(&self) -> &'static str {
        self.kind().as_str()
    }

    fn moment(
        &self,
        params: &DistributionParams,
        alpha: &MultiIndex,
    ) -> Result<BigRational, MomentError>;
}

/// Name-keyed collection of moment strategies, preserving registration
/// order.
pub struct MomentRegistry {
    entries: Vec<Box<dyn MomentFormula>>,
}

impl MomentRegistry {
    /// An empty registry.
    pub fn new() -> Self {
        MomentRegistry {
            entries: Vec::new(),
        }
    }

    /// The registry with the three built-in formulas, in the order
    /// factorial, noncentral, central.
    pub fn builtin() -> Self {
        let mut registry = MomentRegistry::new();
        registry.register(Box::new(Factorial));
        registry.register(Box::new(Noncentral));
        registry.register(Box::new(Central));
        registry
    }

    pub fn register(&mut self, formula: Box<dyn MomentFormula>) {
        self.entries.push(formula);
    }

    /// Look a formula up by its registered name.
    pub fn get(&self, name: &str) -> Option<&dyn MomentFormula> {
        self.entries
            .iter()
            .find(|f| f.name() == name)
            .map(|f| f.as_ref())
    }

    /// The first registered formula of the given kind.
    pub fn for_kind(&self, kind: MomentKind) -> Option<&dyn MomentFormula> {
        self.entries
            .iter()
            .find(|f| f.kind() == kind)
            .map(|f| f.as_ref())
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn MomentFormula> {
        self.entries.iter().map(|f| f.as_ref())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl Default for MomentRegistry {
    fn default() -> Self {
        MomentRegistry::builtin()
    }
}

/// Evaluate the built-in formula for `kind`, echoing the inputs.
pub fn compute_moment(
    params: &DistributionParams,
    alpha: &MultiIndex,
    kind: MomentKind,
) -> Result<MomentResult, MomentError> {
    let value = match kind {
        MomentKind::Factorial => factorial_moment(params, alpha)?,
        MomentKind::Noncentral => noncentral_moment(params, alpha)?,
        MomentKind::Central => central_moment(params, alpha)?,
    };
    Ok(MomentResult {
        params: params.clone(),
        alpha: alpha.clone(),
        kind,
        value,
    })
}

/// Iterator over all integer vectors `0 <= v_i <= bounds_i`, in
/// lexicographic order (the shape every nested moment sum runs over).
pub fn index_box(bounds: &[u64]) -> IndexBox {
    IndexBox {
        bounds: bounds.to_vec(),
        next: Some(vec![0; bounds.len()]),
    }
}

pub struct IndexBox {
    bounds: Vec<u64>,
    next: Option<Vec<u64>>,
}

impl Iterator for IndexBox {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let current = self.next.take()?;
        let mut successor = current.clone();
        let mut pos = self.bounds.len();
        while pos > 0 {
            pos -= 1;
            if successor[pos] < self.bounds[pos] {
                successor[pos] += 1;
                for later in successor.iter_mut().skip(pos + 1) {
                    *later = 0;
                }
                self.next = Some(successor);
                break;
            }
        }
        Some(current)
    }
}

/// Table of the ratios `n^(s) / N^(s)` for `s = 0..=min(cap, n)`.
///
/// Entries stop at the sample size: for `s > n` the numerator vanishes, so
/// a missed lookup (see [`ratio_at`]) means the ratio is exactly zero. This
/// sidesteps the 0/0 the raw expression would produce once `s > N`.
pub(crate) fn falling_ratios(params: &DistributionParams, cap: u128) -> Vec<BigRational> {
    let top = cap.min(params.sample_size() as u128) as u64;
    let mut ratios = Vec::with_capacity(top as usize + 1);
    ratios.push(BigRational::one());
    for s in 1..=top {
        let step = BigRational::new(
            BigInt::from(params.sample_size() - s + 1),
            BigInt::from(params.population() - s + 1),
        );
        let prev = ratios.last().expect("table is never empty").clone();
        ratios.push(prev * step);
    }
    ratios
}

/// Look up `n^(s) / N^(s)`; `None` means the ratio is exactly zero.
pub(crate) fn ratio_at(ratios: &[BigRational], s: u128) -> Option<&BigRational> {
    usize::try_from(s).ok().and_then(|i| ratios.get(i))
}

/// Largest entry of an exponent vector, as a table size.
pub(crate) fn max_entry(alpha: &[u64]) -> usize {
    alpha
        .iter()
        .map(|&a| usize::try_from(a).expect("exponent does not fit usize"))
        .max()
        .unwrap_or(0)
}
