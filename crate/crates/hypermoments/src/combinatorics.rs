//! Arbitrary-precision combinatorial kernel: falling factorials, binomial
//! coefficients, and Stirling numbers of the second kind.
//!
//! Everything here is exact integer arithmetic. Out-of-range binomial and
//! Stirling arguments evaluate to zero rather than erroring, so the moment
//! formulas can sum over full rectangular index boxes without guards.

use std::ops::{Mul, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Falling factorial `x^(order) = x (x - 1) ... (x - order + 1)`, with
/// `x^(0) = 1`.
///
/// Works for any exact numeric type (`BigInt`, `BigRational`, ...). For a
/// nonnegative integer `x < order` one factor is zero and the loop exits
/// early; that is the only way the result can vanish for integer `x >= 0`.
pub fn falling_factorial<T>(x: &T, order: u64) -> T
where
    T: Clone + Zero + One + Sub<Output = T> + Mul<Output = T>,
{
    let mut result = T::one();
    let mut factor = x.clone();
    for _ in 0..order {
        result = result * factor.clone();
        if result.is_zero() {
            return result;
        }
        factor = factor - T::one();
    }
    result
}

/// [`falling_factorial`] for machine-word arguments, returned exactly.
pub fn falling_factorial_u64(x: u64, order: u64) -> BigInt {
    falling_factorial(&BigInt::from(x), order)
}

/// Binomial coefficient `C(a, b)`, zero for any `b` outside `[0, a]`.
///
/// The signed lower index lets callers pass differences like `n - |k|`
/// without pre-checking the sign.
pub fn binomial(a: u64, b: i128) -> BigInt {
    if b < 0 || b > a as i128 {
        return BigInt::zero();
    }
    let b = (b as u64).min(a - b as u64);
    let mut result = BigInt::one();
    for i in 1..=b {
        // Exact at every step: the running product of i consecutive
        // integers is divisible by i!.
        result = result * BigInt::from(a - b + i) / BigInt::from(i);
    }
    result
}

/// Integer power with an exact big-integer result.
pub(crate) fn int_pow(base: &BigInt, exp: u64) -> BigInt {
    num_traits::pow(
        base.clone(),
        usize::try_from(exp).expect("exponent does not fit usize"),
    )
}

/// Rational power (nonnegative exponent) with an exact result.
pub(crate) fn rat_pow(base: &BigRational, exp: u64) -> BigRational {
    num_traits::pow(
        base.clone(),
        usize::try_from(exp).expect("exponent does not fit usize"),
    )
}

/// Triangular table of Stirling numbers of the second kind `S(n, k)` for
/// `0 <= k <= n <= max_n`, filled by the recurrence
/// `S(n, k) = k S(n-1, k) + S(n-1, k-1)` with `S(0, 0) = 1`.
#[derive(Clone, Debug)]
pub struct StirlingTable {
    rows: Vec<Vec<BigInt>>,
}

impl StirlingTable {
    /// Build the table up to and including row `max_n`.
    pub fn new(max_n: usize) -> Self {
        let mut table = StirlingTable { rows: Vec::new() };
        table.grow(max_n);
        table
    }

    /// Largest `n` for which a row is available.
    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    /// Extend the table so rows up to `max_n` exist. A no-op if they do.
    pub fn grow(&mut self, max_n: usize) {
        if self.rows.is_empty() {
            self.rows.push(vec![BigInt::one()]);
        }
        for n in self.rows.len()..=max_n {
            let prev = &self.rows[n - 1];
            let mut row = Vec::with_capacity(n + 1);
            row.push(BigInt::zero());
            for k in 1..n {
                row.push(BigInt::from(k as u64) * &prev[k] + &prev[k - 1]);
            }
            row.push(BigInt::one());
            self.rows.push(row);
        }
    }

    /// `S(n, k)` by reference. Requires `k <= n <= max_n`.
    pub fn value(&self, n: usize, k: usize) -> &BigInt {
        &self.rows[n][k]
    }

    /// `S(n, k)`, or `None` when row `n` has not been built. `k > n` gives 0.
    pub fn get(&self, n: usize, k: usize) -> Option<BigInt> {
        if k > n {
            return Some(BigInt::zero());
        }
        self.rows.get(n).map(|row| row[k].clone())
    }
}

fn shared_table() -> &'static Mutex<StirlingTable> {
    static TABLE: OnceLock<Mutex<StirlingTable>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(StirlingTable::new(8)))
}

/// Run `f` against the process-wide Stirling table, grown to at least
/// `min_rows` rows first. The lock is held for the duration of `f`, so
/// readers never observe a partially built row.
pub(crate) fn with_stirling_table<R>(min_rows: usize, f: impl FnOnce(&StirlingTable) -> R) -> R {
    let mut table = shared_table().lock().expect("stirling table lock poisoned");
    if table.max_n() < min_rows {
        table.grow(min_rows);
    }
    f(&table)
}

/// Stirling number of the second kind `S(n, k)`: the number of partitions
/// of an `n`-element set into `k` nonempty blocks. Zero when `k > n`.
///
/// Lookups are memoized in a process-wide [`StirlingTable`] that grows on
/// demand and is safe to hit from concurrent callers.
pub fn stirling2(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let n = usize::try_from(n).expect("Stirling order does not fit a table index");
    with_stirling_table(n, |table| table.value(n, k as usize).clone())
}
