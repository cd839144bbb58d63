//! Exact numeric plumbing: re-exports of the arbitrary-precision types the
//! whole crate computes in, plus decimal rendering for output layers.

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Render an exact rational as a fixed-point decimal with `digits`
/// fractional digits, rounding half to even.
///
/// This is a rendering, never a replacement for the exact value. A value
/// that rounds to zero is printed without a sign.
pub fn decimal_string(value: &BigRational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled_numerator = value.numer().abs() * &scale;
    let denominator = value.denom(); // always positive
    let (mut quotient, remainder) = scaled_numerator.div_rem(denominator);
    // Round half to even on the exact remainder.
    let twice = &remainder * BigInt::from(2);
    if twice > *denominator || (twice == *denominator && quotient.is_odd()) {
        quotient += 1;
    }
    let sign = if value.is_negative() && !quotient.is_zero() {
        "-"
    } else {
        ""
    };
    if digits == 0 {
        return format!("{sign}{quotient}");
    }
    let (integer_part, fraction) = quotient.div_rem(&scale);
    format!("{sign}{integer_part}.{fraction:0>width$}", width = digits)
}
