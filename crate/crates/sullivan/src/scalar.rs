//! Exact rational scalars.
//!
//! Everything arithmetic in this crate bottoms out in [`Rat`], an
//! arbitrary-precision rational kept reduced with a positive denominator by
//! `num-rational`.

use num_bigint::BigInt;
use num_rational::BigRational;

/// Arbitrary-precision rational number, always in lowest terms.
pub type Rat = BigRational;

/// Shorthand for an integer rational.
#[must_use]
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Shorthand for the fraction `n/d`. Panics if `d == 0`.
#[must_use]
pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Renders a rational as `p` or `p/q`, with `q > 0`.
#[must_use]
pub fn display(r: &Rat) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
