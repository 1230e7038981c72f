//! Exact integers and rationals, plus dyadic interval enclosures of reals.

mod dyadic;
mod enclosure;

pub use dyadic::{Dyadic, Round};
pub use enclosure::{decimal_string, ln2, refine_ceil, Enclosure, DEFAULT_PRECISION};

use num_bigint::BigInt;

use crate::error::Result;

pub type ExactInteger = BigInt;
pub type ExactRational = num_rational::BigRational;

/// Enclosure of `ln x` over the whole input interval.
pub fn interval_ln(x: &Enclosure) -> Result<Enclosure> {
    x.ln()
}

/// Enclosure of `exp x` over the whole input interval.
pub fn interval_exp(x: &Enclosure) -> Result<Enclosure> {
    x.exp()
}

/// Smallest integer guaranteed to be at least the enclosed value.
pub fn ceil_upper(x: &Enclosure) -> ExactInteger {
    x.ceil_upper()
}
