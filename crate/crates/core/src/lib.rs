//! Explicit irreducibility bounds for mod-p isogeny representations of
//! elliptic curves over Galois number fields.
//!
//! The crate is layered bottom-up:
//!
//! * [`exactnum`]: big integers, rationals and dyadic interval enclosures
//!   with outward rounding (ln, exp, sqrt).
//! * [`numfield`]: the rational field, quadratic fields and fields given by
//!   supplied invariants; splitting of primes, degree-one places, heights,
//!   class numbers, regulators and small ideal generators.
//! * [`ellcurve`]: Weierstrass models, j-invariants, reduction types and
//!   Frobenius traits at degree-one places.
//! * [`localchar`]: the local exponent table, the five reduction cases and
//!   the twisted norm identity checker.
//! * [`bounds`]: the certified integer bounds.
//! * [`criteria`]: witness search, certificates and the ideal set used for
//!   class coverage.

pub mod arith;
pub mod bounds;
pub mod criteria;
pub mod ellcurve;
pub mod error;
pub mod exactnum;
pub mod localchar;
pub mod numfield;
pub mod parse;

pub use error::{Error, Result};
pub use exactnum::{Dyadic, Enclosure, ExactInteger, ExactRational, DEFAULT_PRECISION};
pub use numfield::{DegreeOnePlace, FieldDescriptor, FieldInvariants, QuadElement};

/// Elements of the base field (rational or quadratic) with exact rational coordinates.
pub type FieldElement = QuadElement<num_rational::BigRational>;
/// Elements of `Z[sqrt m]` with integer coordinates.
pub type QuadInteger = QuadElement<num_bigint::BigInt>;
