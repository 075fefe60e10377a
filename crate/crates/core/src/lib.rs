//! Exact arithmetic for constraints on automorphism groups acting trivially
//! on rational second cohomology of surfaces of general type.
//!
//! Everything downstream of a closed formula is computed in exact rational
//! arithmetic over arbitrary-precision integers; no value is ever rounded.
//! The only approximate computation in the crate is [`defect::defect_direct`],
//! a multiprecision verification oracle for the exact signature-defect
//! formula, and it reports an explicit error bound alongside its value.
//!
//! Module map:
//!
//! - [`dedekind`]: sawtooth function, Dedekind sums `s(q,p)` (defining sum
//!   and lattice-point closed form), floor division.
//! - [`defect`]: signature defects `I_{p,q}` of isolated fixed points on a
//!   4-manifold, the `q = -1` specialization, and the cotangent-sum oracle.
//! - [`gsignature`]: Chern-number conversions, the Lefschetz fixed-point
//!   lower bound, the G-signature balance equation, and the order-4/order-9
//!   exclusion argument.
//! - [`covering`]: free actions on Riemann surfaces, Riemann-Hurwitz for
//!   free quotients, free-genus bounds, and the cyclic-product group grammar.
//! - [`equivindex`]: equivariant Cauchy-Riemann index, moduli dimensions of
//!   equivariant complex structures, the case inequalities, and the
//!   curve-decomposition audit.
//! - [`constraints`]: the rule table and feasibility engine: candidate
//!   checking and the rank-by-rank census that re-derives the rank ≤ 6 and
//!   order ≤ 243 bounds.

pub mod constraints;
pub mod covering;
pub mod dedekind;
pub mod defect;
pub mod equivindex;
pub mod fixedpoint;
pub mod gsignature;

/// Exact arbitrary-precision fraction; the value type of every closed
/// formula in this crate. Always stored in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

use num_bigint::BigInt;

/// Shorthand for building a `Rational` from machine integers.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Shorthand for an integral `Rational`.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}
